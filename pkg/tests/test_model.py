import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from serj import (
    ChannelDraw,
    ConfigError,
    DomainError,
    InfeasibleRateError,
    InfeasibleSecrecyError,
    Link,
    NetworkTopology,
    SystemParams,
    adc_resolution_eavesdropper,
    adc_resolution_receiver,
    capacity_bounds,
    gamma_d,
    gamma_e,
    gamma_e_worst_case,
    path_loss_gain,
    residual_jamming_variance,
    secrecy_rate,
)


def mp_gamma_e_worst(k, b_e=14, l=1):
    mp.mp.dps = 40
    q = 4 * mp.mpf(l) ** 2 / mp.mpf(2) ** (2 * b_e - 2 * k)
    return float((1 + q / 12) / (q / (2 * mp.pi * mp.e)))


# --------------------------------------------------------------- SystemParams


def test_defaults_are_reference_setting():
    p = SystemParams()
    assert (p.b_d, p.b_e, p.theta, p.sigma_d_sq, p.delta_d_sq) == (14, 14, 1e-6, 1.0, 0.0)
    assert (p.gamma_d_star, p.gamma_e_star, p.epsilon, p.l) == (42.0, 34.0, 0.1, 1.0)
    assert p.noise_floor == 1.0


@pytest.mark.parametrize(
    "field, value",
    [("alpha", 1.5), ("theta", -1.0), ("sigma_d_sq", 0.0), ("l", 0.0), ("gamma_d_star", 1.0),
     ("epsilon", 0.0), ("epsilon", 1.0), ("epsilon", 1.5), ("b_e", 0), ("b_d", 2.5)],
)
def test_invalid_params_name_the_field(field, value):
    with pytest.raises(ConfigError) as info:
        SystemParams(**{field: value})
    assert info.value.field == field


def test_gamma_e_star_floor_is_secrecy_infeasible():
    with pytest.raises(InfeasibleSecrecyError):
        SystemParams(gamma_e_star=math.pi * math.e / 6)
    # still a configuration error by type
    with pytest.raises(ConfigError):
        SystemParams(gamma_e_star=1.0)


# ----------------------------------------------------------------- formulas


@pytest.mark.parametrize(
    "d, alpha, g, expected",
    [(1.0, 3, 1.0, 1.0), (2.0, 4, 1.0, 0.0625), (2.0, 3, 0.5, 0.0625)],
)
def test_path_loss_gain(d, alpha, g, expected):
    assert path_loss_gain(d, alpha, g) == expected


@pytest.mark.parametrize("d", [0.0, -1.0])
def test_path_loss_gain_rejects_nonpositive_distance(d):
    with pytest.raises(DomainError):
        path_loss_gain(d, 3, 1.0)


def test_adc_resolution_receiver():
    p = SystemParams(l=1.0, b_d=14)
    assert adc_resolution_receiver(0.0, 1.0, 1.0, p) == 0.0
    assert adc_resolution_receiver(1.0, 1.0, 1.0, p) == 1.220703125e-4
    assert adc_resolution_receiver(4.0, 1.0, 1.0, p) == 2.44140625e-4


@pytest.mark.parametrize("k, expected", [(0, 1.220703125e-4), (13, 1.0), (14, 2.0)])
def test_adc_resolution_eavesdropper(k, expected):
    p = SystemParams(l=1.0, b_e=14)
    assert adc_resolution_eavesdropper(1.0, 1.0, 1.0, k, p) == expected


def test_adc_resolution_eavesdropper_rejects_negative_k(ref):
    with pytest.raises(DomainError):
        adc_resolution_eavesdropper(1.0, 1.0, 1.0, -1, ref)


@given(
    p_s=st.floats(1e-3, 1e6),
    g=st.floats(1e-3, 10),
    d=st.floats(0.1, 10),
    k=st.integers(0, 30),
)
def test_eavesdropper_resolution_scales_by_two_to_k(p_s, g, d, k):
    p = SystemParams()
    base = adc_resolution_eavesdropper(p_s, g, d, 0, p)
    assert adc_resolution_eavesdropper(p_s, g, d, k, p) == pytest.approx(base * 2.0**k, rel=1e-12)


def test_residual_jamming_variance():
    assert residual_jamming_variance(1e12, 1.0, 1.0, SystemParams(theta=0.0)) == 0.0
    p = SystemParams(theta=1e-6, alpha=3)
    assert residual_jamming_variance(1e12, 1.0, 1.0, p) == pytest.approx(1.0, rel=1e-12)
    assert residual_jamming_variance(1e12, 1.0, 2.0, p) == pytest.approx(0.125, rel=1e-12)


def test_gamma_d_examples():
    p = SystemParams(theta=0.0)
    assert gamma_d(0.0, 0.0, 1.0, 1.0, p) == 1.0
    assert gamma_d(40.0, 0.0, 1.0, 1.0, p) == 41.0
    q = SystemParams(theta=1e-6)
    assert gamma_d(40.0, 1e12, 1.0, 1.0, q) == pytest.approx(21.0, rel=1e-12)


@settings(max_examples=200)
@given(
    p_s=st.floats(1e-3, 1e4),
    factor=st.floats(1.001, 10),
    d=st.floats(0.1, 10),
    g=st.floats(1e-3, 10),
)
def test_gamma_d_monotone(p_s, factor, d, g):
    p = SystemParams()
    pj = 1e6
    assert gamma_d(p_s * factor, pj, g, d, p) > gamma_d(p_s, pj, g, d, p)
    assert gamma_d(p_s, pj, g, d * factor, p) < gamma_d(p_s, pj, g, d, p)


@given(p_s=st.floats(0, 1e6), g=st.floats(0, 10), d=st.floats(0.01, 10))
def test_capacity_of_gamma_d_is_nonnegative(p_s, g, d):
    c = capacity_bounds(gamma_d(p_s, 1e3, g, d, SystemParams()))
    assert c >= 0
    if p_s == 0:
        assert c == 0


@pytest.mark.parametrize("k, expected", [(13, mp_gamma_e_worst(13)), (14, mp_gamma_e_worst(14)), (12, mp_gamma_e_worst(12))])
def test_gamma_e_worst_case_matches_high_precision(k, expected):
    assert gamma_e_worst_case(k, SystemParams()) == pytest.approx(expected, rel=1e-13)


def test_gamma_e_worst_case_frozen_values():
    p = SystemParams()
    # (13/12) * 2 pi e and (4/3) * (2 pi e / 4), computed with mpmath
    assert gamma_e_worst_case(13, p) == pytest.approx(18.502757482459395, abs=1e-9)
    assert gamma_e_worst_case(14, p) == pytest.approx(5.6931561484490447, abs=1e-9)
    assert gamma_e_worst_case(12, p) == pytest.approx(69.74, abs=0.01)
    assert gamma_e_worst_case(12, p) > p.gamma_e_star > gamma_e_worst_case(13, p)


def test_gamma_e_worst_case_strictly_decreasing():
    for b_e in (4, 8, 14, 20):
        p = SystemParams(b_e=b_e)
        values = [gamma_e_worst_case(k, p) for k in range(0, b_e + 10)]
        assert all(a > b for a, b in zip(values, values[1:]))


@settings(max_examples=300)
@given(
    p_s=st.floats(1e-6, 1e9),
    g=st.floats(1e-6, 50),
    d=st.floats(1e-2, 1e2),
    k=st.integers(0, 20),
    alpha=st.sampled_from([2.0, 3.0, 4.0]),
)
def test_general_gamma_e_collapses_to_worst_case(p_s, g, d, k, alpha):
    p = SystemParams(alpha=alpha)
    assert gamma_e(p_s, g, d, k, p, sigma_e_sq=0.0) == pytest.approx(gamma_e_worst_case(k, p), rel=1e-9)


def test_eavesdropper_noise_only_helps(ref):
    worst = gamma_e_worst_case(13, ref)
    for sigma in (1e-6, 1e-3, 1.0):
        assert gamma_e(10.0, 1.0, 0.5, 13, ref, sigma_e_sq=sigma) < worst


def test_capacity_bounds():
    assert capacity_bounds(1.0) == 0.0
    assert capacity_bounds(2.0) == 1.0
    assert capacity_bounds(42.0) == pytest.approx(5.3923174227787603, abs=1e-12)
    with pytest.raises(DomainError):
        capacity_bounds(0.5)


def test_secrecy_rate():
    assert secrecy_rate(SystemParams()) == pytest.approx(0.30485458152842088, abs=1e-12)
    assert secrecy_rate(SystemParams(gamma_d_star=34.0)) == 0.0
    assert secrecy_rate(SystemParams(gamma_d_star=4.0, gamma_e_star=2.0)) == pytest.approx(1.0)
    with pytest.raises(InfeasibleRateError):
        secrecy_rate(SystemParams(gamma_d_star=20.0))


# -------------------------------------------------------------------- types


def test_topology_validation():
    nodes = [("a", 0.0, 0.0), ("b", 1.0, 0.0)]
    t = NetworkTopology(nodes, "a", "b")
    assert t.link("a", "b") == Link("a", "b", 1.0)
    with pytest.raises(ConfigError):
        NetworkTopology(nodes, "a", "a")
    with pytest.raises(ConfigError):
        NetworkTopology(nodes, "a", "z")
    with pytest.raises(ConfigError):
        NetworkTopology([("a", 0, 0), ("a", 1, 0)], "a", "a")
    with pytest.raises(ConfigError):
        NetworkTopology([("a", 0, 0), ("b", 0, 0)], "a", "b")


def test_link_and_channel_draw_invariants():
    with pytest.raises(DomainError):
        Link(0, 1, 0.0)
    with pytest.raises(DomainError):
        ChannelDraw(-0.1)
    assert ChannelDraw(0.0).gain_sq == 0.0


def test_formulas_broadcast_over_arrays(ref):
    g = np.array([0.0, 0.5, 2.0])
    out = gamma_d(10.0, 1e3, g, 1.0, ref)
    assert out.shape == (3,)
    assert out[0] == 1.0
