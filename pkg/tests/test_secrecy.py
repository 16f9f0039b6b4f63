import math
from fractions import Fraction

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from serj import (
    InfeasibleSecrecyError,
    SystemParams,
    build_secrecy_plan,
    gamma_e_worst_case,
    jamming_ratio,
    min_key_bits,
    reliability_feasible,
)
from serj.secrecy import SecrecyPlan


def scan_min_k(b_e, gamma_e_star, l=1.0):
    """Smallest K whose worst-case eavesdropper ratio (evaluated in mpmath) is below threshold."""
    mp.mp.dps = 60
    two_pi_e = 2 * mp.pi * mp.e
    for k in range(0, b_e + 64):
        q = 4 * mp.mpf(l) ** 2 / mp.mpf(2) ** (2 * b_e - 2 * k)
        if (1 + q / 12) / (q / two_pi_e) < gamma_e_star:
            return k
    raise AssertionError("scan did not terminate")


def closed_form_k(b_e, gamma_e_star, l=1.0):
    mp.mp.dps = 60
    pe = mp.pi * mp.e
    bound = mp.log(pe * mp.mpf(2) ** (2 * b_e - 1) / (mp.mpf(l) ** 2 * (gamma_e_star - pe / 6)), 2) / 2
    return max(0, int(mp.ceil(bound)))


def jamming_energy_by_sum(k, l=1):
    """Mean of (2 l j)^2 over the 2^K equally likely levels, in exact rationals (P_S = 1)."""
    return Fraction(4 * l * l * sum(j * j for j in range(2**k)), 2**k)


@pytest.mark.parametrize("b_e, expected", [(14, 13), (8, 7), (4, 3)])
def test_min_key_bits_examples(b_e, expected):
    p = SystemParams(b_e=b_e, gamma_e_star=34.0, l=1.0)
    assert min_key_bits(p) == expected
    assert scan_min_k(b_e, 34.0) == expected
    assert closed_form_k(b_e, 34.0) == expected


def test_min_key_bits_infeasible_at_floor():
    with pytest.raises(InfeasibleSecrecyError):
        min_key_bits(SystemParams(b_e=14, gamma_e_star=math.pi * math.e / 6))


def test_key_bits_cap_rejects_nonsense():
    # a threshold barely above pi e / 6 with a tiny step size needs K far beyond b_E
    p = SystemParams(b_e=4, l=1e-6, gamma_e_star=math.pi * math.e / 6 + 1e-12)
    with pytest.raises(InfeasibleSecrecyError):
        min_key_bits(p)


@given(
    b_e=st.integers(1, 24),
    gamma_e_star=st.floats(1.5, 1e6),
    l=st.floats(0.25, 4.0),
)
def test_min_key_bits_agrees_with_scan(b_e, gamma_e_star, l):
    p = SystemParams(b_e=b_e, gamma_e_star=gamma_e_star, l=l)
    k = min_key_bits(p)
    assert k == scan_min_k(b_e, gamma_e_star, l)
    assert gamma_e_worst_case(k, p) < gamma_e_star
    if k > 0:
        assert gamma_e_worst_case(k - 1, p) >= gamma_e_star


def test_boundary_threshold_is_not_secure():
    # gamma_E* exactly equal to gamma_e_worst_case(13): the strict inequality forces K = 14
    p = SystemParams(gamma_e_star=gamma_e_worst_case(13, SystemParams()))
    assert min_key_bits(p) == 14


@given(b_e=st.integers(1, 20), gamma_e_star=st.floats(2.0, 1e4))
def test_min_key_bits_monotone(b_e, gamma_e_star):
    base = min_key_bits(SystemParams(b_e=b_e, gamma_e_star=gamma_e_star))
    assert min_key_bits(SystemParams(b_e=b_e + 1, gamma_e_star=gamma_e_star)) >= base
    assert min_key_bits(SystemParams(b_e=b_e, gamma_e_star=gamma_e_star * 2)) <= base
    assert min_key_bits(SystemParams(b_e=b_e, gamma_e_star=gamma_e_star, l=2.0)) <= base


@pytest.mark.parametrize("k", [0, 1, 2, 5, 13])
def test_jamming_ratio_matches_level_sum(k):
    assert jamming_ratio(k, 1.0) == float(jamming_energy_by_sum(k))


def test_jamming_ratio_examples():
    assert jamming_ratio(0, 3.7) == 0.0
    assert jamming_ratio(1, 1.0) == 2.0
    assert jamming_ratio(13, 1.0) == 89_462_102.0
    assert jamming_ratio(2, 0.5) == pytest.approx(float(jamming_energy_by_sum(2)) * 0.25)


def test_jamming_ratio_grows_fourfold():
    ratios = [jamming_ratio(k + 1, 1.0) / jamming_ratio(k, 1.0) for k in range(1, 30)]
    assert all(a > b for a, b in zip(ratios, ratios[1:]))
    assert ratios[-1] == pytest.approx(4.0, rel=1e-8)


def test_build_secrecy_plan_reference(ref):
    plan = build_secrecy_plan(ref)
    assert plan.k_bits == 13
    assert plan.beta == 89_462_102.0
    assert plan.gamma_e_achieved == pytest.approx(18.502757482459395, abs=1e-9)
    assert plan.gamma_e_achieved < ref.gamma_e_star


def test_plan_needs_no_jamming_for_lax_threshold():
    # K = 0 requires gamma_E* above gamma_e_worst_case(0) = 2 pi e 4^{b_E} / 4 + pi e / 6
    p = SystemParams(b_e=14, gamma_e_star=1e12)
    plan = build_secrecy_plan(p)
    assert plan.k_bits == 0 and plan.beta == 0.0


def test_plan_small_converter():
    plan = build_secrecy_plan(SystemParams(b_e=4))
    assert plan.k_bits == 3
    assert plan.beta == jamming_ratio(3, 1.0)


@given(b_e=st.integers(1, 20), gamma_e_star=st.floats(1.5, 1e9))
def test_plan_invariants(b_e, gamma_e_star):
    p = SystemParams(b_e=b_e, gamma_e_star=gamma_e_star)
    plan = build_secrecy_plan(p)
    assert plan.gamma_e_achieved < gamma_e_star
    assert (plan.k_bits == 0) == (plan.beta == 0.0)
    assert plan.beta == jamming_ratio(plan.k_bits, p.l)


def test_reliability_feasible():
    beta = 89_462_102.0
    plan = SecrecyPlan(13, beta, 18.5)
    assert reliability_feasible(plan, SystemParams(theta=0.0))
    assert reliability_feasible(plan, SystemParams(theta=1e-6))
    assert 1 - 41 * 1e-12 * beta == pytest.approx(1 - 3.668e-3, abs=1e-6)
    assert not reliability_feasible(plan, SystemParams(theta=1e-3))
