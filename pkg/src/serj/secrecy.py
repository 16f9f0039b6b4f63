"""Network-wide secrecy plan: key bits per jamming symbol and jamming power ratio."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InfeasibleSecrecyError
from .model import PI_E, SECRECY_FLOOR, SystemParams, gamma_e_worst_case

#: K beyond b_E + this many bits is rejected as a nonsensical configuration.
MAX_EXTRA_KEY_BITS = 32


@dataclass(frozen=True)
class SecrecyPlan:
    k_bits: int
    beta: float
    gamma_e_achieved: float


def _key_bits_bound(params: SystemParams) -> float:
    # 0.5 * log2(pi e 2^(2 b_E - 1) / (l^2 (gamma_E* - pi e / 6))), expanded to avoid 2^(2 b_E) overflow
    return 0.5 * (
        2 * params.b_e - 1
        + math.log2(PI_E)
        - 2.0 * math.log2(params.l)
        - math.log2(params.gamma_e_star - SECRECY_FLOOR)
    )


def min_key_bits(params: SystemParams) -> int:
    """Smallest K >= 0 with gamma_e_worst_case(K) < gamma_E*.

    Starts from the ceiling of the closed-form bound and then settles the
    result against the inequality itself, so a bound that lands exactly on an
    integer (or is perturbed by rounding) cannot yield an insecure K.
    """
    if not params.gamma_e_star > SECRECY_FLOOR:
        raise InfeasibleSecrecyError(
            f"gamma_e_star={params.gamma_e_star} must exceed pi*e/6", field="gamma_e_star"
        )
    limit = params.b_e + MAX_EXTRA_KEY_BITS
    k = max(0, math.ceil(_key_bits_bound(params)))
    k = min(k, limit + 1)
    while k <= limit and gamma_e_worst_case(k, params) >= params.gamma_e_star:
        k += 1
    if k > limit:
        raise InfeasibleSecrecyError(
            f"secrecy needs more than b_e + {MAX_EXTRA_KEY_BITS} = {limit} key bits per symbol",
            field="gamma_e_star",
        )
    while k > 0 and gamma_e_worst_case(k - 1, params) < params.gamma_e_star:
        k -= 1
    return k


def jamming_ratio(k_bits: int, l: float) -> float:
    """beta = P_J / P_S for a uniform 2^K-level jamming constellation."""
    if k_bits < 0:
        raise ValueError(f"k_bits must be >= 0, got {k_bits}")
    # 2^(2K+1) - 3*2^K + 1 is always divisible by 3; integer maths keeps beta exact
    levels = (2 ** (2 * k_bits + 1) - 3 * 2**k_bits + 1) // 3
    return 2.0 * l * l * float(levels)


def build_secrecy_plan(params: SystemParams) -> SecrecyPlan:
    k = min_key_bits(params)
    return SecrecyPlan(
        k_bits=k,
        beta=jamming_ratio(k, params.l),
        gamma_e_achieved=gamma_e_worst_case(k, params),
    )


def reliability_feasible(plan: SecrecyPlan, params: SystemParams) -> bool:
    """True when residual jamming leaves the outage probability below one."""
    return reliability_margin(plan, params) > 0


def reliability_margin(plan: SecrecyPlan, params: SystemParams) -> float:
    return 1.0 - (params.gamma_d_star - 1.0) * params.theta**2 * plan.beta
