"""Outage analysis under Rayleigh fading and the reliability constant eta."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, InfeasibleReliabilityError
from .model import SystemParams
from .secrecy import SecrecyPlan, reliability_margin


@dataclass(frozen=True)
class ReliabilityBudget:
    """``eta`` bounds sum(d_i^alpha / P_i) along a path so the outage budget holds."""

    eta: float
    epsilon: float


def eta(params: SystemParams, plan: SecrecyPlan) -> float:
    margin = reliability_margin(plan, params)
    if not margin > 0:
        raise InfeasibleReliabilityError(
            f"1 - (gamma_d_star - 1) theta^2 beta = {margin:.6g} <= 0; "
            "residual jamming makes every link fail"
        )
    log_term = -math.log1p(-params.epsilon)  # ln(1 / (1 - eps))
    return log_term * margin / ((params.gamma_d_star - 1.0) * params.noise_floor)


def reliability_budget(params: SystemParams, plan: SecrecyPlan) -> ReliabilityBudget:
    return ReliabilityBudget(eta=eta(params, plan), epsilon=params.epsilon)


def link_outage_probability(p_s: float, distance: float, params: SystemParams, plan: SecrecyPlan) -> float:
    """Probability that a single hop's gamma_D falls below gamma_D*.

    Exactly 1 when the residual jamming margin is non-positive.
    """
    if not p_s > 0:
        raise DomainError(f"p_s must be > 0, got {p_s}")
    if not distance > 0:
        raise DomainError(f"distance must be > 0, got {distance}")
    margin = reliability_margin(plan, params)
    if margin <= 0:
        return 1.0
    threshold = (params.gamma_d_star - 1.0) * params.noise_floor * distance**params.alpha / (p_s * margin)
    return -math.expm1(-threshold)


def end_to_end_outage(per_link: Sequence[float]) -> float:
    """Outage of a path whose hops fail independently."""
    probs = list(per_link)
    if not probs:
        raise DomainError("end_to_end_outage needs at least one link")
    log_survive = 0.0
    for p in probs:
        if not 0.0 <= p <= 1.0:
            raise DomainError(f"outage probability {p} outside [0, 1]")
        if p == 1.0:
            return 1.0
        log_survive += math.log1p(-p)
    # log domain keeps tiny per-hop outages from cancelling against 1.0
    return -math.expm1(log_survive)
