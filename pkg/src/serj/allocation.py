"""Optimal per-hop transmit and jamming powers for a fixed path."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, InfeasibleReliabilityError
from .model import Link, SystemParams, link_weight
from .reliability import ReliabilityBudget
from .secrecy import SecrecyPlan, reliability_feasible

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PowerAllocation:
    links: tuple[Link, ...]
    transmit_powers: tuple[float, ...]
    jamming_powers: tuple[float, ...]
    total_cost: float
    multiplier: float

    @property
    def link_totals(self) -> tuple[float, ...]:
        """Signal plus jamming power spent by each forwarding node."""
        return tuple(s + j for s, j in zip(self.transmit_powers, self.jamming_powers))

    @property
    def transmit_cost(self) -> float:
        return math.fsum(self.transmit_powers)


def _check_path(path: Sequence[Link], budget: ReliabilityBudget):
    if len(path) == 0:
        raise DomainError("path must contain at least one link")
    if not budget.eta > 0:
        raise InfeasibleReliabilityError(f"eta must be > 0, got {budget.eta}")


def optimal_power_allocation(
    path: Sequence[Link],
    budget: ReliabilityBudget,
    plan: SecrecyPlan,
    params: SystemParams,
    power_warning: float | None = None,
) -> PowerAllocation:
    """Minimise total transmit power subject to sum(d_i^alpha / P_i) = eta.

    Stationarity of the Lagrangian gives P_i = sqrt(lambda d_i^alpha); the
    binding constraint fixes lambda = (sum_k sqrt(d_k^alpha))^2 / eta^2, so
    P_i = sqrt(d_i^alpha) * sum_k sqrt(d_k^alpha) / eta. Jamming power is
    beta * P_i on every hop.

    ``power_warning`` only logs; powers are never capped.
    """
    _check_path(path, budget)
    if not reliability_feasible(plan, params):
        raise InfeasibleReliabilityError("secrecy plan leaves no reliability margin")
    weights = [link_weight(link.distance, params.alpha) for link in path]
    total_weight = math.fsum(weights)
    powers = tuple(w * total_weight / budget.eta for w in weights)
    jamming = tuple(plan.beta * p for p in powers)
    if power_warning is not None:
        for link, p, j in zip(path, powers, jamming):
            if p + j > power_warning:
                log.warning(
                    "link %s->%s needs %.6g power units (threshold %.6g)",
                    link.sender, link.receiver, p + j, power_warning,
                )
    return PowerAllocation(
        links=tuple(path),
        transmit_powers=powers,
        jamming_powers=jamming,
        total_cost=(1.0 + plan.beta) * math.fsum(powers),
        multiplier=(total_weight / budget.eta) ** 2,
    )


def path_total_cost(
    path: Sequence[Link], budget: ReliabilityBudget, plan: SecrecyPlan, params: SystemParams
) -> float:
    """Minimum signal-plus-jamming power of a path: (1 + beta) / eta * W^2."""
    _check_path(path, budget)
    total_weight = math.fsum(link_weight(link.distance, params.alpha) for link in path)
    return (1.0 + plan.beta) / budget.eta * total_weight**2
