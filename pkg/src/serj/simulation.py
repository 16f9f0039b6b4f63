"""Random topologies, Monte Carlo validation of the outage model, parameter sweeps."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from ._accel import apply_thread_cap
from .allocation import PowerAllocation
from .errors import ConfigError, DomainError
from .kernels import outage_indicators
from .model import ChannelDraw, Link, NetworkTopology, Node, SystemParams
from .reliability import end_to_end_outage, link_outage_probability
from .routing import serj_route
from .secrecy import SecrecyPlan

CHUNK_TRIALS = 1 << 18


@dataclass(frozen=True)
class TopologySpec:
    n_nodes: int
    side: float = 5.0
    seed: int = 0
    n_eavesdroppers: int = 0

    def __post_init__(self):
        if int(self.n_nodes) != self.n_nodes or self.n_nodes < 2:
            raise DomainError(f"n_nodes must be an integer >= 2, got {self.n_nodes}")
        if not self.side > 0:
            raise DomainError(f"side must be > 0, got {self.side}")
        if self.n_eavesdroppers < 0:
            raise DomainError("n_eavesdroppers must be >= 0")


def generate_topology(spec: TopologySpec) -> NetworkTopology:
    """Uniform nodes on a square; source nearest (0, 0), destination nearest (side, side).

    Legitimate nodes and eavesdroppers come from independent child streams of
    the seed, so changing the eavesdropper count leaves node positions intact.
    If one node is nearest to both corners it becomes the source and the
    destination is the nearest remaining node.
    """
    node_seq, eve_seq = np.random.SeedSequence(spec.seed & ((1 << 64) - 1)).spawn(2)
    xy = np.random.default_rng(node_seq).uniform(0.0, spec.side, size=(spec.n_nodes, 2))
    eves = np.random.default_rng(eve_seq).uniform(0.0, spec.side, size=(spec.n_eavesdroppers, 2))
    source = int(np.argmin(np.hypot(xy[:, 0], xy[:, 1])))
    to_far = np.hypot(xy[:, 0] - spec.side, xy[:, 1] - spec.side)
    to_far[source] = np.inf
    destination = int(np.argmin(to_far))
    nodes = tuple(Node(i, float(x), float(y)) for i, (x, y) in enumerate(xy))
    return NetworkTopology(nodes, source, destination, eavesdroppers=tuple(map(tuple, eves)))


def single_hop_topology(d_sd: float) -> NetworkTopology:
    """Source at the origin, destination ``d_sd`` away along the x axis."""
    return NetworkTopology((Node(0, 0.0, 0.0), Node(1, float(d_sd), 0.0)), 0, 1)


def draw_gains(rng: np.random.Generator, size=None):
    """Rayleigh power gains |h|^2 ~ Exponential(1)."""
    return rng.exponential(1.0, size=size)


def draw_channel(rng: np.random.Generator) -> ChannelDraw:
    return ChannelDraw(float(draw_gains(rng)))


# ---------------------------------------------------------------- monte carlo


@dataclass(frozen=True)
class OutageEstimate:
    trials: int
    link_counts: np.ndarray
    end_to_end_count: int
    #: pair_counts[i, j] = trials in which hops i and j were both in outage
    pair_counts: np.ndarray

    @property
    def per_link(self) -> np.ndarray:
        return self.link_counts / self.trials

    @property
    def end_to_end(self) -> float:
        return self.end_to_end_count / self.trials

    def indicator_correlation(self, i: int, j: int) -> float:
        n = self.trials
        pi, pj = self.link_counts[i] / n, self.link_counts[j] / n
        pij = self.pair_counts[i, j] / n
        denom = math.sqrt(pi * (1 - pi) * pj * (1 - pj))
        return 0.0 if denom == 0 else (pij - pi * pj) / denom


def monte_carlo_outage(
    path: Sequence[Link],
    allocation: PowerAllocation,
    params: SystemParams,
    plan: SecrecyPlan,
    trials: int,
    seed: int,
    backend=None,
) -> OutageEstimate:
    """Count gamma_D < gamma_D* events with independent Rayleigh draws per hop and trial.

    The drawn gain enters both the signal and the residual-jamming term. Trial
    ``i`` always sees the same draws for a given seed, whatever the chunking or
    thread count.
    """
    if trials < 1:
        raise DomainError(f"trials must be >= 1, got {trials}")
    if len(path) != len(allocation.transmit_powers):
        raise DomainError("allocation does not match path length")
    apply_thread_cap()
    p_s = np.asarray(allocation.transmit_powers, dtype=float)
    p_j = np.asarray(allocation.jamming_powers, dtype=float)
    d_alpha = np.array([link.distance**params.alpha for link in path])
    hops = len(path)
    link_counts = np.zeros(hops, np.int64)
    pair_counts = np.zeros((hops, hops), np.int64)
    e2e = 0
    for start in range(0, trials, CHUNK_TRIALS):
        n = min(CHUNK_TRIALS, trials - start)
        ind = outage_indicators(
            p_s, p_j, d_alpha, params.theta**2, params.noise_floor, params.gamma_d_star,
            seed, start, n, backend=backend,
        )
        link_counts += ind.sum(axis=0, dtype=np.int64)
        wide = ind.astype(np.int64)
        pair_counts += wide.T @ wide
        e2e += int(ind.any(axis=1).sum())
    return OutageEstimate(trials, link_counts, e2e, pair_counts)


def binomial_bound(p: float, trials: int, sigmas: float = 3.0) -> float:
    return sigmas * math.sqrt(p * (1.0 - p) / trials)


def analytic_outages(path: Sequence[Link], allocation: PowerAllocation, params: SystemParams, plan: SecrecyPlan):
    per_link = [
        link_outage_probability(p, link.distance, params, plan)
        for link, p in zip(path, allocation.transmit_powers)
    ]
    return per_link, end_to_end_outage(per_link)


# --------------------------------------------------------------------- sweeps

#: swept variables that never enter the SERJ computation
EAVESDROPPER_PARAMS = ("n_e", "r_min", "r_max", "p_eav")
SWEEPABLE = EAVESDROPPER_PARAMS + ("d_sd", "b_e", "alpha", "n")


@dataclass(frozen=True)
class SweepScenario:
    """One swept variable over a grid, everything else fixed.

    ``mode="single"`` is one hop of length ``d_sd``; ``mode="multi"`` averages
    over ``realizations`` random ``n_nodes`` networks on a ``side`` square.
    The eavesdropper settings are recorded so a row describes the full
    experiment, but SERJ itself never reads them.
    """

    param: str
    values: tuple[float, ...]
    mode: str = "single"
    d_sd: float = 1.0
    n_nodes: int = 25
    side: float = 5.0
    realizations: int = 10
    seed: int = 0
    n_e: int = 5
    r_min: float = 0.01
    r_max: float = 2.0
    p_eav: float = 1e-5
    max_link_distance: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(sorted(self.values)))
        if self.param not in SWEEPABLE:
            raise ConfigError(f"unknown swept variable {self.param!r}; expected one of {SWEEPABLE}", field="param")
        if self.mode not in ("single", "multi"):
            raise ConfigError(f"mode must be 'single' or 'multi', got {self.mode!r}", field="mode")
        if self.param == "n" and self.mode != "multi":
            raise ConfigError("sweeping n requires mode='multi'", field="param")
        if not self.values:
            raise ConfigError("sweep grid is empty", field="values")
        if self.realizations < 1:
            raise ConfigError("realizations must be >= 1", field="realizations")


@dataclass(frozen=True)
class SweepRow:
    swept_param: str
    value: float
    p_total: float
    hops: float
    k_bits: int
    beta: float
    eta: float
    wall_ms: float


@dataclass(frozen=True)
class SweepResult:
    scenario: SweepScenario
    rows: tuple[SweepRow, ...] = field(default=())

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])


def _point(scenario: SweepScenario, params: SystemParams, value):
    """Apply one grid value; returns (params, scenario) for that point."""
    name = scenario.param
    if name == "b_e":
        return replace(params, b_e=int(value)), scenario
    if name == "alpha":
        return replace(params, alpha=float(value)), scenario
    if name == "d_sd":
        return params, replace(scenario, d_sd=float(value))
    if name == "n":
        return params, replace(scenario, n_nodes=int(value))
    if name == "n_e":
        return params, replace(scenario, n_e=int(value))
    return params, replace(scenario, **{name: float(value)})


def run_sweep(scenario: SweepScenario, params: SystemParams, backend=None) -> SweepResult:
    rows = []
    for value in scenario.values:
        t0 = time.perf_counter()
        p, sc = _point(scenario, params, value)
        if sc.mode == "single":
            route = serj_route(single_hop_topology(sc.d_sd), p, backend=backend)
            routes = [route]
        else:
            routes = [
                serj_route(
                    generate_topology(TopologySpec(sc.n_nodes, sc.side, _realization_seed(sc.seed, r), sc.n_e)),
                    p,
                    max_link_distance=sc.max_link_distance,
                    backend=backend,
                )
                for r in range(sc.realizations)
            ]
        costs = [r.total_cost for r in routes]
        rows.append(
            SweepRow(
                swept_param=scenario.param,
                value=float(value),
                p_total=math.fsum(costs) / len(costs),
                hops=math.fsum(len(r.path) for r in routes) / len(routes),
                k_bits=routes[0].plan.k_bits,
                beta=routes[0].plan.beta,
                eta=routes[0].eta,
                wall_ms=(time.perf_counter() - t0) * 1e3,
            )
        )
    return SweepResult(scenario, tuple(rows))


def _realization_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed & ((1 << 64) - 1), index]).generate_state(1, np.uint64)[0])
