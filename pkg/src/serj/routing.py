"""Weighted-graph construction, shortest-path search and the end-to-end route."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Sequence

import numpy as np

from .allocation import PowerAllocation, optimal_power_allocation
from .errors import DomainError, NoPathError
from .kernels import dijkstra_dense
from .model import Link, NetworkTopology, SystemParams, link_weight
from .reliability import reliability_budget
from .secrecy import SecrecyPlan, build_secrecy_plan

#: Path weights closer than this (relative) are treated as ties.
TIE_RTOL = 1e-12


@dataclass(frozen=True)
class WeightedGraph:
    """Dense graph over legitimate nodes; ``weights[i, j]`` is inf for absent edges."""

    ids: tuple
    distances: np.ndarray
    weights: np.ndarray

    @property
    def n_nodes(self) -> int:
        return len(self.ids)

    def index_of(self, node) -> int:
        try:
            return self.ids.index(node)
        except ValueError:
            raise DomainError(f"node {node!r} is not in the graph") from None

    def edges(self):
        """Yield (u, v, weight) once per undirected edge."""
        iu, ju = np.triu_indices(self.n_nodes, k=1)
        for i, j in zip(iu, ju):
            if np.isfinite(self.weights[i, j]):
                yield self.ids[i], self.ids[j], float(self.weights[i, j])

    @property
    def n_edges(self) -> int:
        iu, ju = np.triu_indices(self.n_nodes, k=1)
        return int(np.isfinite(self.weights[iu, ju]).sum())


@dataclass(frozen=True)
class RouteResult:
    path: tuple[Link, ...]
    weight: float
    allocation: PowerAllocation
    plan: SecrecyPlan
    eta: float

    @property
    def nodes(self) -> list:
        return [self.path[0].sender] + [link.receiver for link in self.path]

    @property
    def total_cost(self) -> float:
        return self.allocation.total_cost


def build_weighted_graph(
    topology: NetworkTopology, params: SystemParams, max_link_distance: float | None = None
) -> WeightedGraph:
    """Complete graph with sqrt(d^alpha) weights, optionally dropping long links."""
    xy = topology.coordinates
    if len(xy) < 2:
        raise DomainError("a graph needs at least two nodes")
    dist = np.hypot(xy[:, 0, None] - xy[None, :, 0], xy[:, 1, None] - xy[None, :, 1])
    weights = dist ** (params.alpha / 2.0)
    np.fill_diagonal(weights, np.inf)
    if max_link_distance is not None:
        if not max_link_distance > 0:
            raise DomainError(f"max_link_distance must be > 0, got {max_link_distance}")
        weights[dist > max_link_distance] = np.inf
    dist.flags.writeable = False
    weights.flags.writeable = False
    return WeightedGraph(ids=tuple(topology.ids), distances=dist, weights=weights)


def _id_ranks(ids: Sequence[Hashable]) -> np.ndarray:
    try:
        order = sorted(range(len(ids)), key=lambda i: ids[i])
    except TypeError:
        order = sorted(range(len(ids)), key=lambda i: (type(ids[i]).__name__, str(ids[i])))
    ranks = np.empty(len(ids), np.int64)
    ranks[order] = np.arange(len(ids))
    return ranks


def shortest_path(graph: WeightedGraph, source, destination, backend=None) -> tuple[list, float]:
    """Minimum-weight simple path as a node sequence, plus its weight.

    Among equal-weight paths the one with fewer hops wins, then the
    lexicographically smallest node-id sequence. The search runs from the
    destination so the winning path can be read off greedily from the source.
    """
    s, t = graph.index_of(source), graph.index_of(destination)
    if s == t:
        raise DomainError("source and destination must differ")
    w = graph.weights
    dist, hops = dijkstra_dense(w, t, TIE_RTOL, backend=backend)
    if not np.isfinite(dist[s]):
        raise NoPathError(f"no path from {source!r} to {destination!r}")
    ranks = _id_ranks(graph.ids)
    order = [s]
    u = s
    total = 0.0
    with np.errstate(invalid="ignore"):
        while u != t:
            slack = np.abs(w[u] + dist - dist[u])
            ok = (hops == hops[u] - 1) & np.isfinite(w[u]) & (slack <= TIE_RTOL * dist[u])
            candidates = np.flatnonzero(ok)
            v = int(candidates[np.argmin(ranks[candidates])])
            total += w[u, v]
            order.append(v)
            u = v
    return [graph.ids[i] for i in order], float(total)


def serj_route(
    topology: NetworkTopology,
    params: SystemParams,
    max_link_distance: float | None = None,
    power_warning: float | None = None,
    backend=None,
) -> RouteResult:
    """Secure minimum-energy route between the topology's endpoints.

    Eavesdroppers never enter: the secrecy plan depends only on the system
    parameters and the link weights only on legitimate-node geometry.
    """
    plan = build_secrecy_plan(params)
    budget = reliability_budget(params, plan)
    graph = build_weighted_graph(topology, params, max_link_distance)
    nodes, _ = shortest_path(graph, topology.source, topology.destination, backend=backend)
    idx = [graph.index_of(n) for n in nodes]
    path = tuple(Link(a, b, float(graph.distances[i, j])) for a, b, i, j in zip(nodes, nodes[1:], idx, idx[1:]))
    allocation = optimal_power_allocation(path, budget, plan, params, power_warning=power_warning)
    weight = math.fsum(link_weight(link.distance, params.alpha) for link in path)
    return RouteResult(path=path, weight=weight, allocation=allocation, plan=plan, eta=budget.eta)
