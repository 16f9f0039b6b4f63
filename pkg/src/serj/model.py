"""Domain types and point-to-point physical-layer formulas.

Every formula accepts python floats or numpy arrays (broadcasting), which is
what the vectorised Monte Carlo path relies on.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, NamedTuple

import numpy as np

from .errors import ConfigError, DomainError, InfeasibleRateError, InfeasibleSecrecyError

PI_E = math.pi * math.e
#: Below this eavesdropper threshold no amount of jamming gives secrecy.
SECRECY_FLOOR = PI_E / 6.0


@dataclass(frozen=True)
class SystemParams:
    """Physical and protocol constants shared by every link of a run.

    Defaults reproduce the reference setting: 14-bit converters on both
    sides, theta = 1e-6, unit receiver noise, gamma_D* = 42, gamma_E* = 34 and
    an end-to-end outage budget of 0.1. ``delta_d_sq`` is the receiver
    quantisation-noise numerator, treated as a constant (0 by default).
    """

    alpha: float = 3.0
    theta: float = 1e-6
    sigma_d_sq: float = 1.0
    delta_d_sq: float = 0.0
    b_d: int = 14
    b_e: int = 14
    l: float = 1.0
    gamma_d_star: float = 42.0
    gamma_e_star: float = 34.0
    epsilon: float = 0.1

    def __post_init__(self):
        checks = [
            ("alpha", self.alpha >= 2, "must be >= 2"),
            ("theta", self.theta >= 0, "must be >= 0"),
            ("sigma_d_sq", self.sigma_d_sq > 0, "must be > 0"),
            ("delta_d_sq", self.delta_d_sq >= 0, "must be >= 0"),
            ("l", self.l > 0, "must be > 0"),
            ("gamma_d_star", self.gamma_d_star > 1, "must be > 1"),
            ("epsilon", 0 < self.epsilon < 1, "must lie in (0, 1)"),
        ]
        for name, ok, why in checks:
            value = getattr(self, name)
            if not (isinstance(value, numbers.Real) and math.isfinite(value) and ok):
                raise ConfigError(f"{name}={value!r} {why}", field=name)
        for name in ("b_d", "b_e"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, numbers.Integral) or value < 1:
                raise ConfigError(f"{name}={value!r} must be an integer >= 1", field=name)
        if not (math.isfinite(self.gamma_e_star) and self.gamma_e_star > SECRECY_FLOOR):
            raise InfeasibleSecrecyError(
                f"gamma_e_star={self.gamma_e_star!r} must exceed pi*e/6 = {SECRECY_FLOOR:.6f}",
                field="gamma_e_star",
            )

    @property
    def noise_floor(self) -> float:
        """Effective receiver noise sigma_D^2 + delta_D^2 / 12."""
        return self.sigma_d_sq + self.delta_d_sq / 12.0


class Node(NamedTuple):
    id: Hashable
    x: float
    y: float


@dataclass(frozen=True)
class Link:
    sender: Hashable
    receiver: Hashable
    distance: float

    def __post_init__(self):
        if not self.distance > 0:
            raise DomainError(f"link {self.sender}->{self.receiver} has distance {self.distance}")


@dataclass(frozen=True)
class ChannelDraw:
    """One quasi-static fading realisation; ``gain_sq`` is |h|^2."""

    gain_sq: float

    def __post_init__(self):
        if not self.gain_sq >= 0:
            raise DomainError(f"gain_sq must be >= 0, got {self.gain_sq}")


@dataclass(frozen=True)
class NetworkTopology:
    """Legitimate nodes in the plane plus the flow endpoints.

    ``eavesdroppers`` is carried for bookkeeping only; nothing in the routing
    or allocation code reads it.
    """

    nodes: tuple[Node, ...]
    source: Hashable
    destination: Hashable
    eavesdroppers: tuple[tuple[float, float], ...] = field(default=())

    def __post_init__(self):
        nodes = tuple(n if isinstance(n, Node) else Node(*n) for n in self.nodes)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "eavesdroppers", tuple(tuple(map(float, e)) for e in self.eavesdroppers))
        ids = [n.id for n in nodes]
        if len(set(ids)) != len(ids):
            raise ConfigError("node ids must be unique", field="nodes")
        if self.source == self.destination:
            raise ConfigError("source and destination must differ", field="destination")
        for name in ("source", "destination"):
            if getattr(self, name) not in self.index:
                raise ConfigError(f"{name} {getattr(self, name)!r} is not a node", field=name)
        xy = self.coordinates
        if not np.all(np.isfinite(xy)):
            raise ConfigError("node coordinates must be finite", field="nodes")
        if len(np.unique(xy, axis=0)) != len(nodes):
            raise ConfigError("two nodes share a position (zero-length link)", field="nodes")

    @cached_property
    def index(self) -> dict:
        return {n.id: i for i, n in enumerate(self.nodes)}

    @cached_property
    def ids(self) -> list:
        return [n.id for n in self.nodes]

    @cached_property
    def coordinates(self) -> np.ndarray:
        xy = np.array([(n.x, n.y) for n in self.nodes], dtype=float).reshape(-1, 2)
        xy.flags.writeable = False
        return xy

    def link(self, a, b) -> Link:
        na, nb = self.nodes[self.index[a]], self.nodes[self.index[b]]
        return Link(a, b, math.hypot(na.x - nb.x, na.y - nb.y))


def _require_positive(name, value):
    if np.any(np.asarray(value) <= 0) or np.any(np.isnan(value)):
        raise DomainError(f"{name} must be > 0, got {value}")


def _require_nonnegative(name, value):
    if np.any(np.asarray(value) < 0) or np.any(np.isnan(value)):
        raise DomainError(f"{name} must be >= 0, got {value}")


def path_loss_gain(distance, alpha, gain_sq=1.0):
    """|h|^2 / d^alpha; multiply by transmit power for received power."""
    _require_positive("distance", distance)
    _require_nonnegative("gain_sq", gain_sq)
    return gain_sq / distance**alpha


def link_weight(distance: float, alpha: float) -> float:
    """Routing weight sqrt(d^alpha) of a single link."""
    if not distance > 0:
        raise DomainError(f"distance must be > 0, got {distance}")
    return distance ** (alpha / 2.0)


def adc_resolution_receiver(p_s, gain_sq, distance, params: SystemParams):
    """Quantisation step of the legitimate receiver's converter."""
    _require_nonnegative("p_s", p_s)
    _require_positive("distance", distance)
    amplitude = np.sqrt(p_s * gain_sq)
    return 2.0 * params.l * amplitude / (2.0**params.b_d * distance ** (params.alpha / 2.0))


def adc_resolution_eavesdropper(p_s, gain_sq, distance, k_bits: int, params: SystemParams):
    """Quantisation step of an eavesdropper whose span is widened to fit 2^K jamming levels.

    ``k_bits=0`` gives the resolution before jamming.
    """
    if k_bits < 0:
        raise DomainError(f"k_bits must be >= 0, got {k_bits}")
    _require_nonnegative("p_s", p_s)
    _require_positive("distance", distance)
    amplitude = np.sqrt(p_s * gain_sq)
    span_bits = params.b_e - k_bits
    return 2.0 * params.l * amplitude / (2.0**span_bits * distance ** (params.alpha / 2.0))


def residual_jamming_variance(p_j, gain_sq, distance, params: SystemParams):
    """Variance of the jamming left over after imperfect cancellation."""
    _require_nonnegative("p_j", p_j)
    _require_positive("distance", distance)
    return params.theta**2 * p_j * gain_sq / distance**params.alpha


def gamma_d(p_s, p_j, gain_sq, distance, params: SystemParams):
    """Legitimate-receiver ratio (S + N) / N with N = residual jamming + noise floor."""
    _require_nonnegative("p_s", p_s)
    _require_nonnegative("p_j", p_j)
    _require_positive("distance", distance)
    signal = p_s * gain_sq / distance**params.alpha
    noise = params.theta**2 * p_j * gain_sq / distance**params.alpha + params.noise_floor
    return (signal + noise) / noise


def gamma_e(p_s, gain_sq, distance, k_bits: int, params: SystemParams, sigma_e_sq=0.0):
    """Eavesdropper ratio for an arbitrary link state, before any worst-case reduction."""
    delta = adc_resolution_eavesdropper(p_s, gain_sq, distance, k_bits, params)
    signal = p_s * gain_sq / distance**params.alpha
    return (signal + sigma_e_sq + delta**2 / 12.0) / (sigma_e_sq + delta**2 / (2.0 * PI_E))


def gamma_e_worst_case(k_bits: int, params: SystemParams) -> float:
    """Eavesdropper ratio with zero eavesdropper noise.

    Distance, fading and transmit power cancel, so only K, b_E and l remain.
    """
    if k_bits < 0:
        raise DomainError(f"k_bits must be >= 0, got {k_bits}")
    # 4 l^2 / 2^(2 b_E - 2K), scaled exactly by ldexp
    q = math.ldexp(4.0 * params.l**2, 2 * (k_bits - params.b_e))
    return (1.0 + q / 12.0) / (q / (2.0 * PI_E))


def capacity_bounds(gamma):
    """Map a gamma ratio to its capacity bound log2(gamma), bits per channel use."""
    if np.any(np.asarray(gamma) < 1) or np.any(np.isnan(gamma)):
        raise DomainError(f"gamma must be >= 1, got {gamma}")
    return np.log2(gamma) if isinstance(gamma, np.ndarray) else math.log2(gamma)


def secrecy_rate(params: SystemParams) -> float:
    """Secrecy rate guaranteed when both thresholds hold, in bits per use."""
    if params.gamma_d_star < params.gamma_e_star:
        raise InfeasibleRateError(
            f"gamma_d_star={params.gamma_d_star} < gamma_e_star={params.gamma_e_star}",
            field="gamma_d_star",
        )
    return math.log2(params.gamma_d_star) - math.log2(params.gamma_e_star)
