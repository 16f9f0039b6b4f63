"""Secure energy-efficient routing with key-based random jamming.

Each hop adds a keyed uniform jamming signal that the intended receiver
cancels before its A/D converter, while any eavesdropper must widen its
converter span and drown in quantisation noise. The package sizes that
jamming, allocates per-hop power against an end-to-end outage budget, and
finds the cheapest path.
"""

from .allocation import PowerAllocation, optimal_power_allocation, path_total_cost
from .errors import (
    ConfigError,
    DomainError,
    InfeasibleRateError,
    InfeasibleReliabilityError,
    InfeasibleSecrecyError,
    NoPathError,
    SerjError,
)
from .model import (
    ChannelDraw,
    Link,
    NetworkTopology,
    Node,
    SystemParams,
    adc_resolution_eavesdropper,
    adc_resolution_receiver,
    capacity_bounds,
    gamma_d,
    gamma_e,
    gamma_e_worst_case,
    link_weight,
    path_loss_gain,
    residual_jamming_variance,
    secrecy_rate,
)
from .reliability import ReliabilityBudget, end_to_end_outage, eta, link_outage_probability, reliability_budget
from .routing import RouteResult, WeightedGraph, build_weighted_graph, serj_route, shortest_path
from .secrecy import SecrecyPlan, build_secrecy_plan, jamming_ratio, min_key_bits, reliability_feasible
from .simulation import (
    OutageEstimate,
    SweepResult,
    SweepRow,
    SweepScenario,
    TopologySpec,
    draw_channel,
    draw_gains,
    generate_topology,
    monte_carlo_outage,
    run_sweep,
    single_hop_topology,
)

__version__ = "0.1.0"
