"""Readers and writers for topology files, route results and result tables."""

from __future__ import annotations

import csv
import io
import json
from typing import Any, Iterable, Mapping

import yaml

from .allocation import PowerAllocation
from .errors import ConfigError
from .model import Link, NetworkTopology, Node
from .routing import RouteResult
from .secrecy import SecrecyPlan
from .simulation import SweepResult

SWEEP_HEADER = ("swept_param", "value", "P_total", "hops", "K", "beta", "eta", "wall_ms")
ROUTE_HEADER = (
    "hop", "from", "to", "distance", "p_s", "p_j", "link_total",
    "K", "beta", "eta", "weight", "total_cost",
)
VALIDATE_HEADER = ("link", "from", "to", "analytic", "empirical", "bound", "pass")


def fmt(value) -> str:
    """17 significant digits for floats so a CSV round-trip is lossless."""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


# ------------------------------------------------------------------ topology


def topology_from_mapping(doc: Mapping[str, Any]) -> NetworkTopology:
    try:
        nodes = tuple(Node(n["id"], float(n["x"]), float(n["y"])) for n in doc["nodes"])
        source, destination = doc["source"], doc["destination"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed topology document: {exc}", field="topology") from None
    eves = tuple(tuple(map(float, e)) for e in doc.get("eavesdroppers", ()))
    return NetworkTopology(nodes, source, destination, eavesdroppers=eves)


def topology_to_mapping(topology: NetworkTopology) -> dict:
    doc = {
        "nodes": [{"id": n.id, "x": n.x, "y": n.y} for n in topology.nodes],
        "source": topology.source,
        "destination": topology.destination,
    }
    if topology.eavesdroppers:
        doc["eavesdroppers"] = [list(e) for e in topology.eavesdroppers]
    return doc


def load_topology(path) -> NetworkTopology:
    try:
        with open(path) as fh:
            doc = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read topology file {path}: {exc}", field="topology") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"topology file {path} does not parse: {exc}", field="topology") from None
    if not isinstance(doc, Mapping):
        raise ConfigError(f"topology file {path} must hold a mapping", field="topology")
    return topology_from_mapping(doc)


# --------------------------------------------------------------------- route


def route_to_record(result: RouteResult) -> dict:
    alloc = result.allocation
    return {
        "nodes": result.nodes,
        "links": [
            {"from": link.sender, "to": link.receiver, "distance": link.distance, "p_s": ps, "p_j": pj}
            for link, ps, pj in zip(result.path, alloc.transmit_powers, alloc.jamming_powers)
        ],
        "K": result.plan.k_bits,
        "beta": result.plan.beta,
        "gamma_e": result.plan.gamma_e_achieved,
        "eta": result.eta,
        "weight": result.weight,
        "total_cost": alloc.total_cost,
        "multiplier": alloc.multiplier,
    }


def route_from_record(doc: Mapping[str, Any]) -> RouteResult:
    links = tuple(Link(r["from"], r["to"], float(r["distance"])) for r in doc["links"])
    alloc = PowerAllocation(
        links=links,
        transmit_powers=tuple(float(r["p_s"]) for r in doc["links"]),
        jamming_powers=tuple(float(r["p_j"]) for r in doc["links"]),
        total_cost=float(doc["total_cost"]),
        multiplier=float(doc["multiplier"]),
    )
    plan = SecrecyPlan(int(doc["K"]), float(doc["beta"]), float(doc["gamma_e"]))
    return RouteResult(links, float(doc["weight"]), alloc, plan, float(doc["eta"]))


def route_rows(result: RouteResult) -> list[dict]:
    alloc = result.allocation
    rows = []
    for i, (link, ps, pj) in enumerate(zip(result.path, alloc.transmit_powers, alloc.jamming_powers)):
        rows.append(dict(zip(ROUTE_HEADER, (
            i, link.sender, link.receiver, link.distance, ps, pj, ps + pj,
            result.plan.k_bits, result.plan.beta, result.eta, result.weight, alloc.total_cost,
        ))))
    return rows


# --------------------------------------------------------------------- tables


def sweep_rows(result: SweepResult) -> list[dict]:
    return [
        dict(zip(SWEEP_HEADER, (r.swept_param, r.value, r.p_total, r.hops, r.k_bits, r.beta, r.eta, r.wall_ms)))
        for r in result.rows
    ]


def write_table(rows: Iterable[Mapping], header, fmt_name: str, stream) -> None:
    """Write rows as CSV (with ``header``) or as one JSON object per line."""
    if fmt_name == "csv":
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(row[h]) for h in header])
    elif fmt_name == "jsonl":
        for row in rows:
            stream.write(json.dumps({h: row[h] for h in header}) + "\n")
    else:
        raise ConfigError(f"unknown format {fmt_name!r}", field="format")


def read_csv(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))
