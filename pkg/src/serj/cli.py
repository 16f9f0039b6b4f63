"""Command-line front end: ``serj route | sweep | validate``.

Exit codes: 0 success, 2 configuration error, 3 secrecy infeasible,
4 reliability infeasible, 5 validation failure, 6 no path between endpoints.
"""

from __future__ import annotations

import argparse
import contextlib
import dataclasses
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Mapping

import yaml

from .allocation import PowerAllocation
from .errors import ConfigError, SerjError
from .model import NetworkTopology, SystemParams
from .routing import serj_route
from .serialize import (
    ROUTE_HEADER,
    SWEEP_HEADER,
    VALIDATE_HEADER,
    load_topology,
    route_rows,
    route_to_record,
    sweep_rows,
    topology_from_mapping,
    write_table,
)
from .simulation import (
    SWEEPABLE,
    SweepScenario,
    TopologySpec,
    analytic_outages,
    binomial_bound,
    generate_topology,
    monte_carlo_outage,
    run_sweep,
    single_hop_topology,
)

log = logging.getLogger("serj")

COMMANDS = ("route", "sweep", "validate")
FORMATS = ("csv", "jsonl")
INTEGER_SWEEPS = {"n_e", "b_e", "n"}
TOP_LEVEL_KEYS = {
    "command", "params", "topology", "scenario", "trials", "seed", "output", "format",
    "power_scale", "max_link_distance", "power_warning",
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: SystemParams = field(default_factory=SystemParams)
    topology: NetworkTopology | TopologySpec | None = None
    scenario: SweepScenario | None = None
    trials: int = 1_000_000
    seed: int = 0
    output: str | None = None
    format: str = "csv"
    power_scale: float = 1.0
    max_link_distance: float | None = None
    power_warning: float | None = None


# ------------------------------------------------------------------ parsing


def parse_sweep_flag(text: str) -> tuple[str, tuple]:
    """``param=start:stop:step`` with an inclusive stop."""
    try:
        name, grid = text.split("=", 1)
        start, stop, step = (float(x) for x in grid.split(":"))
    except ValueError:
        raise ConfigError(f"--sweep expects param=start:stop:step, got {text!r}", field="sweep") from None
    name = name.strip()
    if name not in SWEEPABLE:
        raise ConfigError(f"unknown swept variable {name!r}; expected one of {SWEEPABLE}", field="sweep")
    if not step > 0 or stop < start:
        raise ConfigError("--sweep needs step > 0 and stop >= start", field="sweep")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    values = tuple(round(start + i * step, 12) for i in range(count))
    if name in INTEGER_SWEEPS:
        values = tuple(int(round(v)) for v in values)
    return name, values


def _number(doc, key, kind, default, positive=False):
    value = doc.get(key, default)
    if value is None:
        return None
    try:
        if kind is int:
            if isinstance(value, bool) or (isinstance(value, float) and not value.is_integer()):
                raise ValueError
            value = int(value)
        else:
            value = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{key} must be a {kind.__name__}, got {value!r}", field=key) from None
    if positive and not value > 0:
        raise ConfigError(f"{key} must be > 0, got {value}", field=key)
    return value


def _params(doc) -> SystemParams:
    if doc is None:
        return SystemParams()
    if not isinstance(doc, Mapping):
        raise ConfigError("params must be a mapping", field="params")
    known = {f.name: f for f in dataclasses.fields(SystemParams)}
    kwargs = {}
    for key, value in doc.items():
        if key not in known:
            raise ConfigError(f"unknown parameter {key!r}", field=f"params.{key}")
        if known[key].type == "int" or known[key].type is int:
            kwargs[key] = _number(doc, key, int, None)
        else:
            kwargs[key] = _number(doc, key, float, None)
    return SystemParams(**kwargs)


def _topology(value, seed, base_dir):
    if value is None:
        return None
    if isinstance(value, str):
        path = value if os.path.isabs(value) or base_dir is None else os.path.join(base_dir, value)
        if not os.path.exists(path):
            raise ConfigError(f"topology file {path} does not exist", field="topology")
        return load_topology(path)
    if not isinstance(value, Mapping):
        raise ConfigError("topology must be a file path or a mapping", field="topology")
    if "nodes" in value:
        if "n_nodes" in value:
            raise ConfigError("give either explicit nodes or n_nodes, not both", field="topology")
        return topology_from_mapping(value)
    unknown = set(value) - {"n_nodes", "side", "seed", "n_eavesdroppers"}
    if unknown:
        raise ConfigError(f"unknown topology keys {sorted(unknown)}", field="topology")
    try:
        return TopologySpec(
            n_nodes=_number(value, "n_nodes", int, None),
            side=_number(value, "side", float, 5.0),
            seed=_number(value, "seed", int, seed),
            n_eavesdroppers=_number(value, "n_eavesdroppers", int, 0),
        )
    except SerjError as exc:
        raise ConfigError(str(exc), field="topology") from None


def _scenario(doc, seed) -> SweepScenario | None:
    if doc is None:
        return None
    if not isinstance(doc, Mapping):
        raise ConfigError("scenario must be a mapping", field="scenario")
    doc = dict(doc)
    if "range" in doc:
        if "values" in doc:
            raise ConfigError("give scenario.values or scenario.range, not both", field="scenario")
        param, values = parse_sweep_flag(f"{doc.get('param')}={doc.pop('range')}")
        doc["values"] = values
    known = {f.name for f in dataclasses.fields(SweepScenario)}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown scenario keys {sorted(unknown)}", field="scenario")
    if "param" not in doc or "values" not in doc:
        raise ConfigError("scenario needs param and values (or range)", field="scenario")
    doc.setdefault("seed", seed)
    try:
        doc["values"] = tuple(doc["values"])
        return SweepScenario(**doc)
    except TypeError as exc:
        raise ConfigError(f"bad scenario: {exc}", field="scenario") from None


def parse_config(text: str, base_dir: str | None = None, command: str | None = None) -> RunConfig:
    """Parse a YAML/JSON configuration document into a validated RunConfig.

    Missing entries fall back to the reference parameter set.
    """
    try:
        doc = yaml.safe_load(text) if text and text.strip() else {}
    except yaml.YAMLError as exc:
        raise ConfigError(f"configuration does not parse: {exc}") from None
    if doc is None:
        doc = {}
    if not isinstance(doc, Mapping):
        raise ConfigError("configuration must be a mapping")
    unknown = set(doc) - TOP_LEVEL_KEYS
    if unknown:
        key = sorted(unknown)[0]
        raise ConfigError(f"unknown configuration key {key!r}", field=key)
    command = command or doc.get("command")
    if command not in COMMANDS:
        raise ConfigError(f"command must be one of {COMMANDS}, got {command!r}", field="command")
    fmt = doc.get("format", "csv")
    if fmt not in FORMATS:
        raise ConfigError(f"format must be one of {FORMATS}, got {fmt!r}", field="format")
    seed = _number(doc, "seed", int, 0)
    trials = _number(doc, "trials", int, 1_000_000, positive=True)
    params = _params(doc.get("params"))
    return RunConfig(
        command=command,
        params=params,
        topology=_topology(doc.get("topology"), seed, base_dir),
        scenario=_scenario(doc.get("scenario"), seed),
        trials=trials,
        seed=seed,
        output=doc.get("output"),
        format=fmt,
        power_scale=_number(doc, "power_scale", float, 1.0, positive=True),
        max_link_distance=_number(doc, "max_link_distance", float, None, positive=True),
        power_warning=_number(doc, "power_warning", float, None, positive=True),
    )


# ----------------------------------------------------------------- commands


def _resolve_topology(config: RunConfig) -> NetworkTopology:
    topo = config.topology
    if topo is None:
        return single_hop_topology(1.0)
    if isinstance(topo, TopologySpec):
        return generate_topology(topo)
    return topo


@contextlib.contextmanager
def _sink(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as fh:
            yield fh


def cmd_route(config: RunConfig) -> int:
    result = serj_route(
        _resolve_topology(config),
        config.params,
        max_link_distance=config.max_link_distance,
        power_warning=config.power_warning,
    )
    with _sink(config.output) as out:
        if config.format == "jsonl":
            out.write(json.dumps(route_to_record(result)) + "\n")
        else:
            write_table(route_rows(result), ROUTE_HEADER, "csv", out)
    return 0


def cmd_sweep(config: RunConfig) -> int:
    if config.scenario is None:
        raise ConfigError("sweep needs a scenario (config) or --sweep", field="scenario")
    result = run_sweep(config.scenario, config.params)
    with _sink(config.output) as out:
        write_table(sweep_rows(result), SWEEP_HEADER, config.format, out)
    return 0


def validation_rows(config: RunConfig) -> list[dict]:
    route = serj_route(_resolve_topology(config), config.params, max_link_distance=config.max_link_distance)
    alloc = route.allocation
    if config.power_scale != 1.0:
        scale = config.power_scale
        alloc = PowerAllocation(
            links=alloc.links,
            transmit_powers=tuple(p * scale for p in alloc.transmit_powers),
            jamming_powers=tuple(p * scale for p in alloc.jamming_powers),
            total_cost=alloc.total_cost * scale,
            multiplier=alloc.multiplier,
        )
    analytic, analytic_e2e = analytic_outages(route.path, alloc, config.params, route.plan)
    est = monte_carlo_outage(route.path, alloc, config.params, route.plan, config.trials, config.seed)
    rows = []
    for i, (link, p, emp) in enumerate(zip(route.path, analytic, est.per_link)):
        bound = binomial_bound(p, config.trials)
        rows.append(dict(zip(VALIDATE_HEADER, (
            str(i), link.sender, link.receiver, p, float(emp), bound, bool(abs(emp - p) <= bound),
        ))))
    bound = binomial_bound(analytic_e2e, config.trials)
    rows.append(dict(zip(VALIDATE_HEADER, (
        "end_to_end", route.path[0].sender, route.path[-1].receiver,
        analytic_e2e, est.end_to_end, bound, bool(abs(est.end_to_end - analytic_e2e) <= bound),
    ))))
    return rows


def cmd_validate(config: RunConfig) -> int:
    rows = validation_rows(config)
    with _sink(config.output) as out:
        write_table(rows, VALIDATE_HEADER, config.format, out)
    return 0 if all(r["pass"] for r in rows) else 5


# ---------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="serj", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("route", "compute the secure minimum-energy path and its power allocation"),
        ("sweep", "sweep one parameter and emit a table of aggregate power"),
        ("validate", "check the analytic outage model against Monte Carlo fading"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="YAML or JSON configuration file")
        p.add_argument("--output", help="output path (default: stdout)")
        p.add_argument("--format", choices=FORMATS)
        p.add_argument("--seed", type=int, help="unsigned 64-bit seed")
        p.add_argument("--trials", type=int, help="Monte Carlo trials (validate)")
        p.add_argument("--sweep", help="param=start:stop:step, stop inclusive (sweep)")
    return parser


def _error_record(exc: SerjError) -> str:
    record: dict[str, Any] = {"error": exc.kind, "exit_code": exc.exit_code, "message": str(exc)}
    if getattr(exc, "field", None):
        record["field"] = exc.field
    return json.dumps(record)


def load_config(args) -> RunConfig:
    text, base_dir = "", None
    if args.config:
        try:
            with open(args.config) as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}", field="config") from None
        base_dir = os.path.dirname(os.path.abspath(args.config))
    config = parse_config(text, base_dir=base_dir, command=args.command)
    overrides = {}
    if args.output is not None:
        overrides["output"] = args.output
    if args.format is not None:
        overrides["format"] = args.format
    if args.trials is not None:
        if args.trials < 1:
            raise ConfigError("--trials must be >= 1", field="trials")
        overrides["trials"] = args.trials
    if args.seed is not None:
        if not 0 <= args.seed < 2**64:
            raise ConfigError("--seed must be an unsigned 64-bit integer", field="seed")
        overrides["seed"] = args.seed
        if isinstance(config.topology, TopologySpec):
            overrides["topology"] = dataclasses.replace(config.topology, seed=args.seed)
        if config.scenario is not None:
            overrides["scenario"] = dataclasses.replace(config.scenario, seed=args.seed)
    if args.sweep is not None:
        name, values = parse_sweep_flag(args.sweep)
        base = overrides.get("scenario", config.scenario)
        if base is None:
            mode = "multi" if name == "n" else "single"
            base = SweepScenario(name, values, mode=mode, seed=overrides.get("seed", config.seed))
        overrides["scenario"] = dataclasses.replace(base, param=name, values=values)
    return dataclasses.replace(config, **overrides)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args)
        handler = {"route": cmd_route, "sweep": cmd_sweep, "validate": cmd_validate}[config.command]
        return handler(config)
    except SerjError as exc:
        print(_error_record(exc), file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
