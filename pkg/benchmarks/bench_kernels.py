#!/usr/bin/env python3
"""Compare the numba and pure-numpy backends of the hot kernels.

    python benchmarks/bench_kernels.py [--trials N] [--nodes N] [--repeat R]

Each kernel is warmed up once (so JIT compilation is excluded), then timed
``repeat`` times; the best time is reported. Results from both backends are
checked for exact equality before timing.
"""

import argparse
import time

import numpy as np

from serj import SystemParams, generate_topology, serj_route
from serj._accel import USE_NUMBA
from serj.kernels import dijkstra_dense, fading_gains, outage_indicators
from serj.routing import build_weighted_graph
from serj.simulation import TopologySpec


def best_of(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def report(name, fns, repeat):
    outputs = []
    for fn in fns.values():
        out = fn()
        outputs.append(out if isinstance(out, tuple) else (out,))
    for other in outputs[1:]:
        assert all(np.array_equal(a, b) for a, b in zip(outputs[0], other)), f"{name}: backends disagree"
    times = {b: best_of(fn, repeat) for b, fn in fns.items()}
    line = "  ".join(f"{b} {t * 1e3:9.2f} ms" for b, t in times.items())
    if "numba" in times:
        line += f"  speedup {times['numpy'] / times['numba']:5.1f}x"
    print(f"{name:<28} {line}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=1_000_000)
    ap.add_argument("--nodes", type=int, default=500)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    backends = ["numpy"] + (["numba"] if USE_NUMBA else [])
    if not USE_NUMBA:
        print("numba unavailable or disabled (SERJ_DISABLE_NUMBA): timing the numpy backend only")

    p = SystemParams()
    route = serj_route(generate_topology(TopologySpec(30, 5.0, 1)), p)
    alloc = route.allocation
    d_alpha = np.array([link.distance**p.alpha for link in route.path])
    hops = len(route.path)
    print(f"trials={args.trials:,}  hops={hops}  nodes={args.nodes}")

    report(
        f"fading gains ({hops} hops)",
        {b: (lambda b=b: fading_gains(0, 0, args.trials, hops, backend=b)) for b in backends},
        args.repeat,
    )
    report(
        f"outage indicators ({hops} hops)",
        {
            b: (lambda b=b: outage_indicators(
                alloc.transmit_powers, alloc.jamming_powers, d_alpha, p.theta**2,
                p.noise_floor, p.gamma_d_star, 0, 0, args.trials, backend=b,
            ))
            for b in backends
        },
        args.repeat,
    )
    graph = build_weighted_graph(generate_topology(TopologySpec(args.nodes, 5.0, 2)), p)
    report(
        f"dense dijkstra (n={args.nodes})",
        {b: (lambda b=b: dijkstra_dense(graph.weights, 0, backend=b)) for b in backends},
        args.repeat,
    )


if __name__ == "__main__":
    main()
