#!/usr/bin/env python3
"""Benchmark the grid-scan kernels: compiled extension vs numpy fallback.

Runs the same full-box scan through every importable backend and reports
per-call time and speedup. Results are checked for agreement while timing.

Run: python perf/bench_kernel.py [--resolution 1000] [--repeats 5]
"""

import argparse
import statistics
import time

from wdpdispatch._kernels import available_backends

BASE_ARGS = dict(
    g=10.0,
    wh_lo=0.0, wh_hi=3000.0,
    wr_lo=0.0, wr_hi=8333.0,
    alpha_h=4.0, eta_h=80.0, alpha_r=166.67,
    pi_plus=270.0, pi_minus=100.0, pi_zero=0.0, pi_w=1.0,
    cost_a=0.008, cost_b=2.0, cost_c=0.0,
)


def run(fn, n):
    a = BASE_ARGS
    return fn(
        a["g"], a["wh_lo"], a["wh_hi"], n, a["wr_lo"], a["wr_hi"], n,
        a["alpha_h"], a["eta_h"], a["alpha_r"],
        a["pi_plus"], a["pi_minus"], a["pi_zero"], a["pi_w"],
        a["cost_a"], a["cost_b"], a["cost_c"],
    )


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--resolution", type=int, default=1000, help="grid points per axis")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    impls = available_backends()
    print(f"backends: {', '.join(sorted(impls))}   grid: {args.resolution}x{args.resolution}")

    results = {}
    timings = {}
    for name, fn in sorted(impls.items()):
        run(fn, min(args.resolution, 100))  # warm up
        samples = []
        for _ in range(args.repeats):
            t0 = time.perf_counter()
            results[name] = run(fn, args.resolution)
            samples.append(time.perf_counter() - t0)
        timings[name] = statistics.median(samples)
        print(f"{name:>8}: {timings[name] * 1e3:9.2f} ms/scan   best={results[name]}")

    values = set(results.values())
    if len(values) > 1:
        print("DISAGREEMENT between backends:", results)
        return 1
    if len(timings) == 2:
        slow, fast = max(timings.values()), min(timings.values())
        print(f"speedup: {slow / fast:.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
