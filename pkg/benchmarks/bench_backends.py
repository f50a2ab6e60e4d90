#!/usr/bin/env python3
"""Compare the compiled and pure-Python simulation kernels.

Runs the same deterministic workloads through both backends, checks that the
results agree bit for bit, and reports wall-clock times and speedups.

    python3 benchmarks/bench_backends.py [--trials-scale X]
"""

import argparse
import time

from branchenv.backend import active_backend, get_kernels
from branchenv.estimators import estimate_survival, estimate_tree_offspring
from branchenv.laws import MeanLaw, OffspringFamily
from branchenv.simulator import Fixed, Global, Local, SimConfig


def bench(name, fn):
    results = {}
    times = {}
    for backend in ("compiled", "python"):
        t0 = time.perf_counter()
        results[backend] = fn(backend)
        times[backend] = time.perf_counter() - t0
    match = "ok" if results["compiled"] == results["python"] else "MISMATCH"
    speedup = times["python"] / times["compiled"]
    print(
        f"{name:<44} compiled {times['compiled']:8.3f}s  "
        f"python {times['python']:8.3f}s  x{speedup:6.1f}  [{match}]"
    )


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--trials-scale",
        type=float,
        default=1.0,
        help="multiply all trial counts (use <1 for a quick look)",
    )
    args = parser.parse_args()
    scale = lambda n: max(1, int(n * args.trials_scale))

    if active_backend() != "compiled":
        raise SystemExit("compiled backend not available; build it first")
    for backend in ("compiled", "python"):
        get_kernels(backend)  # fail fast before timing

    poisson = OffspringFamily.POISSON
    uniform = MeanLaw.uniform(1.5)

    bench(
        "fixed  subcritical m=0.75, 20k trials",
        lambda b: estimate_survival(
            Fixed(0.75),
            None,
            poisson,
            SimConfig(max_generations=200, population_cap=10**6, seed=1),
            scale(20_000),
            backend=b,
        ),
    )
    bench(
        "global Uniform(2.5), 20k trials",
        lambda b: estimate_survival(
            Global(),
            MeanLaw.uniform(2.5),
            poisson,
            SimConfig(max_generations=200, population_cap=10**6, seed=2),
            scale(20_000),
            backend=b,
        ),
    )
    bench(
        "local  near-critical r=0.40, 2k trials",
        lambda b: estimate_survival(
            Local(0.40),
            uniform,
            poisson,
            SimConfig(max_generations=200, population_cap=10**5, seed=3),
            scale(2_000),
            backend=b,
        ),
    )
    bench(
        "local  supercritical r=0.1 to cap 1e5, 300 trials",
        lambda b: estimate_survival(
            Local(0.1),
            uniform,
            poisson,
            SimConfig(max_generations=200, population_cap=10**5, seed=4),
            scale(300),
            backend=b,
        ),
    )
    bench(
        "subtree ratio estimator (Uniform(1.5), r=0.8), 50k trials",
        lambda b: estimate_tree_offspring(
            uniform,
            poisson,
            0.8,
            10**5,
            scale(50_000),
            SimConfig(max_generations=1, population_cap=10, seed=5),
            backend=b,
        ),
    )


if __name__ == "__main__":
    main()
