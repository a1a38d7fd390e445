"""Benchmark the compiled kernels against the pure-NumPy fallback.

Times the three hot paths on a realistic workload:

* ``loglik_and_score`` — the inner loop of fitting;
* ``perturbed_scores`` — one full region evaluation (m stacked rows);
* ``variance_path`` — plain filtering.

Both implementations are imported directly, so the comparison runs in a
single process regardless of which backend the package selected at import.

Usage: python benchmarks/bench_backends.py [--repeat 30] [--n 100 1000]
"""

import argparse
import time

import numpy as np

from scopegarch import ParamVector, simulate
from scopegarch import _kernels_py
from scopegarch.garch import residuals

try:
    from scopegarch import _kernels
except ImportError:
    _kernels = None

THETA = ParamVector(0.23, (0.44,), (0.33,))


def build_workload(n, m, seed=7):
    rng = np.random.default_rng(seed)
    sample = simulate(THETA, rng.standard_normal(n))
    eps = residuals(THETA, sample)
    perms = np.vstack(
        [np.arange(n, dtype=np.intp)[None, :]]
        + [rng.permutation(n).astype(np.intp)[None, :] for _ in range(m - 1)]
    )
    args = (
        THETA.omega,
        np.asarray(THETA.alphas),
        np.asarray(THETA.betas),
    )
    tail = (sample.presample_sq, sample.initial_variances)
    return {
        "loglik_and_score": args + (sample.observations**2,) + tail,
        "variance_path": args + (sample.observations**2,) + tail,
        "perturbed_scores": args + (eps * eps, perms) + tail,
    }


def best_time(func, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        func(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=30)
    parser.add_argument("--n", type=int, nargs="+", default=[100, 1000])
    parser.add_argument("--m", type=int, default=100)
    args = parser.parse_args()

    if _kernels is None:
        print("compiled backend not built; timing the NumPy fallback only")

    header = f"{'kernel':<20} {'n':>6} {'python':>12} {'compiled':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for n in args.n:
        workload = build_workload(n, args.m)
        for name, call_args in workload.items():
            py = best_time(getattr(_kernels_py, name), call_args, args.repeat)
            if _kernels is None:
                print(f"{name:<20} {n:>6} {py * 1e6:>10.1f}us {'-':>12} {'-':>9}")
                continue
            cy = best_time(getattr(_kernels, name), call_args, args.repeat)
            print(
                f"{name:<20} {n:>6} {py * 1e6:>10.1f}us {cy * 1e6:>10.1f}us"
                f" {py / cy:>8.1f}x"
            )


if __name__ == "__main__":
    main()
