"""Benchmark the compiled vs pure-numpy kernel backends.

Runs the same descent-ascent recursion through both backends, checks the
outputs are bit-identical, and reports wall time and iteration throughput.

Usage: python benchmarks/backend_bench.py [--iters N]
"""

import argparse
import time

import numpy as np

from minimax_lab import SolverConfig, make_bilinear_box, make_quadratic_nsc
from minimax_lab.kernels import available_backends
from minimax_lab.solvers import run_gda


def bench(problem, config, x0, y0, backend, repeats=3):
    best = float("inf")
    trace = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        trace = run_gda(problem, config, x0, y0, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, trace


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--iters", type=int, default=2_000_000)
    args = parser.parse_args()

    cases = [
        (
            "quadratic_ball",
            make_quadratic_nsc(np.diag([1.0, -0.5]), np.eye(2), 1.0, 10.0),
            np.array([1.0, 1.0]),
            np.array([1.0, 1.0]),
        ),
        (
            "bilinear_box",
            make_bilinear_box(1.0, 1),
            np.array([1.0]),
            np.array([0.0]),
        ),
    ]
    backends = available_backends()
    if "numba" in backends:
        # trigger JIT compilation outside the timed region
        warm = SolverConfig(eta_x=1e-4, eta_y=1e-3, horizon_T=10)
        for _, prob, x0, y0 in cases:
            run_gda(prob, warm, x0, y0, backend="numba")

    print(f"{'case':<16} {'backend':<8} {'seconds':>10} {'iters/sec':>12}")
    for name, prob, x0, y0 in cases:
        eta = 1.0 / (100.0 * prob.constants.ell)
        config = SolverConfig(
            eta_x=eta, eta_y=1.0 / prob.constants.ell, horizon_T=args.iters
        )
        traces = {}
        for backend in backends:
            secs, trace = bench(prob, config, x0, y0, backend)
            traces[backend] = trace
            print(f"{name:<16} {backend:<8} {secs:>10.4f} {args.iters / secs:>12.3e}")
        if len(traces) == 2:
            a, b = traces["numba"], traces["numpy"]
            same = np.array_equal(a.xs, b.xs) and np.array_equal(a.ys, b.ys)
            print(f"{name:<16} backends bit-identical: {same}")
            if not same:
                raise SystemExit(1)


if __name__ == "__main__":
    main()
