"""Benchmark the windowed kernel-sum backends against each other.

Runs the hat-kernel denominator/numerator sums for several problem sizes
and reports wall time per call for the numba kernels and the pure-numpy
fallback.  Usage: python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from shepard_cv import _window_numpy

try:
    from shepard_cv import _window_numba
except ImportError:
    _window_numba = None

CASES = [
    # (n nodes, n queries, h)
    (1_000, 1_000, 100.0),
    (10_000, 10_000, 1_000.0),
    (10_000, 50_000, 1_000.0),
    (100_000, 10_000, 10_000.0),
    (2_000, 2_000, 5.0),  # wide support, dense windows
]


def time_call(fn, nodes, values, queries, h, repeats):
    fn(nodes, values, queries, h)  # warm-up (and numba compile)
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(nodes, values, queries, h)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    print(f"{'n':>8} {'queries':>8} {'h':>8} {'numpy':>12} {'numba':>12} {'speedup':>8}")
    for n, m, h in CASES:
        nodes = np.sort(rng.random(n))
        values = np.sin(7.0 * nodes)
        queries = rng.random(m)
        t_np = time_call(_window_numpy.hat_window_sums, nodes, values, queries, h, args.repeats)
        if _window_numba is None:
            print(f"{n:>8} {m:>8} {h:>8.0f} {t_np:>11.4f}s {'n/a':>12} {'n/a':>8}")
            continue
        t_nb = time_call(_window_numba.hat_window_sums, nodes, values, queries, h, args.repeats)
        d_np, s_np = _window_numpy.hat_window_sums(nodes, values, queries, h)
        d_nb, s_nb = _window_numba.hat_window_sums(nodes, values, queries, h)
        assert np.allclose(d_np, d_nb, rtol=1e-10) and np.allclose(s_np, s_nb, rtol=1e-10)
        print(
            f"{n:>8} {m:>8} {h:>8.0f} {t_np:>11.4f}s {t_nb:>11.4f}s {t_np / t_nb:>7.1f}x"
        )


if __name__ == "__main__":
    main()
