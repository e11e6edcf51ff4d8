"""Compare the compiled SMO core against the pure-numpy fallback.

Usage: python3 benchmarks/bench_backends.py [--sizes 200,500,1000]
"""

import argparse
import time

import numpy as np

from wisig import _smo_py, svm

try:
    from wisig import _smo_c
except ImportError:
    _smo_c = None


def make_problem(n, dim, seed):
    rng = np.random.default_rng(seed)
    half = n // 2
    X = np.vstack(
        [
            np.abs(rng.standard_normal((half, dim))),
            1.5 + np.abs(rng.standard_normal((n - half, dim))),
        ]
    )
    y = np.array([1.0] * half + [-1.0] * (n - half))
    K = svm.rbf_gram(X, X, 0.1)
    return K, y


def bench(solver, K, y, repeats=3):
    best = float("inf")
    result = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        result = solver(K, y, 1.0, 1e-3, 10 * len(y) * len(y))
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--sizes", default="200,500,1000")
    parser.add_argument("--dim", type=int, default=16)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    print(f"{'n':>6}  {'python (s)':>12}  {'cython (s)':>12}  {'speedup':>8}  updates")
    for n in sizes:
        K, y = make_problem(n, args.dim, seed=n)
        t_py, r_py = bench(_smo_py.smo_solve, K, y)
        if _smo_c is None:
            print(f"{n:>6}  {t_py:>12.4f}  {'n/a':>12}  {'n/a':>8}  {r_py[2]}")
            continue
        t_c, r_c = bench(_smo_c.smo_solve, K, y)
        assert r_py[2] == r_c[2], "backends diverged on update count"
        assert np.array_equal(r_py[0], r_c[0]), "backends diverged on solution"
        print(f"{n:>6}  {t_py:>12.4f}  {t_c:>12.4f}  {t_py / t_c:>8.1f}x  {r_py[2]}")


if __name__ == "__main__":
    main()
