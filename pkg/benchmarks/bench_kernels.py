"""Time each hot kernel under the numba and pure-numpy implementations.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--p 100] [--n 450] [--B 300]

The numba column excludes compilation (one warm-up call first). Without
numba installed only the numpy column is filled in.
"""
import argparse
import timeit

import numpy as np

from robustmax import kernels
from robustmax._accel import HAVE_NUMBA


def problems(n, p, B, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.standard_t(6, size=(n, p)) * np.arange(1, p + 1) ** -0.5
    centers = rng.normal(scale=0.01, size=p)
    trunc = np.sqrt(n) * X.std(axis=0)
    scale = X.std(axis=0) ** 0.9 * np.sqrt(n)
    Z = kernels.centered_scores_numpy(X, centers, trunc)
    xi = rng.standard_normal((B, n))
    A = rng.standard_normal((p, p))
    S = A @ A.T
    return {
        "truncated_column_sums": (X, centers, trunc),
        "centered_scores": (X, centers, trunc),
        "bootstrap_extremes": (xi, Z, 1.0 / scale),
        "invert_columns": (X, trunc, scale, -2.0, 2.0),
        "jacobi_eigh": (S,),
    }


def bench(fn, args, repeat):
    fn(*args)  # warm-up; for numba this triggers compilation
    number = 1
    while timeit.timeit(lambda: fn(*args), number=number) < 0.2 and number < 10_000:
        number *= 2
    best = min(timeit.repeat(lambda: fn(*args), number=number, repeat=repeat))
    return best / number


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--n", type=int, default=450)
    ap.add_argument("--p", type=int, default=100)
    ap.add_argument("--B", type=int, default=300)
    args = ap.parse_args(argv)

    print(f"n={args.n} p={args.p} B={args.B}  numba available: {HAVE_NUMBA}")
    print(f"{'kernel':<24}{'numpy [ms]':>12}{'numba [ms]':>12}{'speed-up':>10}")
    for name, fargs in problems(args.n, args.p, args.B).items():
        t_np = bench(getattr(kernels, name + "_numpy"), fargs, args.repeat)
        if HAVE_NUMBA:
            t_nb = bench(getattr(kernels, name + "_numba"), fargs, args.repeat)
            print(f"{name:<24}{t_np * 1e3:>12.3f}{t_nb * 1e3:>12.3f}{t_np / t_nb:>9.1f}x")
        else:
            print(f"{name:<24}{t_np * 1e3:>12.3f}{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
