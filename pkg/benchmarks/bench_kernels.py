"""Time the word-size kernels with and without numba.

    python benchmarks/bench_kernels.py [--repeat 5]

Each row reports the best wall time of ``repeat`` runs for the numba path
(compiled once beforehand) and the pure-numpy path, and checks that both
return identical arrays.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from dyadic_pose import _kernels as K
from dyadic_pose.hensel import IntPolynomial


def best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def cases(rng):
    mats = K.to_words(rng.integers(-(2**62), 2**62, size=(2000, 10, 10)).tolist())
    yield "det mod 2^64, 2000 x (10x10)", lambda use: K.det_mod_2_64(mats, use_numba=use)

    U = K.to_words(rng.integers(-(2**40), 2**40, size=(200_000, 3)).tolist())
    V = K.to_words(rng.integers(-(2**40), 2**40, size=(200_000, 3)).tolist())
    E = K.to_words(rng.integers(-(2**62), 2**62, size=(3, 3)).tolist())
    yield "bilinear residuals, 200k rows", lambda use: K.bilinear_residuals(U, V, E, 64, use_numba=use)

    X = IntPolynomial.variable(0, 1)
    g = X**10 + 3 * X**7 - 5 * X**3 + X + 2
    yield "root scan mod 2^18, degree 10", lambda use: K.root_scan([g], 18, use_numba=use)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"numba available: {K.HAVE_NUMBA}")
    print(f"{'kernel':34s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for name, fn in cases(rng):
        t_np, out_np = best_of(lambda: fn(False), args.repeat)
        if K.HAVE_NUMBA:
            fn(True)  # compile
            t_nb, out_nb = best_of(lambda: fn(True), args.repeat)
            assert np.array_equal(out_nb, out_np), name
            print(f"{name:34s} {t_nb * 1e3:9.2f}ms {t_np * 1e3:9.2f}ms {t_np / t_nb:7.1f}x")
        else:
            print(f"{name:34s} {'n/a':>10s} {t_np * 1e3:9.2f}ms {'':>8s}")


if __name__ == "__main__":
    main()
