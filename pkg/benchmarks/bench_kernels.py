#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy fallbacks.

Runs each hot kernel on representative desk-scale inputs and prints a
table of per-call times and speedups, then times one end-to-end multizeta
evaluation under the active backend.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import time

import numpy as np

from ffzeta import backend


def timeit(fn, repeat):
    fn()  # warm-up (jit compile / cache load)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    rng = random.Random(1)
    p = 3

    conv_a = np.array([rng.randrange(p) for _ in range(2000)], dtype=np.int64)
    conv_b = np.array([rng.randrange(p) for _ in range(2000)], dtype=np.int64)

    recip_c = np.array([rng.randrange(p) for _ in range(1500)], dtype=np.int64)
    recip_c[0] = 1

    mat = np.array(
        [[rng.randrange(p) for _ in range(160)] for _ in range(200)], dtype=np.int64
    )

    bp_a = np.array([[rng.randrange(p) for _ in range(60)] for _ in range(60)], dtype=np.int64)
    bp_b = np.array([[rng.randrange(p) for _ in range(25)] for _ in range(25)], dtype=np.int64)

    wmax = 200
    n = 3
    rows = n + wmax + 1
    binom = np.zeros((rows, rows), dtype=np.int64)
    binom[:, 0] = 1
    for i in range(1, rows):
        binom[i, 1 : i + 1] = (binom[i - 1, 1 : i + 1] + binom[i - 1, 0:i]) % p

    cases = [
        ("convolve_mod (len 2000)",
         lambda f: f(conv_a, conv_b, p),
         backend.convolve_mod_numba, backend.convolve_mod_numpy),
        ("series_recip_mod (1500 digits)",
         lambda f: f(recip_c, 1500, p),
         backend.series_recip_mod_numba, backend.series_recip_mod_numpy),
        ("rref_mod (200x160)",
         lambda f: f(mat.copy(), p),
         backend.rref_mod_numba, backend.rref_mod_numpy),
        ("bipoly_mul_mod (60x60 * 25x25)",
         lambda f: f(bp_a, bp_b, p),
         backend.bipoly_mul_mod_numba, backend.bipoly_mul_mod_numpy),
        ("power_sum_digits (d=10, wmax=200)",
         lambda f: f(10, n, p, wmax, binom, p),
         backend.power_sum_digits_numba, backend.power_sum_digits_numpy),
    ]

    print(f"active backend: {backend.ACTIVE_BACKEND}; repeat = {args.repeat}\n")
    header = f"{'kernel':38} {'numba':>12} {'numpy':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, call, jitted, plain in cases:
        t_np = timeit(lambda: call(plain), args.repeat)
        if jitted is None:
            print(f"{name:38} {'n/a':>12} {t_np * 1e3:>10.2f}ms {'':>9}")
            continue
        t_nb = timeit(lambda: call(jitted), args.repeat)
        print(
            f"{name:38} {t_nb * 1e3:>10.2f}ms {t_np * 1e3:>10.2f}ms "
            f"{t_np / t_nb:>8.1f}x"
        )

    # end-to-end: a multizeta value under the active backend
    from ffzeta import zeta
    from ffzeta.scalar import field

    fld = field(3)
    zeta._PS_SERIES_MEMO.clear()

    def end_to_end():
        zeta._PS_SERIES_MEMO.clear()
        return zeta.mzv(fld, (2, 1), 150)

    t = timeit(end_to_end, max(2, args.repeat // 2))
    print(f"\nmzv((2,1), q=3, N=150) end-to-end under {backend.ACTIVE_BACKEND}: {t * 1e3:.1f}ms")


if __name__ == "__main__":
    main()
