"""The numba kernels and their numpy fallbacks must agree exactly."""

import random

import numpy as np
import pytest

from ffzeta import backend

pytestmark = pytest.mark.skipif(
    backend.convolve_mod_numba is None, reason="numba unavailable"
)

rng = random.Random(7)


def _rand(n, p):
    return np.array([rng.randrange(p) for _ in range(n)], dtype=np.int64)


@pytest.mark.parametrize("p", [2, 3, 5, 65521])
def test_convolve_parity(p):
    for _ in range(5):
        a = _rand(rng.randrange(1, 60), p)
        b = _rand(rng.randrange(1, 60), p)
        got = backend.convolve_mod_numba(a, b, p)
        want = backend.convolve_mod_numpy(a, b, p)
        assert np.array_equal(got, want)


@pytest.mark.parametrize("p", [2, 3, 5, 101])
def test_series_recip_parity_and_inverse(p):
    for _ in range(5):
        c = _rand(40, p)
        c[0] = rng.randrange(1, p)
        m = 50
        got = backend.series_recip_mod_numba(c, m, p)
        want = backend.series_recip_mod_numpy(c, m, p)
        assert np.array_equal(got, want)
        prod = backend.convolve_mod_numpy(c, got, p)[:m]
        assert prod[0] == 1 and not prod[1:].any()


@pytest.mark.parametrize("p", [2, 3, 5])
def test_rref_parity(p):
    for _ in range(10):
        rows, cols = rng.randrange(1, 12), rng.randrange(1, 12)
        a = np.array([[rng.randrange(p) for _ in range(cols)] for _ in range(rows)], dtype=np.int64)
        r1, piv1, rank1 = backend.rref_mod_numba(a.copy(), p)
        r2, piv2, rank2 = backend.rref_mod_numpy(a.copy(), p)
        assert rank1 == rank2
        assert list(piv1) == list(piv2)
        assert np.array_equal(r1, r2)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_bipoly_mul_parity(p):
    for _ in range(5):
        a = np.array([[rng.randrange(p) for _ in range(6)] for _ in range(4)], dtype=np.int64)
        b = np.array([[rng.randrange(p) for _ in range(5)] for _ in range(3)], dtype=np.int64)
        got = backend.bipoly_mul_mod_numba(a, b, p)
        want = backend.bipoly_mul_mod_numpy(a, b, p)
        assert np.array_equal(got, want)


@pytest.mark.parametrize("q,p", [(2, 2), (3, 3), (5, 5), (4, 2), (9, 3)])
def test_power_sum_digits_parity(q, p):
    wmax = 40
    for d in (1, 2, 3):
        for n in (1, 2, 5):
            rows = n + wmax + 1
            binom = np.zeros((rows, rows), dtype=np.int64)
            binom[:, 0] = 1
            for i in range(1, rows):
                binom[i, 1:i + 1] = (binom[i - 1, 1:i + 1] + binom[i - 1, 0:i]) % p
            got = backend.power_sum_digits_numba(d, n, q, wmax, binom, p)
            want = backend.power_sum_digits_numpy(d, n, q, wmax, binom, p)
            assert np.array_equal(got, want), (q, d, n)
