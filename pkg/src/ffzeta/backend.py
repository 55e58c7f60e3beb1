"""Hot integer kernels: numba @njit versions with pure-numpy fallbacks.

Everything here works on int64 arrays holding canonical residues mod a
prime p.  These are the inner loops that dominate runtime (polynomial
convolution, truncated series reciprocals, Gaussian elimination, and the
power-sum digit DP); extension fields F_{p^e} with e > 1 take the generic
table-driven paths in scalar.py / relations.py instead.

Backend selection: set FFZETA_BACKEND=numpy to force the fallback path,
FFZETA_BACKEND=numba to require the jitted path.  Default is numba when it
imports, numpy otherwise.  Both implementations are importable directly
(``convolve_mod_numpy`` / ``convolve_mod_numba``) so tests and
``benchmarks/bench_kernels.py`` can compare them.
"""

import os

import numpy as np

__all__ = [
    "ACTIVE_BACKEND",
    "convolve_mod",
    "series_recip_mod",
    "rref_mod",
    "bipoly_mul_mod",
    "power_sum_digits",
]


# ---------------------------------------------------------------------------
# pure-numpy implementations
# ---------------------------------------------------------------------------

def convolve_mod_numpy(a, b, p):
    """Full convolution of residue arrays mod p (polynomial product)."""
    if a.size == 0 or b.size == 0:
        return np.zeros(0, dtype=np.int64)
    return np.convolve(a, b) % p


def series_recip_mod_numpy(c, m, p):
    """First m digits of 1/(c[0] + c[1] x + ...) mod p; requires c[0] != 0."""
    out = np.zeros(m, dtype=np.int64)
    inv0 = pow(int(c[0]), p - 2, p)
    out[0] = inv0
    for k in range(1, m):
        j = min(k, c.size - 1)
        acc = int(np.dot(c[1:j + 1], out[k - 1::-1][:j])) % p
        out[k] = (-inv0 * acc) % p
    return out


def rref_mod_numpy(a, p):
    """Row-reduce a copy of ``a`` mod p; returns (R, pivot_columns, rank)."""
    r = a.astype(np.int64, copy=True) % p
    rows, cols = r.shape
    piv = []
    rank = 0
    for col in range(cols):
        sub = np.nonzero(r[rank:, col])[0]
        if sub.size == 0:
            continue
        best = rank + int(sub[0])
        if best != rank:
            r[[rank, best]] = r[[best, rank]]
        r[rank] = (r[rank] * pow(int(r[rank, col]), p - 2, p)) % p
        hits = np.nonzero(r[:, col])[0]
        hits = hits[hits != rank]
        if hits.size:
            r[hits] = (r[hits] - np.outer(r[hits, col], r[rank])) % p
        piv.append(col)
        rank += 1
        if rank == rows:
            break
    return r, np.array(piv, dtype=np.int64), rank


def bipoly_mul_mod_numpy(a, b, p):
    """2-D full convolution mod p (product of bivariate polynomials)."""
    ra, ca = a.shape
    rb, cb = b.shape
    out = np.zeros((ra + rb - 1, ca + cb - 1), dtype=np.int64)
    for i in range(ra):
        row = a[i]
        if not row.any():
            continue
        for j in range(rb):
            if b[j].any():
                out[i + j, : ca + cb - 1] += np.convolve(row, b[j])
        out[i : i + rb, :] %= p
    return out % p


def power_sum_digits_numpy(d, n, q, wmax, binom, p):
    """Digit DP for power sums over monic polynomials of degree d.

    Returns ``digits`` with digits[w] = coefficient of theta^{-(n*d+w)} in
    S_d(n), for 0 <= w <= wmax.  ``binom`` is a Pascal table mod p that is
    large enough to index binom[n-1+s, m] for s + m <= wmax.
    """
    step = q - 1
    f = np.zeros((wmax + 1, wmax + 1), dtype=np.int64)  # f[s, w]
    f[0, 0] = 1
    for i in range(1, d + 1):
        g = np.zeros_like(f)
        m = step
        while i * m <= wmax:
            smax = wmax - m
            coef = binom[n - 1 + m : n - 1 + m + smax + 1, m]  # over s' = s+m
            g[m : m + smax + 1, i * m :] += (
                f[: smax + 1, : wmax + 1 - i * m] * coef[:, None]
            )
            m += step
        f = g % p
    signs = np.where(np.arange(wmax + 1) % 2 == 0, 1, p - 1)
    digits = (signs[:, None] * f).sum(axis=0) % p
    if d % 2 == 1:
        digits = (-digits) % p
    return digits


# ---------------------------------------------------------------------------
# numba implementations
# ---------------------------------------------------------------------------

try:  # pragma: no cover - exercised through the dispatch below
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    njit = None
    _HAVE_NUMBA = False

if _HAVE_NUMBA:

    @njit(cache=True)
    def _pow_mod(base, exp, p):
        result = 1
        base %= p
        while exp > 0:
            if exp & 1:
                result = (result * base) % p
            base = (base * base) % p
            exp >>= 1
        return result

    @njit(cache=True)
    def convolve_mod_numba(a, b, p):
        # accumulate raw int64 and reduce once: min(len) * (p-1)^2 stays
        # far below 2^63 for p <= 2^16 at desk scale
        if a.size == 0 or b.size == 0:
            return np.zeros(0, dtype=np.int64)
        out = np.zeros(a.size + b.size - 1, dtype=np.int64)
        for i in range(a.size):
            ai = a[i]
            if ai == 0:
                continue
            for j in range(b.size):
                out[i + j] += ai * b[j]
        for k in range(out.size):
            out[k] %= p
        return out

    @njit(cache=True)
    def series_recip_mod_numba(c, m, p):
        out = np.zeros(m, dtype=np.int64)
        inv0 = _pow_mod(c[0], p - 2, p)
        out[0] = inv0
        for k in range(1, m):
            acc = 0
            j_hi = min(k, c.size - 1)
            for j in range(1, j_hi + 1):
                acc += c[j] * out[k - j]
            out[k] = (-inv0 * (acc % p)) % p
        return out

    @njit(cache=True)
    def rref_mod_numba(a, p):
        r = a % p
        rows, cols = r.shape
        piv = np.empty(min(rows, cols), dtype=np.int64)
        rank = 0
        for col in range(cols):
            sel = -1
            for i in range(rank, rows):
                if r[i, col] != 0:
                    sel = i
                    break
            if sel < 0:
                continue
            if sel != rank:
                for j in range(cols):
                    tmp = r[rank, j]
                    r[rank, j] = r[sel, j]
                    r[sel, j] = tmp
            inv = _pow_mod(r[rank, col], p - 2, p)
            for j in range(cols):
                r[rank, j] = (r[rank, j] * inv) % p
            for i in range(rows):
                if i != rank and r[i, col] != 0:
                    f = r[i, col]
                    for j in range(cols):
                        r[i, j] = (r[i, j] - f * r[rank, j]) % p
            piv[rank] = col
            rank += 1
            if rank == rows:
                break
        return r, piv[:rank], rank

    @njit(cache=True)
    def bipoly_mul_mod_numba(a, b, p):
        ra, ca = a.shape
        rb, cb = b.shape
        out = np.zeros((ra + rb - 1, ca + cb - 1), dtype=np.int64)
        for i1 in range(ra):
            for j1 in range(ca):
                v = a[i1, j1]
                if v == 0:
                    continue
                for i2 in range(rb):
                    for j2 in range(cb):
                        out[i1 + i2, j1 + j2] += v * b[i2, j2]
        for i in range(out.shape[0]):
            for j in range(out.shape[1]):
                out[i, j] %= p
        return out

    @njit(cache=True)
    def power_sum_digits_numba(d, n, q, wmax, binom, p):
        step = q - 1
        f = np.zeros((wmax + 1, wmax + 1), dtype=np.int64)
        f[0, 0] = 1
        for i in range(1, d + 1):
            g = np.zeros((wmax + 1, wmax + 1), dtype=np.int64)
            for s in range(wmax + 1):
                for w in range(wmax + 1):
                    fv = f[s, w]
                    if fv == 0:
                        continue
                    m = step
                    while s + m <= wmax and w + i * m <= wmax:
                        g[s + m, w + i * m] = (
                            g[s + m, w + i * m] + fv * binom[n - 1 + s + m, m]
                        ) % p
                        m += step
            f = g
        digits = np.zeros(wmax + 1, dtype=np.int64)
        for s in range(wmax + 1):
            sign = 1 if s % 2 == 0 else p - 1
            for w in range(wmax + 1):
                if f[s, w] != 0:
                    digits[w] = (digits[w] + sign * f[s, w]) % p
        if d % 2 == 1:
            for w in range(wmax + 1):
                digits[w] = (-digits[w]) % p
        return digits

else:  # pragma: no cover
    convolve_mod_numba = None
    series_recip_mod_numba = None
    rref_mod_numba = None
    bipoly_mul_mod_numba = None
    power_sum_digits_numba = None


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

_requested = os.environ.get("FFZETA_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise RuntimeError(f"FFZETA_BACKEND must be 'numba' or 'numpy', got {_requested!r}")
if _requested == "numba" and not _HAVE_NUMBA:
    raise RuntimeError("FFZETA_BACKEND=numba but numba is not importable")

if _requested == "numpy" or not _HAVE_NUMBA:
    ACTIVE_BACKEND = "numpy"
    convolve_mod = convolve_mod_numpy
    series_recip_mod = series_recip_mod_numpy
    rref_mod = rref_mod_numpy
    bipoly_mul_mod = bipoly_mul_mod_numpy
    power_sum_digits = power_sum_digits_numpy
else:
    ACTIVE_BACKEND = "numba"
    convolve_mod = convolve_mod_numba
    series_recip_mod = series_recip_mod_numba
    rref_mod = rref_mod_numba
    bipoly_mul_mod = bipoly_mul_mod_numba
    power_sum_digits = power_sum_digits_numba


def warm_up():
    """Trigger jit compilation of every kernel on tiny inputs."""
    one = np.array([1, 1], dtype=np.int64)
    convolve_mod(one, one, 3)
    series_recip_mod(one, 4, 3)
    rref_mod(np.array([[1, 2], [2, 1]], dtype=np.int64), 3)
    bipoly_mul_mod(np.array([[1, 1]], dtype=np.int64), np.array([[1], [1]], dtype=np.int64), 3)
    binom = np.array([[1, 0], [1, 1]], dtype=np.int64)
    power_sum_digits(1, 1, 3, 1, binom, 3)
