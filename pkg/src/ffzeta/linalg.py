"""Dense kernel computation over F_q.

Prime fields ride the backend's row-reduction kernel; extension fields use
the same elimination written against the field's vectorised table ops.
Desk-scale systems (a few thousand rows/columns) need nothing faster than
Gauss-Jordan.
"""

from __future__ import annotations

import numpy as np

from . import backend
from .scalar import Field


def rref(fld: Field, a: np.ndarray):
    """Reduced row echelon form of a copy of ``a``; returns (R, pivots, rank)."""
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        return a.copy(), [], 0
    if fld.e == 1:
        r, piv, rank = backend.rref_mod(np.ascontiguousarray(a % fld.p), fld.p)
        return r, [int(c) for c in piv], int(rank)
    r = a.copy()
    rows, cols = r.shape
    piv = []
    rank = 0
    for col in range(cols):
        sel = None
        for i in range(rank, rows):
            if r[i, col] != 0:
                sel = i
                break
        if sel is None:
            continue
        if sel != rank:
            r[[rank, sel]] = r[[sel, rank]]
        r[rank] = fld.mul(fld.inv(int(r[rank, col])), r[rank])
        for i in range(rows):
            if i != rank and r[i, col] != 0:
                r[i] = fld.sub(r[i], fld.mul(int(r[i, col]), r[rank]))
        piv.append(col)
        rank += 1
        if rank == rows:
            break
    return r, piv, rank


def nullspace(fld: Field, a: np.ndarray) -> list[np.ndarray]:
    """Basis of {x : a x = 0} over F_q, one canonical vector per free column
    (the free coordinate is set to 1)."""
    a = np.asarray(a, dtype=np.int64)
    if a.size == 0:
        n = a.shape[1] if a.ndim == 2 else 0
        return [np.eye(n, dtype=np.int64)[i] for i in range(n)]
    r, piv, rank = rref(fld, a)
    cols = a.shape[1]
    free = [c for c in range(cols) if c not in piv]
    basis = []
    for fc in free:
        vec = np.zeros(cols, dtype=np.int64)
        vec[fc] = 1
        for row, pc in enumerate(piv):
            vec[pc] = fld.neg(int(r[row, fc]))
        basis.append(vec)
    return basis
