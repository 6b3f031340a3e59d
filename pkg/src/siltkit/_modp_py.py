"""Pure numpy fallback for the mod-p row reduction kernel.

Entries live in int64 arrays with values in ``[0, p)``; intermediate products
stay below 2**63 because primes on this path are capped at 2**20.
"""
from __future__ import annotations

import numpy as np

BACKEND = "pure"


def rref(a, p: int):
    """Reduced row echelon form of ``a`` mod p. Returns ``(matrix, pivot_cols)``."""
    m = np.array(a, dtype=np.int64, copy=True) % p
    rows, cols = m.shape
    r = 0
    pivots = []
    for j in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, j])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = m[r] * pow(int(m[r, j]), p - 2, p) % p
        other = np.nonzero(m[:, j])[0]
        other = other[other != r]
        if other.size:
            m[other] = (m[other] - np.outer(m[other, j], m[r])) % p
        pivots.append(j)
        r += 1
    return m, tuple(pivots)
