# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled mod-p dense row reduction kernel (hot inner loop of the package)."""
import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


cdef long long _inv_mod(long long a, long long p):
    cdef long long t = 0, newt = 1, r = p, newr = a % p, q, tmp
    while newr != 0:
        q = r / newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += p
    return t


def rref(a, long long p):
    """Reduced row echelon form of ``a`` mod p. Returns ``(matrix, pivot_cols)``."""
    cdef cnp.ndarray[cnp.int64_t, ndim=2] arr = np.ascontiguousarray(a, dtype=np.int64) % p
    cdef cnp.ndarray[cnp.int64_t, ndim=2] m = arr.copy()
    cdef Py_ssize_t rows = m.shape[0], cols = m.shape[1]
    cdef Py_ssize_t r = 0, i, j, k, piv
    cdef long long inv, factor, val
    pivots = []
    for j in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if m[i, j] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for k in range(cols):
                val = m[r, k]
                m[r, k] = m[piv, k]
                m[piv, k] = val
        inv = _inv_mod(m[r, j], p)
        for k in range(j, cols):
            m[r, k] = m[r, k] * inv % p
        for i in range(rows):
            if i != r and m[i, j] != 0:
                factor = m[i, j]
                for k in range(j, cols):
                    val = (m[i, k] - factor * m[r, k]) % p
                    if val < 0:
                        val += p
                    m[i, k] = val
        pivots.append(j)
        r += 1
    return m, tuple(pivots)
