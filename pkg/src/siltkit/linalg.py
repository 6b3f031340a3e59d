"""Exact dense matrices over F_p or Q.

Prime fields below the fast bound store entries in int64 arrays and run row
reduction through the compiled kernel when it imported successfully (set
``SILTKIT_PURE=1`` to force the numpy fallback).  Larger primes and the
rationals use exact object arithmetic.  There is no floating point anywhere.
"""
from __future__ import annotations

import os
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .fields import FieldSpec

if os.environ.get("SILTKIT_PURE"):
    from . import _modp_py as _kernel
else:
    try:
        from . import _modp as _kernel  # type: ignore[attr-defined]
    except ImportError:
        from . import _modp_py as _kernel


def kernel_backend() -> str:
    """Name of the row-reduction backend in use: ``compiled`` or ``pure``."""
    return _kernel.BACKEND


def _rref_object(arr: np.ndarray, field: FieldSpec):
    m = np.array(arr, dtype=object, copy=True)
    rows, cols = m.shape
    zero = field.zero
    r = 0
    pivots = []
    for j in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if m[i, j] != zero:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        inv = field.inv(m[r, j])
        for k in range(j, cols):
            m[r, k] = field.coerce(m[r, k] * inv)
        for i in range(rows):
            if i != r and m[i, j] != zero:
                factor = m[i, j]
                for k in range(j, cols):
                    m[i, k] = field.coerce(m[i, k] - factor * m[r, k])
        pivots.append(j)
        r += 1
    return m, tuple(pivots)


class Matrix:
    """Immutable exact matrix over a :class:`FieldSpec`."""

    __slots__ = ("field", "_a", "_rref")

    def __init__(self, field: FieldSpec, data: np.ndarray):
        if data.ndim != 2:
            raise ValueError("matrix data must be 2-dimensional")
        self.field = field
        self._a = data
        self._a.flags.writeable = False
        self._rref = None

    # -- construction -------------------------------------------------

    @staticmethod
    def from_rows(field: FieldSpec, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        nrows = len(rows)
        if nrows == 0:
            if cols is None:
                raise ValueError("need explicit column count for an empty row list")
            return Matrix.zeros(field, 0, cols)
        ncols = len(rows[0]) if cols is None else cols
        if field.fast:
            a = np.zeros((nrows, ncols), dtype=np.int64)
        else:
            a = np.empty((nrows, ncols), dtype=object)
            a[:] = field.zero
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged rows")
            for j, x in enumerate(row):
                a[i, j] = field.coerce(x)
        return Matrix(field, a)

    @staticmethod
    def zeros(field: FieldSpec, rows: int, cols: int) -> "Matrix":
        if field.fast:
            return Matrix(field, np.zeros((rows, cols), dtype=np.int64))
        a = np.empty((rows, cols), dtype=object)
        a[:] = field.zero
        return Matrix(field, a)

    @staticmethod
    def identity(field: FieldSpec, n: int) -> "Matrix":
        m = Matrix.zeros(field, n, n)
        a = m._a.copy()
        for i in range(n):
            a[i, i] = field.one
        return Matrix(field, a)

    @staticmethod
    def random(field: FieldSpec, rows: int, cols: int, rng: np.random.Generator) -> "Matrix":
        if field.kind == "prime":
            a = rng.integers(0, field.p, size=(rows, cols), dtype=np.int64)
            if not field.fast:
                a = a.astype(object)
            return Matrix(field, a)
        a = np.empty((rows, cols), dtype=object)
        ints = rng.integers(-9, 10, size=(rows, cols))
        for i in range(rows):
            for j in range(cols):
                a[i, j] = Fraction(int(ints[i, j]))
        return Matrix(field, a)

    # -- basic structure ----------------------------------------------

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> Tuple[int, int]:
        return self._a.shape

    def __getitem__(self, idx):
        i, j = idx
        return self._a[i, j]

    def to_lists(self) -> List[List]:
        return [[self._a[i, j] for j in range(self.cols)] for i in range(self.rows)]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.shape == other.shape
            and bool(np.array_equal(self._a, other._a))
        )

    def __repr__(self) -> str:
        return f"Matrix({self.field}, {self.rows}x{self.cols})"

    def is_zero(self) -> bool:
        if self.field.fast:
            return not self._a.any()
        zero = self.field.zero
        return all(x == zero for x in self._a.flat)

    # -- arithmetic ----------------------------------------------------

    def _wrap(self, a: np.ndarray) -> "Matrix":
        if self.field.kind == "prime":
            a = a % self.field.p
        return Matrix(self.field, a)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return self._wrap(self._a + other._a)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        return self._wrap(self._a - other._a)

    def __neg__(self) -> "Matrix":
        return self._wrap(-self._a)

    def scale(self, c) -> "Matrix":
        return self._wrap(self._a * self.field.coerce(c))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.field != other.field:
            raise ValueError("field mismatch")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch: {self.shape} @ {other.shape}")
        if self.cols == 0:
            return Matrix.zeros(self.field, self.rows, other.cols)
        return self._wrap(self._a @ other._a)

    def transpose(self) -> "Matrix":
        return Matrix(self.field, np.ascontiguousarray(self._a.T))

    def _check(self, other: "Matrix") -> None:
        if self.field != other.field:
            raise ValueError("field mismatch")
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch: {self.shape} vs {other.shape}")

    # -- slicing -------------------------------------------------------

    def take_rows(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.field, self._a[list(idx), :].copy())

    def take_cols(self, idx: Sequence[int]) -> "Matrix":
        return Matrix(self.field, self._a[:, list(idx)].copy())

    def col(self, j: int) -> "Matrix":
        return self.take_cols([j])

    def row(self, i: int) -> "Matrix":
        return self.take_rows([i])

    # -- elimination ---------------------------------------------------

    def rref(self) -> Tuple["Matrix", Tuple[int, ...]]:
        """Reduced row echelon form together with the pivot column indices."""
        if self._rref is None:
            if self.field.fast:
                m, piv = _kernel.rref(self._a, self.field.p)
            else:
                m, piv = _rref_object(self._a, self.field)
            self._rref = (Matrix(self.field, m), piv)
        return self._rref

    def rank(self) -> int:
        return len(self.rref()[1])

    def kernel_basis(self) -> "Matrix":
        """Matrix whose columns span the right kernel ``{x : self @ x = 0}``."""
        r, pivots = self.rref()
        free = [j for j in range(self.cols) if j not in set(pivots)]
        out = Matrix.zeros(self.field, self.cols, len(free))
        a = out._a.copy()
        for col_idx, f in enumerate(free):
            a[f, col_idx] = self.field.one
            for i, pc in enumerate(pivots):
                a[pc, col_idx] = self.field.coerce(-r._a[i, f])
        return Matrix(self.field, a)

    def solve(self, rhs: "Matrix") -> Optional["Matrix"]:
        """A particular solution of ``self @ x = rhs`` or None if inconsistent."""
        if rhs.rows != self.rows:
            raise ValueError("rhs row count mismatch")
        aug = hstack([self, rhs])
        r, pivots = aug.rref()
        if any(p >= self.cols for p in pivots):
            return None
        out = Matrix.zeros(self.field, self.cols, rhs.cols)
        a = out._a.copy()
        for i, pc in enumerate(pivots):
            a[pc, :] = r._a[i, self.cols:]
        return Matrix(self.field, a)

    def inverse(self) -> Optional["Matrix"]:
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        x = self.solve(Matrix.identity(self.field, self.rows))
        if x is None or self.rank() < self.rows:
            return None
        return x

    def column_space_dim(self) -> int:
        return self.rank()

    def col_basis(self) -> "Matrix":
        """Columns of self at the pivot positions: a basis of the column space."""
        _, pivots = self.rref()
        return self.take_cols(list(pivots))


# -- stacking ----------------------------------------------------------


def hstack(mats: Sequence[Matrix]) -> Matrix:
    if not mats:
        raise ValueError("hstack of nothing")
    field = mats[0].field
    rows = mats[0].rows
    for m in mats:
        if m.field != field or m.rows != rows:
            raise ValueError("hstack mismatch")
    return Matrix(field, np.concatenate([m._a for m in mats], axis=1))


def vstack(mats: Sequence[Matrix]) -> Matrix:
    if not mats:
        raise ValueError("vstack of nothing")
    field = mats[0].field
    cols = mats[0].cols
    for m in mats:
        if m.field != field or m.cols != cols:
            raise ValueError("vstack mismatch")
    return Matrix(field, np.concatenate([m._a for m in mats], axis=0))


def block(rows: Sequence[Sequence[Matrix]]) -> Matrix:
    """Assemble a block matrix from a grid of compatible blocks."""
    return vstack([hstack(list(r)) for r in rows])


def block_diag(field: FieldSpec, mats: Iterable[Matrix]) -> Matrix:
    mats = list(mats)
    total_r = sum(m.rows for m in mats)
    total_c = sum(m.cols for m in mats)
    out = Matrix.zeros(field, total_r, total_c)
    a = out._a.copy()
    r = c = 0
    for m in mats:
        if m.field != field:
            raise ValueError("field mismatch")
        a[r:r + m.rows, c:c + m.cols] = m._a
        r += m.rows
        c += m.cols
    return Matrix(field, a)
