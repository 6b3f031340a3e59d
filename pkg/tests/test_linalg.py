"""Tests for the exact matrix layer, cross-checked against independent oracles."""
import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from siltkit import FieldSpec, Matrix, block_diag, hstack, kernel_backend, vstack
from siltkit import _modp_py

F7 = FieldSpec.prime(7)
F2 = FieldSpec.prime(2)
FP = FieldSpec.prime()
QQ = FieldSpec.rational()


def det_expansion(rows, p):
    """Determinant by Laplace expansion over Z, reduced mod p. Oracle only."""
    n = len(rows)
    if n == 0:
        return 1 % p
    if n == 1:
        return rows[0][0] % p
    total = 0
    for j in range(n):
        minor = [r[:j] + r[j + 1:] for r in rows[1:]]
        sign = 1 if j % 2 == 0 else -1
        total += sign * rows[0][j] * det_expansion(minor, p)
    return total % p


def rank_by_minors(rows, p):
    """Rank = size of the largest square submatrix with nonzero determinant."""
    nr, nc = len(rows), len(rows[0]) if rows else 0
    for k in range(min(nr, nc), 0, -1):
        for ris in itertools.combinations(range(nr), k):
            for cis in itertools.combinations(range(nc), k):
                sub = [[rows[i][j] for j in cis] for i in ris]
                if det_expansion(sub, p) != 0:
                    return k
    return 0


def test_rank_against_minor_oracle():
    rng = np.random.default_rng(7)
    for _ in range(25):
        rows = [[int(x) for x in rng.integers(0, 7, size=5)] for _ in range(5)]
        m = Matrix.from_rows(F7, rows)
        assert m.rank() == rank_by_minors(rows, 7)


def test_kernel_against_f2_enumeration():
    rng = np.random.default_rng(11)
    for _ in range(20):
        rows = [[int(x) for x in rng.integers(0, 2, size=4)] for _ in range(3)]
        m = Matrix.from_rows(F2, rows)
        brute = []
        for vec in itertools.product([0, 1], repeat=4):
            if all(sum(r[j] * vec[j] for j in range(4)) % 2 == 0 for r in rows):
                brute.append(vec)
        # kernel through rref must have the same cardinality (2^dim) and be contained
        kb = m.kernel_basis()
        assert 2 ** kb.cols == len(brute)
        assert (m @ kb).is_zero()


def test_kernel_frozen_small_cases():
    assert Matrix.from_rows(F7, [[1, 0], [0, 1]]).kernel_basis().cols == 0
    kb = Matrix.from_rows(F2, [[1, 1], [1, 1]]).kernel_basis()
    assert kb.cols == 1
    assert kb.to_lists() == [[1], [1]]


def test_solve_consistency_oracle():
    rng = np.random.default_rng(3)
    for _ in range(40):
        a = Matrix.random(FP, 4, 3, rng)
        b = Matrix.random(FP, 4, 1, rng)
        x = a.solve(b)
        aug_rank = hstack([a, b]).rank()
        if x is None:
            assert aug_rank > a.rank()
        else:
            assert aug_rank == a.rank()
            assert (a @ x) == b


def test_inverse_round_trip():
    rng = np.random.default_rng(5)
    hits = 0
    for _ in range(20):
        a = Matrix.random(FP, 4, 4, rng)
        inv = a.inverse()
        if inv is not None:
            hits += 1
            assert (a @ inv) == Matrix.identity(FP, 4)
            assert (inv @ a) == Matrix.identity(FP, 4)
    assert hits > 0


def test_rational_field_exactness():
    a = Matrix.from_rows(QQ, [[Fraction(1, 2), 1], [1, Fraction(1, 3)]])
    inv = a.inverse()
    assert inv is not None
    assert (a @ inv) == Matrix.identity(QQ, 2)
    k = Matrix.from_rows(QQ, [[1, 2], [2, 4]]).kernel_basis()
    assert k.cols == 1
    assert k.to_lists() == [[Fraction(-2)], [Fraction(1)]]


@settings(max_examples=60, deadline=None)
@given(
    st.integers(1, 6),
    st.integers(1, 6),
    st.integers(0, 2 ** 32 - 1),
)
def test_rref_idempotent_and_rank_nullity(r, c, seed):
    rng = np.random.default_rng(seed)
    m = Matrix.random(FP, r, c, rng)
    red, piv = m.rref()
    red2, piv2 = red.rref()
    assert red == red2 and piv == piv2
    assert m.rank() + m.kernel_basis().cols == c
    assert m.rank() == m.transpose().rank()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_solve_membership_criterion(seed):
    rng = np.random.default_rng(seed)
    a = Matrix.random(FP, 3, 5, rng)
    b = Matrix.random(FP, 3, 1, rng)
    x = a.solve(b)
    solvable = hstack([a, b]).rank() == a.rank()
    assert (x is not None) == solvable


def test_backends_agree():
    try:
        from siltkit import _modp
    except ImportError:
        pytest.skip("compiled kernel not built")
    rng = np.random.default_rng(17)
    for _ in range(30):
        a = rng.integers(0, 32003, size=(6, 9), dtype=np.int64)
        mc, pc = _modp.rref(a, 32003)
        mp_, pp = _modp_py.rref(a, 32003)
        assert pc == pp
        assert np.array_equal(mc, mp_)


def test_stacking_shapes():
    a = Matrix.identity(FP, 2)
    b = Matrix.zeros(FP, 2, 3)
    assert hstack([a, b]).shape == (2, 5)
    assert vstack([a, Matrix.zeros(FP, 1, 2)]).shape == (3, 2)
    d = block_diag(FP, [a, Matrix.identity(FP, 3)])
    assert d.shape == (5, 5)
    assert d.rank() == 5


def test_zero_dimension_edge_cases():
    z = Matrix.zeros(FP, 0, 3)
    assert z.rank() == 0
    assert z.kernel_basis().cols == 3
    z2 = Matrix.zeros(FP, 3, 0)
    assert (z2 @ Matrix.zeros(FP, 0, 2)).shape == (3, 2)
    assert z2.rank() == 0


def test_backend_name_reported():
    assert kernel_backend() in ("compiled", "pure")
