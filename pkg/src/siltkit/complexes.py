"""Cochain complexes of modules and chain maps between them.

Cohomological convention throughout: the differential raises degree,
``d^k: X^k -> X^{k+1}``, and the shift is ``X[n]^k = X^{k+n}`` with
differential ``(-1)^n d^{k+n}``.
"""
from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .algebra import (
    AlgebraBasis, Module, ModuleMap, direct_sum, dual_map, dual_module,
    image, kernel, quotient_module,
)
from .linalg import Matrix


class Complex:
    """A bounded cochain complex of right modules over a fixed algebra."""

    def __init__(self, algebra: AlgebraBasis, terms: Dict[int, Module],
                 diffs: Optional[Dict[int, ModuleMap]] = None):
        self.algebra = algebra
        self.terms = {k: m for k, m in terms.items() if not m.is_zero()}
        self.diffs = {}
        for k, d in (diffs or {}).items():
            if k in self.terms and (k + 1) in self.terms and not d.is_zero():
                self.diffs[k] = d

    # -- structure ----------------------------------------------------

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(sorted(self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def term(self, k: int) -> Module:
        return self.terms.get(k) or Module.zero(self.algebra)

    def diff(self, k: int) -> ModuleMap:
        d = self.diffs.get(k)
        if d is not None:
            return d
        return ModuleMap.zero(self.term(k), self.term(k + 1))

    def total_dim(self) -> int:
        return sum(m.total_dim() for m in self.terms.values())

    def validate(self) -> None:
        for k, d in self.diffs.items():
            if d.source.dims != self.term(k).dims or d.target.dims != self.term(k + 1).dims:
                raise ValueError(f"differential at {k} has wrong endpoints")
            d.check_linearity()
            if (k + 1) in self.diffs:
                if not (self.diffs[k + 1] @ d).is_zero():
                    raise ValueError(f"d^2 != 0 at degree {k}")

    @staticmethod
    def stalk(m: Module, degree: int = 0) -> "Complex":
        return Complex(m.algebra, {degree: m})

    @staticmethod
    def zero(algebra: AlgebraBasis) -> "Complex":
        return Complex(algebra, {})

    def shift(self, n: int) -> "Complex":
        terms = {k - n: m for k, m in self.terms.items()}
        diffs = {k - n: d.scale((-1) ** n) for k, d in self.diffs.items()}
        return Complex(self.algebra, terms, diffs)

    def __repr__(self):
        parts = ", ".join(f"{k}: {self.term(k).dim_vector()}" for k in self.support)
        return f"Complex({{{parts}}})"

    # -- cohomology ----------------------------------------------------

    def cohomology_at(self, k: int) -> Module:
        """H^k as a module (kernel of d^k modulo image of d^{k-1})."""
        dk = self.diff(k)
        z, z_incl = kernel(dk)
        prev = self.diffs.get(k - 1)
        if prev is None or z.is_zero():
            return z
        _, b_incl = image(prev)
        in_z = {}
        for v in self.algebra.vertices:
            sol = z_incl.mats[v].solve(b_incl.mats[v])
            if sol is None:
                raise RuntimeError("image not contained in kernel (d^2 != 0?)")
            in_z[v] = sol
        quo, _, _ = quotient_module(z, in_z)
        return quo

    def cohomology_dims(self) -> Dict[int, Tuple[int, ...]]:
        lo, hi = (min(self.support), max(self.support)) if self.terms else (0, -1)
        out = {}
        for k in range(lo, hi + 1):
            h = self.cohomology_at(k)
            if not h.is_zero():
                out[k] = h.dim_vector()
        return out


def sum_complexes(xs: Sequence[Complex]) -> Complex:
    """Direct sum, with the block structure induced degreewise."""
    if not xs:
        raise ValueError("sum of no complexes")
    alg = xs[0].algebra
    degrees = sorted({k for x in xs for k in x.support})
    terms = {}
    mods_at = {}
    for k in degrees:
        mods = [x.term(k) for x in xs]
        total, injs, projs = direct_sum(mods)
        terms[k] = total
        mods_at[k] = (injs, projs)
    diffs = {}
    for k in degrees:
        if (k + 1) not in terms:
            continue
        injs_next, _ = mods_at[k + 1]
        _, projs_here = mods_at[k]
        acc = None
        for i, x in enumerate(xs):
            comp = injs_next[i] @ x.diff(k) @ projs_here[i]
            acc = comp if acc is None else acc + comp
        diffs[k] = acc
    return Complex(alg, terms, diffs)


class ChainMap:
    """A degreewise map of complexes commuting with the differentials."""

    def __init__(self, source: Complex, target: Complex,
                 comps: Dict[int, ModuleMap]):
        self.source = source
        self.target = target
        self.comps = {k: f for k, f in comps.items() if not f.is_zero()}

    def comp(self, k: int) -> ModuleMap:
        f = self.comps.get(k)
        if f is not None:
            return f
        return ModuleMap.zero(self.source.term(k), self.target.term(k))

    def validate(self) -> None:
        for k in set(self.source.support) | set(self.target.support):
            lhs = self.target.diff(k) @ self.comp(k)
            rhs = self.comp(k + 1) @ self.source.diff(k)
            if not (lhs - rhs).is_zero():
                raise ValueError(f"square at degree {k} does not commute")

    def is_zero(self) -> bool:
        return all(f.is_zero() for f in self.comps.values())

    def __matmul__(self, other: "ChainMap") -> "ChainMap":
        keys = set(self.comps) | set(other.comps)
        return ChainMap(other.source, self.target,
                        {k: self.comp(k) @ other.comp(k) for k in keys})

    def __add__(self, other: "ChainMap") -> "ChainMap":
        keys = set(self.comps) | set(other.comps)
        return ChainMap(self.source, self.target,
                        {k: self.comp(k) + other.comp(k) for k in keys})

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        keys = set(self.comps) | set(other.comps)
        return ChainMap(self.source, self.target,
                        {k: self.comp(k) - other.comp(k) for k in keys})

    def scale(self, c) -> "ChainMap":
        return ChainMap(self.source, self.target,
                        {k: f.scale(c) for k, f in self.comps.items()})

    def shift(self, n: int) -> "ChainMap":
        return ChainMap(self.source.shift(n), self.target.shift(n),
                        {k - n: f for k, f in self.comps.items()})

    @staticmethod
    def identity(x: Complex) -> "ChainMap":
        return ChainMap(x, x, {k: ModuleMap.identity(x.term(k)) for k in x.support})

    @staticmethod
    def zero(x: Complex, y: Complex) -> "ChainMap":
        return ChainMap(x, y, {})


def cone(f: ChainMap) -> Tuple[Complex, ChainMap, ChainMap]:
    """Mapping cone ``C^k = Y^k ⊕ X^{k+1}`` with the triangle maps
    ``Y -> C -> X[1]``; ``d_C(y, x) = (d_Y y + f x, -d_X x)``."""
    x, y = f.source, f.target
    alg = x.algebra
    degrees = sorted(set(y.support) | {k - 1 for k in x.support})
    terms = {}
    parts = {}
    for k in degrees:
        total, injs, projs = direct_sum([y.term(k), x.term(k + 1)])
        terms[k] = total
        parts[k] = (injs, projs)
    diffs = {}
    for k in degrees:
        if (k + 1) not in terms:
            continue
        injs_n, _ = parts[k + 1]
        _, projs_h = parts[k]
        d = (injs_n[0] @ y.diff(k) @ projs_h[0]
             + injs_n[0] @ f.comp(k + 1) @ projs_h[1]
             + (injs_n[1] @ x.diff(k + 1) @ projs_h[1]).scale(-1))
        diffs[k] = d
    c = Complex(alg, terms, diffs)
    incl = ChainMap(y, c, {k: parts[k][0][0] for k in degrees if k in c.terms})
    x1 = x.shift(1)
    proj = ChainMap(c, x1, {k: parts[k][1][1] for k in degrees if k in c.terms})
    return c, incl, proj


def dual_complex(x: Complex) -> Complex:
    """``D(X)^k = D(X^{-k})`` over the opposite algebra."""
    op = x.algebra.opposite()
    terms = {-k: dual_module(m) for k, m in x.terms.items()}
    diffs = {}
    for k, d in x.diffs.items():
        # d^k: X^k -> X^{k+1} dualises to D(X)^{-k-1} -> D(X)^{-k}
        diffs[-k - 1] = dual_map(d)
    return Complex(op, terms, diffs)


def dual_chain_map(f: ChainMap) -> ChainMap:
    """D is contravariant: a map X -> Y dualises to D(Y) -> D(X)."""
    return ChainMap(dual_complex(f.target), dual_complex(f.source),
                    {-k: dual_map(m) for k, m in f.comps.items()})
