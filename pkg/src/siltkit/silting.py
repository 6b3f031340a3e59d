"""Silting objects: certificates, aisle membership, truncation and mutation.

A silting object is stored through its basic form: the minimal generator
complex of projectives together with the list of pairwise non-isomorphic
indecomposable summands.  All predicates reduce to finite Hom-table windows,
so every verdict here is exact.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from .algebra import AlgebraBasis, Module, SiltkitError
from .complexes import Complex
from .homotopy import (
    GenComplex, GMap, HomTable, ISO, basic, cocone_gen, cone_gen, decompose,
    hom_gmaps, identity_gmap, is_isomorphic, k0_class, minimal_proj_gen,
    minimalize, serre_functor, stalk_gen, sum_gen,
)


class UnsupportedTruncator(SiltkitError):
    """Truncation along a silting object whose co-t-structure we cannot
    certify; only tilting objects and shifted free modules are supported."""


class MutationError(SiltkitError):
    """An irreducible mutation step failed to produce a silting object."""


def _summand_key(g: GenComplex):
    mult = g.multiplicities()
    return tuple((k, tuple(sorted(mult[k].items()))) for k in sorted(mult))


class SiltingObject:
    """A candidate silting object over a finite-dimensional quiver algebra.

    The constructor minimalizes and basic-ifies: ``self.gen`` holds one copy
    of each indecomposable summand, in a deterministic order, and
    ``self.summands`` lists those summands individually.  No silting condition
    is enforced here — use :func:`silting_certificate`.
    """

    def __init__(self, algebra: AlgebraBasis, gen: GenComplex, rng=None):
        if rng is None:
            rng = np.random.default_rng(0)
        self.algebra = algebra
        self.rng = rng
        g = gen if gen.is_minimal() else minimalize(gen)
        if g.is_zero():
            self.summands: List[GenComplex] = []
            self.gen = g
        else:
            _, parts = basic(g, rng)
            self.summands = sorted((s for s, _ in parts), key=_summand_key)
            self.gen = sum_gen(self.summands)

    @staticmethod
    def free(algebra: AlgebraBasis, degree: int = 0) -> "SiltingObject":
        return SiltingObject(
            algebra, stalk_gen(algebra, algebra.vertices, degree))

    @staticmethod
    def from_complex(algebra: AlgebraBasis, x, rng=None,
                     max_len: int = 48) -> "SiltingObject":
        return SiltingObject(algebra, minimal_proj_gen(x, max_len=max_len), rng)

    def summand_count(self) -> int:
        return len(self.summands)

    def k0_matrix(self) -> List[List[int]]:
        """Rows are the classes of the summands in the basis of indecomposable
        projectives (ordered by algebra vertex)."""
        return [list(k0_class(s)) for s in self.summands]

    def k0_det(self) -> Optional[int]:
        rows = self.k0_matrix()
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            return None
        return int(sympy.Matrix(rows).det())

    def self_hom_dims(self) -> Dict[int, int]:
        return HomTable(self.gen, self.gen.realize().complex).hom_dims()

    def __repr__(self):
        return f"SiltingObject({self.gen!r})"


def _as_silting(algebra: AlgebraBasis, z) -> SiltingObject:
    if isinstance(z, SiltingObject):
        return z
    return SiltingObject.from_complex(algebra, z)


# ---------------------------------------------------------------------------
# predicates and certificates


@dataclass
class PresiltingReport:
    ok: bool
    offending: List[Tuple[int, int]]  # (shift degree, hom dimension)

    def __bool__(self) -> bool:
        return self.ok


def is_presilting(z: SiltingObject,
                  window: Optional[Tuple[int, int]] = None) -> PresiltingReport:
    """No self-maps to positive shifts: ``Hom(Z, Z[k]) = 0`` for ``k > 0``.

    ``window`` optionally restricts the scanned shifts; by default the whole
    (finite) support window of the Hom table is scanned.
    """
    dims = z.self_hom_dims()
    offending = [(k, d) for k, d in sorted(dims.items()) if k > 0]
    if window is not None:
        offending = [(k, d) for k, d in offending
                     if window[0] <= k <= window[1]]
    return PresiltingReport(not offending, offending)


@dataclass
class Certificate:
    passed: bool
    reason: str
    summand_count: int
    k0_det: Optional[int]
    generation: str  # "k0-unimodular" or "constructive"

    def __bool__(self) -> bool:
        return self.passed


def silting_certificate(z: SiltingObject, generation_witness=None) -> Certificate:
    """Certify that ``z`` is silting.

    Checks: presilting; as many indecomposable summand classes as simples;
    unimodular matrix of summand classes in K₀.  The K₀ test is a sound but
    in general incomplete stand-in for thick-subcategory generation; when a
    ``generation_witness`` callable is supplied (as for glued outputs, whose
    construction triangles exhibit the generators) and returns True, the
    certificate is complete and marked "constructive".
    """
    n = len(z.algebra.vertices)
    count = z.summand_count()
    pre = is_presilting(z)
    if not pre.ok:
        k, d = pre.offending[0]
        return Certificate(False, f"self-extension of dimension {d} at shift {k}",
                           count, None, "none")
    if count != n:
        return Certificate(False, f"{count} summand classes, expected {n}",
                           count, None, "none")
    det = z.k0_det()
    if det is None or abs(det) != 1:
        return Certificate(False, f"K0 matrix not unimodular (det {det})",
                           count, det, "none")
    generation = "k0-unimodular"
    if generation_witness is not None:
        if not generation_witness():
            return Certificate(False, "constructive generation witness failed",
                               count, det, "none")
        generation = "constructive"
    return Certificate(True, "", count, det, generation)


def is_tilting(z: SiltingObject) -> bool:
    """Silting with no self-maps to negative shifts."""
    if not silting_certificate(z).passed:
        return False
    return all(k == 0 for k in z.self_hom_dims())


# ---------------------------------------------------------------------------
# aisle membership


def _vanishes(table: HomTable, lo_cut: Optional[int],
              hi_cut: Optional[int]) -> bool:
    """True when all Hom dimensions in [lo_cut, hi_cut] (within the finite
    window; None means unbounded) vanish."""
    lo, hi = table.window()
    lo = lo if lo_cut is None else max(lo, lo_cut)
    hi = hi if hi_cut is None else min(hi, hi_cut)
    return all(table.h_dim(i) == 0 for i in range(lo, hi + 1))


def aisle_membership(m: SiltingObject, z, which: str) -> bool:
    """Membership of ``z`` in the (co-)aisles attached to the silting object
    ``m``.

    - ``t_leq0``:   ``Hom(M, z[i]) = 0`` for all ``i > 0`` (t-structure aisle)
    - ``t_geq0``:   ``Hom(M, z[i]) = 0`` for all ``i < 0`` (co-aisle)
    - ``cot_geq0``: ``Hom(z, M[i]) = 0`` for all ``i ≥ 1`` (co-t-structure)
    - ``cot_leq0``: ``Hom(M, z[i]) = 0`` for all ``i ≥ 1``
    """
    if which in ("t_leq0", "cot_leq0"):
        return _vanishes(_probe_from(m, z), 1, None)
    if which == "t_geq0":
        return _vanishes(_probe_from(m, z), None, -1)
    if which == "cot_geq0":
        return _vanishes(_probe_to(m, z), 1, None)
    raise ValueError(f"unknown aisle name {which!r}")


def _probe_from(m: SiltingObject, z) -> HomTable:
    zc = _as_target_complex(m.algebra, z)
    return HomTable(m.gen, zc)


def _probe_to(m: SiltingObject, z) -> HomTable:
    if isinstance(z, SiltingObject):
        zg = z.gen
    elif isinstance(z, GenComplex) and z.flavor == "proj":
        zg = z
    else:
        zg = minimal_proj_gen(z)
    return HomTable(zg, m.gen.realize().complex)


def _as_target_complex(algebra: AlgebraBasis, z) -> Complex:
    if isinstance(z, SiltingObject):
        return z.gen.realize().complex
    if isinstance(z, GenComplex):
        return z.realize().complex
    if isinstance(z, Module):
        return Complex.stalk(z)
    return z


def heart_membership(m: SiltingObject, z) -> bool:
    return aisle_membership(m, z, "t_leq0") and aisle_membership(m, z, "t_geq0")


def t_window(m: SiltingObject, z) -> Tuple[Optional[int], Optional[int]]:
    """The exact degree window of ``z`` for the t-structure of ``m``: the
    smallest and largest ``k`` with ``Hom(M, z[k]) ≠ 0``; ``(None, None)``
    when ``z`` vanishes."""
    dims = _probe_from(m, z).hom_dims()
    if not dims:
        return (None, None)
    return (min(dims), max(dims))


def serre_heart_check(m: SiltingObject) -> Dict[str, bool]:
    """A silting object is tilting exactly when the Serre functor maps it
    into the heart of its own t-structure; report both sides and their
    agreement."""
    sm = serre_functor(m.gen)
    in_heart = heart_membership(m, sm)
    tilt = is_tilting(m)
    return {"is_tilting": tilt, "serre_image_in_heart": in_heart,
            "consistent": tilt == in_heart}


# ---------------------------------------------------------------------------
# truncation triangles for the silting co-t-structure


@dataclass
class TruncationTriangle:
    """A triangle ``upper → total → lower → upper[1]`` splitting ``total``
    along the co-t-structure of a silting object: ``upper`` lies in co-degrees
    ``≥ 1`` and ``lower`` in co-degrees ``≤ 0``."""
    total: GenComplex
    upper: GenComplex
    lower: GenComplex
    incl: GMap   # upper -> total
    proj: GMap   # total -> lower
    delta: GMap  # lower -> upper[1]

    def verify(self, rng=None) -> None:
        self.incl.validate()
        self.proj.validate()
        self.delta.validate()
        c = minimalize(cone_gen(self.incl))
        if is_isomorphic(c, self.lower, rng) != ISO:
            raise RuntimeError("truncation triangle failed cone verification")


def _free_stalk_degree(y: SiltingObject) -> Optional[int]:
    """Degree ``t`` when ``y`` is the (basic) free module placed in degree
    ``t``, else None."""
    sup = y.gen.support
    if len(sup) != 1:
        return None
    t = sup[0]
    if sorted(y.gen.gens[t]) == sorted(y.algebra.vertices):
        return t
    return None


def _zero_gen(alg: AlgebraBasis, flavor: str = "proj") -> GenComplex:
    return GenComplex(alg, {}, {}, flavor)


def _identity_comps(g: GenComplex, degrees) -> Dict[int, List[List]]:
    alg = g.algebra
    comps = {}
    for k in degrees:
        vs = g.gens[k]
        comps[k] = [[alg.idem_el(vs[i]) if i == j else alg.zero_el()
                     for j in range(len(vs))] for i in range(len(vs))]
    return comps


def _stupid_triangle(gd: GenComplex, cut: int):
    """Brutal truncation of a minimal complex at ``cut``: degrees ``≥ cut``
    versus degrees ``< cut``, with the connecting map given by the
    differential crossing the cut."""
    alg = gd.algebra
    up_deg = [k for k in gd.support if k >= cut]
    lo_deg = [k for k in gd.support if k < cut]
    upper = GenComplex(alg, {k: gd.gens[k] for k in up_deg},
                       {k: gd.diffs[k] for k in gd.diffs if k >= cut})
    lower = GenComplex(alg, {k: gd.gens[k] for k in lo_deg},
                       {k: gd.diffs[k] for k in gd.diffs if k + 1 < cut})
    incl = GMap(upper, gd, _identity_comps(gd, up_deg))
    proj = GMap(gd, lower, _identity_comps(gd, lo_deg))
    dcomp = {}
    if (cut - 1) in gd.gens and cut in gd.gens:
        dcomp[cut - 1] = gd.diff_block(cut - 1)
    delta = GMap(lower, upper.shift(1), dcomp)
    return upper, lower, incl, proj, delta


def _stack_into(target: GenComplex, maps: Sequence[GMap]) -> GMap:
    """Combine maps ``f_i: X_i -> target`` into ``⊕X_i -> target``."""
    alg = target.algebra
    src = sum_gen([f.source for f in maps])
    comps = {}
    for k in src.gens:
        nrows = len(target.gens.get(k, []))
        rows = [[] for _ in range(nrows)]
        for f in maps:
            blk = f.block(k)
            ncols = len(f.source.gens.get(k, []))
            for i in range(nrows):
                rows[i].extend(blk[i][:ncols])
        if nrows:
            comps[k] = rows
    return GMap(src, target, comps)


def _stack_from(source: GenComplex, maps: Sequence[GMap]) -> GMap:
    """Combine maps ``f_i: source -> Y_i`` into ``source -> ⊕Y_i``."""
    tgt = sum_gen([f.target for f in maps])
    comps = {}
    for k in tgt.gens:
        rows = []
        for f in maps:
            blk = f.block(k)
            for i in range(len(f.target.gens.get(k, []))):
                rows.append(list(blk[i]))
        if rows:
            comps[k] = rows
    return GMap(source, tgt, comps)


def _cone_inclusion(f: GMap) -> Tuple[GenComplex, GMap]:
    """The cone of ``f: X -> Y`` with the triangle map ``Y -> cone(f)``."""
    c = cone_gen(f)
    y = f.target
    alg = y.algebra
    comps = {}
    for k, cvs in c.gens.items():
        nvy = len(y.gens.get(k, []))
        rows = [[alg.idem_el(cvs[i]) if (i == j and i < nvy) else alg.zero_el()
                 for j in range(nvy)] for i in range(len(cvs))]
        if rows and rows[0]:
            comps[k] = rows
    return c, GMap(y, c, comps)


def _tower(y: SiltingObject, gd: GenComplex, max_steps: int):
    """Kill ``Hom(y, ·[k])`` for ``k ≥ 1`` from the top down by coning off
    universal maps from shifted copies of ``y``; the cocone of the composite
    is the co-aisle part."""
    cur = gd
    q = identity_gmap(gd)
    steps = 0
    for _ in range(max_steps):
        dims = HomTable(y.gen, cur.realize().complex).hom_dims()
        offending = [k for k in dims if k >= 1]
        if not offending:
            break
        n = max(offending)
        cell = y.gen.shift(-n)
        maps = hom_gmaps(cell, cur)
        phi = _stack_into(cur, maps)
        cur, step = _cone_inclusion(phi)
        q = step @ q
        steps += 1
    else:
        raise RuntimeError("truncation tower did not terminate")
    if steps == 0:
        upper = _zero_gen(gd.algebra)
        return (upper, gd, GMap(upper, gd, {}), identity_gmap(gd),
                GMap(gd, upper.shift(1), {}))
    upper, incl = cocone_gen(q)
    delta = _cocone_delta(upper, q.target)
    return upper, q.target, incl, q, delta


def _cocone_delta(u: GenComplex, v: GenComplex) -> GMap:
    """For ``u = cocone(q: d -> v)``, the triangle map ``v -> u[1]`` is the
    inclusion of ``v`` into the first block of ``u`` shifted."""
    alg = u.algebra
    u1 = u.shift(1)
    comps = {}
    for k, vs in v.gens.items():
        nrows = len(u1.gens.get(k, []))
        if not nrows:
            continue
        comps[k] = [[alg.idem_el(vs[j]) if i == j else alg.zero_el()
                     for j in range(len(vs))] for i in range(nrows)]
    return GMap(v, u1, comps)


def _upper_only(s: GenComplex):
    z = _zero_gen(s.algebra)
    return (s, z, identity_gmap(s), GMap(s, z, {}), GMap(z, s.shift(1), {}))


def _lower_only(s: GenComplex):
    z = _zero_gen(s.algebra)
    return (z, s, GMap(z, s, {}), identity_gmap(s), GMap(s, z.shift(1), {}))


def _gmap_direct_sum(fs: Sequence[GMap], source: GenComplex,
                     target: GenComplex) -> GMap:
    """Block-diagonal direct sum of maps, into explicitly given sum objects
    (whose generator order must follow the part order)."""
    alg = source.algebra
    comps = {}
    for k in source.gens:
        nr, nc = len(target.gens.get(k, [])), len(source.gens[k])
        if nr == 0:
            continue
        rows = [[alg.zero_el()] * nc for _ in range(nr)]
        ro = co = 0
        for f in fs:
            blk = f.block(k)
            fr = len(f.target.gens.get(k, []))
            fc = len(f.source.gens.get(k, []))
            for i in range(fr):
                for j in range(fc):
                    rows[ro + i][co + j] = blk[i][j]
            ro += fr
            co += fc
        comps[k] = rows
    return GMap(source, target, comps)


def co_t_truncate(y: SiltingObject, d, max_steps: int = 64) -> TruncationTriangle:
    """Truncation triangle ``β_{≥1}d → d → β_{≤0}d`` for the co-t-structure
    of the silting object ``y``.

    For a shifted free ``y`` this is the brutal truncation of the minimal
    model of ``d``.  For a general tilting ``y`` the minimal model is split
    into indecomposable summands; summands already inside one co-aisle pass
    through untouched and only genuinely mixed summands go through a cell
    tower (whose output is unique up to co-heart summands).  Any other
    silting object is rejected ("unsupported silting truncator").  The
    triangle is cone-verified and both memberships are certified before it
    is returned.
    """
    alg = y.algebra
    gd = minimal_proj_gen(d)
    free_deg = _free_stalk_degree(y)
    if free_deg is not None:
        upper, lower, incl, proj, delta = _stupid_triangle(gd, free_deg + 1)
        total = gd
    elif gd.is_zero():
        z = _zero_gen(alg)
        upper, lower, incl, proj, delta = (
            z, _zero_gen(alg), GMap(z, gd, {}), GMap(gd, z, {}),
            GMap(z, z.shift(1), {}))
        total = gd
    elif is_tilting(y):
        ycx = y.gen.realize().complex
        triples = []
        parts = decompose(gd, y.rng)
        for s in parts:
            if _vanishes(HomTable(s, ycx), 0, None):
                triples.append(_upper_only(s))
            elif _vanishes(HomTable(y.gen, s.realize().complex), 1, None):
                triples.append(_lower_only(s))
            else:
                triples.append(_tower(y, s, max_steps))
        total = sum_gen(parts)
        upper = sum_gen([t[0] for t in triples])
        lower = sum_gen([t[1] for t in triples])
        incl = _gmap_direct_sum([t[2] for t in triples], upper, total)
        proj = _gmap_direct_sum([t[3] for t in triples], total, lower)
        delta = _gmap_direct_sum([t[4] for t in triples], lower, upper.shift(1))
    else:
        raise UnsupportedTruncator("unsupported silting truncator")
    tri = TruncationTriangle(total, upper, lower, incl, proj, delta)
    tri.verify()
    if not upper.is_zero() and not _vanishes(
            HomTable(upper, y.gen.realize().complex), 0, None):
        raise RuntimeError("upper truncation piece escapes the co-aisle")
    if not lower.is_zero() and not _vanishes(
            HomTable(y.gen, lower.realize().complex), 1, None):
        raise RuntimeError("lower truncation piece escapes the aisle")
    return tri


# ---------------------------------------------------------------------------
# irreducible mutation


def _summand_index(m: SiltingObject, x) -> int:
    if isinstance(x, int):
        if not 0 <= x < len(m.summands):
            raise ValueError(f"summand index {x} out of range")
        return x
    xg = x.gen if isinstance(x, SiltingObject) else x
    for i, s in enumerate(m.summands):
        if is_isomorphic(s, xg, m.rng) == ISO:
            return i
    raise ValueError("no summand of the silting object matches the given one")


def mutate(m: SiltingObject, x, direction: str = "left") -> SiltingObject:
    """Irreducible silting mutation at one indecomposable summand.

    Left mutation replaces ``X`` by the cone of a left approximation
    ``X → L`` with ``L`` additively generated by the other summands; right
    mutation replaces it by the cocone of a right approximation ``K → X``.
    When the complement is empty the approximation is zero and mutation
    degenerates to a shift.  The result must pass the silting certificate;
    failures (e.g. a degenerate approximation) raise :class:`MutationError`.
    """
    idx = _summand_index(m, x)
    xg = m.summands[idx]
    others = [s for j, s in enumerate(m.summands) if j != idx]
    approx_maps: List[GMap] = []
    if direction == "left":
        for ng in others:
            approx_maps.extend(hom_gmaps(xg, ng))
        if approx_maps:
            phi = _stack_from(xg, approx_maps)
            new_part = cone_gen(phi)
        else:
            new_part = xg.shift(1)
    elif direction == "right":
        for ng in others:
            approx_maps.extend(hom_gmaps(ng, xg))
        if approx_maps:
            psi = _stack_into(xg, approx_maps)
            new_part, _ = cocone_gen(psi)
        else:
            new_part = xg.shift(-1)
    else:
        raise ValueError(f"unknown mutation direction {direction!r}")
    result = SiltingObject(m.algebra, sum_gen(others + [new_part]), m.rng)
    cert = silting_certificate(result)
    if not cert.passed:
        if not approx_maps and others:
            raise MutationError(
                "approximation degenerate: the summand admits no maps to the "
                f"rest and the shifted complement is not silting ({cert.reason})")
        raise MutationError(f"mutation failed the silting certificate: "
                            f"{cert.reason}")
    return result
