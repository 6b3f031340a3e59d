"""Torsion pairs and module-level recollement functors on standard hearts.

For an idempotent recollement of derived categories the standard t-structures
have the module categories over ``A``, ``B = A/AeA`` and ``C = eAe`` as
hearts, and the six derived functors induce additive functors between them.
:class:`AbelianRecollement` realizes those induced functors concretely:

- ``pi^*``: quotient by the trace of the chosen idempotent, ``M/M(AeA)``
- ``pi_*``: inflation along ``A -> A/AeA`` (exact)
- ``pi^!``: the largest submodule killed by ``AeA``
- ``pj_!``: ``- (x)_{eAe} eA``
- ``pj^*``: multiplication by ``e`` (exact)
- ``pj_*``: ``Hom_{eAe}(Ae, -)``
- ``j_!*``: image of the canonical map ``pj_! -> pj_*`` (sends simples to
  simples)

Torsion pairs are presented by finite generator lists together with an
explicit certification universe, because closure under extensions is not
computable in general; every claim (validity, restriction, glueing, tilt
membership) is then assertable on the universe.  Additive-closure membership
works through indecomposable decompositions obtained from Fitting's lemma,
which searches the endomorphism algebra for a splitting; for the tiny
modules handled here this is reliable, and deterministic for a fixed seed.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .algebra import (AlgebraBasis, Module, ModuleMap, SiltkitError,
                      TensorData, cokernel, hom_modules, image, kernel,
                      left_mult_map, projective_bimodule, quotient_module,
                      submodule, tensor_over_data)
from .complexes import Complex
from .homotopy import GenComplex
from .linalg import Matrix, hstack
from .recollement import Recollement

__all__ = [
    "HeartsError", "AbelianRecollement", "TorsionPairList",
    "TraceDecomposition", "TorsionPairReport", "RestrictionReport",
    "IntermediateImage", "FourTermSequenceReport", "MutationCompatReport",
    "GluedTiltReport", "abelian_apply", "torsion_trace",
    "validate_torsion_pair", "restrict_torsion_pair", "glue_torsion_pair",
    "hrs_membership", "glued_hrs_equals_hrs_of_glued",
    "mutation_pair_compat_prop68", "counit_sequence_report",
    "unit_sequence_report", "decompose_module", "modules_isomorphic",
    "in_add", "same_additive_closure", "indecomposable_universe",
    "exact_image_ok",
]


class HeartsError(SiltkitError):
    """Raised when the torsion-pair machinery is asked for something invalid."""


def _ensure_rng(rng) -> np.random.Generator:
    if rng is None:
        return np.random.default_rng(0)
    if isinstance(rng, (int, np.integer)):
        return np.random.default_rng(int(rng))
    return rng


def _map_rank(f: ModuleMap) -> int:
    return sum(f.mats[v].rank() for v in f.source.algebra.vertices)


def _vec_of_map(f: ModuleMap) -> Matrix:
    """Flatten a module map to a single coordinate column (fixed vertex order)."""
    fld = f.source.field
    arrs = [f.mats[v]._a.reshape(-1, 1)
            for v in f.source.algebra.vertices if f.mats[v]._a.size]
    if not arrs:
        return Matrix.zeros(fld, 0, 1)
    return Matrix(fld, np.concatenate(arrs, axis=0))


def _coords_in_basis(basis_maps: Sequence[ModuleMap], target: ModuleMap) -> Matrix:
    """Coefficients of ``target`` in a basis of the hom space it lives in."""
    fld = target.source.field
    if not basis_maps:
        if not target.is_zero():
            raise HeartsError("map does not lie in the span of the hom basis")
        return Matrix.zeros(fld, 0, 1)
    system = hstack([_vec_of_map(b) for b in basis_maps])
    sol = system.solve(_vec_of_map(target))
    if sol is None:
        raise HeartsError("map does not lie in the span of the hom basis")
    return sol


# ---------------------------------------------------------------------------
# the induced functors between hearts
# ---------------------------------------------------------------------------


@dataclass
class IntermediateImage:
    """The canonical map ``pj_! n -> pj_* n`` together with its image."""

    tensor: Module          # pj_! n
    hom: Module             # pj_* n
    theta: ModuleMap        # pj_! n -> pj_* n
    module: Module          # image, i.e. j_!* n
    incl: ModuleMap         # image -> pj_* n


class AbelianRecollement:
    """The functors a recollement induces between the standard hearts.

    All computations stay at module level; the only derived input used
    anywhere is the cohomology of ``i^*``/``i^!`` in the four-term sequence
    reports, which deliberately comes from the triangulated side.
    """

    def __init__(self, rec: Recollement):
        self.rec = rec
        self.algebra = rec.algebra
        self.b = rec.b
        self.c = rec.c
        self._eA = None
        self._corner_projs = None

    def __repr__(self):
        return f"AbelianRecollement({self.rec!r})"

    # -- checks --------------------------------------------------------

    def _want(self, m: Module, alg: AlgebraBasis, which: str) -> None:
        if m.algebra is not alg and m.algebra.vertices != alg.vertices:
            raise ValueError(f"{which} expects a module over {alg.vertices}")

    # -- Y side (quotient algebra B) -----------------------------------

    def pi_upper_star_data(self, m: Module) -> Tuple[Module, ModuleMap]:
        """``pi^* m`` plus the canonical epi ``m -> pi_* pi^* m``."""
        self._want(m, self.algebra, "pi^*")
        A, fld = self.algebra, self.algebra.field
        spans: Dict[str, Matrix] = {}
        for w in A.vertices:
            cols = []
            if w in self.rec.chosen_set:
                cols.append(Matrix.identity(fld, m.dims[w]))
            for bb in range(A.dim):
                if (A.deg[bb] > 0 and A.tgt[bb] in self.rec.chosen_set
                        and A.src[bb] == w):
                    cols.append(m.act[bb])
            spans[w] = hstack(cols) if cols else Matrix.zeros(fld, m.dims[w], 0)
        _, incl = submodule(m, spans)
        quo, proj, _ = quotient_module(m, incl.mats)
        bmod = self._as_b_module(quo)
        epi = ModuleMap(m, self.rec.i_lower_star_module(bmod), proj.mats)
        return bmod, epi

    def pi_upper_star(self, m: Module) -> Module:
        return self.pi_upper_star_data(m)[0]

    def pi_lower_star(self, m: Module) -> Module:
        self._want(m, self.b, "pi_*")
        return self.rec.i_lower_star_module(m)

    def pi_lower_star_map(self, f: ModuleMap) -> ModuleMap:
        return self.rec.i_lower_star_map(
            f, self.pi_lower_star(f.source), self.pi_lower_star(f.target))

    def pi_upper_shriek_data(self, m: Module) -> Tuple[Module, ModuleMap]:
        """``pi^! m`` plus the canonical mono ``pi_* pi^! m -> m``."""
        self._want(m, self.algebra, "pi^!")
        return self.rec.annihilator_submodule(m)

    def pi_upper_shriek(self, m: Module) -> Module:
        return self.pi_upper_shriek_data(m)[0]

    def _as_b_module(self, quo: Module) -> Module:
        """Reinterpret an A-module killed by AeA (and zero on the chosen
        vertices) as a module over the quotient algebra."""
        B = self.b
        dims = {v: quo.dims[v] for v in B.vertices}
        act = {}
        for k in range(B.dim):
            if B.deg[k] > 0:
                act[k] = quo.act[self.rec.slice.quot_parent_rep[k]]
        return Module(B, dims, act)

    # -- X side (corner algebra C) -------------------------------------

    def pj_upper_star(self, m: Module) -> Module:
        self._want(m, self.algebra, "pj^*")
        return self.rec.j_upper_star_module(m)

    def pj_upper_star_map(self, f: ModuleMap) -> ModuleMap:
        return self.rec.j_upper_star_map(
            f, self.pj_upper_star(f.source), self.pj_upper_star(f.target))

    def _corner_bimodule(self):
        """``eA`` as a (C, A)-bimodule."""
        if self._eA is None:
            sl = self.rec.slice
            self._eA = projective_bimodule(
                self.algebra, self.c, lambda w: w,
                lambda b: sl.embed_sub(self.c.basis_el(b)))
        return self._eA

    def pj_lower_shriek_data(self, n: Module) -> TensorData:
        self._want(n, self.c, "pj_!")
        return tensor_over_data(n, self._corner_bimodule())

    def pj_lower_shriek(self, n: Module) -> Module:
        return self.pj_lower_shriek_data(n).module

    def _corner_proj(self) -> Dict[str, Module]:
        """``j^*(e_w A)`` for every parent vertex ``w``."""
        if self._corner_projs is None:
            self._corner_projs = {
                w: self.rec.j_upper_star_module(self.algebra.projective_module(w))
                for w in self.algebra.vertices}
        return self._corner_projs

    def pj_lower_star_data(
            self, n: Module) -> Tuple[Module, Dict[str, List[ModuleMap]]]:
        """``pj_* n`` with the hom bases realizing each component.

        Component at ``w`` is ``Hom_C(j^* e_w A, n)``; a parent basis element
        acts by precomposition with the restricted left-multiplication map.
        """
        self._want(n, self.c, "pj_*")
        rec, A, fld = self.rec, self.algebra, self.algebra.field
        slices = self._corner_proj()
        bases = {w: hom_modules(slices[w], n) for w in A.vertices}
        dims = {w: len(bases[w]) for w in A.vertices}
        act = {}
        for bb in range(A.dim):
            if A.deg[bb] == 0:
                continue
            s, t = A.src[bb], A.tgt[bb]
            lm = left_mult_map(A, A.basis_el(bb), s, t)
            jlm = rec.j_upper_star_map(lm, slices[s], slices[t])
            mat = Matrix.zeros(fld, dims[s], dims[t])
            arr = mat._a.copy()
            for j, g in enumerate(bases[t]):
                coords = _coords_in_basis(bases[s], g @ jlm)
                arr[:, j] = coords._a[:, 0]
            act[bb] = Matrix(fld, arr)
        return Module(A, dims, act), bases

    def pj_lower_star(self, n: Module) -> Module:
        return self.pj_lower_star_data(n)[0]

    def j_intermediate_data(self, n: Module) -> IntermediateImage:
        """``j_!* n``: image of the evaluation map ``pj_! n -> pj_* n``.

        On elementary tensors the map sends ``s (x) p`` to the homomorphism
        ``x -> s.((p*x) restricted to eAe)``.
        """
        self._want(n, self.c, "j_!*")
        A, fld, sl = self.algebra, self.algebra.field, self.rec.slice
        td = self.pj_lower_shriek_data(n)
        bim = self._corner_bimodule()
        star, bases = self.pj_lower_star_data(n)
        slices = self._corner_proj()
        plain_mats: Dict[str, Matrix] = {}
        for u in A.vertices:
            mat = Matrix.zeros(fld, star.dims[u], td.plain.dims[u])
            arr = mat._a.copy()
            pu = A.projective_module(u)
            for w in self.c.vertices:
                piece = bim.pieces[w]
                base = td.offsets[(w, u)]
                dw = piece.dims[u]
                for i in range(n.dims[w]):
                    for jcol, q in enumerate(piece._proj_basis[u]):
                        hmats = {}
                        for v in self.c.vertices:
                            hm = Matrix.zeros(fld, n.dims[v], slices[u].dims[v])
                            ha = hm._a.copy()
                            for col, x in enumerate(pu._proj_basis[v]):
                                prod = A.basis_el(q) * A.basis_el(x)
                                if prod.is_zero():
                                    continue
                                sig = sl.restrict_to_sub(prod)
                                ha[:, col] = n.action_of(sig, v, w)._a[:, i]
                            hmats[v] = Matrix(fld, ha)
                        phi = ModuleMap(slices[u], n, hmats)
                        coords = _coords_in_basis(bases[u], phi)
                        arr[:, base + i * dw + jcol] = coords._a[:, 0]
            plain_mats[u] = Matrix(fld, arr)
        theta = _factor_through_tensor(td, plain_mats, star)
        img, incl = image(theta)
        return IntermediateImage(td.module, star, theta, img, incl)

    def j_intermediate(self, n: Module) -> Module:
        return self.j_intermediate_data(n).module

    # -- canonical (co)units on the parent side ------------------------

    def counit_pj(self, m: Module) -> ModuleMap:
        """The evaluation counit ``pj_! pj^* m -> m``, ``x (x) p -> x.p``."""
        self._want(m, self.algebra, "counit")
        A, fld = self.algebra, self.algebra.field
        jm = self.rec.j_upper_star_module(m)
        td = self.pj_lower_shriek_data(jm)
        bim = self._corner_bimodule()
        plain_mats: Dict[str, Matrix] = {}
        for u in A.vertices:
            mat = Matrix.zeros(fld, m.dims[u], td.plain.dims[u])
            arr = mat._a.copy()
            for w in self.c.vertices:
                piece = bim.pieces[w]
                base = td.offsets[(w, u)]
                dw = piece.dims[u]
                for i in range(jm.dims[w]):
                    for jcol, q in enumerate(piece._proj_basis[u]):
                        colidx = base + i * dw + jcol
                        if A.deg[q] == 0:
                            arr[i, colidx] = fld.one
                        else:
                            arr[:, colidx] = m.act[q]._a[:, i]
            plain_mats[u] = Matrix(fld, arr)
        return _factor_through_tensor(td, plain_mats, m)

    def unit_pj(self, m: Module) -> ModuleMap:
        """The unit ``m -> pj_* pj^* m``, sending ``x`` to ``p -> x.p``."""
        self._want(m, self.algebra, "unit")
        A, fld = self.algebra, self.algebra.field
        jm = self.rec.j_upper_star_module(m)
        target, bases = self.pj_lower_star_data(jm)
        slices = self._corner_proj()
        mats: Dict[str, Matrix] = {}
        for w in A.vertices:
            mat = Matrix.zeros(fld, target.dims[w], m.dims[w])
            arr = mat._a.copy()
            pw = A.projective_module(w)
            for i in range(m.dims[w]):
                hmats = {}
                for v in self.c.vertices:
                    hm = Matrix.zeros(fld, jm.dims[v], slices[w].dims[v])
                    ha = hm._a.copy()
                    for col, q in enumerate(pw._proj_basis[v]):
                        if A.deg[q] == 0:
                            ha[i, col] = fld.one
                        else:
                            ha[:, col] = m.act[q]._a[:, i]
                    hmats[v] = Matrix(fld, ha)
                phi = ModuleMap(slices[w], jm, hmats)
                coords = _coords_in_basis(bases[w], phi)
                arr[:, i] = coords._a[:, 0]
            mats[w] = Matrix(fld, arr)
        return ModuleMap(m, target, mats)


def _factor_through_tensor(td: TensorData, plain_mats: Dict[str, Matrix],
                           target: Module) -> ModuleMap:
    """Factor a map off the plain tensor space through the balanced quotient.

    The caller promises the map kills the balancing relations; this is
    re-checked, so a violation raises instead of silently producing garbage.
    """
    fld = target.field
    verts = target.algebra.vertices
    mats = {}
    for u in verts:
        proj = td.projection.mats[u]
        sect = proj.solve(Matrix.identity(fld, td.module.dims[u]))
        if sect is None:
            raise HeartsError("tensor projection is not surjective")
        mats[u] = plain_mats[u] @ sect
        if not (mats[u] @ proj - plain_mats[u]).is_zero():
            raise HeartsError("map does not respect the balancing relations")
    return ModuleMap(td.module, target, mats)


_FUNCTOR_NAMES = ("pi*", "pi^*", "pi_*", "pi^!", "pj_!", "pj^*", "pj_*", "j_!*")


def abelian_apply(ar: AbelianRecollement, f: str, m: Module) -> Module:
    """Apply one of the induced heart-level functors by name."""
    if f in ("pi*", "pi^*"):
        return ar.pi_upper_star(m)
    if f == "pi_*":
        return ar.pi_lower_star(m)
    if f == "pi^!":
        return ar.pi_upper_shriek(m)
    if f == "pj_!":
        return ar.pj_lower_shriek(m)
    if f == "pj^*":
        return ar.pj_upper_star(m)
    if f == "pj_*":
        return ar.pj_lower_star(m)
    if f == "j_!*":
        return ar.j_intermediate(m)
    raise ValueError(f"unknown abelian functor {f!r}; expected one of {_FUNCTOR_NAMES}")


# ---------------------------------------------------------------------------
# indecomposable decompositions and additive-closure membership
# ---------------------------------------------------------------------------


def _random_combination(maps: Sequence[ModuleMap],
                        rng: np.random.Generator) -> ModuleMap:
    fld = maps[0].source.field
    out = None
    for f in maps:
        if fld.kind == "prime":
            c = int(rng.integers(fld.p))
        else:
            c = int(rng.integers(-4, 5))
        g = f.scale(fld.coerce(c))
        out = g if out is None else out + g
    return out


def _fitting_split(m: Module, f: ModuleMap) -> Optional[Tuple[Module, Module]]:
    """Split ``m = ker(f^N) + im(f^N)`` when the endomorphism is neither
    nilpotent nor invertible."""
    n = m.total_dim()
    g = f
    # square until the exponent dominates the length, where ranks stabilize
    for _ in range(max(1, n.bit_length())):
        g = g @ g
    r = _map_rank(g)
    if r == 0 or r == n:
        return None
    ker_mod, _ = kernel(g)
    im_mod, _ = image(g)
    if ker_mod.total_dim() + im_mod.total_dim() != n:
        return None
    return ker_mod, im_mod


def decompose_module(m: Module, rng=None, tries: int = 64) -> List[Module]:
    """Indecomposable direct summands of ``m`` (with multiplicity).

    Uses Fitting's lemma on endomorphisms: hom-basis elements, their pairwise
    sums and seeded random combinations are tried until one splits the
    module.  The search is probabilistic in principle but exhaustive enough
    for the small modules used throughout; a fixed seed makes it
    deterministic.
    """
    if m.is_zero():
        return []
    rng = _ensure_rng(rng)
    ends = hom_modules(m, m)
    if len(ends) <= 1:
        return [m]

    def candidates():
        for f in ends:
            yield f
        for i in range(len(ends)):
            for j in range(i + 1, len(ends)):
                yield ends[i] + ends[j]
        for _ in range(tries):
            yield _random_combination(ends, rng)

    for f in candidates():
        split = _fitting_split(m, f)
        if split is not None:
            ker_mod, im_mod = split
            return (decompose_module(ker_mod, rng, tries)
                    + decompose_module(im_mod, rng, tries))
    return [m]


def modules_isomorphic(m: Module, n: Module, rng=None, tries: int = 64) -> bool:
    """Isomorphism test via the hom space (random combinations over the
    hom basis; certain failures are detected by dimension counts)."""
    if m.dim_vector() != n.dim_vector():
        return False
    if m.total_dim() == 0:
        return True
    homs = hom_modules(m, n)
    if not homs:
        return False
    for f in homs:
        if f.is_isomorphism():
            return True
    rng = _ensure_rng(rng)
    for _ in range(tries):
        if _random_combination(homs, rng).is_isomorphism():
            return True
    return False


def in_add(m: Module, gens: Sequence[Module], rng=None) -> bool:
    """Whether ``m`` lies in the additive closure of the generators."""
    parts = decompose_module(m, rng)
    if not parts:
        return True
    gparts: List[Module] = []
    for g in gens:
        gparts.extend(decompose_module(g, rng))
    return all(any(modules_isomorphic(s, g, rng) for g in gparts)
               for s in parts)


def same_additive_closure(gens_a: Sequence[Module], gens_b: Sequence[Module],
                          rng=None) -> bool:
    return (all(in_add(g, gens_b, rng) for g in gens_a)
            and all(in_add(h, gens_a, rng) for h in gens_b))


def indecomposable_universe(algebra: AlgebraBasis, max_dim: int,
                            limit: int = 300000, rng=None) -> List[Module]:
    """All indecomposables with vertex dimensions at most ``max_dim``, up to
    isomorphism, by brute force over arrow matrices.

    Only viable for tiny algebras over small prime fields; the search space
    is bounded by ``limit`` candidate matrix tuples and exceeding it raises,
    rather than silently truncating the enumeration.
    """
    if algebra.presentation is None:
        raise HeartsError("universe enumeration needs a quiver presentation")
    fld = algebra.field
    if fld.kind != "prime":
        raise HeartsError("universe enumeration needs a prime field")
    p = fld.p
    rng = _ensure_rng(rng)
    arrows = list(algebra.presentation.arrows)
    verts = list(algebra.vertices)
    total_work = 0
    found: List[Module] = []
    for dv in itertools.product(range(max_dim + 1), repeat=len(verts)):
        if not any(dv):
            continue
        dims = dict(zip(verts, dv))
        entries = sum(dims[a.source] * dims[a.target] for a in arrows)
        total_work += p ** entries
        if total_work > limit:
            raise HeartsError(
                f"universe enumeration needs {total_work} candidates; "
                f"limit is {limit} (shrink max_dim or the field)")
        shapes = [(a.name, dims[a.source], dims[a.target]) for a in arrows]
        for flat in itertools.product(range(p), repeat=entries):
            mats = {}
            pos = 0
            for name, r, c in shapes:
                chunk = np.array(flat[pos:pos + r * c], dtype=np.int64)
                mats[name] = Matrix(fld, chunk.reshape(r, c))
                pos += r * c
            try:
                mod = Module.from_arrow_matrices(algebra, dims, mats)
            except ValueError:
                continue
            if len(decompose_module(mod, rng)) != 1:
                continue
            if any(modules_isomorphic(mod, g, rng) for g in found):
                continue
            found.append(mod)
    return found


# ---------------------------------------------------------------------------
# torsion pairs
# ---------------------------------------------------------------------------


@dataclass
class TorsionPairList:
    """A torsion pair presented by finite generator lists.

    ``torsion`` and ``free`` generate the two classes under direct sums and
    summands; validity is only certified over the supplied ``universe``.
    """

    algebra: AlgebraBasis
    torsion: List[Module]
    free: List[Module]
    universe: List[Module]


@dataclass
class TraceDecomposition:
    trace: Module
    inclusion: ModuleMap
    quotient: Module
    projection: ModuleMap


def torsion_trace(tp: TorsionPairList, m: Module) -> TraceDecomposition:
    """The trace of the torsion generators in ``m`` and its quotient."""
    fld = m.field
    spans: Dict[str, Matrix] = {}
    for v in m.algebra.vertices:
        cols = [Matrix.zeros(fld, m.dims[v], 0)]
        for t in tp.torsion:
            for f in hom_modules(t, m):
                cols.append(f.mats[v])
        spans[v] = hstack(cols)
    sub, incl = submodule(m, spans)
    quo, proj, _ = quotient_module(m, incl.mats)
    return TraceDecomposition(sub, incl, quo, proj)


@dataclass
class TorsionPairReport:
    orthogonal: bool
    decomposition: bool
    failures: List[str]

    @property
    def ok(self) -> bool:
        return self.orthogonal and self.decomposition


def validate_torsion_pair(tp: TorsionPairList, rng=None) -> TorsionPairReport:
    """Certify the pair over its universe: generator orthogonality plus the
    trace decomposition of every universe member."""
    failures: List[str] = []
    orth = True
    for t in tp.torsion:
        for f in tp.free:
            if hom_modules(t, f):
                orth = False
                failures.append(
                    f"Hom != 0 from torsion {t.dim_vector()} to free {f.dim_vector()}")
    dec = True
    for idx, u in enumerate(tp.universe):
        td = torsion_trace(tp, u)
        if not in_add(td.trace, tp.torsion, rng):
            dec = False
            failures.append(f"universe[{idx}]: trace not in add(torsion)")
        if not in_add(td.quotient, tp.free, rng):
            dec = False
            failures.append(f"universe[{idx}]: quotient not in add(free)")
    return TorsionPairReport(orth, dec, failures)


def _indec_closure(mods: Sequence[Module], rng=None) -> List[Module]:
    """De-duplicated indecomposable summands of a list of modules."""
    out: List[Module] = []
    for m in mods:
        for part in decompose_module(m, rng):
            if not any(modules_isomorphic(part, g, rng) for g in out):
                out.append(part)
    return out


@dataclass
class RestrictionReport:
    y_pair: TorsionPairList
    x_pair: Optional[TorsionPairList]
    compatible: bool
    witness: Optional[Module]


def restrict_torsion_pair(ar: AbelianRecollement, tp: TorsionPairList,
                          rng=None) -> RestrictionReport:
    """Restrict a parent-side torsion pair through the recollement.

    The Y-side pair ``(pi^* T, pi^! F)`` always exists.  The X-side pair
    ``(pj^* T, pj^* F)`` exists iff the torsion class is stable under
    ``pj_! pj^*``, which is tested on the generators; on failure the
    offending generator is reported as witness.
    """
    ytor = [q for q in (ar.pi_upper_star(t) for t in tp.torsion)
            if not q.is_zero()]
    yfree = [q for q in (ar.pi_upper_shriek(f) for f in tp.free)
             if not q.is_zero()]
    yuni = _indec_closure(
        [ar.pi_upper_star(u) for u in tp.universe]
        + [ar.pi_upper_shriek(u) for u in tp.universe], rng)
    y_pair = TorsionPairList(ar.b, ytor, yfree, yuni)

    for t in tp.torsion:
        back = ar.pj_lower_shriek(ar.pj_upper_star(t))
        if not in_add(back, tp.torsion, rng):
            return RestrictionReport(y_pair, None, False, t)
    xtor = [q for q in (ar.pj_upper_star(t) for t in tp.torsion)
            if not q.is_zero()]
    xfree = [q for q in (ar.pj_upper_star(f) for f in tp.free)
             if not q.is_zero()]
    xuni = _indec_closure([ar.pj_upper_star(u) for u in tp.universe], rng)
    x_pair = TorsionPairList(ar.c, xtor, xfree, xuni)
    return RestrictionReport(y_pair, x_pair, True, None)


def glue_torsion_pair(ar: AbelianRecollement, tp_y: TorsionPairList,
                      tp_x: TorsionPairList, universe: Sequence[Module],
                      rng=None) -> TorsionPairList:
    """Glue torsion pairs on the two sides to one on the parent side.

    Members of the parent universe are filtered by the glued-class
    descriptions: torsion iff ``pi^*`` lands in add(T_Y) and ``pj^*`` in
    add(T_X); free iff ``pi^!`` lands in add(F_Y) and ``pj^*`` in add(F_X).
    The result is validated and compatibility-checked rather than assumed.
    """
    tor: List[Module] = []
    fre: List[Module] = []
    for u in universe:
        pjs = ar.pj_upper_star(u)
        if (in_add(ar.pi_upper_star(u), tp_y.torsion, rng)
                and in_add(pjs, tp_x.torsion, rng)):
            tor.append(u)
            continue
        if (in_add(ar.pi_upper_shriek(u), tp_y.free, rng)
                and in_add(pjs, tp_x.free, rng)):
            fre.append(u)
    tp = TorsionPairList(ar.algebra, tor, fre, list(universe))
    report = validate_torsion_pair(tp, rng)
    if not report.ok:
        raise HeartsError(
            "glued membership filter is not a torsion pair on the universe: "
            + "; ".join(report.failures))
    for t in tor:
        back = ar.pj_lower_shriek(ar.pj_upper_star(t))
        if not in_add(back, tor, rng):
            raise HeartsError("glued torsion class is not pj_! pj^*-stable")
    return tp


# ---------------------------------------------------------------------------
# HRS-tilt membership and the glueing comparison
# ---------------------------------------------------------------------------


AnyComplexLike = Union[Complex, GenComplex]


def _as_plain_complex(x: AnyComplexLike) -> Complex:
    if isinstance(x, GenComplex):
        return x.realize().complex
    return x


def hrs_membership(tp: TorsionPairList, x: AnyComplexLike, side: str,
                   rng=None) -> bool:
    """Aisle membership for the tilt of the standard t-structure at ``tp``.

    ``leq0``: no cohomology above degree 0 and ``H^0`` entirely torsion.
    ``geq0``: no cohomology below degree -1, ``H^{-1}`` torsion-free and in
    the additive closure of the free generators.
    """
    xc = _as_plain_complex(x)
    dims = xc.cohomology_dims()
    if side == "leq0":
        if any(k > 0 for k in dims):
            return False
        h0 = xc.cohomology_at(0)
        return torsion_trace(tp, h0).quotient.is_zero()
    if side == "geq0":
        if any(k < -1 for k in dims):
            return False
        hm1 = xc.cohomology_at(-1)
        if not torsion_trace(tp, hm1).trace.is_zero():
            return False
        return in_add(hm1, tp.free, rng)
    raise ValueError(f"side must be 'leq0' or 'geq0', got {side!r}")


@dataclass
class GluedTiltReport:
    glued: TorsionPairList
    checked: int
    mismatches: List[Tuple[int, str]]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def glued_hrs_equals_hrs_of_glued(
        ar: AbelianRecollement, tp_y: TorsionPairList, tp_x: TorsionPairList,
        probes: Sequence[AnyComplexLike], universe: Sequence[Module],
        rng=None) -> GluedTiltReport:
    """Check that tilting at the glued pair equals glueing the tilts.

    For each probe the membership in the tilt at the glued torsion pair is
    compared against the glued-aisle description: ``i^*`` (resp. ``i^!``)
    lands in the Y-side tilt and ``j^*`` in the X-side tilt.
    """
    glued = glue_torsion_pair(ar, tp_y, tp_x, universe, rng)
    mismatches: List[Tuple[int, str]] = []
    checked = 0
    for idx, probe in enumerate(probes):
        zc = _as_plain_complex(probe)
        jz = ar.rec.j_upper_star(zc)
        for side in ("leq0", "geq0"):
            checked += 1
            lhs = hrs_membership(glued, zc, side, rng)
            if side == "leq0":
                yimg = ar.rec.i_upper_star_of(zc).realize().complex
            else:
                yimg = ar.rec.i_upper_shriek_of(zc).realize().complex
            rhs = (hrs_membership(tp_y, yimg, side, rng)
                   and hrs_membership(tp_x, jz, side, rng))
            if lhs != rhs:
                mismatches.append((idx, side))
    return GluedTiltReport(glued, checked, mismatches)


# ---------------------------------------------------------------------------
# mutation torsion pairs
# ---------------------------------------------------------------------------


@dataclass
class MutationCompatReport:
    case: int
    compatible: bool
    glued_simple: Module
    image: Optional[Module]
    witness: Optional[Module]
    x_restriction: Tuple[str, str]
    y_restriction: Tuple[str, str]


def mutation_pair_compat_prop68(ar: AbelianRecollement, case: int,
                                s: Module, rng=None) -> MutationCompatReport:
    """Compatibility of the four simple-generated mutation torsion pairs.

    ``case`` selects which class is generated by a simple:

    1. torsion class ``add(pi_* s)`` for a simple over the quotient algebra
    2. torsion-free class ``add(pi_* s)`` likewise
    3. torsion class ``add(j_!* s)`` for a simple over the corner algebra
    4. torsion-free class ``add(j_!* s)`` likewise

    Cases 1 and 2 are always compatible.  Case 3 is compatible iff
    ``pj_! s`` is itself simple (the witness on failure is the kernel of the
    epi ``pj_! s -> j_!* s``); case 4 iff ``pj_* s`` is simple (witness: the
    cokernel of the mono ``j_!* s -> pj_* s``).  Simplicity over these basic
    algebras is exactly "dimension vector is a unit vector".
    """
    if s.total_dim() != 1:
        raise HeartsError("the generating module must be simple (1-dimensional)")
    if case in (1, 2):
        glued = ar.pi_lower_star(s)
        if case == 1:
            x_restriction = ("0", "all")
            y_restriction = ("add(s)", "perp")
        else:
            x_restriction = ("all", "0")
            y_restriction = ("perp", "add(s)")
        return MutationCompatReport(case, True, glued, None, None,
                                    x_restriction, y_restriction)
    if case in (3, 4):
        data = ar.j_intermediate_data(s)
        if case == 3:
            img = data.tensor
            ok = img.total_dim() == 1
            witness = None if ok else kernel(data.theta)[0]
            x_restriction = ("add(s)", "perp")
            y_restriction = ("0", "all")
        else:
            img = data.hom
            ok = img.total_dim() == 1
            witness = None if ok else cokernel(data.incl)[0]
            x_restriction = ("perp", "add(s)")
            y_restriction = ("all", "0")
        return MutationCompatReport(case, ok, data.module, img, witness,
                                    x_restriction, y_restriction)
    raise ValueError(f"case must be 1, 2, 3 or 4, got {case!r}")


# ---------------------------------------------------------------------------
# exactness reports
# ---------------------------------------------------------------------------


def _is_ses(f: ModuleMap, g: ModuleMap) -> bool:
    """Whether ``0 -> source(f) -> middle -> target(g) -> 0`` is exact."""
    if not (g @ f).is_zero():
        return False
    rf, rg = _map_rank(f), _map_rank(g)
    return (rf == f.source.total_dim()
            and rg == g.target.total_dim()
            and rf + rg == f.target.total_dim())


def exact_image_ok(ar: AbelianRecollement, functor: str, f: ModuleMap,
                   g: ModuleMap) -> bool:
    """Apply an exact induced functor to a short exact sequence (given by its
    two maps) and confirm the image sequence is exact."""
    if functor == "pi_*":
        return _is_ses(ar.pi_lower_star_map(f), ar.pi_lower_star_map(g))
    if functor == "pj^*":
        return _is_ses(ar.pj_upper_star_map(f), ar.pj_upper_star_map(g))
    raise ValueError(f"exact functors are 'pi_*' and 'pj^*', got {functor!r}")


@dataclass
class FourTermSequenceReport:
    """Exactness data for a four-term sequence built from a (co)unit.

    For the counit sequence the terms are
    ``0 -> end_term -> pj_! pj^* m -> m -> pi_* pi^* m -> 0``;
    for the unit sequence
    ``0 -> pi_* pi^! m -> m -> pj_* pj^* m -> end_term -> 0``.
    ``end_term_matches_derived`` compares the outer term against the
    inflation of the predicted cohomology of the derived ``i^*`` resp.
    ``i^!`` of the stalk.
    """

    end_term: Module
    inner_map: ModuleMap
    outer_map: ModuleMap
    composite_zero: bool
    exact_middle: bool
    outer_exact: bool
    end_term_matches_derived: bool

    @property
    def ok(self) -> bool:
        return (self.composite_zero and self.exact_middle and self.outer_exact
                and self.end_term_matches_derived)


def counit_sequence_report(ar: AbelianRecollement, m: Module,
                           rng=None) -> FourTermSequenceReport:
    """The four-term sequence ``0 -> K -> pj_! pj^* m -> m -> pi_* pi^* m -> 0``
    with ``K`` identified as the inflated ``H^{-1}`` of the derived ``i^*``."""
    eps = ar.counit_pj(m)
    bq, epi = ar.pi_upper_star_data(m)
    k, _ = kernel(eps)
    composite_zero = (epi @ eps).is_zero()
    exact_middle = (composite_zero
                    and _map_rank(eps) == m.total_dim() - bq.total_dim())
    outer_exact = _map_rank(epi) == bq.total_dim()
    der = ar.rec.i_upper_star_of(Complex.stalk(m))
    hmod = der.realize().complex.cohomology_at(-1)
    end_ok = modules_isomorphic(k, ar.pi_lower_star(hmod), rng)
    return FourTermSequenceReport(k, eps, epi, composite_zero, exact_middle,
                                  outer_exact, end_ok)


def unit_sequence_report(ar: AbelianRecollement, m: Module,
                         rng=None) -> FourTermSequenceReport:
    """The four-term sequence ``0 -> pi_* pi^! m -> m -> pj_* pj^* m -> Q -> 0``
    with ``Q`` identified as the inflated ``H^{1}`` of the derived ``i^!``."""
    bsub, incl = ar.pi_upper_shriek_data(m)
    eta = ar.unit_pj(m)
    cok, _ = cokernel(eta)
    composite_zero = (eta @ incl).is_zero()
    exact_middle = (composite_zero
                    and m.total_dim() - _map_rank(eta) == bsub.total_dim())
    outer_exact = _map_rank(incl) == bsub.total_dim()
    der = ar.rec.i_upper_shriek_of(Complex.stalk(m))
    hmod = der.realize().complex.cohomology_at(1)
    end_ok = modules_isomorphic(cok, ar.pi_lower_star(hmod), rng)
    return FourTermSequenceReport(cok, eta, incl, composite_zero, exact_middle,
                                  outer_exact, end_ok)
