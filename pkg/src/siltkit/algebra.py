"""Finite-dimensional quiver algebras and their right modules.

Conventions (fixed once, used everywhere):

* paths compose right-to-left: the product ``b*a`` means "a then b", and an
  arrow ``a: u -> v`` satisfies ``a = e_v * a * e_u``;
* modules are right modules, presented per vertex; for an arrow ``a: u -> v``
  the action matrix maps the vertex-``v`` component into the vertex-``u``
  component (so ``e_1 A`` is the simple at vertex 1 on the quiver ``1 -> 2``);
* relations must be linear combinations of parallel paths of equal length
  ``>= 2`` (length-homogeneous), which keeps the degreewise basis closure
  sound.  The basis is built degree by degree and construction stops at the
  first empty degree, or fails once ``max_path_len`` is exceeded.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .fields import FieldSpec
from .linalg import Matrix, hstack, vstack


class SiltkitError(Exception):
    """Base class for domain errors."""


class NotFiniteDimensional(SiltkitError):
    pass


class ResolutionBoundExceeded(SiltkitError):
    pass


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class QuiverPresentation:
    """A quiver with admissible relations.

    Relations are tuples of ``(coefficient, path)`` where a path is a tuple of
    arrow names in application order (first arrow first); all paths in one
    relation must be parallel and of one common length >= 2.
    """

    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...]
    relations: Tuple[Tuple[Tuple[object, Tuple[str, ...]], ...], ...] = ()

    def __post_init__(self):
        names = [a.name for a in self.arrows]
        if len(set(names)) != len(names):
            raise ValueError("duplicate arrow names")
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError("duplicate vertex names")
        by_name = {a.name: a for a in self.arrows}
        for a in self.arrows:
            if a.source not in self.vertices or a.target not in self.vertices:
                raise ValueError(f"arrow {a.name} touches unknown vertex")
        for rel in self.relations:
            if not rel:
                raise ValueError("empty relation")
            sigs = set()
            for _, path in rel:
                if len(path) < 2:
                    raise ValueError("relation paths must have length >= 2")
                for i in range(len(path) - 1):
                    if by_name[path[i]].target != by_name[path[i + 1]].source:
                        raise ValueError(f"non-composable path {path}")
                sigs.add((by_name[path[0]].source, by_name[path[-1]].target, len(path)))
            if len(sigs) != 1:
                raise ValueError(
                    "relation paths must be parallel and of equal length "
                    "(length-homogeneous relations only)"
                )


def quiver(vertices: Sequence[str], arrows: Sequence[Tuple[str, str, str]],
           relations: Sequence = ()) -> QuiverPresentation:
    """Shorthand builder: arrows as (name, source, target) triples.

    Relations may be given structurally or as strings like ``"b*a"`` or
    ``"b*a - g*d"`` (concatenation right-to-left, so ``b*a`` is "a then b").
    """
    arrs = tuple(Arrow(*a) for a in arrows)
    rels = []
    for rel in relations:
        if isinstance(rel, str):
            rels.append(parse_relation(rel))
        else:
            rels.append(tuple(rel))
    return QuiverPresentation(tuple(vertices), arrs, tuple(rels))


def parse_relation(text: str):
    """Parse ``"2*b*a - g*d"`` into ((2, ('a','b')), (-1, ('d','g'))).

    Each ``*``-joined term lists arrows left-to-right in composition order
    (leftmost applied last); the returned paths are in application order.
    """
    terms = []
    for sign, chunk in _split_terms(text):
        coeff = sign
        path: List[str] = []
        for atom in chunk.split("*"):
            atom = atom.strip()
            if not atom:
                raise ValueError(f"empty factor in {text!r}")
            if atom.lstrip("-").isdigit():
                coeff *= int(atom)
            else:
                path.append(atom)
        if not path:
            raise ValueError(f"term without arrows in {text!r}")
        terms.append((coeff, tuple(reversed(path))))
    return tuple(terms)


def _split_terms(text: str):
    out = []
    sign = 1
    buf = ""
    for ch in text:
        if ch in "+-" and buf.strip():
            out.append((sign, buf))
            sign = 1 if ch == "+" else -1
            buf = ""
        elif ch in "+-" and not buf.strip():
            sign *= 1 if ch == "+" else -1
        else:
            buf += ch
    if buf.strip():
        out.append((sign, buf))
    if not out:
        raise ValueError(f"empty expression {text!r}")
    return out


# ---------------------------------------------------------------------------
# the algebra


class AlgebraBasis:
    """A basic finite-dimensional algebra with a fixed basis.

    Basis elements are tagged with a source vertex, a target vertex and a
    degree; degree-0 elements are exactly the vertex idempotents and every
    positive-degree element lies in the radical.  Multiplication is stored as
    a sparse structure-constant table.  Instances are immutable; derived data
    (projectives, opposite algebra, resolutions) is cached internally.
    """

    def __init__(self, field: FieldSpec, vertices: Tuple[str, ...],
                 src: List[str], tgt: List[str], deg: List[int], labels: List[str],
                 table: Dict[Tuple[int, int], Tuple[Tuple[int, object], ...]],
                 generators: Tuple[int, ...],
                 presentation: Optional[QuiverPresentation] = None,
                 paths: Optional[List[Tuple[str, ...]]] = None):
        self.field = field
        self.paths = paths
        self.vertices = tuple(vertices)
        self.src = list(src)
        self.tgt = list(tgt)
        self.deg = list(deg)
        self.labels = list(labels)
        self.table = table
        self.generators = tuple(generators)
        self.presentation = presentation
        self.dim = len(src)
        self.idem = {}
        for i, d in enumerate(deg):
            if d == 0:
                if src[i] != tgt[i]:
                    raise ValueError("idempotent with mismatched endpoints")
                self.idem[src[i]] = i
        if set(self.idem) != set(vertices):
            raise ValueError("need exactly one idempotent per vertex")
        self._cache: Dict = {}

    # -- caching ------------------------------------------------------

    def _cached(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    # -- basic structure ----------------------------------------------

    def basis_indices(self, target: Optional[str] = None, source: Optional[str] = None,
                      positive: bool = False) -> List[int]:
        out = []
        for i in range(self.dim):
            if target is not None and self.tgt[i] != target:
                continue
            if source is not None and self.src[i] != source:
                continue
            if positive and self.deg[i] == 0:
                continue
            out.append(i)
        return out

    def mul_indices(self, i: int, j: int) -> Tuple[Tuple[int, object], ...]:
        """Structure constants of ``b_i * b_j`` (b_j applied first)."""
        if self.src[i] != self.tgt[j]:
            return ()
        if self.deg[i] == 0:
            return ((j, self.field.one),)
        if self.deg[j] == 0:
            return ((i, self.field.one),)
        return self.table.get((i, j), ())

    def element(self, coeffs: Dict[int, object]) -> "AlgEl":
        return AlgEl(self, {i: self.field.coerce(c) for i, c in coeffs.items()
                            if self.field.coerce(c) != self.field.zero})

    def zero_el(self) -> "AlgEl":
        return AlgEl(self, {})

    def basis_el(self, i: int) -> "AlgEl":
        return AlgEl(self, {i: self.field.one})

    def idem_el(self, v: str) -> "AlgEl":
        return self.basis_el(self.idem[v])

    def el(self, expr: str) -> "AlgEl":
        """Parse a linear combination of paths, e.g. ``"2*b*a - e1"``.
        Arrow names compose right to left (the rightmost is applied first);
        idempotents can be named by their basis label."""
        by_label = self._cached(
            "label_index", lambda: {l: i for i, l in enumerate(self.labels)})
        out = self.zero_el()
        for coeff, path in parse_relation(expr):
            if len(path) == 1 and path[0] in by_label:
                term = self.basis_el(by_label[path[0]])
            else:
                term = None
                for name in path:
                    i = by_label.get(name)
                    if i is None or self.deg[i] != 1:
                        raise ValueError(f"unknown arrow {name!r} in {expr!r}")
                    term = self.basis_el(i) if term is None else self.basis_el(i) * term
                if term is None:
                    raise ValueError(f"empty path in {expr!r}")
            out = out + term.scale(coeff)
        return out

    def __repr__(self):
        return f"AlgebraBasis(dim={self.dim}, vertices={self.vertices}, field={self.field})"

    # -- derived objects ----------------------------------------------

    def opposite(self) -> "AlgebraBasis":
        def build():
            table = {}
            for (i, j), entry in self.table.items():
                table[(j, i)] = entry
            op = AlgebraBasis(self.field, self.vertices, list(self.tgt), list(self.src),
                              list(self.deg), [l + "^op" if self.deg[k] else l
                                               for k, l in enumerate(self.labels)],
                              table, self.generators, None)
            op._cache["opposite"] = self
            return op
        return self._cached("opposite", build)

    def projective_module(self, v: str) -> "Module":
        """The indecomposable projective ``e_v A``."""
        def build():
            bas = {w: self.basis_indices(target=v, source=w) for w in self.vertices}
            dims = {w: len(bas[w]) for w in self.vertices}
            acts = {}
            for c in range(self.dim):
                if self.deg[c] == 0:
                    continue
                sc, tc = self.src[c], self.tgt[c]
                m = Matrix.zeros(self.field, dims[sc], dims[tc])
                a = m._a.copy()
                row_pos = {b: r for r, b in enumerate(bas[sc])}
                for col, b in enumerate(bas[tc]):
                    for k, coeff in self.mul_indices(b, c):
                        a[row_pos[k], col] = self.field.coerce(a[row_pos[k], col] + coeff)
                acts[c] = Matrix(self.field, a)
            mod = Module(self, dims, acts)
            mod._proj_basis = bas  # basis element indices realising each coordinate
            return mod
        return self._cached(("proj", v), build)

    def simple_module(self, v: str) -> "Module":
        def build():
            dims = {w: (1 if w == v else 0) for w in self.vertices}
            acts = {c: Matrix.zeros(self.field, dims[self.src[c]], dims[self.tgt[c]])
                    for c in range(self.dim) if self.deg[c] > 0}
            return Module(self, dims, acts)
        return self._cached(("simple", v), build)

    def injective_module(self, v: str) -> "Module":
        """The indecomposable injective ``D(A e_v)`` as a right module."""
        def build():
            bas = {w: self.basis_indices(target=w, source=v) for w in self.vertices}
            dims = {w: len(bas[w]) for w in self.vertices}
            acts = {}
            for c in range(self.dim):
                if self.deg[c] == 0:
                    continue
                sc, tc = self.src[c], self.tgt[c]
                # ((f . c)(y) = f(c*y)) for y in e_{sc} A e_v, so the action is
                # the transpose of left multiplication by c
                lam = Matrix.zeros(self.field, len(bas[tc]), len(bas[sc]))
                a = lam._a.copy()
                row_pos = {b: r for r, b in enumerate(bas[tc])}
                for col, b in enumerate(bas[sc]):
                    for k, coeff in self.mul_indices(c, b):
                        a[row_pos[k], col] = self.field.coerce(a[row_pos[k], col] + coeff)
                acts[c] = Matrix(self.field, a).transpose()
            return Module(self, dims, acts)
        return self._cached(("inj", v), build)

    def hom_pairing_matrix(self) -> List[List[int]]:
        """Euler pairing on projectives: entry (v, w) is dim Hom(P_v, P_w) = dim e_w A e_v."""
        return [[len(self.basis_indices(target=w, source=v)) for w in self.vertices]
                for v in self.vertices]

    def is_radical_vector(self, coeffs: Dict[int, object]) -> bool:
        return all(self.deg[i] > 0 or c == self.field.zero for i, c in coeffs.items())

    def global_dimension(self, bound: int = 32) -> int:
        def build():
            gd = 0
            for v in self.vertices:
                res = min_projective_resolution(self.simple_module(v), max_len=bound)
                gd = max(gd, len(res.vertex_lists) - 1)
            return gd
        return self._cached(("gldim", bound), build)


class AlgEl:
    """An element of an :class:`AlgebraBasis`, as a sparse coefficient vector."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: AlgebraBasis, coeffs: Dict[int, object]):
        self.algebra = algebra
        self.coeffs = coeffs

    def __add__(self, other: "AlgEl") -> "AlgEl":
        f = self.algebra.field
        out = dict(self.coeffs)
        for i, c in other.coeffs.items():
            out[i] = f.coerce(out.get(i, f.zero) + c)
        return self.algebra.element(out)

    def __sub__(self, other: "AlgEl") -> "AlgEl":
        return self + other.scale(-1)

    def scale(self, c) -> "AlgEl":
        c = self.algebra.field.coerce(c)
        return self.algebra.element({i: x * c for i, x in self.coeffs.items()})

    def __neg__(self) -> "AlgEl":
        return self.scale(-1)

    def __mul__(self, other: "AlgEl") -> "AlgEl":
        """Product ``self * other`` = "other applied first"."""
        f = self.algebra.field
        out: Dict[int, object] = {}
        for i, ci in self.coeffs.items():
            for j, cj in other.coeffs.items():
                for k, s in self.algebra.mul_indices(i, j):
                    out[k] = f.coerce(out.get(k, f.zero) + ci * cj * s)
        return self.algebra.element(out)

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_radical(self) -> bool:
        return all(self.algebra.deg[i] > 0 for i in self.coeffs)

    def idem_coefficient(self, v: str):
        """Coefficient of the idempotent e_v."""
        return self.coeffs.get(self.algebra.idem[v], self.algebra.field.zero)

    def __eq__(self, other) -> bool:
        return (isinstance(other, AlgEl) and self.algebra is other.algebra
                and self.coeffs == other.coeffs)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in sorted(self.coeffs.items()):
            lab = self.algebra.labels[i]
            parts.append(lab if c == self.algebra.field.one else f"{c}*{lab}")
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# path algebra construction (degreewise closure)


def path_algebra(q: QuiverPresentation, fld: FieldSpec, max_path_len: int = 64) -> AlgebraBasis:
    """Basis and multiplication table of KQ/I by degreewise closure."""
    arrows = {a.name: a for a in q.arrows}
    arrow_list = list(q.arrows)

    src: List[str] = list(q.vertices)
    tgt: List[str] = list(q.vertices)
    deg: List[int] = [0] * len(q.vertices)
    labels: List[str] = [f"e{v}" for v in q.vertices]
    tuples: List[Tuple[str, ...]] = [()] * len(q.vertices)

    # step[(arrow_name, basis_idx)] -> ((basis_idx, coeff), ...): normal form of
    # the one-arrow extension "arrow after basis path"
    step: Dict[Tuple[str, int], Tuple[Tuple[int, object], ...]] = {}

    rel_by_deg: Dict[int, List] = {}
    for rel in q.relations:
        rel_by_deg.setdefault(len(rel[0][1]), []).append(rel)

    def reduce_path(path: Tuple[str, ...]) -> Dict[int, object]:
        """Normal form of a path (application order) over the current basis."""
        if not path:
            raise ValueError("empty path")
        a0 = arrows[path[0]]
        state: Dict[int, object] = {q.vertices.index(a0.source): fld.one}
        for name in path:
            nxt: Dict[int, object] = {}
            for b, coeff in state.items():
                for k, s in step.get((name, b), ()):
                    nxt[k] = fld.coerce(nxt.get(k, fld.zero) + coeff * s)
            state = nxt
            if not state:
                return {}
        return state

    prev_layer = list(range(len(q.vertices)))
    # right-extension closure of the relation ideal: path-combination form
    j_layer: List[Dict[Tuple[str, ...], object]] = []

    d = 0
    while prev_layer:
        d += 1
        if d > max_path_len:
            raise NotFiniteDimensional(
                f"no finite basis within path length {max_path_len}")
        # candidates: arrow after standard path of degree d-1
        cands: List[Tuple[str, int]] = []
        for a in arrow_list:
            for b in prev_layer:
                if tgt[b] == a.source:
                    cands.append((a.name, b))
        if not cands:
            break
        cand_pos = {c: k for k, c in enumerate(cands)}

        new_j: List[Dict[Tuple[str, ...], object]] = []
        for rel in rel_by_deg.get(d, []):
            comb: Dict[Tuple[str, ...], object] = {}
            for coeff, path in rel:
                comb[path] = fld.coerce(comb.get(path, fld.zero) + fld.coerce(coeff))
            new_j.append(comb)
        for comb in j_layer:
            for a in arrow_list:
                ext = {}
                for path, coeff in comb.items():
                    if arrows[path[0]].source == a.target:
                        ext[(a.name,) + path] = coeff
                if ext:
                    new_j.append(ext)
        j_layer = new_j

        # express ideal elements of this degree in candidate coordinates
        rows = []
        for comb in j_layer:
            vec = [fld.zero] * len(cands)
            for path, coeff in comb.items():
                head, last = path[:-1], path[-1]
                if head:
                    redux = reduce_path(head)
                else:
                    redux = {q.vertices.index(arrows[last].source): fld.one}
                for b, c2 in redux.items():
                    key = (last, b)
                    if key in cand_pos:
                        k = cand_pos[key]
                        vec[k] = fld.coerce(vec[k] + coeff * c2)
            rows.append(vec)

        if rows:
            mat = Matrix.from_rows(fld, rows, cols=len(cands))
            red, pivots = mat.rref()
        else:
            red, pivots = None, ()
        pivset = set(pivots)

        layer = []
        std_of_cand: Dict[int, int] = {}
        for k, (name, b) in enumerate(cands):
            if k in pivset:
                continue
            idx = len(src)
            a = arrows[name]
            src.append(src[b])
            tgt.append(a.target)
            deg.append(d)
            labels.append(f"{name}*{labels[b]}" if deg[b] else name)
            tuples.append(tuples[b] + (name,))
            std_of_cand[k] = idx
            layer.append(idx)
        # record normal forms of every candidate
        for k, (name, b) in enumerate(cands):
            if k in pivset:
                row = list(pivots).index(k)
                nf = []
                for k2 in range(len(cands)):
                    if k2 in pivset or red._a[row, k2] == fld.zero:
                        continue
                    nf.append((std_of_cand[k2], fld.coerce(-red._a[row, k2])))
                step[(name, b)] = tuple(nf)
            else:
                step[(name, b)] = ((std_of_cand[k], fld.one),)
        prev_layer = layer

    # multiplication table on the assembled basis
    table: Dict[Tuple[int, int], Tuple[Tuple[int, object], ...]] = {}
    by_tuple = {tuples[i]: i for i in range(len(src))}
    for i in range(len(src)):
        if deg[i] == 0:
            continue
        for j in range(len(src)):
            if deg[j] == 0 or src[i] != tgt[j]:
                continue
            nf = reduce_path(tuples[j] + tuples[i])
            entry = tuple((k, c) for k, c in sorted(nf.items()) if c != fld.zero)
            if entry:
                table[(i, j)] = entry

    gens = tuple(by_tuple[(a.name,)] for a in q.arrows if (a.name,) in by_tuple)
    return AlgebraBasis(fld, q.vertices, src, tgt, deg, labels, table, gens, q,
                        paths=tuples)


# ---------------------------------------------------------------------------
# modules


class Module:
    """A right module, stored as per-vertex dimensions plus the action of every
    positive-degree basis element (``act[b]: M_{t(b)} -> M_{s(b)}``)."""

    __slots__ = ("algebra", "dims", "act", "_proj_basis")

    def __init__(self, algebra: AlgebraBasis, dims: Dict[str, int],
                 act: Dict[int, Matrix]):
        self.algebra = algebra
        self.dims = {v: int(dims.get(v, 0)) for v in algebra.vertices}
        self.act = act
        self._proj_basis = None
        for b, m in act.items():
            want = (self.dims[algebra.src[b]], self.dims[algebra.tgt[b]])
            if m.shape != want:
                raise ValueError(
                    f"action matrix for {algebra.labels[b]} has shape {m.shape}, wanted {want}")
        for b in range(algebra.dim):
            if algebra.deg[b] > 0 and b not in act:
                raise ValueError(f"missing action for basis element {algebra.labels[b]}")

    # -- constructors --------------------------------------------------

    @staticmethod
    def from_arrow_matrices(algebra: AlgebraBasis, dims: Dict[str, int],
                            arrow_mats: Dict[str, Matrix]) -> "Module":
        """Build from matrices for the presented arrows, deriving all basis
        actions along each basis path and checking the defining relations."""
        if algebra.presentation is None:
            raise ValueError("algebra has no quiver presentation")
        q = algebra.presentation
        arrows = {a.name: a for a in q.arrows}
        full = {v: int(dims.get(v, 0)) for v in algebra.vertices}

        def path_matrix(path: Tuple[str, ...]) -> Matrix:
            # for the right action, m.(a_k...a_1) applies rho_{a_k} innermost,
            # so the composite matrix is rho_{a_1} @ ... @ rho_{a_k}
            a_first = arrows[path[0]]
            m = Matrix.identity(algebra.field, full[a_first.source])
            for name in path:
                m = m @ arrow_mats[name]
            return m

        for rel in q.relations:
            sig_path = rel[0][1]
            a0, aN = arrows[sig_path[0]], arrows[sig_path[-1]]
            acc = Matrix.zeros(algebra.field, full[a0.source], full[aN.target])
            for coeff, path in rel:
                acc = acc + path_matrix(path).scale(coeff)
            if not acc.is_zero():
                raise ValueError("arrow matrices do not satisfy the relations")

        # tuples of basis paths are reachable from the stored labels via the
        # presentation; recompute by composing arrows along each basis path
        act = {}
        for b in range(algebra.dim):
            if algebra.deg[b] == 0:
                continue
            path = _basis_tuple(algebra, b)
            act[b] = path_matrix(path)
        return Module(algebra, full, act)

    @staticmethod
    def zero(algebra: AlgebraBasis) -> "Module":
        dims = {v: 0 for v in algebra.vertices}
        act = {b: Matrix.zeros(algebra.field, 0, 0)
               for b in range(algebra.dim) if algebra.deg[b] > 0}
        return Module(algebra, dims, act)

    # -- structure -----------------------------------------------------

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def dim_vector(self) -> Tuple[int, ...]:
        return tuple(self.dims[v] for v in self.algebra.vertices)

    def is_zero(self) -> bool:
        return self.total_dim() == 0

    def action_of(self, el: AlgEl, source_vertex: str, target_vertex: str) -> Matrix:
        """Matrix of ``m -> m*el`` restricted to the (target_vertex -> source_vertex)
        block, for an element supported on ``e_t(..)e_s`` pairs."""
        out = Matrix.zeros(self.field, self.dims[source_vertex], self.dims[target_vertex])
        for b, c in el.coeffs.items():
            if self.algebra.src[b] != source_vertex or self.algebra.tgt[b] != target_vertex:
                continue
            if self.algebra.deg[b] == 0:
                out = out + Matrix.identity(self.field, self.dims[source_vertex]).scale(c)
            else:
                out = out + self.act[b].scale(c)
        return out

    def validate(self) -> None:
        """Check that the stored action respects the multiplication table."""
        alg = self.algebra
        for i in range(alg.dim):
            if alg.deg[i] == 0:
                continue
            for j in range(alg.dim):
                if alg.deg[j] == 0 or alg.src[i] != alg.tgt[j]:
                    continue
                lhs = Matrix.zeros(self.field, self.dims[alg.src[j]], self.dims[alg.tgt[i]])
                for k, c in alg.mul_indices(i, j):
                    lhs = lhs + self.act[k].scale(c)
                rhs = self.act[j] @ self.act[i]
                if lhs != rhs:
                    raise ValueError(
                        f"action incompatible with product {alg.labels[i]} * {alg.labels[j]}")

    def __repr__(self):
        return f"Module(dims={self.dims})"


def _basis_tuple(algebra: AlgebraBasis, b: int) -> Tuple[str, ...]:
    """The application-order arrow tuple of a basis path."""
    if algebra.paths is not None:
        return algebra.paths[b]
    return tuple(reversed(algebra.labels[b].split("*")))


class ModuleMap:
    """A homomorphism of right modules, stored per vertex."""

    __slots__ = ("source", "target", "mats")

    def __init__(self, source: Module, target: Module, mats: Dict[str, Matrix]):
        self.source = source
        self.target = target
        self.mats = {}
        for v in source.algebra.vertices:
            m = mats.get(v)
            if m is None:
                m = Matrix.zeros(source.field, target.dims[v], source.dims[v])
            if m.shape != (target.dims[v], source.dims[v]):
                raise ValueError(f"block at {v} has shape {m.shape}")
            self.mats[v] = m

    @staticmethod
    def zero(source: Module, target: Module) -> "ModuleMap":
        return ModuleMap(source, target, {})

    @staticmethod
    def identity(m: Module) -> "ModuleMap":
        return ModuleMap(m, m, {v: Matrix.identity(m.field, m.dims[v])
                                for v in m.algebra.vertices})

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        """Composition self after other."""
        if other.target is not self.source and other.target.dims != self.source.dims:
            raise ValueError("composition mismatch")
        return ModuleMap(other.source, self.target,
                         {v: self.mats[v] @ other.mats[v] for v in self.mats})

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target,
                         {v: self.mats[v] + other.mats[v] for v in self.mats})

    def __sub__(self, other: "ModuleMap") -> "ModuleMap":
        return ModuleMap(self.source, self.target,
                         {v: self.mats[v] - other.mats[v] for v in self.mats})

    def validate(self) -> None:
        """Check that the map commutes with every positive basis action."""
        alg = self.source.algebra
        for b in range(alg.dim):
            if alg.deg[b] == 0:
                continue
            s, t = alg.src[b], alg.tgt[b]
            if self.mats[s] @ self.source.act[b] != self.target.act[b] @ self.mats[t]:
                raise ValueError(
                    f"map does not commute with the action of {alg.labels[b]}")

    def scale(self, c) -> "ModuleMap":
        return ModuleMap(self.source, self.target,
                         {v: self.mats[v].scale(c) for v in self.mats})

    def __neg__(self) -> "ModuleMap":
        return self.scale(-1)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats.values())

    def check_linearity(self) -> None:
        """Verify commutation with the generator actions."""
        alg = self.source.algebra
        for g in alg.generators:
            s, t = alg.src[g], alg.tgt[g]
            lhs = self.mats[s] @ self.source.act[g]
            rhs = self.target.act[g] @ self.mats[t]
            if lhs != rhs:
                raise ValueError(f"not a module map at generator {alg.labels[g]}")

    def is_isomorphism(self) -> bool:
        return all(m.rows == m.cols and m.rank() == m.rows for m in self.mats.values())

    def inverse(self) -> "ModuleMap":
        if not self.is_isomorphism():
            raise ValueError("not invertible")
        return ModuleMap(self.target, self.source,
                         {v: self.mats[v].inverse() for v in self.mats})

    def __repr__(self):
        return f"ModuleMap({self.source.dims} -> {self.target.dims})"


# -- submodule / quotient machinery -----------------------------------------


def _restrict_action(mod: Module, incl: Dict[str, Matrix]) -> Dict[int, Matrix]:
    """Action matrices of the submodule spanned by the (full-column-rank)
    inclusion blocks, which must span an action-stable subspace."""
    alg = mod.algebra
    act = {}
    for b in range(alg.dim):
        if alg.deg[b] == 0:
            continue
        s, t = alg.src[b], alg.tgt[b]
        pushed = mod.act[b] @ incl[t]
        sol = incl[s].solve(pushed)
        if sol is None:
            raise ValueError("subspace is not action-stable")
        act[b] = sol
    return act


def submodule(mod: Module, vectors: Dict[str, Matrix]) -> Tuple[Module, ModuleMap]:
    """Submodule generated by the given per-vertex column spans: the span is
    closed under the action, then the action is restricted."""
    alg = mod.algebra
    span = {v: vectors.get(v, Matrix.zeros(mod.field, mod.dims[v], 0))
            for v in alg.vertices}
    span = {v: (m.col_basis() if m.cols else m) for v, m in span.items()}
    changed = True
    while changed:
        changed = False
        for b in range(alg.dim):
            if alg.deg[b] == 0:
                continue
            s, t = alg.src[b], alg.tgt[b]
            if span[t].cols == 0:
                continue
            img = mod.act[b] @ span[t]
            cand = hstack([span[s], img]) if span[s].cols else img
            nb = cand.col_basis()
            if nb.cols != span[s].cols:
                changed = True
                span[s] = nb
    incl = {v: span[v] for v in alg.vertices}
    dims = {v: incl[v].cols for v in alg.vertices}
    sub = Module(alg, dims, _restrict_action(mod, incl))
    return sub, ModuleMap(sub, mod, incl)


def kernel(f: ModuleMap) -> Tuple[Module, ModuleMap]:
    alg = f.source.algebra
    incl = {v: f.mats[v].kernel_basis() for v in alg.vertices}
    dims = {v: incl[v].cols for v in alg.vertices}
    ker = Module(alg, dims, _restrict_action(f.source, incl))
    return ker, ModuleMap(ker, f.source, incl)


def image(f: ModuleMap) -> Tuple[Module, ModuleMap]:
    alg = f.source.algebra
    incl = {v: f.mats[v].col_basis() for v in alg.vertices}
    dims = {v: incl[v].cols for v in alg.vertices}
    img = Module(alg, dims, _restrict_action(f.target, incl))
    return img, ModuleMap(img, f.target, incl)


def quotient_module(mod: Module, sub_incl: Dict[str, Matrix]) -> Tuple[Module, ModuleMap, Dict[str, Matrix]]:
    """Quotient by the action-stable subspace with the given basis columns.

    Returns (quotient, projection, section) where section picks representative
    vectors (a right inverse of the projection blocks).
    """
    alg = mod.algebra
    proj = {}
    sect = {}
    for v in alg.vertices:
        inc = sub_incl.get(v, Matrix.zeros(mod.field, mod.dims[v], 0))
        n, r = mod.dims[v], inc.cols
        _, pivots = inc.transpose().rref()
        pivset = set(pivots)
        comp_cols = [j for j in range(n) if j not in pivset][: n - r]
        ey = Matrix.zeros(mod.field, n, len(comp_cols))
        a = ey._a.copy()
        for k, j in enumerate(comp_cols):
            a[j, k] = mod.field.one
        ey = Matrix(mod.field, a)
        basis = hstack([inc, ey]) if r else ey
        binv = basis.inverse()
        if binv is None:
            raise ValueError("complement construction failed (subspace not independent?)")
        proj[v] = binv.take_rows(range(r, n))
        sect[v] = ey
    act = {}
    for b in range(alg.dim):
        if alg.deg[b] == 0:
            continue
        s, t = alg.src[b], alg.tgt[b]
        act[b] = proj[s] @ mod.act[b] @ sect[t]
    dims = {v: proj[v].rows for v in alg.vertices}
    quo = Module(alg, dims, act)
    return quo, ModuleMap(mod, quo, proj), sect


def cokernel(f: ModuleMap) -> Tuple[Module, ModuleMap]:
    _, incl = image(f)
    quo, proj, _ = quotient_module(f.target, incl.mats)
    return quo, proj


def direct_sum(mods: Sequence[Module]) -> Tuple[Module, List[ModuleMap], List[ModuleMap]]:
    if not mods:
        raise ValueError("direct sum of nothing")
    alg = mods[0].algebra
    fld = mods[0].field
    dims = {v: sum(m.dims[v] for m in mods) for v in alg.vertices}
    act = {}
    for b in range(alg.dim):
        if alg.deg[b] == 0:
            continue
        s, t = alg.src[b], alg.tgt[b]
        out = Matrix.zeros(fld, dims[s], dims[t])
        a = out._a.copy()
        ro = co = 0
        for m in mods:
            blk = m.act[b]
            a[ro:ro + blk.rows, co:co + blk.cols] = blk._a
            ro += m.dims[s]
            co += m.dims[t]
        act[b] = Matrix(fld, a)
    total = Module(alg, dims, act)
    injs, projs = [], []
    offs = {v: 0 for v in alg.vertices}
    for m in mods:
        inj = {}
        prj = {}
        for v in alg.vertices:
            inc = Matrix.zeros(fld, dims[v], m.dims[v])
            a = inc._a.copy()
            for k in range(m.dims[v]):
                a[offs[v] + k, k] = fld.one
            inj[v] = Matrix(fld, a)
            prj[v] = inj[v].transpose()
        injs.append(ModuleMap(m, total, inj))
        projs.append(ModuleMap(total, m, prj))
        for v in alg.vertices:
            offs[v] += m.dims[v]
    return total, injs, projs


# -- hom spaces --------------------------------------------------------------


def hom_modules(m: Module, n: Module) -> List[ModuleMap]:
    """A basis of Hom_A(m, n), via the kernel of the commutation constraints."""
    alg = m.algebra
    fld = m.field
    verts = list(alg.vertices)
    sizes = [n.dims[v] * m.dims[v] for v in verts]
    offsets = {}
    total = 0
    for v, s in zip(verts, sizes):
        offsets[v] = total
        total += s
    if total == 0:
        return []
    blocks = []
    for g in alg.generators:
        s, t = alg.src[g], alg.tgt[g]
        rows = n.dims[s] * m.dims[t]
        if rows == 0:
            continue
        row = Matrix.zeros(fld, rows, total)
        a = row._a.copy()
        # f_s @ act_m[g]  (unknown f_s), minus act_n[g] @ f_t (unknown f_t)
        t1 = _kron_right(fld, n.dims[s], m.act[g])
        a[:, offsets[s]:offsets[s] + sizes[verts.index(s)]] = t1._a
        t2 = _kron_left(fld, n.act[g], m.dims[t])
        a[:, offsets[t]:offsets[t] + sizes[verts.index(t)]] = (
            a[:, offsets[t]:offsets[t] + sizes[verts.index(t)]] - t2._a)
        if fld.kind == "prime":
            a = a % fld.p
        blocks.append(Matrix(fld, a))
    if blocks:
        system = vstack(blocks)
        basis = system.kernel_basis()
    else:
        basis = Matrix.identity(fld, total)
    out = []
    for c in range(basis.cols):
        vecs = basis.col(c)
        mats = {}
        for vi, v in enumerate(verts):
            blockv = vecs.take_rows(range(offsets[v], offsets[v] + sizes[vi]))
            arr = blockv._a.reshape(n.dims[v], m.dims[v])
            mats[v] = Matrix(fld, arr.copy())
        out.append(ModuleMap(m, n, mats))
    return out


def _kron_right(fld: FieldSpec, left_dim: int, b: Matrix) -> Matrix:
    """Matrix of X -> X @ b on row-major vectorised X with ``left_dim`` rows."""
    eye = np.eye(left_dim, dtype=b._a.dtype if fld.fast else object)
    if not fld.fast:
        eye = np.array([[fld.one if i == j else fld.zero for j in range(left_dim)]
                        for i in range(left_dim)], dtype=object)
        if left_dim == 0:
            eye = np.zeros((0, 0), dtype=object)
    out = np.kron(eye, b.transpose()._a)
    if fld.kind == "prime":
        out = out % fld.p
    return Matrix(fld, out)


def _kron_left(fld: FieldSpec, a: Matrix, right_dim: int) -> Matrix:
    """Matrix of X -> a @ X on row-major vectorised X with ``right_dim`` columns."""
    eye = np.eye(right_dim, dtype=a._a.dtype if fld.fast else object)
    if not fld.fast:
        eye = np.array([[fld.one if i == j else fld.zero for j in range(right_dim)]
                        for i in range(right_dim)], dtype=object)
        if right_dim == 0:
            eye = np.zeros((0, 0), dtype=object)
    out = np.kron(a._a, eye)
    if fld.kind == "prime":
        out = out % fld.p
    return Matrix(fld, out)


# -- radical, top, socle -----------------------------------------------------


def radical_submodule(m: Module) -> Tuple[Module, ModuleMap]:
    alg = m.algebra
    vecs = {v: Matrix.zeros(m.field, m.dims[v], 0) for v in alg.vertices}
    for b in range(alg.dim):
        if alg.deg[b] == 0:
            continue
        s = alg.src[b]
        img = m.act[b]
        if img.cols:
            vecs[s] = hstack([vecs[s], img])
    incl = {v: vecs[v].col_basis() if vecs[v].cols else vecs[v] for v in alg.vertices}
    dims = {v: incl[v].cols for v in alg.vertices}
    rad = Module(alg, dims, _restrict_action(m, incl))
    return rad, ModuleMap(rad, m, incl)


def top_dims(m: Module) -> Dict[str, int]:
    rad, _ = radical_submodule(m)
    return {v: m.dims[v] - rad.dims[v] for v in m.algebra.vertices}


def socle_dims(m: Module) -> Dict[str, int]:
    alg = m.algebra
    out = {}
    for v in alg.vertices:
        mats = [m.act[b] for b in range(alg.dim)
                if alg.deg[b] > 0 and alg.tgt[b] == v and m.act[b].rows]
        if not mats:
            out[v] = m.dims[v]
        else:
            out[v] = vstack(mats).kernel_basis().cols
    return out


# -- free modules and resolutions -------------------------------------------


class FreeModule:
    """``⊕ e_{v_i} A`` with remembered generator positions and coordinate basis."""

    def __init__(self, algebra: AlgebraBasis, gen_vertices: Sequence[str]):
        self.algebra = algebra
        self.gen_vertices = list(gen_vertices)
        # coordinates at vertex w: pairs (generator slot, basis element b) with
        # t(b) = v_slot and s(b) = w
        self.coords: Dict[str, List[Tuple[int, int]]] = {w: [] for w in algebra.vertices}
        for slot, v in enumerate(self.gen_vertices):
            for w in algebra.vertices:
                for b in algebra.basis_indices(target=v, source=w):
                    self.coords[w].append((slot, b))
        dims = {w: len(self.coords[w]) for w in algebra.vertices}
        act = {}
        fld = algebra.field
        pos = {w: {c: k for k, c in enumerate(self.coords[w])} for w in algebra.vertices}
        for c in range(algebra.dim):
            if algebra.deg[c] == 0:
                continue
            s, t = algebra.src[c], algebra.tgt[c]
            mat = Matrix.zeros(fld, dims[s], dims[t])
            a = mat._a.copy()
            for col, (slot, b) in enumerate(self.coords[t]):
                for k, coeff in algebra.mul_indices(b, c):
                    a[pos[s][(slot, k)], col] = fld.coerce(
                        a[pos[s][(slot, k)], col] + coeff)
            act[c] = Matrix(fld, a)
        self.module = Module(algebra, dims, act)

    def generator_vector(self, slot: int) -> Tuple[str, Matrix]:
        """The generator e_{v_slot} as a coordinate column at its vertex."""
        v = self.gen_vertices[slot]
        col = Matrix.zeros(self.algebra.field, self.module.dims[v], 1)
        a = col._a.copy()
        idx = self.coords[v].index((slot, self.algebra.idem[v]))
        a[idx, 0] = self.algebra.field.one
        return v, Matrix(self.algebra.field, a)

    def map_from_entries(self, target: "FreeModule", entries: List[List[AlgEl]]) -> ModuleMap:
        """Module map to another free module given by an algebra-entry matrix:
        entry (i, j) in e_{w_i} A e_{v_j} acts by left multiplication."""
        alg = self.algebra
        fld = alg.field
        mats = {}
        for w in alg.vertices:
            m = Matrix.zeros(fld, target.module.dims[w], self.module.dims[w])
            a = m._a.copy()
            tpos = {c: k for k, c in enumerate(target.coords[w])}
            for col, (slot, b) in enumerate(self.coords[w]):
                for i, row_entries in enumerate(entries):
                    el = row_entries[slot]
                    # image of coordinate (slot, b): entry * b summed into row slots
                    for bi, coeff in el.coeffs.items():
                        for k, c2 in alg.mul_indices(bi, b):
                            a[tpos[(i, k)], col] = fld.coerce(
                                a[tpos[(i, k)], col] + coeff * c2)
            mats[w] = Matrix(fld, a)
        return ModuleMap(self.module, target.module, mats)

    def map_to(self, target: Module, images: List[Tuple[str, Matrix]]) -> ModuleMap:
        """Module map determined by generator images (vertex, coordinate column)."""
        alg = self.algebra
        fld = alg.field
        mats = {}
        for w in alg.vertices:
            m = Matrix.zeros(fld, target.dims[w], self.module.dims[w])
            a = m._a.copy()
            for col, (slot, b) in enumerate(self.coords[w]):
                v, vec = images[slot]
                img = target.action_of(alg.basis_el(b), w, v) @ vec if alg.deg[b] > 0 else (
                    vec if w == v else Matrix.zeros(fld, target.dims[w], 1))
                a[:, col] = img._a[:, 0]
            mats[w] = Matrix(fld, a)
        return ModuleMap(self.module, target, mats)

    def entries_of_map(self, target: "FreeModule", f: ModuleMap) -> List[List[AlgEl]]:
        """Read a map between free modules back as an algebra-entry matrix."""
        alg = self.algebra
        rows = len(target.gen_vertices)
        out = [[alg.zero_el() for _ in self.gen_vertices] for _ in range(rows)]
        for j in range(len(self.gen_vertices)):
            v, vec = self.generator_vector(j)
            img = f.mats[v] @ vec
            for k, (slot, b) in enumerate(target.coords[v]):
                c = img._a[k, 0]
                if c != alg.field.zero:
                    out[slot][j] = out[slot][j] + alg.basis_el(b).scale(c)
        return out


def projective_cover(m: Module) -> Tuple[FreeModule, ModuleMap]:
    """Projective cover ``⊕ P_v^{t_v} -> m`` with ``t_v = dim top(m)_v``."""
    alg = m.algebra
    fld = m.field
    rad, incl = radical_submodule(m)
    gen_vertices = []
    images = []
    for v in alg.vertices:
        if m.dims[v] == 0:
            continue
        radv = incl.mats[v]
        # complement of the radical inside m_v: coordinates not among pivots of radv^T
        _, pivots = radv.transpose().rref()
        pivset = set(pivots)
        comp = [j for j in range(m.dims[v]) if j not in pivset][: m.dims[v] - radv.cols]
        for j in comp:
            col = Matrix.zeros(fld, m.dims[v], 1)
            a = col._a.copy()
            a[j, 0] = fld.one
            gen_vertices.append(v)
            images.append((v, Matrix(fld, a)))
    free = FreeModule(alg, gen_vertices)
    cover = free.map_to(m, images)
    # Nakayama: the cover must be onto
    for v in alg.vertices:
        if cover.mats[v].rank() != m.dims[v]:
            raise RuntimeError("projective cover failed to be surjective")
    return free, cover


@dataclass
class ProjResolution:
    """Minimal projective resolution ``... -> P_1 -> P_0 -> m -> 0``.

    ``vertex_lists[k]`` lists the projective generators of ``P_k`` and
    ``entry_maps[k]`` is the algebra-entry matrix of ``P_{k+1} -> P_k``.
    """

    module: Module
    vertex_lists: List[List[str]]
    entry_maps: List[List[List[AlgEl]]]
    frees: List[FreeModule]
    augmentation: ModuleMap


def min_projective_resolution(m: Module, max_len: int = 32) -> ProjResolution:
    if m.is_zero():
        free = FreeModule(m.algebra, [])
        return ProjResolution(m, [[]], [], [free], ModuleMap.zero(free.module, m))
    free0, cover = projective_cover(m)
    vertex_lists = [list(free0.gen_vertices)]
    frees = [free0]
    entry_maps: List[List[List[AlgEl]]] = []
    cur_cover = cover
    cur_free = free0
    for _ in range(max_len + 1):
        ker, incl = kernel(cur_cover)
        if ker.is_zero():
            return ProjResolution(m, vertex_lists, entry_maps, frees, cover)
        nxt, nxt_cover = projective_cover(ker)
        comp = incl @ nxt_cover  # map nxt.module -> cur_free.module
        entry_maps.append(nxt.entries_of_map(cur_free, comp))
        vertex_lists.append(list(nxt.gen_vertices))
        frees.append(nxt)
        cur_cover = nxt_cover
        cur_free = nxt
    raise ResolutionBoundExceeded(f"projective resolution exceeds length {max_len}")


def projective_dimension(m: Module, max_len: int = 32) -> int:
    return len(min_projective_resolution(m, max_len).vertex_lists) - 1


def ext_dims(m: Module, n: Module, up_to: int, max_len: int = 32) -> List[int]:
    """Dimensions of Ext^k(m, n) for k = 0..up_to via the minimal resolution."""
    res = min_projective_resolution(m, max_len=max(max_len, up_to + 2))
    spaces = []  # Hom(P_k, n) as coordinate spaces ⊕ n e_{v}
    for verts in res.vertex_lists:
        spaces.append(sum(n.dims[v] for v in verts))
    diffs = []
    for k, entries in enumerate(res.entry_maps):
        # precomposition with d: Hom(P_k, n) -> Hom(P_{k+1}, n); the entry in
        # position (target slot j, source slot i) acts on the value at gen j
        rows_v = res.vertex_lists[k + 1]
        cols_v = res.vertex_lists[k]
        mat = Matrix.zeros(n.field, spaces[k + 1], spaces[k])
        a = mat._a.copy()
        roff = 0
        for i, vi in enumerate(rows_v):
            coff = 0
            for j, vj in enumerate(cols_v):
                blk = n.action_of(entries[j][i], vi, vj)
                a[roff:roff + n.dims[vi], coff:coff + n.dims[vj]] = blk._a
                coff += n.dims[vj]
            roff += n.dims[vi]
        diffs.append(Matrix(n.field, a))
    out = []
    for k in range(up_to + 1):
        if k >= len(res.vertex_lists):
            out.append(0)
            continue
        dk = diffs[k] if k < len(diffs) else None
        zdim = dk.kernel_basis().cols if dk is not None else spaces[k]
        bdim = diffs[k - 1].rank() if k >= 1 and k - 1 < len(diffs) else 0
        out.append(zdim - bdim)
    return out


# -- duality -----------------------------------------------------------------


def dual_module(m: Module) -> Module:
    """``D(m) = Hom_K(m, K)`` as a right module over the opposite algebra."""
    op = m.algebra.opposite()
    dims = dict(m.dims)
    act = {}
    for b in range(op.dim):
        if op.deg[b] == 0:
            continue
        act[b] = m.act[b].transpose()
    return Module(op, dims, act)


def dual_map(f: ModuleMap) -> ModuleMap:
    return ModuleMap(dual_module(f.target), dual_module(f.source),
                     {v: f.mats[v].transpose() for v in f.mats})


# -- idempotent slices -------------------------------------------------------


@dataclass
class SliceData:
    """The two algebras attached to an idempotent ``e = sum of chosen vertex
    idempotents``: ``sub = eAe`` and ``quot = A/AeA``."""

    parent: AlgebraBasis
    chosen: Tuple[str, ...]
    sub: AlgebraBasis
    sub_index: Dict[int, int]          # parent basis index -> eAe basis index
    sub_parent_index: List[int]        # eAe basis index -> parent basis index
    quot: AlgebraBasis
    quot_class: Dict[int, Dict[int, object]]  # parent idx -> coeffs over quot basis
    quot_parent_rep: List[int]         # quot basis index -> representing parent index

    def reduce_to_quot(self, el: AlgEl) -> AlgEl:
        out: Dict[int, object] = {}
        fld = self.quot.field
        for i, c in el.coeffs.items():
            for k, c2 in self.quot_class.get(i, {}).items():
                out[k] = fld.coerce(out.get(k, fld.zero) + c * c2)
        return self.quot.element(out)

    def embed_sub(self, el: AlgEl) -> AlgEl:
        """View an eAe element inside the parent algebra."""
        return self.parent.element({self.sub_parent_index[i]: c
                                    for i, c in el.coeffs.items()})

    def restrict_to_sub(self, el: AlgEl) -> AlgEl:
        """View a parent element supported on eAe inside the subalgebra."""
        out = {}
        for i, c in el.coeffs.items():
            if i not in self.sub_index:
                raise ValueError("element not supported on eAe")
            out[self.sub_index[i]] = c
        return self.sub.element(out)


def idempotent_slices(algebra: AlgebraBasis, chosen: Sequence[str]) -> SliceData:
    chosen = tuple(chosen)
    for v in chosen:
        if v not in algebra.vertices:
            raise ValueError(f"unknown vertex {v}")
    if len(set(chosen)) != len(chosen):
        raise ValueError("duplicate vertices in idempotent")
    fld = algebra.field

    # --- eAe ---
    kept = [i for i in range(algebra.dim)
            if algebra.src[i] in chosen and algebra.tgt[i] in chosen]
    sub_index = {b: k for k, b in enumerate(kept)}
    table = {}
    for i in kept:
        if algebra.deg[i] == 0:
            continue
        for j in kept:
            if algebra.deg[j] == 0 or algebra.src[i] != algebra.tgt[j]:
                continue
            entry = []
            for k, c in algebra.mul_indices(i, j):
                # products of eAe elements stay in eAe
                entry.append((sub_index[k], c))
            if entry:
                table[(sub_index[i], sub_index[j])] = tuple(entry)
    # generators: positive-degree kept elements outside (eJe)^2
    pos = [b for b in kept if algebra.deg[b] > 0]
    pos_pos = {b: k for k, b in enumerate(pos)}
    rows = []
    for i in pos:
        for j in pos:
            if algebra.src[i] != algebra.tgt[j]:
                continue
            vec = [fld.zero] * len(pos)
            for k, c in algebra.mul_indices(i, j):
                vec[pos_pos[k]] = fld.coerce(vec[pos_pos[k]] + c)
            rows.append(vec)
    if rows:
        _, pivots = Matrix.from_rows(fld, rows, cols=len(pos)).rref()
    else:
        pivots = ()
    pivset = set(pivots)
    sub_gens = tuple(sub_index[b] for k, b in enumerate(pos) if k not in pivset)
    sub = AlgebraBasis(fld, chosen,
                       [algebra.src[b] for b in kept], [algebra.tgt[b] for b in kept],
                       [algebra.deg[b] for b in kept], [algebra.labels[b] for b in kept],
                       table, sub_gens, None)

    # --- A/AeA ---
    others = tuple(v for v in algebra.vertices if v not in chosen)
    span_rows = []
    for i in range(algebra.dim):
        if algebra.src[i] in chosen or algebra.tgt[i] in chosen:
            vec = [fld.zero] * algebra.dim
            vec[i] = fld.one
            span_rows.append(vec)
    for i in range(algebra.dim):
        for j in range(algebra.dim):
            if algebra.src[i] != algebra.tgt[j] or algebra.src[i] not in chosen:
                continue
            if algebra.src[j] in chosen or algebra.tgt[i] in chosen:
                continue  # already covered by unit vectors
            vec = [fld.zero] * algebra.dim
            nonzero = False
            for k, c in algebra.mul_indices(i, j):
                vec[k] = fld.coerce(vec[k] + c)
                nonzero = True
            if nonzero:
                span_rows.append(vec)
    if span_rows:
        red, pivots = Matrix.from_rows(fld, span_rows, cols=algebra.dim).rref()
    else:
        red, pivots = None, ()
    pivset = set(pivots)
    surviving = [i for i in range(algebra.dim) if i not in pivset]
    quot_pos = {b: k for k, b in enumerate(surviving)}
    quot_class: Dict[int, Dict[int, object]] = {}
    for i in surviving:
        quot_class[i] = {quot_pos[i]: fld.one}
    for row, pc in enumerate(pivots):
        cls = {}
        for j in surviving:
            c = red._a[row, j]
            if c != fld.zero:
                cls[quot_pos[j]] = fld.coerce(-c)
        quot_class[pc] = cls
    qtable = {}
    for i in surviving:
        if algebra.deg[i] == 0:
            continue
        for j in surviving:
            if algebra.deg[j] == 0 or algebra.src[i] != algebra.tgt[j]:
                continue
            acc: Dict[int, object] = {}
            for k, c in algebra.mul_indices(i, j):
                for k2, c2 in quot_class.get(k, {}).items():
                    acc[k2] = fld.coerce(acc.get(k2, fld.zero) + c * c2)
            entry = tuple((k2, c) for k2, c in sorted(acc.items()) if c != fld.zero)
            if entry:
                qtable[(quot_pos[i], quot_pos[j])] = entry
    qgens = []
    for g in algebra.generators:
        if g in quot_pos:
            qgens.append(quot_pos[g])
    quot = AlgebraBasis(fld, others,
                        [algebra.src[b] for b in surviving],
                        [algebra.tgt[b] for b in surviving],
                        [algebra.deg[b] for b in surviving],
                        [algebra.labels[b] for b in surviving],
                        qtable, tuple(qgens), None)
    return SliceData(algebra, chosen, sub, sub_index, kept, quot, quot_class, surviving)


# -- bimodules and tensor ----------------------------------------------------


class Bimodule:
    """A (B, C)-bimodule: per left-vertex pieces that are right C-modules, with
    left multiplication maps for each positive-degree B basis element."""

    def __init__(self, left_algebra: AlgebraBasis, right_algebra: AlgebraBasis,
                 pieces: Dict[str, Module], lmaps: Dict[int, ModuleMap]):
        self.left_algebra = left_algebra
        self.right_algebra = right_algebra
        self.pieces = pieces
        self.lmaps = lmaps


def left_mult_map(algebra: AlgebraBasis, el: AlgEl, src_v: str, tgt_v: str) -> ModuleMap:
    """Left multiplication ``e_{src_v} A -> e_{tgt_v} A`` by ``el`` in
    ``e_{tgt_v} A e_{src_v}`` (a map of right modules)."""
    fld = algebra.field
    src_mod = algebra.projective_module(src_v)
    tgt_mod = algebra.projective_module(tgt_v)
    mats = {}
    for w in algebra.vertices:
        pos = {b: k for k, b in enumerate(tgt_mod._proj_basis[w])}
        mat = Matrix.zeros(fld, tgt_mod.dims[w], src_mod.dims[w])
        a = mat._a.copy()
        for col, b in enumerate(src_mod._proj_basis[w]):
            prod = el * algebra.basis_el(b)
            for k, c in prod.coeffs.items():
                a[pos[k], col] = fld.coerce(a[pos[k], col] + c)
        mats[w] = Matrix(fld, a)
    return ModuleMap(src_mod, tgt_mod, mats)


def projective_bimodule(parent: AlgebraBasis, left_algebra: AlgebraBasis,
                        vertex_of, embed) -> Bimodule:
    """A bimodule whose left-vertex pieces are parent projectives.

    ``vertex_of`` maps left-algebra vertices to parent vertices and ``embed``
    maps positive-degree left basis indices to parent elements, so that the
    piece over ``w`` is ``e_{vertex_of(w)} parent`` with left multiplication
    through ``embed``.
    """
    pieces = {w: parent.projective_module(vertex_of(w)) for w in left_algebra.vertices}
    lmaps = {}
    for b in range(left_algebra.dim):
        if left_algebra.deg[b] == 0:
            continue
        el = embed(b)
        lmaps[b] = left_mult_map(parent, el,
                                 vertex_of(left_algebra.src[b]),
                                 vertex_of(left_algebra.tgt[b]))
    return Bimodule(left_algebra, parent, pieces, lmaps)


def regular_bimodule(algebra: AlgebraBasis) -> Bimodule:
    """``A`` as an (A, A)-bimodule."""
    return projective_bimodule(algebra, algebra, lambda w: w,
                               lambda b: algebra.basis_el(b))


@dataclass
class TensorData:
    """``m ⊗_B bim`` together with the plain tensor space it is a quotient of.

    ``offsets[(w, u)]`` locates the ``m_w ⊗ piece_w`` block inside the plain
    tensor at right-vertex ``u`` (row-major pairing: m-index major).
    """

    module: Module
    plain: Module
    projection: ModuleMap
    offsets: Dict[Tuple[str, str], int]


def tensor_over(m: Module, bim: Bimodule) -> Module:
    return tensor_over_data(m, bim).module


def tensor_over_data(m: Module, bim: Bimodule) -> TensorData:
    """``m ⊗_B bim`` as a right module over ``bim.right_algebra``."""
    B = bim.left_algebra
    C = bim.right_algebra
    if m.algebra is not B and m.algebra.dim != B.dim:
        raise ValueError("module is not over the bimodule's left algebra")
    fld = C.field
    verts = list(C.vertices)
    # plain tensor ⊕_w m_w ⊗ piece_w, then quotient by balancing relations
    dims = {u: sum(m.dims[w] * bim.pieces[w].dims[u] for w in B.vertices) for u in verts}
    offs: Dict[Tuple[str, str], int] = {}
    for u in verts:
        o = 0
        for w in B.vertices:
            offs[(w, u)] = o
            o += m.dims[w] * bim.pieces[w].dims[u]
    act = {}
    for c in range(C.dim):
        if C.deg[c] == 0:
            continue
        s, t = C.src[c], C.tgt[c]
        mat = Matrix.zeros(fld, dims[s], dims[t])
        a = mat._a.copy()
        for w in B.vertices:
            piece = bim.pieces[w]
            if m.dims[w] == 0:
                continue
            # block: id_{m_w} ⊗ piece.act[c]
            kr = np.kron(Matrix.identity(fld, m.dims[w])._a, piece.act[c]._a)
            if fld.kind == "prime":
                kr = kr % fld.p
            a[offs[(w, s)]:offs[(w, s)] + m.dims[w] * piece.dims[s],
              offs[(w, t)]:offs[(w, t)] + m.dims[w] * piece.dims[t]] = kr
        act[c] = Matrix(fld, a)
    plain = Module(C, dims, act)

    # balancing: (x*b) ⊗ y - x ⊗ (b*y) for positive-degree b in B
    rel_cols: Dict[str, List[Matrix]] = {u: [] for u in verts}
    for b in range(B.dim):
        if B.deg[b] == 0:
            continue
        wt, ws = B.tgt[b], B.src[b]  # x in m_{wt}, x*b in m_{ws}; y in piece_{ws}
        lam = bim.lmaps[b]           # piece_{ws} -> piece_{wt}
        for u in verts:
            du_s = bim.pieces[ws].dims[u]
            du_t = bim.pieces[wt].dims[u]
            for xi in range(m.dims[wt]):
                xcol = Matrix.zeros(fld, m.dims[wt], 1)
                xa = xcol._a.copy()
                xa[xi, 0] = fld.one
                xb = m.act[b] @ Matrix(fld, xa)  # x*b in m_{ws}
                for yi in range(du_s):
                    col = Matrix.zeros(fld, dims[u], 1)
                    ca = col._a.copy()
                    base = offs[(ws, u)]
                    for k in range(m.dims[ws]):
                        ca[base + k * du_s + yi, 0] = xb._a[k, 0]
                    lam_y = lam.mats[u].col(yi)
                    base_t = offs[(wt, u)]
                    for k2 in range(du_t):
                        ca[base_t + xi * du_t + k2, 0] = fld.coerce(
                            ca[base_t + xi * du_t + k2, 0] - lam_y._a[k2, 0])
                    rel_cols[u].append(Matrix(fld, ca))
    spans = {u: (hstack(rel_cols[u]).col_basis() if rel_cols[u]
                 else Matrix.zeros(fld, dims[u], 0)) for u in verts}
    sub, incl = submodule(plain, spans)
    quo, proj, _ = quotient_module(plain, incl.mats)
    return TensorData(quo, plain, proj, offs)
