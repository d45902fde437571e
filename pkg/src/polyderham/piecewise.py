"""Piecewise polynomial forms on a polyhedron.

A form is stored as one ``PolyForm`` per maximal simplex ``a``, written in
the chart coordinates of ``a``: the vertex ``a[0]`` is the origin and
``t_i`` is the barycentric coordinate of ``a[i]``.  Chart pieces are
canonical, so two forms are equal exactly when their pieces are.  Pieces in
ambient coordinates (``PiecewiseForm.pieces``) are derived on request via
an affine left inverse of each chart.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Mapping, Sequence

from .forms import AffineMap, PolyForm
from .linalg import solve_dense
from .poly import MultiPoly, as_fraction
from .polyhedron import (
    Polyhedron,
    RectilinearMap,
    Simplex,
    Star,
    are_adjacent,
    common_target_simplex,
    collapse_map,
    identity_map,
)


# -- charts -------------------------------------------------------------------

def chart_left_inverse(points: Sequence[Sequence]) -> AffineMap:
    """Affine map R^m -> R^k inverting the simplex chart on its affine hull."""
    return _chart_left_inverse(tuple(tuple(as_fraction(x) for x in p) for p in points))


@lru_cache(maxsize=4096)
def _chart_left_inverse(points: tuple[tuple[Fraction, ...], ...]) -> AffineMap:
    p0 = list(points[0])
    m = len(p0)
    k = len(points) - 1
    if k == 0:
        return AffineMap([], [], m)
    cols = [[as_fraction(x) - y for x, y in zip(p, p0)] for p in points[1:]]
    gram = [[sum((a * b for a, b in zip(ci, cj)), Fraction(0)) for cj in cols] for ci in cols]
    # L = G^-1 V^T, solved column by column of V^T
    L = [[Fraction(0)] * m for _ in range(k)]
    for j in range(m):
        rhs = [cols[i][j] for i in range(k)]
        sol = solve_dense(gram, rhs)
        if sol is None:
            raise ValueError("simplex vertices are affinely dependent")
        for i in range(k):
            L[i][j] = sol[i]
    offset = [-sum((L[i][j] * p0[j] for j in range(m)), Fraction(0)) for i in range(k)]
    return AffineMap(L, offset, m)


def _coords_in(a: Simplex, v: int) -> list[int]:
    k = len(a) - 1
    i = a.index(v)
    return [int(j == i - 1) for j in range(k)]


@lru_cache(maxsize=None)
def face_chart(a: Simplex, face: Sequence[int]) -> AffineMap:
    """Chart of an (ordered) face of a, expressed in the chart coordinates of a."""
    face = tuple(face)
    k = len(a) - 1
    q = len(face) - 1
    c0 = _coords_in(a, face[0])
    cols = [[x - y for x, y in zip(_coords_in(a, v), c0)] for v in face[1:]]
    matrix = [[cols[i][j] for i in range(q)] for j in range(k)]
    return AffineMap(matrix, c0, q)


@lru_cache(maxsize=None)
def barycentric_functions(k: int) -> tuple[MultiPoly, ...]:
    """Barycentric coordinates of the chart vertices, as polynomials in k variables."""
    ts = [MultiPoly.var(k, i) for i in range(k)]
    lam0 = MultiPoly.constant(k, 1)
    for t in ts:
        lam0 = lam0 - t
    return (lam0, *ts)


# -- forms --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class PiecewiseForm:
    base: Polyhedron
    degree: int
    chart_pieces: Mapping[Simplex, PolyForm] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for a, p in self.chart_pieces.items():
            if a not in self.base.simplices:
                raise ValueError(f"{list(a)} is not a simplex of the base")
            if p.nvars != len(a) - 1:
                raise ValueError(f"piece on {list(a)} must live in {len(a) - 1} chart variables")
            if p.terms and p.degree != self.degree:
                raise ValueError("piece degree disagrees with form degree")
            if p.terms:
                clean[a] = p
        object.__setattr__(self, "chart_pieces", clean)

    # construction
    @classmethod
    def zero(cls, K: Polyhedron, degree: int) -> "PiecewiseForm":
        return cls(K, degree, {})

    @classmethod
    def constant(cls, K: Polyhedron, c) -> "PiecewiseForm":
        return cls(K, 0, {a: PolyForm.constant(len(a) - 1, c) for a in K.maximal_simplices})

    @classmethod
    def from_ambient(cls, K: Polyhedron, degree: int, pieces: Mapping[Simplex, PolyForm]) -> "PiecewiseForm":
        """Restrict ambient-coordinate pieces (one per maximal simplex) to the charts."""
        out = {}
        for a, p in pieces.items():
            a = tuple(sorted(a))
            if a not in K.maximal_simplices:
                raise ValueError(f"{list(a)} is not a maximal simplex")
            if p.nvars != K.ambient_dim:
                raise ValueError("ambient piece has the wrong number of variables")
            if p.degree != degree and p.terms:
                raise ValueError("piece degree disagrees with form degree")
            out[a] = PolyForm(p.nvars, degree, p.terms).pullback_affine(K.chart(a)) if p.terms else PolyForm.zero(len(a) - 1, degree)
        return cls(K, degree, out)

    @classmethod
    def from_function(cls, K: Polyhedron, f: MultiPoly) -> "PiecewiseForm":
        """A global polynomial in ambient coordinates, restricted to |K|."""
        amb = PolyForm.function(f)
        return cls.from_ambient(K, 0, {a: amb for a in K.maximal_simplices})

    # access
    def chart_piece(self, a: Simplex) -> PolyForm:
        p = self.chart_pieces.get(a)
        return p if p is not None else PolyForm.zero(len(a) - 1, max(self.degree, 0))

    @property
    def pieces(self) -> dict[Simplex, PolyForm]:
        """Pieces in ambient coordinates (one representative per maximal simplex)."""
        out = {}
        for a in self.base.maximal_simplices:
            p = self.chart_piece(a)
            if self.degree < 0:
                continue
            inv = chart_left_inverse(self.base.points(a))
            out[a] = p.pullback(inv.components(), self.base.ambient_dim) if p.terms else PolyForm.zero(self.base.ambient_dim, self.degree)
        return out

    def restrict(self, face: Sequence[int]) -> PolyForm:
        """Pullback to the chart of an ordered simplex (taken from some maximal coface)."""
        s = tuple(sorted(face))
        a = self.base.cofaces[s][0]
        return self.chart_piece(a).pullback_affine(face_chart(a, tuple(face)))

    def __eq__(self, other):
        if not isinstance(other, PiecewiseForm):
            return NotImplemented
        if self.base != other.base:
            return False
        if not self.chart_pieces and not other.chart_pieces:
            return True
        return self.degree == other.degree and self.chart_pieces == other.chart_pieces

    def __hash__(self):
        return hash((self.degree, frozenset(self.chart_pieces.items())))

    def __repr__(self):
        return f"PiecewiseForm(deg={self.degree}, pieces={dict(self.chart_pieces)})"

    def is_zero(self) -> bool:
        return not self.chart_pieces

    def max_total_degree(self) -> int:
        return max((p.max_total_degree() for p in self.chart_pieces.values()), default=-1)

    # linear structure
    def _same_base(self, other: "PiecewiseForm"):
        if self.base != other.base:
            raise ValueError("forms live on different polyhedra")

    def __add__(self, other: "PiecewiseForm") -> "PiecewiseForm":
        self._same_base(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        out = dict(self.chart_pieces)
        for a, p in other.chart_pieces.items():
            out[a] = out[a] + p if a in out else p
        return PiecewiseForm(self.base, self.degree, out)

    def __neg__(self):
        return PiecewiseForm(self.base, self.degree, {a: -p for a, p in self.chart_pieces.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "PiecewiseForm":
        return PiecewiseForm(self.base, self.degree, {a: p.scale(c) for a, p in self.chart_pieces.items()})

    def d(self) -> "PiecewiseForm":
        return pw_d(self)

    def wedge(self, other) -> "PiecewiseForm":
        return pw_wedge(self, other)

    def evaluate(self, x: Sequence) -> Fraction:
        """Value of a degree-0 form at an ambient point of |K|."""
        if self.degree != 0:
            raise ValueError("only functions (degree 0) can be evaluated at points")
        hit = self.base.locate(x)
        if hit is None:
            raise ValueError("point lies outside |K|")
        a, lam = hit
        p = self.chart_piece(a)
        return p.coefficient(()).evaluate(lam[1:]) if p.terms else Fraction(0)


@dataclass
class PwReport:
    valid: bool
    bad_pairs: list[tuple[Simplex, Simplex]]

    def to_json(self):
        return {"valid": self.valid, "bad_pairs": [[list(a), list(b)] for a, b in self.bad_pairs]}


def pw_validate(w: PiecewiseForm) -> PwReport:
    """Check that pieces on maximal simplices agree on every shared face."""
    K = w.base
    maxi = K.maximal_simplices
    bad = []
    for i, a in enumerate(maxi):
        for b in maxi[i + 1:]:
            common = tuple(sorted(set(a) & set(b)))
            if not common:
                continue
            ra = w.chart_piece(a).pullback_affine(face_chart(a, common))
            rb = w.chart_piece(b).pullback_affine(face_chart(b, common))
            if ra != rb:
                bad.append((a, b))
    return PwReport(not bad, bad)


def pw_d(w: PiecewiseForm) -> PiecewiseForm:
    if w.degree < 0:
        return PiecewiseForm.zero(w.base, 0)
    return PiecewiseForm(w.base, w.degree + 1, {a: p.d() for a, p in w.chart_pieces.items()})


def pw_wedge(w: PiecewiseForm, v: PiecewiseForm) -> PiecewiseForm:
    w._same_base(v)
    out = {}
    for a, p in w.chart_pieces.items():
        q = v.chart_pieces.get(a)
        if q is not None:
            out[a] = p.wedge(q)
    return PiecewiseForm(w.base, w.degree + v.degree, out)


# -- simplicial cochains ------------------------------------------------------

def orientation(simplex: Sequence[int]) -> tuple[Simplex, int]:
    """Sorted simplex and the sign of the permutation sorting it."""
    from .forms import perm_sign

    s = perm_sign(simplex)
    return tuple(sorted(simplex)), s


@dataclass(frozen=True, eq=False)
class SimplicialCochain:
    base: Polyhedron
    degree: int
    values: Mapping[Simplex, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for s, v in self.values.items():
            key, sign = orientation(s)
            if len(key) != self.degree + 1 or key not in self.base.simplices:
                raise ValueError(f"{list(s)} is not a {self.degree}-simplex of the base")
            v = as_fraction(v) * sign
            clean[key] = clean.get(key, 0) + v
        object.__setattr__(self, "values", {k: v for k, v in clean.items() if v})

    @classmethod
    def elementary(cls, K: Polyhedron, simplex: Sequence[int]) -> "SimplicialCochain":
        return cls(K, len(simplex) - 1, {tuple(simplex): 1})

    def value(self, simplex: Sequence[int]) -> Fraction:
        key, sign = orientation(simplex)
        if sign == 0:
            return Fraction(0)
        return sign * self.values.get(key, Fraction(0))

    def __eq__(self, other):
        return isinstance(other, SimplicialCochain) and self.base == other.base and (
            self.values == other.values and (self.degree == other.degree or not self.values))

    def __add__(self, other):
        out = dict(self.values)
        for k, v in other.values.items():
            out[k] = out.get(k, 0) + v
        return SimplicialCochain(self.base, self.degree, out)

    def scale(self, c):
        return SimplicialCochain(self.base, self.degree, {k: v * as_fraction(c) for k, v in self.values.items()})

    def coboundary(self) -> "SimplicialCochain":
        out: dict[Simplex, Fraction] = {}
        for t in self.base.simplices_of_dim(self.degree + 1):
            v = Fraction(0)
            for i in range(len(t)):
                v += (-1) ** i * self.values.get(t[:i] + t[i + 1:], 0)
            if v:
                out[t] = v
        return SimplicialCochain(self.base, self.degree + 1, out)

    def to_json(self):
        from .serialize import rat_str

        return {"degree": self.degree, "values": [{"simplex": list(s), "value": rat_str(v)} for s, v in sorted(self.values.items())]}


# -- Whitney forms and partitions of unity ---------------------------------------

@lru_cache(maxsize=None)
def whitney_chart_piece(a: Simplex, sigma: Simplex) -> PolyForm:
    """Elementary Whitney form of the ordered simplex sigma on the chart of a (sigma within a)."""
    k = len(a) - 1
    lam = barycentric_functions(k)
    lams = [lam[a.index(v)] for v in sigma]
    q = len(sigma) - 1
    total = PolyForm.zero(k, q)
    dl = [PolyForm.function(l).d() for l in lams]
    for j in range(q + 1):
        term = PolyForm.function(lams[j])
        for i in range(q + 1):
            if i != j:
                term = term.wedge(dl[i])
        total = total + (term if j % 2 == 0 else -term)
    return total.scale(factorial(q))


def whitney(c: SimplicialCochain) -> PiecewiseForm:
    """Whitney realization of a simplicial cochain as a piecewise polynomial form."""
    K = c.base
    out = {}
    for a in K.maximal_simplices:
        piece = PolyForm.zero(len(a) - 1, c.degree)
        aset = set(a)
        for s, v in c.values.items():
            if aset.issuperset(s):
                piece = piece + whitney_chart_piece(a, s).scale(v)
        out[a] = piece
    return PiecewiseForm(K, c.degree, out)


def hat(K: Polyhedron, v: int) -> PiecewiseForm:
    return whitney(SimplicialCochain.elementary(K, (v,)))


@dataclass(frozen=True, eq=False)
class PartitionOfUnity:
    base: Polyhedron
    functions: Mapping[int, PiecewiseForm]

    def total(self) -> PiecewiseForm:
        acc = PiecewiseForm.zero(self.base, 0)
        for f in self.functions.values():
            acc = acc + f
        return acc

    def check(self) -> bool:
        if self.total() != PiecewiseForm.constant(self.base, 1):
            return False
        for v, f in self.functions.items():
            for a in self.base.maximal_simplices:
                for face in self.base.simplices:
                    if v not in face and set(face) <= set(a):
                        if not f.chart_piece(a).pullback_affine(face_chart(a, face)).is_zero():
                            return False
        return True


def pou_from_stars(K: Polyhedron) -> PartitionOfUnity:
    return PartitionOfUnity(K, {v: hat(K, v) for v in range(len(K.vertices)) if (v,) in K.simplices})


# -- maps and homotopies ------------------------------------------------------

def _target_coface(f: RectilinearMap, b: Simplex) -> Simplex:
    return f.target.cofaces[b][0]


def _chart_map(K: Polyhedron, a: Simplex, A: AffineMap, L: Polyhedron, b: Simplex) -> AffineMap:
    """Chart of a, then A, then back into the chart coordinates of b."""
    inv = chart_left_inverse(L.points(b))
    return inv.compose(A.compose(K.chart(a)))


@lru_cache(maxsize=64)
def _pullback_plan(f: RectilinearMap) -> dict[Simplex, tuple[Simplex, AffineMap]]:
    """For each maximal source simplex: a maximal target coface and the map between the charts."""
    plan = {}
    for a in f.source.maximal_simplices:
        b, A = f.assignment[a]
        bb = _target_coface(f, b)
        plan[a] = (bb, _chart_map(f.source, a, A, f.target, bb))
    return plan


def rectilinear_pullback(w: PiecewiseForm, f: RectilinearMap) -> PiecewiseForm:
    if w.base != f.target:
        raise ValueError("form does not live on the target of the map")
    out = {}
    for a, (bb, chart_map) in _pullback_plan(f).items():
        piece = w.chart_piece(bb)
        if piece.terms:
            out[a] = piece.pullback_affine(chart_map)
    return PiecewiseForm(f.source, w.degree, out)


def _homotopy_piece(piece: PolyForm, m0: AffineMap, m1: AffineMap) -> PolyForm:
    """-int_0^1 of the dt-component of the straight-line homotopy pullback."""
    from .forms import integrate_last_variable

    k = m0.n_in
    comps0 = m0.components()
    comps1 = m1.components()
    lift = [MultiPoly(k + 1, {e + (0,): c for e, c in p.terms.items()}) for p in comps0]
    diff = [MultiPoly(k + 1, {e + (1,): c for e, c in (q - p).terms.items()}) for p, q in zip(comps0, comps1)]
    H = [p + q for p, q in zip(lift, diff)]
    pulled = piece.pullback(H, k + 1)
    _, beta = pulled.split_last_variable()
    if piece.degree == 0:
        return PolyForm.zero(k, 0)
    return -integrate_last_variable(beta)


@lru_cache(maxsize=64)
def _homotopy_plan(f0: RectilinearMap, f1: RectilinearMap) -> dict[Simplex, tuple[Simplex, AffineMap, AffineMap]]:
    """Per maximal source simplex: a target chart holding both images and the two chart maps into it."""
    if not are_adjacent(f0, f1):
        raise ValueError("maps are not adjacent")
    K, L = f0.source, f0.target
    plan = {}
    for a in K.maximal_simplices:
        b = common_target_simplex(f0, f1, a)
        bb = L.cofaces[b][0]
        plan[a] = (bb, _chart_map(K, a, f0.assignment[a][1], L, bb), _chart_map(K, a, f1.assignment[a][1], L, bb))
    return plan


def adjacency_homotopy(f0: RectilinearMap, f1: RectilinearMap, w: PiecewiseForm) -> PiecewiseForm:
    """Cartan homotopy operator h with f0*w - f1*w = d h(w) + h(d w)."""
    if w.base != f0.target:
        raise ValueError("form does not live on the target of the maps")
    plan = _homotopy_plan(f0, f1)
    if w.degree == 0:
        return PiecewiseForm.zero(f0.source, -1)
    out = {}
    for a, (bb, m0, m1) in plan.items():
        piece = w.chart_piece(bb)
        if piece.terms:
            out[a] = _homotopy_piece(piece, m0, m1)
    return PiecewiseForm(f0.source, w.degree - 1, out)


def homotopy_identity(f0: RectilinearMap, f1: RectilinearMap, w: PiecewiseForm) -> tuple[bool, PiecewiseForm]:
    """Check f0*w - f1*w == d h(w) + h(d w) exactly; returns (holds, h(w))."""
    h = adjacency_homotopy(f0, f1, w)
    lhs = rectilinear_pullback(w, f0) - rectilinear_pullback(w, f1)
    dw = pw_d(w)
    rhs = pw_d(h) + adjacency_homotopy(f0, f1, dw)
    return lhs == rhs, h


def star_contraction_exactness(S: Star, w: PiecewiseForm) -> PiecewiseForm:
    """A primitive of a closed positive-degree form on a star, via the cone contraction."""
    if w.base != S.base:
        raise ValueError("form does not live on the star")
    if w.degree < 1:
        raise ValueError("need a form of positive degree")
    if not pw_d(w).is_zero():
        raise ValueError("form is not closed")
    eta = adjacency_homotopy(identity_map(S.base), collapse_map(S), w)
    assert pw_d(eta) == w
    return eta
