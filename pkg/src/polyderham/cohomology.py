"""Finite cochain complexes over Q and the cohomology computations built on them.

The truncated piecewise de Rham complex in degree k consists of families of
chart pieces ``sum c t^alpha dt_I`` (one per maximal simplex, ``|alpha| + k <= D``)
that agree on shared faces.  It is the kernel of a compatibility matrix; the
kernel basis read off the reduced echelon form has an identity block on the
free columns, so the coordinates of any compatible form are its entries on
those columns.  That makes the differential an honest matrix between the
kernel bases and the whole computation a ``ChainComplexQ``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Sequence

from .forms import PolyForm
from .linalg import Echelon, kernel_from_echelon, rank, rank_kernel
from .pairing import derham_map
from .piecewise import (
    PiecewiseForm,
    SimplicialCochain,
    face_chart,
    homotopy_identity,
    whitney,
)
from .poly import LaurentPoly, MultiPoly, exponent_box, monomials_up_to
from .polyhedron import Polyhedron, RectilinearMap, are_adjacent, connected_components

__all__ = [
    "BettiReport",
    "ChainComplexQ",
    "TruncatedComplex",
    "compare_lambda_psi",
    "h0_report",
    "homotopy_invariance_check",
    "rank_kernel",
    "simplicial_cohomology",
    "truncated_laurent_derham",
    "truncated_pw_derham",
]


# -- chain complexes ----------------------------------------------------------

@dataclass
class ChainComplexQ:
    """Cochain complex C^0 -> C^1 -> ... with sparse rational differentials.

    ``differentials[k]`` has one sparse row per basis vector of C^(k+1), with
    columns indexed by the basis of C^k.
    """

    dims: list[int]
    differentials: list[list[dict]]
    labels: list[list] | None = None

    def __post_init__(self):
        if len(self.differentials) != max(len(self.dims) - 1, 0):
            raise ValueError("need one differential between each pair of consecutive spaces")
        for k, rows in enumerate(self.differentials):
            if len(rows) != self.dims[k + 1]:
                raise ValueError(f"differential {k} has {len(rows)} rows, expected {self.dims[k + 1]}")
            for r in rows:
                if any(not 0 <= c < self.dims[k] for c in r):
                    raise ValueError(f"differential {k} has a column out of range")

    def ranks(self) -> list[int]:
        return [rank(rows) for rows in self.differentials]

    def check_square_zero(self) -> bool:
        for k in range(len(self.differentials) - 1):
            first, second = self.differentials[k], self.differentials[k + 1]
            for row in second:
                acc: dict[int, Fraction] = {}
                for j, v in row.items():
                    for c, w in first[j].items():
                        acc[c] = acc.get(c, 0) + v * w
                if any(acc.values()):
                    return False
        return True

    def betti(self, report_bound: int | None = None) -> "BettiReport":
        ranks = self.ranks()
        kernels, images, betti = [], [], []
        for k, dim in enumerate(self.dims):
            out_rank = ranks[k] if k < len(ranks) else 0
            in_rank = ranks[k - 1] if k >= 1 else 0
            kernels.append(dim - out_rank)
            images.append(in_rank)
            betti.append(dim - out_rank - in_rank)
        return BettiReport(list(self.dims), kernels, images, betti, report_bound)


@dataclass
class BettiReport:
    dims: list[int]
    kernel_ranks: list[int]
    image_ranks: list[int]
    betti: list[int]
    bound: int | None = None
    stabilized: bool | None = None
    seconds: float | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "betti": self.betti,
            "dims": self.dims,
            "kernel_ranks": self.kernel_ranks,
            "image_ranks": self.image_ranks,
            "bound": self.bound,
            "stabilized": self.stabilized,
        }
        out.update(self.extra)
        if timing and self.seconds is not None:
            out["timing"] = {"seconds": self.seconds, "float": True}
        return out


# -- simplicial cohomology ----------------------------------------------------

def coboundary_rows(K: Polyhedron, k: int) -> list[dict]:
    """Matrix of the coboundary C^k -> C^(k+1) on the sorted simplex bases."""
    src = {s: i for i, s in enumerate(K.simplices_of_dim(k))}
    rows = []
    for t in K.simplices_of_dim(k + 1):
        rows.append({src[t[:i] + t[i + 1:]]: (-1) ** i for i in range(len(t))})
    return rows


def simplicial_complex(K: Polyhedron) -> ChainComplexQ:
    n = K.dim
    dims = [len(K.simplices_of_dim(k)) for k in range(n + 1)]
    return ChainComplexQ(dims, [coboundary_rows(K, k) for k in range(n)],
                         [K.simplices_of_dim(k) for k in range(n + 1)])


def simplicial_cohomology(K: Polyhedron) -> BettiReport:
    cx = simplicial_complex(K)
    assert cx.check_square_zero()
    return cx.betti()


# -- the truncated piecewise de Rham complex --------------------------------------

@lru_cache(maxsize=None)
def _chart_basis(k_dim: int, degree: int, bound: int) -> tuple[tuple[tuple, tuple], ...]:
    """Monomial forms t^alpha dt_I on a k_dim-simplex chart with |alpha| + degree <= bound."""
    idxs = list(combinations(range(k_dim), degree))
    return tuple((alpha, I) for alpha in monomials_up_to(k_dim, bound - degree) for I in idxs)


def _basis_form(k_dim: int, alpha, I) -> PolyForm:
    return PolyForm(k_dim, len(I), {I: MultiPoly.monomial(alpha)})


def _form_vector(form: PolyForm) -> dict:
    return {(idx, exp): c for idx, p in form.terms.items() for exp, c in p.terms.items()}


class TruncatedComplex:
    """Compatible piecewise forms of per-term total degree <= bound, as a ChainComplexQ."""

    def __init__(self, K: Polyhedron, bound: int):
        if bound < 0:
            raise ValueError("bound must be non-negative")
        self.base = K
        self.bound = bound
        self.maximal = K.maximal_simplices
        self.top = min(K.dim, bound)
        self.columns: list[list[tuple]] = []  # degree -> [(a, alpha, I)]
        self.column_index: list[dict] = []
        self.spaces: list[list[dict]] = []  # degree -> kernel basis (sparse over columns)
        self.free: list[list[int]] = []  # degree -> free columns (coordinates)
        self._constraints: list[Echelon] = []  # degree -> echelon basis of the compatibility rows
        for k in range(self.top + 1):
            cols = [(a, alpha, I) for a in self.maximal for alpha, I in _chart_basis(len(a) - 1, k, bound)]
            self.columns.append(cols)
            self.column_index.append({c: j for j, c in enumerate(cols)})
            ech = Echelon(len(cols))
            for row in self._compatibility_rows(k):
                ech.add(row)
            self._constraints.append(ech)
            self.spaces.append(kernel_from_echelon(ech, len(cols)))
            self.free.append([c for c in range(len(cols)) if c not in ech.rows])
        self.complex = ChainComplexQ(
            [len(s) for s in self.spaces],
            [self._differential_rows(k) for k in range(self.top)],
        )

    # compatibility constraints
    def _restriction(self, a, face, k):
        """Column vectors of the restrictions of a's basis forms to the chart of face."""
        chart = face_chart(a, face)
        out = {}
        for alpha, I in _chart_basis(len(a) - 1, k, self.bound):
            out[(alpha, I)] = _form_vector(_basis_form(len(a) - 1, alpha, I).pullback_affine(chart))
        return out

    def _compatibility_rows(self, k: int) -> list[dict]:
        idx = self.column_index[k]
        rows = []
        for i, a in enumerate(self.maximal):
            for b in self.maximal[i + 1:]:
                face = tuple(sorted(set(a) & set(b)))
                if len(face) - 1 < k or not face:
                    continue
                ra = self._restriction(a, face, k)
                rb = self._restriction(b, face, k)
                eqs: dict[tuple, dict[int, Fraction]] = {}
                for key, vec in ra.items():
                    j = idx[(a,) + key]
                    for e, v in vec.items():
                        eqs.setdefault(e, {})[j] = eqs.get(e, {}).get(j, 0) + v
                for key, vec in rb.items():
                    j = idx[(b,) + key]
                    for e, v in vec.items():
                        eqs.setdefault(e, {})[j] = eqs.get(e, {}).get(j, 0) - v
                rows.extend(r for r in ({c: v for c, v in r.items() if v} for r in eqs.values()) if r)
        return rows

    # the differential in kernel coordinates
    def apply_d(self, k: int, vec: dict) -> dict:
        """d of a column vector in degree k, as a column vector in degree k+1."""
        idx = self.column_index[k + 1]
        out: dict[int, Fraction] = {}
        for j, c in vec.items():
            a, alpha, I = self.columns[k][j]
            dform = _basis_form(len(a) - 1, alpha, I).d()
            for J, p in dform.terms.items():
                for e, v in p.terms.items():
                    col = idx[(a, e, J)]
                    nv = out.get(col, 0) + c * v
                    if nv:
                        out[col] = nv
                    else:
                        out.pop(col, None)
        return out

    def coordinates(self, k: int, vec: dict) -> dict:
        """Coordinates of a compatible column vector in the kernel basis of degree k."""
        return {i: vec[f] for i, f in enumerate(self.free[k]) if f in vec}

    def _differential_rows(self, k: int) -> list[dict]:
        rows = [dict() for _ in self.spaces[k + 1]]
        for j, v in enumerate(self.spaces[k]):
            for i, c in self.coordinates(k + 1, self.apply_d(k, v)).items():
                rows[i][j] = c
        return rows

    # conversion
    def to_form(self, k: int, vec: dict) -> PiecewiseForm:
        pieces: dict = {}
        for j, c in vec.items():
            a, alpha, I = self.columns[k][j]
            pieces.setdefault(a, {}).setdefault(I, {})[alpha] = c
        out = {a: PolyForm(len(a) - 1, k, {I: MultiPoly(len(a) - 1, t) for I, t in terms.items()})
               for a, terms in pieces.items()}
        return PiecewiseForm(self.base, k, out)

    def from_form(self, w: PiecewiseForm) -> dict | None:
        """Column vector of a piecewise form, or None if it exceeds the bound."""
        k = w.degree
        if k > self.top:
            return None if not w.is_zero() else {}
        idx = self.column_index[k]
        vec = {}
        for a, p in w.chart_pieces.items():
            for I, q in p.terms.items():
                for e, c in q.terms.items():
                    j = idx.get((a, e, I))
                    if j is None:
                        return None
                    vec[j] = c
        return vec

    def basis_forms(self, k: int) -> list[PiecewiseForm]:
        return [self.to_form(k, v) for v in self.spaces[k]]

    def contains(self, k: int, vec: dict) -> bool:
        """Whether a column vector satisfies every compatibility constraint."""
        return all(sum((v * vec.get(c, 0) for c, v in row.items()), Fraction(0)) == 0
                   for row in self._constraints[k].rows.values())

    def betti(self) -> BettiReport:
        r = self.complex.betti(self.bound)
        pad = self.base.dim + 1 - len(r.betti)
        if pad > 0:
            # degrees above the bound have no forms at all
            r = BettiReport(r.dims + [0] * pad, r.kernel_ranks + [0] * pad, r.image_ranks + [0] * pad,
                            r.betti + [0] * pad, r.bound)
        return r


def truncated_pw_derham(K: Polyhedron, bound: int, check_stability: bool = True) -> BettiReport:
    """Betti numbers of the truncated complex, flagged stable when bound and bound+1 agree."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    t0 = time.perf_counter()
    cx = TruncatedComplex(K, bound)
    assert cx.complex.check_square_zero()
    report = cx.betti()
    if check_stability:
        nxt = TruncatedComplex(K, bound + 1).betti()
        report.stabilized = nxt.betti == report.betti
    report.seconds = time.perf_counter() - t0
    return report


# -- Laurent de Rham complexes ------------------------------------------------------

def laurent_block_complex(mu: Sequence[int]) -> ChainComplexQ:
    """The multidegree-mu block: basis x^(mu - e_I) dx_I for every I; d is wedge with sum mu_j dx_j/x_j."""
    n = len(mu)
    bases = [list(combinations(range(n), k)) for k in range(n + 1)]
    diffs = []
    for k in range(n):
        src = {I: j for j, I in enumerate(bases[k])}
        rows = []
        for J in bases[k + 1]:
            row = {}
            for pos, i in enumerate(J):
                if mu[i]:
                    # d(x^(mu-e_I) dx_I) contains (mu_i) x^(mu-e_J) dx_i ^ dx_I with J = I + {i}
                    I = J[:pos] + J[pos + 1:]
                    row[src[I]] = (-1) ** pos * mu[i]
            rows.append(row)
        diffs.append(rows)
    return ChainComplexQ([len(b) for b in bases], diffs, bases)


def laurent_box_complex(n: int, bound: int) -> ChainComplexQ:
    """All Laurent forms whose multidegree lies in [-bound, bound]^n (a d-stable truncation)."""
    from .kahler import multidegree

    bases = []
    for k in range(n + 1):
        basis = []
        for mu in exponent_box(n, bound):
            for I in combinations(range(n), k):
                exp = tuple(m - (1 if i in I else 0) for i, m in enumerate(mu))
                basis.append((exp, I))
        bases.append(basis)
    diffs = []
    for k in range(n):
        tgt = {b: j for j, b in enumerate(bases[k + 1])}
        rows = [dict() for _ in bases[k + 1]]
        for j, (exp, I) in enumerate(bases[k]):
            form = PolyForm(n, k, {I: LaurentPoly.monomial(exp)})
            for J, p in form.d().terms.items():
                for e, c in p.terms.items():
                    assert multidegree(e, J) == multidegree(exp, I)
                    rows[tgt[(e, J)]][j] = c
        diffs.append(rows)
    return ChainComplexQ([len(b) for b in bases], diffs, bases)


def truncated_laurent_derham(n: int, bound: int) -> BettiReport:
    """Betti numbers of the multidegree-box truncation, with the multidegree-0 block computed separately."""
    if n < 1 or bound < 0:
        raise ValueError("need n >= 1 and bound >= 0")
    t0 = time.perf_counter()
    box = laurent_box_complex(n, bound)
    assert box.check_square_zero()
    report = box.betti(bound)
    zero = laurent_block_complex((0,) * n).betti()
    report.extra["zero_block_betti"] = zero.betti
    report.extra["expected_binomials"] = [comb(n, k) for k in range(n + 1)]
    report.stabilized = truncated_laurent_betti_only(n, bound + 1) == report.betti
    report.seconds = time.perf_counter() - t0
    return report


def truncated_laurent_betti_only(n: int, bound: int) -> list[int]:
    return laurent_box_complex(n, bound).betti().betti


# -- comparison of Whitney and de Rham maps -------------------------------------

@dataclass
class ComparisonReport:
    matrices: list[list[list[Fraction]]]
    identity: list[bool]
    classes_independent: list[bool]

    @property
    def ok(self) -> bool:
        return all(self.identity) and all(self.classes_independent)

    def to_json(self):
        from .serialize import rat_str

        return {
            "ok": self.ok,
            "degrees": [
                {"degree": k, "identity": self.identity[k], "classes_independent": self.classes_independent[k],
                 "matrix": [[rat_str(v) for v in row] for row in m]}
                for k, m in enumerate(self.matrices)
            ],
        }


def compare_lambda_psi(K: Polyhedron) -> ComparisonReport:
    """Matrix of integration after Whitney realization in each degree, plus an independence check.

    Cocycle representatives of simplicial cohomology are realized as Whitney
    forms; they must be closed and stay independent modulo exact forms of the
    truncated complex at bound dim K + 1 (where every Whitney form lives).
    """
    matrices, ident, indep = [], [], []
    cx = TruncatedComplex(K, K.dim + 1)
    simp = simplicial_complex(K)
    for k in range(K.dim + 1):
        basis = K.simplices_of_dim(k)
        pos = {s: i for i, s in enumerate(basis)}
        m = [[Fraction(0)] * len(basis) for _ in basis]
        for j, s in enumerate(basis):
            c = derham_map(whitney(SimplicialCochain.elementary(K, s)))
            for t, v in c.values.items():
                m[pos[t]][j] = v
        matrices.append(m)
        ident.append(all(m[i][j] == (1 if i == j else 0) for i in range(len(basis)) for j in range(len(basis))))
        indep.append(_whitney_classes_independent(K, cx, simp, k))
    return ComparisonReport(matrices, ident, indep)


def _cohomology_representatives(simp: ChainComplexQ, k: int) -> list[dict]:
    """Cocycles spanning a complement of the coboundaries in degree k."""
    dim = simp.dims[k]
    out_rows = simp.differentials[k] if k < len(simp.differentials) else []
    _, cocycles = rank_kernel(out_rows, dim) if out_rows else (0, [{i: Fraction(1)} for i in range(dim)])
    ech = Echelon(dim)
    if k >= 1:
        # images of the previous coboundary: columns of differentials[k-1]
        cols: dict[int, dict] = {}
        for i, row in enumerate(simp.differentials[k - 1]):
            for j, v in row.items():
                cols.setdefault(j, {})[i] = v
        for col in cols.values():
            ech.add(col)
    reps = []
    for z in cocycles:
        if ech.add(z):
            reps.append(z)
    return reps


def _whitney_classes_independent(K: Polyhedron, cx: TruncatedComplex, simp: ChainComplexQ, k: int) -> bool:
    basis = K.simplices_of_dim(k)
    reps = _cohomology_representatives(simp, k)
    ech = Echelon()
    if k >= 1:
        for v in cx.spaces[k - 1]:
            ech.add(cx.apply_d(k - 1, v))
    base_rank = ech.rank
    for z in reps:
        w = whitney(SimplicialCochain(K, k, {basis[i]: c for i, c in z.items()}))
        if not w.d().is_zero():
            return False
        vec = cx.from_form(w)
        if vec is None or not cx.contains(k, vec):
            return False
        ech.add(vec)
    return ech.rank == base_rank + len(reps)


# -- homotopy invariance ------------------------------------------------------

@dataclass
class HomotopyReport:
    bound: int
    checked: list[int]
    failures: list[tuple[int, int]]
    closed_checked: list[int]
    max_primitive_degree: int

    @property
    def ok(self) -> bool:
        return not self.failures and self.max_primitive_degree <= self.bound + 1

    def to_json(self):
        return {"ok": self.ok, "bound": self.bound, "forms_checked": self.checked,
                "closed_forms_checked": self.closed_checked,
                "failures": [list(f) for f in self.failures], "max_homotopy_total_degree": self.max_primitive_degree}


def homotopy_invariance_check(f0: RectilinearMap, f1: RectilinearMap, bound: int) -> HomotopyReport:
    """Verify the Cartan identity f0*w - f1*w = d h(w) + h(dw) on a basis of every truncated space.

    On the closed basis forms this says f0* and f1* agree in cohomology.
    The homotopy raises the total degree by at most one.
    """
    if not are_adjacent(f0, f1):
        raise ValueError("maps are not adjacent")
    cx = TruncatedComplex(f0.target, bound)
    checked, closed_checked, failures = [], [], []
    top = 0
    for k in range(cx.top + 1):
        n_closed = 0
        forms = cx.basis_forms(k)
        for j, w in enumerate(forms):
            ok, h = homotopy_identity(f0, f1, w)
            if not ok:
                failures.append((k, j))
            if w.d().is_zero():
                n_closed += 1
            if not h.is_zero():
                top = max(top, h.max_total_degree() + h.degree)
        checked.append(len(forms))
        closed_checked.append(n_closed)
    return HomotopyReport(bound, checked, failures, closed_checked, top)


# -- degree zero ----------------------------------------------------------------

@dataclass
class H0Report:
    dimension: int
    components: int
    locally_constant: bool

    @property
    def ok(self) -> bool:
        return self.dimension == self.components and self.locally_constant

    def to_json(self):
        return {"ok": self.ok, "h0_dimension": self.dimension, "components": self.components,
                "kernel_locally_constant": self.locally_constant}


def h0_report(K: Polyhedron, bound: int = 1) -> H0Report:
    cx = TruncatedComplex(K, bound)
    if cx.top >= 1:
        rows = cx.complex.differentials[0]
        _, ker = rank_kernel(rows, cx.complex.dims[0]) if rows else (0, [{i: Fraction(1)} for i in range(cx.complex.dims[0])])
    else:
        ker = [{i: Fraction(1)} for i in range(cx.complex.dims[0])]
    const = True
    for v in ker:
        vec: dict = {}
        for i, c in v.items():
            for col, x in cx.spaces[0][i].items():
                vec[col] = vec.get(col, 0) + c * x
        f = cx.to_form(0, {c: x for c, x in vec.items() if x})
        if any(not p.coefficient(()).is_constant() for p in f.chart_pieces.values()):
            const = False
    return H0Report(len(ker), connected_components(K)[0], const)
