"""Finitely presented algebras over Q and their de Rham forms.

Four presentation kinds are supported, each with a normal form that can be
computed without Groebner bases:

* ``polynomial``: Q[x_0..x_{n-1}], normal form is the identity.
* ``laurent``: Q[x_i, 1/x_i], exponents may be negative.
* ``monomial_quotient``: Q[x]/(monomials).  Functions drop every term
  divisible by a generator; forms are reduced block by block in the
  multidegree grading (see ``FinPresAlgebra.normal_form``).
* ``univariate_quotient``: Q[x]/(f) for a monic f in one variable.
  Functions reduce mod f and 1-forms reduce mod gcd(f, f').
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .forms import PolyForm, merge_sign
from .linalg import Echelon, solve_columns
from .poly import Exponent, LaurentPoly, MultiPoly, _Poly, as_fraction, exponent_box, monomials_up_to

KINDS = ("polynomial", "laurent", "monomial_quotient", "univariate_quotient")


# -- univariate helpers -------------------------------------------------------

def _dense(p: _Poly) -> list[Fraction]:
    deg = p.degree()
    out = [Fraction(0)] * (deg + 1)
    for (e,), c in p.terms.items():
        out[e] = c
    return out


def _from_dense(coeffs: Sequence[Fraction]) -> MultiPoly:
    return MultiPoly(1, {(i,): c for i, c in enumerate(coeffs) if c})


def univariate_rem(p: _Poly, f: _Poly) -> MultiPoly:
    a, b = _dense(p), _dense(f)
    if not b:
        raise ZeroDivisionError("division by the zero polynomial")
    lead = b[-1]
    while len(a) >= len(b) and any(a):
        if not a[-1]:
            a.pop()
            continue
        q = a[-1] / lead
        shift = len(a) - len(b)
        for i, c in enumerate(b):
            a[shift + i] -= q * c
        a.pop()
    return _from_dense(a)


def univariate_gcd(p: _Poly, q: _Poly) -> MultiPoly:
    """Monic gcd (zero if both vanish)."""
    a, b = MultiPoly(1, p.terms), MultiPoly(1, q.terms)
    while b:
        a, b = b, univariate_rem(a, b)
    if not a:
        return a
    return a.scale(1 / _dense(a)[-1])


def multidegree(exp: Exponent, idx: Sequence[int]) -> Exponent:
    """Combined grading of x^exp dx_idx: each dx_i carries degree e_i."""
    out = list(exp)
    for i in idx:
        out[i] += 1
    return tuple(out)


def _divides(g: Exponent, e: Exponent) -> bool:
    return all(a <= b for a, b in zip(g, e))


# -- algebras -----------------------------------------------------------------

@dataclass(frozen=True)
class FinPresAlgebra:
    kind: str
    nvars: int
    ideal_monomials: tuple[Exponent, ...] = ()
    modulus: MultiPoly | None = None
    names: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown algebra kind {self.kind!r}; expected one of {KINDS}")
        if self.nvars < 0:
            raise ValueError("variable count must be non-negative")
        gens = tuple(sorted({tuple(int(e) for e in g) for g in self.ideal_monomials}))
        if self.kind == "monomial_quotient":
            for g in gens:
                if len(g) != self.nvars or any(e < 0 for e in g):
                    raise ValueError(f"bad ideal monomial {list(g)}")
            # keep only minimal generators
            gens = tuple(g for g in gens if not any(h != g and _divides(h, g) for h in gens))
        elif gens:
            raise ValueError("ideal monomials only make sense for monomial_quotient")
        object.__setattr__(self, "ideal_monomials", gens)
        if self.kind == "univariate_quotient":
            f = self.modulus
            if f is None or self.nvars != 1 or f.nvars != 1 or f.degree() < 1:
                raise ValueError("univariate_quotient needs one variable and a modulus of degree >= 1")
            object.__setattr__(self, "modulus", MultiPoly(1, f.terms).scale(1 / _dense(f)[-1]))
        elif self.modulus is not None:
            raise ValueError("a modulus only makes sense for univariate_quotient")
        if not self.names:
            object.__setattr__(self, "names", tuple(f"x{i}" for i in range(self.nvars)))
        elif len(self.names) != self.nvars:
            raise ValueError("one name per generator is required")

    # constructors
    @classmethod
    def polynomial(cls, n: int) -> "FinPresAlgebra":
        return cls("polynomial", n)

    @classmethod
    def laurent(cls, n: int) -> "FinPresAlgebra":
        return cls("laurent", n)

    @classmethod
    def monomial_quotient(cls, n: int, monomials: Sequence[Sequence[int]]) -> "FinPresAlgebra":
        return cls("monomial_quotient", n, tuple(tuple(m) for m in monomials))

    @classmethod
    def univariate_quotient(cls, modulus: Sequence) -> "FinPresAlgebra":
        """Q[x]/(f) with f given by its coefficients, constant term first."""
        return cls("univariate_quotient", 1, modulus=_from_dense([as_fraction(c) for c in modulus]))

    @property
    def ctype(self):
        return LaurentPoly if self.kind == "laurent" else MultiPoly

    @property
    def torsion_modulus(self) -> MultiPoly:
        """gcd(f, f') for univariate quotients: the 1-forms are Q[x]/(gcd) dx."""
        return univariate_gcd(self.modulus, self.modulus.partial(0))

    def relations(self) -> list[MultiPoly]:
        if self.kind == "monomial_quotient":
            return [MultiPoly.monomial(g) for g in self.ideal_monomials]
        if self.kind == "univariate_quotient":
            return [self.modulus]
        return []

    # normal forms
    def normal_poly(self, p: _Poly) -> _Poly:
        if p.nvars != self.nvars:
            raise ValueError(f"polynomial in {p.nvars} variables, algebra has {self.nvars} generators")
        if self.kind == "laurent":
            return p if p.allow_negative else p.to_laurent()
        if any(e < 0 for exp in p.terms for e in exp):
            raise ValueError(f"negative exponents are not allowed in a {self.kind} algebra")
        if self.kind == "polynomial":
            return MultiPoly._raw(p.nvars, dict(p.terms))
        if self.kind == "monomial_quotient":
            return MultiPoly._raw(p.nvars, {e: c for e, c in p.terms.items()
                                            if not any(_divides(g, e) for g in self.ideal_monomials)})
        return univariate_rem(p, self.modulus)

    def normal_form(self, form: PolyForm) -> PolyForm:
        """Canonical representative of a form modulo the relations.

        For monomial quotients the submodule killed in degree k is spanned by
        I*Omega^k and dI ^ Omega^(k-1).  Both are multidegree-homogeneous, so
        each multidegree block is a finite linear algebra problem; the block
        is reduced against a fixed fully reduced echelon basis.
        """
        if form.nvars != self.nvars:
            raise ValueError(f"form in {form.nvars} variables, algebra has {self.nvars} generators")
        k = form.degree
        if self.kind in ("polynomial", "laurent"):
            return PolyForm(self.nvars, k, {i: self.normal_poly(p) for i, p in form.terms.items()}, self.ctype)
        if self.kind == "univariate_quotient":
            if k == 0:
                return PolyForm(1, 0, {(): self.normal_poly(p) for p in form.terms.values()})
            if k == 1:
                g = self.torsion_modulus
                return PolyForm(1, 1, {i: univariate_rem(p, g) for i, p in form.terms.items()})
            return PolyForm.zero(1, k)
        blocks: dict[Exponent, dict[Sequence[int], Fraction]] = {}
        for idx, p in form.terms.items():
            for exp, c in p.terms.items():
                if any(e < 0 for e in exp):
                    raise ValueError("negative exponents are not allowed in a monomial quotient")
                blocks.setdefault(multidegree(exp, idx), {})[idx] = c
        out: dict[tuple, dict[Exponent, Fraction]] = {}
        for mu, vec in blocks.items():
            basis, ech = self._block(mu, k)
            pos = {idx: j for j, idx in enumerate(basis)}
            reduced = _reduce_rational({pos[i]: c for i, c in vec.items()}, ech)
            for j, c in reduced.items():
                idx = basis[j]
                exp = tuple(m - (1 if i in idx else 0) for i, m in enumerate(mu))
                out.setdefault(idx, {})[exp] = c
        return PolyForm(self.nvars, k, {i: MultiPoly(self.nvars, t) for i, t in out.items()})

    def _block(self, mu: Exponent, k: int):
        return _monomial_block(self.ideal_monomials, mu, k)

    # elements and points
    def element(self, p) -> "AlgElement":
        if not isinstance(p, _Poly):
            p = self.ctype.constant(self.nvars, p)
        return AlgElement(self, p)

    def var(self, i: int) -> "AlgElement":
        return AlgElement(self, self.ctype.var(self.nvars, i))

    def inverse_var(self, i: int) -> "AlgElement":
        if self.kind != "laurent":
            raise ValueError("only Laurent algebras invert their generators")
        return AlgElement(self, LaurentPoly.var(self.nvars, i, -1))

    def one(self) -> "AlgElement":
        return self.element(1)

    def form(self, form: PolyForm) -> "AlgForm":
        return AlgForm(self, form)

    def dx(self, *indices: int) -> "AlgForm":
        return AlgForm(self, PolyForm.dx(self.nvars, *indices, ctype=self.ctype))

    def is_point(self, x: Sequence) -> bool:
        if len(x) != self.nvars:
            raise ValueError(f"arity mismatch: point has {len(x)} coordinates, algebra has {self.nvars} generators")
        x = [as_fraction(v) for v in x]
        if self.kind == "laurent":
            return all(v != 0 for v in x)
        return all(r.evaluate(x) == 0 for r in self.relations())

    def containment_residual(self, components: Sequence[_Poly]) -> str | None:
        """None if the polynomial map (a simplex chart) lands in the real spectrum.

        Relations are substituted symbolically and must vanish identically.
        For Laurent algebras every coordinate must stay away from zero, which
        for an affine chart means the vertex values share a strict sign.
        """
        if len(components) != self.nvars:
            raise ValueError("one component per generator is required")
        if self.kind == "laurent":
            n_in = components[0].nvars if components else 0
            corners = [[Fraction(0)] * n_in] + [[Fraction(int(i == j)) for j in range(n_in)] for i in range(n_in)]
            for i, c in enumerate(components):
                if c.degree() > 1:
                    raise ValueError("only affine simplices are supported")
                vals = [c.evaluate(p) for p in corners]
                if not (all(v > 0 for v in vals) or all(v < 0 for v in vals)):
                    return f"coordinate {i} vanishes somewhere on the simplex"
            return None
        for r in self.relations():
            res = r.substitute(list(components), components[0].nvars if components else 0)
            if res:
                return str(res)
        return None

    def to_json(self):
        from .serialize import algebra_to_json

        return algebra_to_json(self)


def _reduce_rational(vec: dict[int, Fraction], ech: Echelon) -> dict[int, Fraction]:
    vec = dict(vec)
    for p in sorted(ech.rows):
        if p in vec:
            row = ech.rows[p]
            f = Fraction(vec[p]) / row[p]
            for c, v in row.items():
                nv = vec.get(c, 0) - f * v
                if nv:
                    vec[c] = nv
                else:
                    vec.pop(c, None)
    return vec


@lru_cache(maxsize=4096)
def _monomial_block(gens: tuple[Exponent, ...], mu: Exponent, k: int):
    """Basis of the multidegree-mu block of k-forms and the echelon basis of its relations."""
    n = len(mu)
    idxs = [I for I in combinations(range(n), k) if all(mu[i] >= 1 for i in I)]

    def coeff_exp(I):
        return tuple(m - (1 if i in I else 0) for i, m in enumerate(mu))

    # basis elements with coefficient in the ideal come first so they become pivots
    dead = {I for I in idxs if any(_divides(g, coeff_exp(I)) for g in gens)}
    basis = sorted(idxs, key=lambda I: (I not in dead, I))
    pos = {I: j for j, I in enumerate(basis)}
    ech = Echelon(len(basis))
    for I in dead:
        ech.add({pos[I]: 1})
    for g in gens:
        for J in combinations(range(n), k - 1) if k >= 1 else ():
            c = [m - gi - (1 if i in J else 0) for i, (m, gi) in enumerate(zip(mu, g))]
            if any(e < 0 for e in c):
                continue
            row: dict[int, int] = {}
            for i in range(n):
                if g[i] == 0 or i in J:
                    continue
                s = merge_sign((i,), J)
                I = tuple(sorted(J + (i,)))
                row[pos[I]] = row.get(pos[I], 0) + s * g[i]
            row = {c_: v for c_, v in row.items() if v}
            if row:
                ech.add(row)
    return tuple(basis), ech


# -- elements and forms -------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AlgElement:
    owner: FinPresAlgebra
    value: _Poly

    def __post_init__(self):
        object.__setattr__(self, "value", self.owner.normal_poly(self.value))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.owner.element(other)
        return isinstance(other, AlgElement) and self.owner == other.owner and self.value.terms == other.value.terms

    def __hash__(self):
        return hash((self.owner, self.value))

    def __repr__(self):
        return f"AlgElement({self.value})"

    def _lift(self, other):
        if isinstance(other, AlgElement):
            if other.owner != self.owner:
                raise ValueError("elements of different algebras")
            return other.value
        return self.owner.ctype.constant(self.owner.nvars, other)

    def __add__(self, other):
        return AlgElement(self.owner, self.value + self._lift(other))

    __radd__ = __add__

    def __neg__(self):
        return AlgElement(self.owner, -self.value)

    def __sub__(self, other):
        return AlgElement(self.owner, self.value - self._lift(other))

    def __rsub__(self, other):
        return AlgElement(self.owner, self._lift(other) - self.value)

    def __mul__(self, other):
        return AlgElement(self.owner, self.value * self._lift(other))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = self.owner.one()
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.value

    def d(self) -> "AlgForm":
        return alg_d(AlgForm(self.owner, PolyForm.function(self.value)))

    def evaluate(self, point: "RealPoint") -> Fraction:
        """The function b-hat: evaluate at a point of the real spectrum."""
        if point.owner != self.owner:
            raise ValueError("point belongs to a different algebra")
        return self.value.evaluate(point.coordinates)


@dataclass(frozen=True, eq=False)
class AlgForm:
    owner: FinPresAlgebra
    form: PolyForm

    def __post_init__(self):
        object.__setattr__(self, "form", self.owner.normal_form(self.form))

    @property
    def degree(self) -> int:
        return self.form.degree

    def __eq__(self, other):
        return isinstance(other, AlgForm) and self.owner == other.owner and self.form == other.form

    def __hash__(self):
        return hash((self.owner, self.form))

    def __repr__(self):
        return f"AlgForm({self.form})"

    def is_zero(self) -> bool:
        return self.form.is_zero()

    def __add__(self, other: "AlgForm"):
        return AlgForm(self.owner, self.form + other.form)

    def __neg__(self):
        return AlgForm(self.owner, -self.form)

    def __sub__(self, other):
        return AlgForm(self.owner, self.form - other.form)

    def scale(self, c):
        return AlgForm(self.owner, self.form.scale(c))

    def times(self, b: AlgElement) -> "AlgForm":
        return AlgForm(self.owner, self.form.mul_function(b.value))

    def wedge(self, other: "AlgForm") -> "AlgForm":
        if other.owner != self.owner:
            raise ValueError("forms of different algebras")
        return AlgForm(self.owner, self.form.wedge(other.form))

    def d(self) -> "AlgForm":
        return alg_d(self)


def alg_d(a: AlgForm) -> AlgForm:
    return AlgForm(a.owner, a.form.d())


@dataclass(frozen=True)
class RealPoint:
    owner: FinPresAlgebra
    coordinates: tuple[Fraction, ...]

    def __post_init__(self):
        coords = tuple(as_fraction(x) for x in self.coordinates)
        object.__setattr__(self, "coordinates", coords)
        if not self.owner.is_point(coords):
            raise ValueError(f"{[str(c) for c in coords]} is not a point of the real spectrum")


def is_point(A: FinPresAlgebra, x: Sequence) -> bool:
    return A.is_point(x)


@dataclass(frozen=True)
class AlgebraMap:
    """Homomorphism defined by the images of the generators (a distinguished embedding of a subalgebra)."""

    source: FinPresAlgebra
    target: FinPresAlgebra
    images: tuple[AlgElement, ...]

    def __post_init__(self):
        if len(self.images) != self.source.nvars:
            raise ValueError("one image per source generator is required")
        if any(im.owner != self.target for im in self.images):
            raise ValueError("images must lie in the target algebra")
        if self.source.kind == "laurent":
            raise ValueError("maps out of a Laurent algebra need inverses of the images; not supported")
        vals = [im.value for im in self.images]
        for r in self.source.relations():
            if not AlgElement(self.target, r.substitute(vals, self.target.nvars)).is_zero():
                raise ValueError("generator images do not satisfy the relations of the source")

    def element(self, b: AlgElement) -> AlgElement:
        return AlgElement(self.target, b.value.substitute([im.value for im in self.images], self.target.nvars))

    def form(self, w: AlgForm) -> AlgForm:
        return AlgForm(self.target, w.form.pullback([im.value for im in self.images], self.target.nvars))


# -- the real spectrum of a subalgebra of Pol(K) --------------------------------

def gamma_point(A: FinPresAlgebra, generators: Sequence, x: Sequence) -> RealPoint:
    """The point of the real spectrum of A given by evaluating the generator functions at x in |K|."""
    if len(generators) != A.nvars:
        raise ValueError("one generator function per algebra generator is required")
    return RealPoint(A, tuple(g.evaluate(x) for g in generators))


def element_as_function(b: AlgElement, generators: Sequence):
    """The piecewise polynomial b(g_1, ..., g_n) on |K|."""
    from .piecewise import PiecewiseForm

    if b.owner.kind == "laurent" and any(e < 0 for exp in b.value.terms for e in exp):
        raise ValueError("inverting a piecewise polynomial is not supported")
    K = generators[0].base
    out = {}
    for a in K.maximal_simplices:
        comps = [g.chart_piece(a).coefficient(()) for g in generators]
        comps = [MultiPoly(len(a) - 1, c.terms) for c in comps]
        p = MultiPoly(b.owner.nvars, b.value.terms).substitute(comps, len(a) - 1)
        out[a] = PolyForm.function(MultiPoly(len(a) - 1, p.terms))
    return PiecewiseForm(K, 0, out)


# -- certificates and solvers -------------------------------------------------

@dataclass(frozen=True)
class ZeroDiffCertificate:
    element: AlgElement
    q: tuple[Fraction, ...]  # monic annihilator, constant term first
    h1: AlgElement

    def _eval(self, coeffs: Sequence[Fraction]) -> AlgElement:
        out = self.element.owner.element(0)
        power = self.element.owner.one()
        for c in coeffs:
            out = out + power * c
            power = power * self.element
        return out

    def verify(self) -> bool:
        qa = self._eval(self.q)
        dq = [i * c for i, c in enumerate(self.q)][1:]
        return qa.is_zero() and (self.h1 * self._eval(dq)) == 1 and self.element.d().is_zero()

    def to_json(self):
        from .serialize import poly_to_json, rat_str

        return {"q": [rat_str(c) for c in self.q], "h1": poly_to_json(self.h1.value)}


def _as_vector(p: _Poly) -> dict:
    return dict(p.terms)


def zero_diff_certificate(a: AlgElement, bound: int) -> ZeroDiffCertificate | None:
    """Search for monic q (deg <= bound) with q(a) = 0 and h1 with h1(a) q'(a) = 1.

    The minimal polynomial of a is tried: if any q works then it does, since
    q'(a) invertible forces m'(a) invertible for the minimal polynomial m.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    A = a.owner
    powers = [A.one()]
    q = None
    for deg in range(1, bound + 1):
        nxt = powers[-1] * a
        sol = solve_columns([_as_vector(p.value) for p in powers], _as_vector(nxt.value))
        if sol is not None:
            q = tuple([-sol.get(j, Fraction(0)) for j in range(deg)] + [Fraction(1)])
            break
        powers.append(nxt)
    if q is None:
        return None
    deg = len(q) - 1
    dq_at_a = A.element(0)
    for j in range(1, deg + 1):
        dq_at_a = dq_at_a + powers[j - 1] * (j * q[j])
    cols = [_as_vector((powers[j] * dq_at_a).value) for j in range(deg)]
    sol = solve_columns(cols, _as_vector(A.one().value))
    if sol is None:
        return None
    h1 = A.element(0)
    for j, c in sol.items():
        h1 = h1 + powers[j] * c
    cert = ZeroDiffCertificate(a, q, h1)
    assert cert.verify(), "certificate failed verification"
    return cert


def _form_vector(form: PolyForm) -> dict:
    return {(idx, exp): c for idx, p in form.terms.items() for exp, c in p.terms.items()}


@dataclass
class ExactnessResult:
    feasible: bool
    primitive: AlgForm | None
    bound: int
    conclusive: bool
    blocks: list[tuple[Exponent, bool]] = field(default_factory=list)

    @property
    def obstructed(self) -> list[Exponent]:
        return [mu for mu, ok in self.blocks if not ok]

    def summary(self) -> str:
        if self.feasible:
            return f"primitive found at bound {self.bound}"
        if self.conclusive:
            return "infeasible at all blocks; class nonzero"
        return f"infeasible at bound {self.bound}"


def _solve_for_primitive(A: FinPresAlgebra, target: PolyForm, candidates: list[tuple[Exponent, tuple]]) -> PolyForm | None:
    k = target.degree
    cols = []
    for exp, J in candidates:
        coeff = A.ctype.monomial(exp)
        cols.append(_form_vector(A.normal_form(PolyForm(A.nvars, k - 1, {J: coeff}, A.ctype).d())))
    sol = solve_columns(cols, _form_vector(target))
    if sol is None:
        return None
    terms: dict[tuple, dict] = {}
    for j, c in sol.items():
        exp, J = candidates[j]
        terms.setdefault(J, {})[exp] = c
    return PolyForm(A.nvars, k - 1, {J: A.ctype(A.nvars, t) for J, t in terms.items()}, A.ctype)


def laurent_block_solve(target: PolyForm, mu: Exponent) -> PolyForm | None:
    """Solve d eta = (the multidegree-mu part of target) inside the finite mu-block."""
    n = target.nvars
    A = FinPresAlgebra.laurent(n)
    part = {}
    for idx, p in target.terms.items():
        t = {e: c for e, c in p.terms.items() if multidegree(e, idx) == mu}
        if t:
            part[idx] = LaurentPoly(n, t)
    k = target.degree
    cands = [(tuple(m - (1 if i in J else 0) for i, m in enumerate(mu)), J) for J in combinations(range(n), k - 1)]
    return _solve_for_primitive(A, PolyForm(n, k, part, LaurentPoly), cands)


def truncated_exactness_solve(w: AlgForm, bound: int) -> ExactnessResult:
    """Look for eta with d eta = w among forms whose coefficients are bounded by ``bound``.

    Polynomial-type algebras bound the per-term total degree (coefficient
    degree plus form degree).  Laurent algebras bound every exponent of the
    coefficient by ``bound`` in absolute value, and are also solved block by
    block in the multidegree grading, which is complete: the graded answer is
    conclusive at every bound.
    """
    A = w.owner
    k = w.degree
    if k < 1:
        raise ValueError("need a form of positive degree")
    if not alg_d(w).is_zero():
        raise ValueError("form is not closed")
    if bound < 0:
        raise ValueError("bound must be non-negative")
    Js = list(combinations(range(A.nvars), k - 1))
    if A.kind == "laurent":
        exps = exponent_box(A.nvars, bound)
    else:
        exps = monomials_up_to(A.nvars, bound - (k - 1))
    cands = [(e, J) for e in exps for J in Js]
    eta = _solve_for_primitive(A, w.form, cands) if not w.is_zero() else PolyForm.zero(A.nvars, k - 1, A.ctype)
    if A.kind != "laurent":
        return ExactnessResult(eta is not None, AlgForm(A, eta) if eta is not None else None, bound, False)
    mus = sorted({multidegree(e, idx) for idx, p in w.form.terms.items() for e in p.terms})
    blocks = [(mu, laurent_block_solve(w.form, mu) is not None) for mu in mus]
    graded_ok = all(ok for _, ok in blocks)
    if eta is not None and not graded_ok:
        raise AssertionError("box solve succeeded where the graded solve failed")
    return ExactnessResult(eta is not None, AlgForm(A, eta) if eta is not None else None, bound,
                           conclusive=not graded_ok, blocks=blocks)


@dataclass
class EulerResult:
    feasible: bool
    solution: tuple[LaurentPoly, ...] | None
    bound: int


def euler_equation_solve(n: int, c, bound: int) -> EulerResult:
    """Solve sum_i x_i dF_i/dx_i = c for Laurent F_i with exponents in [-bound, bound]^n."""
    c = as_fraction(c)
    if n < 0:
        raise ValueError("n must be non-negative")
    if n == 0:
        return EulerResult(c == 0, () if c == 0 else None, bound)
    box = exponent_box(n, bound)
    unknowns = [(i, m) for i in range(n) for m in box]
    # the operator is diagonal: x^m in F_i contributes m_i x^m
    cols = [{m: m[i]} if m[i] else {} for i, m in unknowns]
    target = {(0,) * n: c} if c else {}
    sol = solve_columns(cols, target)
    if sol is None:
        return EulerResult(False, None, bound)
    F = [dict() for _ in range(n)]
    for j, v in sol.items():
        i, m = unknowns[j]
        F[i][m] = v
    return EulerResult(True, tuple(LaurentPoly(n, f) for f in F), bound)


def euler_operator(F: Sequence[LaurentPoly]) -> LaurentPoly:
    n = len(F)
    out = LaurentPoly.zero(n)
    for i, f in enumerate(F):
        out = out + f.euler(i)
    return out


def torus_witness(n: int) -> AlgForm:
    """dx_0/x_0 ^ ... ^ dx_{n-1}/x_{n-1} in the Laurent algebra on n generators."""
    if n < 1:
        raise ValueError("n must be at least 1")
    A = FinPresAlgebra.laurent(n)
    coeff = LaurentPoly.monomial((-1,) * n)
    return AlgForm(A, PolyForm(n, n, {tuple(range(n)): coeff}, LaurentPoly))
