"""Integration of polynomial forms over affine simplices.

An affine k-simplex is an ordered tuple of k+1 points; it is parametrized
over the standard simplex by its chart ``t -> v0 + sum t_i (v_i - v0)``,
with ``dt_1 ^ ... ^ dt_k`` positively oriented.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, isqrt, sqrt
from typing import Iterable, Sequence

from .forms import AffineMap, PolyForm, det, perm_sign
from .piecewise import PiecewiseForm, SimplicialCochain
from .poly import as_fraction

Point = tuple[Fraction, ...]


@dataclass(frozen=True)
class AffineChain:
    ambient_dim: int
    degree: int
    terms: tuple[tuple[Fraction, tuple[Point, ...]], ...] = ()

    def __post_init__(self):
        clean = []
        for c, verts in self.terms:
            verts = tuple(tuple(as_fraction(x) for x in v) for v in verts)
            if len(verts) != self.degree + 1:
                raise ValueError(f"a {self.degree}-simplex needs {self.degree + 1} vertices")
            if any(len(v) != self.ambient_dim for v in verts):
                raise ValueError("vertex dimension does not match the ambient dimension")
            clean.append((as_fraction(c), verts))
        object.__setattr__(self, "terms", tuple(clean))

    @classmethod
    def simplex(cls, vertices: Sequence[Sequence], coefficient=1) -> "AffineChain":
        vertices = [tuple(v) for v in vertices]
        return cls(len(vertices[0]), len(vertices) - 1, ((coefficient, tuple(vertices)),))

    def __add__(self, other: "AffineChain") -> "AffineChain":
        if (self.ambient_dim, self.degree) != (other.ambient_dim, other.degree):
            raise ValueError("chains of different shape")
        return AffineChain(self.ambient_dim, self.degree, self.terms + other.terms)

    def scale(self, c) -> "AffineChain":
        c = as_fraction(c)
        return AffineChain(self.ambient_dim, self.degree, tuple((c * a, v) for a, v in self.terms))

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def boundary(self) -> "AffineChain":
        if self.degree == 0:
            return AffineChain(self.ambient_dim, 0, ())
        out = []
        for c, verts in self.terms:
            for i in range(len(verts)):
                out.append((c if i % 2 == 0 else -c, verts[:i] + verts[i + 1:]))
        return AffineChain(self.ambient_dim, self.degree - 1, tuple(out))

    def normalized(self) -> "AffineChain":
        """Merge terms on the same simplex, orienting vertices in sorted order."""
        acc: dict[tuple[Point, ...], Fraction] = {}
        for c, verts in self.terms:
            if len(set(verts)) < len(verts):
                continue  # repeated vertex: degenerate, pairs to 0 with every form
            order = sorted(range(len(verts)), key=lambda i: verts[i])
            key = tuple(verts[i] for i in order)
            acc[key] = acc.get(key, Fraction(0)) + perm_sign(order) * c
        return AffineChain(self.ambient_dim, self.degree, tuple((c, v) for v, c in sorted(acc.items()) if c))


def simplex_chart(vertices: Sequence[Sequence]) -> AffineMap:
    return AffineMap.simplex_chart(vertices)


def integrate_simplex(form: PolyForm) -> Fraction:
    """Integral over the standard simplex of a top-degree form in chart variables."""
    k = form.nvars
    if form.degree != k:
        raise ValueError(f"need a {k}-form in {k} variables, got degree {form.degree}")
    coeff = form.coefficient(tuple(range(k)))
    total = Fraction(0)
    for exp, c in coeff.terms.items():
        if any(e < 0 for e in exp):
            raise ValueError("cannot integrate negative powers exactly")
        num = 1
        for e in exp:
            num *= factorial(e)
        total += c * Fraction(num, factorial(k + sum(exp)))
    return total


def pair_form_chain(form: PolyForm, chain: AffineChain) -> Fraction:
    if form.nvars != chain.ambient_dim:
        raise ValueError(f"form has {form.nvars} variables, chain lives in R^{chain.ambient_dim}")
    if form.degree != chain.degree:
        raise ValueError(f"cannot pair a {form.degree}-form with a {chain.degree}-chain")
    total = Fraction(0)
    for c, verts in chain.terms:
        if c:
            total += c * integrate_simplex(form.pullback_affine(simplex_chart(verts)))
    return total


@dataclass(frozen=True)
class StokesResult:
    interior: Fraction
    boundary: Fraction

    @property
    def equal(self) -> bool:
        return self.interior == self.boundary


def stokes_check(form: PolyForm, chain: AffineChain) -> StokesResult:
    """Compare the pairing of d(form) with the chain against the pairing of form with its boundary."""
    if chain.degree == 0:
        raise ValueError("Stokes needs a chain of positive degree")
    return StokesResult(pair_form_chain(form.d(), chain), pair_form_chain(form, chain.boundary()))


def derham_map(w: PiecewiseForm) -> SimplicialCochain:
    """Integrate a piecewise form over every simplex of matching dimension."""
    K = w.base
    values = {}
    for s in K.simplices_of_dim(w.degree):
        v = integrate_simplex(w.restrict(s))
        if v:
            values[s] = v
    return SimplicialCochain(K, w.degree, values)


# -- algebra-valued forms over simplices in the real spectrum ----------------------

def xi_evaluate(algebra, form, chain: AffineChain) -> Fraction:
    """Pull an algebra form back along affine simplices inside its real spectrum and integrate.

    Each simplex must lie in the variety of the algebra; this is certified by
    substituting its parametrization into every relation and demanding the
    zero polynomial.
    """
    from .kahler import AlgForm

    if not isinstance(form, AlgForm) or form.owner != algebra:
        raise ValueError("form does not belong to the given algebra")
    if chain.ambient_dim != algebra.nvars:
        raise ValueError("chain dimension does not match the generator count")
    if form.degree != chain.degree:
        raise ValueError(f"cannot pair a {form.degree}-form with a {chain.degree}-chain")
    total = Fraction(0)
    for c, verts in chain.terms:
        for v in verts:
            if not algebra.is_point(v):
                raise ValueError(f"vertex {[str(x) for x in v]} is not a point of the algebra")
        chart = simplex_chart(verts)
        comps = chart.components()
        residual = algebra.containment_residual(comps)
        if residual is not None:
            raise ValueError(f"simplex not contained in the variety: relation restricts to {residual}")
        rep = form.form
        if algebra.kind == "laurent":
            inverted = {i for idx, p in rep.terms.items() for e in p.terms for i, x in enumerate(e) if x < 0}
            for i in inverted:
                if not comps[i].is_constant():
                    raise ValueError(
                        f"generator {i} is inverted but varies along the simplex; the integral is not rational")
        pulled = rep.pullback(comps, chart.n_in)
        if c:
            total += c * integrate_simplex(pulled)
    return total


# -- mass -------------------------------------------------------------------------

@dataclass(frozen=True)
class MassReport:
    squared_volumes: tuple[Fraction, ...]
    mass: float

    def to_json(self):
        from .serialize import rat_str

        return {"squared_volumes": [rat_str(v) for v in self.squared_volumes],
                "mass": {"float": self.mass, "precision": "IEEE double"}}


def _squared_volume(verts: Sequence[Point]) -> Fraction:
    k = len(verts) - 1
    if k == 0:
        return Fraction(1)
    cols = [[a - b for a, b in zip(v, verts[0])] for v in verts[1:]]
    gram = [[sum((a * b for a, b in zip(ci, cj)), Fraction(0)) for cj in cols] for ci in cols]
    return det(gram) / factorial(k) ** 2


def _sqrt_fraction(q: Fraction) -> float:
    # exact when numerator and denominator are perfect squares
    n, d = q.numerator, q.denominator
    rn, rd = isqrt(n), isqrt(d)
    if rn * rn == n and rd * rd == d:
        return rn / rd
    return sqrt(n) / sqrt(d)


def chain_mass(chain: AffineChain) -> MassReport:
    """Exact squared k-volumes of each simplex and the float mass sum |c| vol."""
    chain = chain.normalized()
    vols = tuple(_squared_volume(v) for _, v in chain.terms)
    mass = sum(abs(float(c)) * _sqrt_fraction(v) for (c, _), v in zip(chain.terms, vols))
    return MassReport(vols, mass)


def flat_upper_bound(chain: AffineChain, fillings: Iterable[AffineChain] = ()) -> float:
    """min(|c|, |c - d b| + |b|) over the supplied (k+1)-chains b; an upper bound for the flat seminorm."""
    best = chain_mass(chain).mass
    for beta in fillings:
        if beta.degree != chain.degree + 1:
            raise ValueError("fillings must have degree one more than the chain")
        best = min(best, chain_mass(chain - beta.boundary()).mass + chain_mass(beta).mass)
    return best
