"""Seeded random instances and the randomized law checks behind ``polyderham selftest``."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

from .forms import AffineMap, PolyForm
from .pairing import AffineChain, stokes_check
from .poly import LaurentPoly, MultiPoly, monomials_up_to


def random_rational(rng: random.Random, size: int = 5) -> Fraction:
    return Fraction(rng.randint(-size, size), rng.randint(1, 3))


def random_poly(rng: random.Random, nvars: int, degree: int, terms: int = 3) -> MultiPoly:
    monos = monomials_up_to(nvars, degree)
    return MultiPoly(nvars, {rng.choice(monos): random_rational(rng) for _ in range(terms)})


def random_laurent(rng: random.Random, nvars: int, bound: int, terms: int = 3) -> LaurentPoly:
    return LaurentPoly(nvars, {tuple(rng.randint(-bound, bound) for _ in range(nvars)): random_rational(rng)
                               for _ in range(terms)})


def random_form(rng: random.Random, nvars: int, degree: int, coeff_degree: int, terms: int = 2,
                laurent: bool = False) -> PolyForm:
    idxs = list(combinations(range(nvars), degree))
    if not idxs:
        return PolyForm.zero(nvars, degree)
    out: dict = {}
    for _ in range(terms):
        idx = rng.choice(idxs)
        p = random_laurent(rng, nvars, coeff_degree, 2) if laurent else random_poly(rng, nvars, coeff_degree, 2)
        out[idx] = out[idx] + p if idx in out else p
    ctype = LaurentPoly if laurent else MultiPoly
    return PolyForm(nvars, degree, out, ctype)


def random_affine_map(rng: random.Random, n_in: int, n_out: int) -> AffineMap:
    return AffineMap([[random_rational(rng, 3) for _ in range(n_in)] for _ in range(n_out)],
                     [random_rational(rng, 3) for _ in range(n_out)], n_in)


def random_chain(rng: random.Random, ambient_dim: int, degree: int, terms: int = 2) -> AffineChain:
    out = []
    for _ in range(terms):
        verts = tuple(tuple(random_rational(rng, 4) for _ in range(ambient_dim)) for _ in range(degree + 1))
        out.append((random_rational(rng), verts))
    return AffineChain(ambient_dim, degree, tuple(out))


def stokes_case(rng: random.Random, max_dim: int = 3, max_coeff_degree: int = 4):
    """A random (form, chain) pair with the form one degree below the chain."""
    m = rng.randint(1, max_dim)
    k = rng.randint(1, m)
    form = random_form(rng, m, k - 1, rng.randint(0, max_coeff_degree))
    return form, random_chain(rng, m, k)


def dg_law_failures(rng: random.Random, cases: int) -> dict[str, int]:
    """Count violations of d^2 = 0, Leibniz, graded commutativity and pullback naturality on PolyForms."""
    fails = {"d_squared": 0, "leibniz": 0, "graded_commutativity": 0, "pullback_naturality": 0}
    for _ in range(cases):
        n = rng.randint(1, 3)
        p, q = rng.randint(0, n), rng.randint(0, n)
        a = random_form(rng, n, p, rng.randint(0, 3))
        b = random_form(rng, n, q, rng.randint(0, 3))
        if not a.d().d().is_zero():
            fails["d_squared"] += 1
        sign = -1 if p % 2 else 1
        if (a.wedge(b)).d() != a.d().wedge(b) + a.wedge(b.d()).scale(sign):
            fails["leibniz"] += 1
        if a.wedge(b) != b.wedge(a).scale((-1) ** (p * q)):
            fails["graded_commutativity"] += 1
        n_in = rng.randint(1, 3)
        f = random_affine_map(rng, n_in, n)
        g = random_affine_map(rng, rng.randint(1, 3), n_in)
        if a.pullback_affine(f).pullback_affine(g) != a.pullback_affine(f.compose(g)):
            fails["pullback_naturality"] += 1
        elif a.pullback_affine(f).d() != a.d().pullback_affine(f):
            fails["pullback_naturality"] += 1
    return fails


def stokes_failures(rng: random.Random, cases: int) -> int:
    bad = 0
    for _ in range(cases):
        form, chain = stokes_case(rng)
        if not stokes_check(form, chain).equal:
            bad += 1
    return bad
