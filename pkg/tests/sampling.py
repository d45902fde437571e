"""Seeded random piecewise forms drawn from truncated complexes."""

from __future__ import annotations

import random
from fractions import Fraction

from polyderham.cohomology import TruncatedComplex, rank_kernel
from polyderham.piecewise import PiecewiseForm
from polyderham.polyhedron import barycentric_subdivide, interval, simplicial_map


def random_combination(rng: random.Random, forms: list[PiecewiseForm], K, degree: int) -> PiecewiseForm:
    out = PiecewiseForm.zero(K, degree)
    for w in forms:
        c = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
        if c:
            out = out + w.scale(c)
    return out


def closed_forms(cx: TruncatedComplex, k: int) -> list[PiecewiseForm]:
    """A basis of the closed degree-k forms of the truncated complex."""
    basis = cx.basis_forms(k)
    if k >= cx.top:
        return basis
    rows = cx.complex.differentials[k]
    _, ker = rank_kernel(rows, cx.complex.dims[k])
    out = []
    for v in ker:
        w = PiecewiseForm.zero(cx.base, k)
        for i, c in v.items():
            w = w + basis[i].scale(c)
        out.append(w)
    return out


def random_closed_form(rng: random.Random, cx: TruncatedComplex, k: int) -> PiecewiseForm:
    """A nonzero random closed form of degree k (or zero when none exist)."""
    forms = closed_forms(cx, k)
    if not forms:
        return PiecewiseForm.zero(cx.base, k)
    while True:
        w = random_combination(rng, forms, cx.base, k)
        if not w.is_zero():
            return w


def interval_approximations():
    """Two adjacent simplicial approximations of the identity, from the twice to the once subdivided interval.

    Fine vertices 0, 1/4, 1/2, 3/4, 1 go to 0, 0, 1/2, 1/2, 1 and to 0, 1/2, 1/2, 1, 1.
    """
    fine = barycentric_subdivide(barycentric_subdivide(interval()))
    coarse = barycentric_subdivide(interval())
    pos = {v[0]: i for i, v in enumerate(fine.vertices)}
    cpos = {v[0]: i for i, v in enumerate(coarse.vertices)}
    q, h, t = Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)
    m0 = {0: 0, q: 0, h: h, t: h, 1: 1}
    m1 = {0: 0, q: h, h: h, t: 1, 1: 1}
    f0 = simplicial_map(fine, coarse, {pos[s]: cpos[v] for s, v in m0.items()})
    f1 = simplicial_map(fine, coarse, {pos[s]: cpos[v] for s, v in m1.items()})
    return f0, f1
