from __future__ import annotations

import random
from fractions import Fraction
from itertools import product
from math import sqrt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import simplex_integral
from polyderham.forms import PolyForm
from polyderham.kahler import FinPresAlgebra
from polyderham.pairing import (
    AffineChain,
    chain_mass,
    derham_map,
    flat_upper_bound,
    integrate_simplex,
    pair_form_chain,
    stokes_check,
    xi_evaluate,
)
from polyderham.piecewise import PiecewiseForm, SimplicialCochain, hat, pw_d, whitney
from polyderham.poly import LaurentPoly, MultiPoly
from polyderham.polyhedron import corpus, interval, triangle_boundary
from polyderham.selftest import random_chain, stokes_case

SEEDED = settings(max_examples=60, derandomize=True, deadline=None)

x = MultiPoly.var(2, 0)
y = MultiPoly.var(2, 1)


# -- integration over the standard simplex -------------------------------------------

def test_integrate_simplex_examples():
    assert integrate_simplex(PolyForm.dx(1, 0)) == 1
    assert integrate_simplex(PolyForm.dx(2, 0, 1)) == Fraction(1, 2)
    assert integrate_simplex(PolyForm.dx(1, 0).mul_function(MultiPoly.var(1, 0))) == Fraction(1, 2)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_monomial_integrals_match_iterated_integration(k):
    for exp in product(range(4), repeat=k):
        form = PolyForm.dx(k, *range(k)).mul_function(MultiPoly.monomial(exp, 1))
        assert integrate_simplex(form) == simplex_integral({exp: Fraction(1)}, k), exp


def test_integrate_simplex_rejects_wrong_degree():
    with pytest.raises(ValueError):
        integrate_simplex(PolyForm.dx(2, 0))


# -- pairing with chains ---------------------------------------------------------------

def test_pair_examples():
    seg = AffineChain.simplex([[0], [1]])
    assert pair_form_chain(PolyForm.dx(1, 0), seg) == 1
    diag = AffineChain.simplex([[0, 0], [1, 1]])
    assert pair_form_chain(PolyForm.function(x * y).d(), diag) == 1
    tri = AffineChain.simplex([[0, 0], [1, 0], [1, 1]])
    xdy = PolyForm.dx(2, 1).mul_function(x)
    # hand computation: x dy over the three edges gives 1 - 1/2 + 0
    assert pair_form_chain(xdy, tri.boundary()) == Fraction(1, 2)
    assert pair_form_chain(xdy.d(), tri) == Fraction(1, 2)


def test_pair_rejects_mismatched_degree():
    with pytest.raises(ValueError):
        pair_form_chain(PolyForm.dx(2, 1).mul_function(x), AffineChain.simplex([[0, 0], [1, 0], [1, 1]]))


def test_orientation_reversal_negates():
    xdy = PolyForm.dx(2, 1).mul_function(x)
    a = AffineChain.simplex([[0, 0], [1, 2]])
    b = AffineChain.simplex([[1, 2], [0, 0]])
    assert pair_form_chain(xdy, a) == -pair_form_chain(xdy, b)
    assert pair_form_chain(xdy, a + b) == 0


def test_pairing_is_bilinear_and_degenerate_simplices_vanish():
    rng = random.Random(4)
    c1, c2 = random_chain(rng, 2, 1), random_chain(rng, 2, 1)
    w = PolyForm.dx(2, 0).mul_function(x * y) + PolyForm.dx(2, 1)
    assert pair_form_chain(w, c1 + c2.scale(3)) == pair_form_chain(w, c1) + 3 * pair_form_chain(w, c2)
    flat = AffineChain.simplex([[0, 0], [1, 1], [2, 2]])
    assert pair_form_chain(PolyForm.dx(2, 0, 1), flat) == 0


# -- Stokes ---------------------------------------------------------------------------

def test_stokes_examples():
    r = stokes_check(PolyForm.function(x * y), AffineChain.simplex([[0, 0], [1, 1]]))
    assert r.interior == r.boundary == 1
    r = stokes_check(PolyForm.dx(2, 1).mul_function(x), AffineChain.simplex([[0, 0], [1, 0], [0, 1]]))
    assert r.equal
    r = stokes_check(PolyForm.zero(2, 1), AffineChain.simplex([[0, 0], [1, 0], [0, 1]]))
    assert r.interior == r.boundary == 0


@SEEDED
@given(st.integers(0, 10**6))
def test_stokes_on_random_cases(seed):
    form, chain = stokes_case(random.Random(seed))
    assert stokes_check(form, chain).equal


@SEEDED
@given(st.integers(0, 10**6))
def test_boundary_of_boundary_pairs_to_zero(seed):
    rng = random.Random(seed)
    c = random_chain(rng, 3, 3)
    assert c.boundary().boundary().normalized().terms == ()


# -- the de Rham map ---------------------------------------------------------------------

def test_derham_map_examples():
    K = triangle_boundary()
    ones = derham_map(PiecewiseForm.constant(K, 1))
    assert all(ones.value((v,)) == 1 for v in range(3))
    I = interval()
    e = whitney(SimplicialCochain.elementary(I, (0, 1)))
    assert derham_map(e).value((0, 1)) == 1
    for v in range(3):
        h = hat(K, v)
        assert derham_map(pw_d(h)) == derham_map(h).coboundary()


def test_integration_left_inverts_whitney_on_the_corpus():
    for K in corpus().values():
        for k in range(K.dim + 1):
            for s in K.simplices_of_dim(k):
                c = SimplicialCochain.elementary(K, s)
                assert derham_map(whitney(c)) == c


# -- algebra forms over the real spectrum ----------------------------------------------

def test_xi_examples():
    P = FinPresAlgebra.polynomial(2)
    seg = AffineChain.simplex([[0, 0], [1, 0]])
    assert xi_evaluate(P, P.dx(0), seg) == 1
    Q = FinPresAlgebra.monomial_quotient(2, [(1, 1)])
    assert xi_evaluate(Q, Q.dx(0), seg) == 1
    with pytest.raises(ValueError, match="not contained"):
        xi_evaluate(Q, Q.dx(0), AffineChain.simplex([[1, 0], [0, 1]]))


def test_xi_agrees_with_plain_pairing_for_polynomials():
    P = FinPresAlgebra.polynomial(2)
    w = PolyForm.dx(2, 1).mul_function(x * x + y)
    chain = AffineChain.simplex([[0, 0], [2, 1]]) + AffineChain.simplex([[1, 1], [0, 3]], 2)
    assert xi_evaluate(P, P.form(w), chain) == pair_form_chain(w, chain)


def test_xi_laurent_rules():
    L = FinPresAlgebra.laurent(2)
    # x1^{-1} dx0 along a segment where x1 = 2 is constant: integral is (1/2) * 3
    w = L.form(PolyForm(2, 1, {(0,): LaurentPoly.monomial((0, -1))}, LaurentPoly))
    assert xi_evaluate(L, w, AffineChain.simplex([[1, 2], [4, 2]])) == Fraction(3, 2)
    with pytest.raises(ValueError):
        xi_evaluate(L, L.dx(0), AffineChain.simplex([[0, 1], [1, 1]]))
    with pytest.raises(ValueError, match="varies"):
        xi_evaluate(L, w, AffineChain.simplex([[1, 1], [1, 2]]))


def test_xi_on_the_variety_of_a_univariate_quotient():
    A = FinPresAlgebra.univariate_quotient([0, -1, 0, 1])  # x^3 - x
    point_chain = AffineChain(1, 0, ((Fraction(1), ((Fraction(1),),)), (Fraction(2), ((Fraction(-1),),))))
    x1 = MultiPoly.var(1, 0)
    f = A.form(PolyForm.function(x1 * x1 + x1))
    assert xi_evaluate(A, f, point_chain) == 2  # 1 * (1 + 1) + 2 * (1 - 1)
    with pytest.raises(ValueError):
        xi_evaluate(A, f, AffineChain.simplex([[2]]))


# -- mass -----------------------------------------------------------------------------------

def test_chain_mass_examples():
    assert chain_mass(AffineChain.simplex([[0], [1]])).mass == 1
    tri = chain_mass(AffineChain.simplex([[0, 0], [1, 0], [0, 1]]))
    assert tri.squared_volumes == (Fraction(1, 4),) and tri.mass == 0.5
    diag = chain_mass(AffineChain.simplex([[0, 0], [1, 1]]))
    assert diag.squared_volumes == (2,)
    assert abs(diag.mass - sqrt(2)) <= 1e-15


def test_flat_bound_never_exceeds_mass():
    c = AffineChain.simplex([[0, 0], [1, 0]]) + AffineChain.simplex([[1, 0], [1, 1]]) + AffineChain.simplex([[1, 1], [0, 0]])
    filling = AffineChain.simplex([[0, 0], [1, 0], [1, 1]])
    assert flat_upper_bound(c) == chain_mass(c).mass
    assert flat_upper_bound(c, [filling]) == pytest.approx(0.5, abs=1e-12)
