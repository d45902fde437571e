from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import dense_rank
from polyderham.forms import AffineMap, PolyForm, form_d, form_pullback_affine, form_wedge
from polyderham.linalg import lp_maximize, rank, rank_kernel, solve, solve_dense
from polyderham.poly import LaurentPoly, MultiPoly, poly_eval, poly_partial
from polyderham.selftest import random_affine_map, random_form, random_laurent, random_poly
from polyderham.serialize import InputError, form_from_json, form_to_json, poly_from_json, poly_to_json

SEEDED = settings(max_examples=60, derandomize=True, deadline=None)

x0 = MultiPoly.var(2, 0)
x1 = MultiPoly.var(2, 1)


# -- polynomials ----------------------------------------------------------------

def test_poly_eval_examples():
    assert poly_eval(MultiPoly.var(1, 0) ** 2 + 1, [2]) == 5
    assert poly_eval(MultiPoly.zero(3), [1, 2, 3]) == 0
    assert poly_eval(x0 * x1 - x1, [1, 7]) == 0


def test_poly_eval_rejects_wrong_arity():
    with pytest.raises(ValueError):
        poly_eval(x0, [1])


def test_poly_partial_examples():
    assert poly_partial(MultiPoly.var(1, 0) ** 3, 0) == MultiPoly.monomial((2,), 3)
    assert poly_partial(x0, 1).is_zero()
    assert poly_partial(x0 ** 2 * x1 + x1, 0) == x0 * x1 * 2


def test_poly_partial_rejects_bad_index():
    with pytest.raises(IndexError):
        poly_partial(x0, 2)


def test_laurent_partial_of_inverse():
    xinv = LaurentPoly.monomial((-1,))
    assert xinv.partial(0) == LaurentPoly.monomial((-2,), -1)


def test_laurent_evaluation_at_zero_rejected():
    with pytest.raises(ZeroDivisionError):
        LaurentPoly.monomial((-1,)).evaluate([0])


@SEEDED
@given(st.integers(0, 10**6))
def test_ring_axioms(seed):
    rng = random.Random(seed)
    p, q, r = (random_poly(rng, 2, 3) for _ in range(3))
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    pt = [Fraction(rng.randint(-4, 4), 3), Fraction(rng.randint(-4, 4), 5)]
    assert poly_eval(p * q, pt) == poly_eval(p, pt) * poly_eval(q, pt)
    assert (p * q).partial(0) == p.partial(0) * q + p * q.partial(0)


@SEEDED
@given(st.integers(0, 10**6))
def test_laurent_product_rule(seed):
    rng = random.Random(seed)
    p, q = random_laurent(rng, 2, 3), random_laurent(rng, 2, 3)
    assert (p * q).partial(1) == p.partial(1) * q + p * q.partial(1)


# -- forms ----------------------------------------------------------------------

def test_wedge_examples():
    dx0, dx1 = PolyForm.dx(2, 0), PolyForm.dx(2, 1)
    assert form_wedge(dx0, dx1) == PolyForm.dx(2, 0, 1)
    assert form_wedge(dx0, dx0).is_zero()
    assert form_wedge(PolyForm.dx(2, 1).mul_function(x0), dx0) == PolyForm.dx(2, 0, 1).mul_function(x0).scale(-1)


def test_wedge_rejects_mismatched_variables():
    with pytest.raises(ValueError):
        form_wedge(PolyForm.dx(2, 0), PolyForm.dx(3, 0))


def test_d_examples():
    assert form_d(PolyForm.dx(2, 1).mul_function(x0)) == PolyForm.dx(2, 0, 1)
    x = MultiPoly.var(1, 0)
    assert form_d(PolyForm.function(x ** 2)) == PolyForm.dx(1, 0).mul_function(x.scale(2))
    assert form_d(form_d(PolyForm.dx(2, 0).mul_function(x0 * x1))).is_zero()


def test_pullback_examples():
    translate = AffineMap([[1, 0], [0, 1]], [3, 5])
    assert form_pullback_affine(PolyForm.dx(2, 0, 1), translate) == PolyForm.dx(2, 0, 1)
    # x0 = 2t: x0 dx0 -> (2t)(2 dt) = 4t dt
    t = MultiPoly.var(1, 0)
    f = AffineMap([[2]], [0])
    assert form_pullback_affine(PolyForm.dx(1, 0).mul_function(t), f) == PolyForm.dx(1, 0).mul_function(t.scale(4))
    g = AffineMap([[1], [3]], [0, 1])
    assert form_pullback_affine(PolyForm.dx(2, 0, 1).mul_function(x0 + 1), g).is_zero()


def test_pullback_rejects_dimension_mismatch():
    with pytest.raises(ValueError):
        form_pullback_affine(PolyForm.dx(2, 0), AffineMap([[1]], [0]))


def test_hand_computed_d_of_two_form_in_three_variables():
    # d(x y dy^dz + z dx^dy) = y dx^dy^dz + dz^dx^dy = (y + 1) dx^dy^dz
    x, y, z = (MultiPoly.var(3, i) for i in range(3))
    w = PolyForm.dx(3, 1, 2).mul_function(x * y) + PolyForm.dx(3, 0, 1).mul_function(z)
    assert w.d() == PolyForm.dx(3, 0, 1, 2).mul_function(y + 1)


@SEEDED
@given(st.integers(0, 10**6))
def test_dg_laws_on_polynomial_forms(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    p, q = rng.randint(0, n), rng.randint(0, n)
    a = random_form(rng, n, p, 3)
    b = random_form(rng, n, q, 3)
    assert a.d().d().is_zero()
    assert a.wedge(b).d() == a.d().wedge(b) + a.wedge(b.d()).scale((-1) ** p)
    assert a.wedge(b) == b.wedge(a).scale((-1) ** (p * q))
    f = random_affine_map(rng, rng.randint(1, 3), n)
    assert a.pullback_affine(f).d() == a.d().pullback_affine(f)
    assert a.wedge(b).pullback_affine(f) == a.pullback_affine(f).wedge(b.pullback_affine(f))


@SEEDED
@given(st.integers(0, 10**6))
def test_dg_laws_on_laurent_forms(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 3)
    p, q = rng.randint(0, n), rng.randint(0, n)
    a = random_form(rng, n, p, 2, laurent=True)
    b = random_form(rng, n, q, 2, laurent=True)
    assert a.d().d().is_zero()
    assert a.wedge(b).d() == a.d().wedge(b) + a.wedge(b.d()).scale((-1) ** p)


@SEEDED
@given(st.integers(0, 10**6))
def test_pullback_by_chain_rule_matches_substitution(seed):
    # a 1-form sum p_i dx_i pulls back to sum_j (sum_i p_i(f) A_ij) dt_j
    rng = random.Random(seed)
    a = random_form(rng, 2, 1, 3)
    f = random_affine_map(rng, 2, 2)
    comps = f.components()
    expected = PolyForm.zero(2, 1)
    for (i,), p in a.terms.items():
        pf = p.substitute(comps, 2)
        for j in range(2):
            expected = expected + PolyForm.dx(2, j).mul_function(pf.scale(f.matrix[i][j]))
    assert a.pullback_affine(f) == expected


def test_affine_map_composition():
    f = AffineMap([[1, 2]], [3])
    g = AffineMap([[1], [-1]], [0, 1])
    assert f.compose(g)([Fraction(5)]) == f(g([Fraction(5)]))


# -- linear algebra -------------------------------------------------------------

def test_rank_kernel_examples():
    r, ker = rank_kernel([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3)
    assert r == 3 and ker == []
    r, ker = rank_kernel([[0] * 5, [0] * 5], 5)
    assert r == 0 and len(ker) == 5
    r, ker = rank_kernel([[1, 2], [2, 4]], 2)
    assert r == 1 and len(ker) == 1
    v = ker[0]
    vec = [v.get(j, 0) for j in range(2)] if isinstance(v, dict) else v
    assert vec[0] * 1 == -2 * vec[1] and vec[0] != 0  # proportional to (2, -1)


@SEEDED
@given(st.integers(0, 10**6))
def test_rank_matches_textbook_elimination(seed):
    rng = random.Random(seed)
    rows, cols = rng.randint(1, 6), rng.randint(1, 6)
    m = [[Fraction(rng.randint(-2, 2), rng.randint(1, 2)) if rng.random() < 0.6 else 0 for _ in range(cols)]
         for _ in range(rows)]
    # force some dependence
    if rows > 2:
        m[-1] = [a + b for a, b in zip(m[0], m[1])]
    r, ker = rank_kernel(m, cols)
    assert r == dense_rank(m) == rank(m)
    assert len(ker) == cols - r
    for v in ker:
        vec = [v.get(j, 0) for j in range(cols)] if isinstance(v, dict) else v
        assert all(sum(a * b for a, b in zip(row, vec)) == 0 for row in m)


def test_solve_and_dense_solve():
    sol = solve([[1, 1], [1, -1]], [3, 1], 2)
    assert sol == {0: 2, 1: 1}
    assert solve([[1, 1], [2, 2]], [1, 3], 2) is None
    assert solve_dense([[2, 0], [0, 4]], [1, 1]) == [Fraction(1, 2), Fraction(1, 4)]


def test_lp_maximize_small_problem():
    # maximize x + y with x + y + s = 1, x, y, s >= 0
    status, value, x = lp_maximize([1, 1, 0], [[1, 1, 1]], [1])
    assert (status, value) == ("optimal", 1)
    assert x[0] + x[1] == 1
    assert lp_maximize([1], [[1], [1]], [1, 2])[0] == "infeasible"
    assert lp_maximize([1, 0], [[1, -1]], [0])[0] == "unbounded"


# -- serialization --------------------------------------------------------------

@SEEDED
@given(st.integers(0, 10**6))
def test_form_json_round_trip(seed):
    rng = random.Random(seed)
    w = random_form(rng, 3, rng.randint(0, 3), 3)
    assert form_from_json(form_to_json(w)) == w
    p = random_poly(rng, 2, 4)
    assert poly_from_json(poly_to_json(p)) == p


def test_form_json_errors_name_the_location():
    bad = {"vars": 2, "degree": 1, "terms": [{"dvars": [0], "exp": [1, 0], "c": "1/0"}]}
    with pytest.raises(InputError, match=r"\$\.terms\[0\]\.c"):
        form_from_json(bad)
    with pytest.raises(InputError, match="negative exponents"):
        form_from_json({"vars": 1, "degree": 0, "terms": [{"dvars": [], "exp": [-1], "c": "1"}]})
