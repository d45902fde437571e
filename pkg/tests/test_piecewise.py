from __future__ import annotations

import random
from fractions import Fraction

import pytest

from sampling import random_closed_form, random_combination
from polyderham.cohomology import TruncatedComplex
from polyderham.forms import AffineMap, PolyForm
from polyderham.piecewise import (
    PiecewiseForm,
    SimplicialCochain,
    adjacency_homotopy,
    hat,
    homotopy_identity,
    pou_from_stars,
    pw_d,
    pw_validate,
    pw_wedge,
    rectilinear_pullback,
    star_contraction_exactness,
    whitney,
)
from polyderham.poly import MultiPoly
from polyderham.polyhedron import (
    Polyhedron,
    Star,
    barycentric_subdivide,
    collapse_map,
    corpus,
    corpus_stars,
    identity_map,
    interval,
    point,
    rectilinear_from_affine,
    simplicial_map,
    triangle,
    triangle_boundary,
)


# -- validity, d and wedge ----------------------------------------------------------

def test_constant_is_valid_everywhere():
    for K in corpus().values():
        assert pw_validate(PiecewiseForm.constant(K, 1)).valid


def test_mismatched_pieces_rejected_at_the_shared_vertex():
    K = triangle_boundary()
    x = MultiPoly.var(2, 0)
    pieces = {a: PolyForm.function(x) for a in K.maximal_simplices}
    pieces[(0, 1)] = PolyForm.function(x + 1)
    rep = pw_validate(PiecewiseForm.from_ambient(K, 0, pieces))
    assert not rep.valid


def test_hat_functions_valid_and_agree_on_faces():
    for K in corpus().values():
        for v in range(len(K.vertices)):
            h = hat(K, v)
            assert pw_validate(h).valid
            for u, p in enumerate(K.vertices):
                assert h.evaluate(p) == (1 if u == v else 0)


def test_hat_on_interval_has_derivative_dt():
    K = interval()
    dh = pw_d(hat(K, 1))
    assert dh.pieces[(0, 1)] == PolyForm.dx(1, 0)
    assert pw_d(PiecewiseForm.constant(K, 1)).is_zero()


def test_hat_squared_is_valid():
    K = triangle_boundary()
    h = hat(K, 0)
    sq = pw_wedge(h, h)
    assert sq.degree == 0 and pw_validate(sq).valid
    mid = [Fraction(1, 2), Fraction(0)]
    assert sq.evaluate(mid) == Fraction(1, 4)


def test_validity_preserved_by_d_and_wedge():
    rng = random.Random(11)
    for K in (triangle(), triangle_boundary(), corpus()["tetrahedron_boundary"]):
        cx = TruncatedComplex(K, 2)
        for k in range(cx.top + 1):
            w = random_combination(rng, cx.basis_forms(k), K, k)
            assert pw_validate(w).valid
            assert pw_validate(pw_d(w)).valid
            v = random_combination(rng, cx.basis_forms(0), K, 0)
            assert pw_validate(pw_wedge(v, w)).valid


# -- Whitney forms and partitions of unity ------------------------------------------

def test_whitney_of_vertex_is_hat():
    K = triangle()
    assert whitney(SimplicialCochain.elementary(K, (2,))) == hat(K, 2)


def test_whitney_edge_on_interval_is_dt():
    K = interval()
    w = whitney(SimplicialCochain.elementary(K, (0, 1)))
    assert w.pieces[(0, 1)] == PolyForm.dx(1, 0)
    assert whitney(SimplicialCochain.elementary(K, (1, 0))) == w.scale(-1)


def test_whitney_is_a_chain_map():
    for K in corpus().values():
        for k in range(K.dim):
            for s in K.simplices_of_dim(k):
                c = SimplicialCochain.elementary(K, s)
                assert pw_d(whitney(c)) == whitney(c.coboundary())


def test_pou_examples():
    pu = pou_from_stars(interval())
    t = MultiPoly.var(1, 0)
    assert pu.functions[0].pieces[(0, 1)] == PolyForm.function(1 - t)
    assert pu.functions[1].pieces[(0, 1)] == PolyForm.function(t)
    for K in (interval(), triangle_boundary(), point(), triangle()):
        pu = pou_from_stars(K)
        assert pu.check()
        assert pu.total() == PiecewiseForm.constant(K, 1)
    assert len(pou_from_stars(point()).functions) == 1


# -- pullback and homotopy ---------------------------------------------------------

def test_pullback_examples():
    K = triangle_boundary()
    rng = random.Random(2)
    w = random_combination(rng, TruncatedComplex(K, 2).basis_forms(1), K, 1)
    assert rectilinear_pullback(w, identity_map(K)) == w
    f = simplicial_map(K, K, {0: 0, 1: 1, 2: 1})
    assert rectilinear_pullback(PiecewiseForm.constant(K, 1), f) == PiecewiseForm.constant(K, 1)
    # source [0, 1/2] mapped with slope 2 onto target [0, 1]
    src = Polyhedron.build([[0], [Fraction(1, 2)]], [[0, 1]])
    tgt = interval()
    g = rectilinear_from_affine(src, tgt, AffineMap([[2]], [0]))
    dt = PiecewiseForm.from_ambient(tgt, 1, {(0, 1): PolyForm.dx(1, 0)})
    assert rectilinear_pullback(dt, g).pieces[(0, 1)] == PolyForm.dx(1, 0).scale(2)


def test_pullback_commutes_with_d_and_wedge():
    rng = random.Random(5)
    K = barycentric_subdivide(interval())
    L = triangle_boundary()
    f = simplicial_map(K, L, {0: 0, 1: 1, 2: 2})
    cx = TruncatedComplex(L, 3)
    for _ in range(5):
        a = random_combination(rng, cx.basis_forms(0), L, 0)
        b = random_combination(rng, cx.basis_forms(1), L, 1)
        assert rectilinear_pullback(pw_d(a), f) == pw_d(rectilinear_pullback(a, f))
        assert rectilinear_pullback(pw_wedge(a, b), f) == pw_wedge(rectilinear_pullback(a, f), rectilinear_pullback(b, f))


def test_homotopy_of_equal_maps_is_zero():
    K = triangle()
    f = identity_map(K)
    w = PiecewiseForm.from_ambient(K, 1, {(0, 1, 2): PolyForm.dx(2, 0).mul_function(MultiPoly.var(2, 1))})
    assert adjacency_homotopy(f, f, w).is_zero()


def test_homotopy_star_collapse_on_d_of_center_hat():
    S = Star(triangle(), 0)
    idm, col = identity_map(S.base), collapse_map(S)
    w = pw_d(hat(S.base, 0))
    ok, h = homotopy_identity(idm, col, w)
    assert ok and h.degree == 0
    lhs = rectilinear_pullback(w, idm) - rectilinear_pullback(w, col)
    assert lhs == pw_d(h)


def test_homotopy_in_degree_zero():
    S = Star(triangle(), 0)
    idm, col = identity_map(S.base), collapse_map(S)
    f = hat(S.base, 1)
    h = adjacency_homotopy(idm, col, f)
    assert h.is_zero() and h.degree == -1
    lhs = rectilinear_pullback(f, idm) - rectilinear_pullback(f, col)
    assert lhs == adjacency_homotopy(idm, col, pw_d(f))


def test_homotopy_rejects_non_adjacent_maps():
    K = triangle_boundary()
    rot = simplicial_map(K, K, {0: 1, 1: 2, 2: 0})
    with pytest.raises(ValueError):
        adjacency_homotopy(identity_map(K), rot, hat(K, 0))


# -- star contraction ---------------------------------------------------------------

def test_star_contraction_examples():
    S = Star(triangle(), 0)
    area = PiecewiseForm.from_ambient(S.base, 2, {(0, 1, 2): PolyForm.dx(2, 0, 1)})
    assert pw_d(star_contraction_exactness(S, area)) == area
    rho = hat(S.base, 2).scale(3) + pw_wedge(hat(S.base, 1), hat(S.base, 1))
    eta = star_contraction_exactness(S, pw_d(rho))
    assert pw_d(eta - rho).is_zero()
    I = Star(interval(), 0)
    dt = PiecewiseForm.from_ambient(I.base, 1, {(0, 1): PolyForm.dx(1, 0)})
    eta = star_contraction_exactness(I, dt)
    assert eta.max_total_degree() <= 1 and pw_d(eta) == dt


def test_star_contraction_rejects_non_closed_and_degree_zero():
    S = Star(triangle(), 0)
    nonclosed = PiecewiseForm.from_ambient(S.base, 1, {(0, 1, 2): PolyForm.dx(2, 0).mul_function(MultiPoly.var(2, 1))})
    with pytest.raises(ValueError):
        star_contraction_exactness(S, nonclosed)
    with pytest.raises(ValueError):
        star_contraction_exactness(S, hat(S.base, 0))


def test_star_contraction_on_random_closed_forms():
    rng = random.Random(21)
    for S in corpus_stars().values():
        cx = TruncatedComplex(S.base, 2)
        for k in range(1, cx.top + 1):
            w = random_closed_form(rng, cx, k)
            assert pw_d(star_contraction_exactness(S, w)) == w
