from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations

import pytest

from polyderham.polyhedron import (
    Polyhedron,
    are_adjacent,
    barycentric_subdivide,
    collapse_map,
    cone,
    connected_components,
    corpus,
    corpus_stars,
    disjoint_triangles,
    identity_map,
    interval,
    is_star,
    one_skeleton,
    point,
    random_disjoint_union,
    simplicial_map,
    star_neighborhood,
    tetrahedron_boundary,
    torus7,
    triangle,
    triangle_boundary,
    validate_polyhedron,
)


def full_tetrahedron() -> Polyhedron:
    return Polyhedron.build([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]], [[0, 1, 2, 3]])


# -- validation -----------------------------------------------------------------

def test_valid_examples():
    assert validate_polyhedron(triangle_boundary()).valid
    assert validate_polyhedron(full_tetrahedron()).valid
    for name, K in corpus().items():
        assert validate_polyhedron(K).valid, name


def test_half_shared_edge_is_rejected_with_the_pair():
    # second triangle has vertex (1/2, 0) inside the first triangle's bottom edge
    verts = [[0, 0], [1, 0], [0, 1], [Fraction(1, 2), 0], [1, -1]]
    K = Polyhedron.build(verts, [[0, 1, 2], [3, 1, 4]])
    rep = validate_polyhedron(K)
    assert not rep.valid
    assert ((0, 1, 2), (1, 3, 4)) in rep.bad_pairs


def test_overlapping_triangles_rejected():
    K = Polyhedron.build([[0, 0], [2, 0], [0, 2], [1, 1], [3, 3]], [[0, 1, 2], [0, 3, 4]])
    assert not validate_polyhedron(K).valid


def test_affinely_dependent_simplex_rejected():
    K = Polyhedron.build([[0, 0], [1, 1], [2, 2]], [[0, 1, 2]])
    rep = validate_polyhedron(K)
    assert not rep.valid and rep.dependent_simplices == [(0, 1, 2)]


def test_missing_faces_reported_for_raw_input():
    K = Polyhedron.build([[0], [1]], [[0, 1]])
    rep = validate_polyhedron(K, raw_simplices=[[0, 1]])
    assert not rep.valid and rep.missing_faces == [(0,), (1,)]


# -- subdivision ----------------------------------------------------------------

def _edge_lengths(K):
    return sorted(abs(K.vertices[b][0] - K.vertices[a][0]) for a, b in K.simplices_of_dim(1))


def test_subdivide_interval():
    K1 = barycentric_subdivide(interval())
    assert len(K1.simplices_of_dim(1)) == 2
    assert _edge_lengths(K1) == [Fraction(1, 2)] * 2
    K2 = barycentric_subdivide(K1)
    assert _edge_lengths(K2) == [Fraction(1, 4)] * 4


def test_subdivide_triangle_counts():
    K = barycentric_subdivide(triangle())
    assert len(K.simplices_of_dim(2)) == 6
    assert len(K.vertices) == 3 + 3 + 1
    assert [Fraction(1, 3), Fraction(1, 3)] in [list(v) for v in K.vertices]
    assert validate_polyhedron(K).valid


@pytest.mark.parametrize("name", ["triangle", "triangle_boundary", "tetrahedron_boundary"])
def test_subdivision_covers_the_same_space(name):
    K = corpus()[name]
    S = barycentric_subdivide(K)
    assert validate_polyhedron(S).valid
    rng = random.Random(7)
    for _ in range(40):
        a = rng.choice(K.maximal_simplices)
        w = [Fraction(rng.randint(0, 5)) for _ in a]
        tot = sum(w) or Fraction(1)
        x = [sum(wi / tot * K.vertices[v][j] for wi, v in zip(w, a)) if sum(w) else K.vertices[a[0]][j]
             for j in range(K.ambient_dim)]
        assert S.locate(x) is not None
    # Euler characteristic is a subdivision invariant
    chi = lambda L: sum((-1) ** (len(s) - 1) for s in L.simplices)  # noqa: E731
    assert chi(S) == chi(K)


# -- stars and adjacency ----------------------------------------------------------

def test_star_neighborhood_examples():
    K1 = barycentric_subdivide(interval())
    mid = next(i for i, v in enumerate(K1.vertices) if v[0] == Fraction(1, 2))
    S = star_neighborhood(K1, mid)
    assert len(S.base.maximal_simplices) == 2
    S = star_neighborhood(triangle_boundary(), 0)
    assert len(S.base.maximal_simplices) == 2 and S.base.dim == 1
    C = cone(triangle_boundary())
    S = star_neighborhood(C.base, C.center)
    assert len(S.base.simplices) == len(C.base.simplices)


def test_star_rejects_bad_vertex():
    with pytest.raises(ValueError):
        star_neighborhood(interval(), 5)


def _images(f, a):
    pts = f.source.points(a)
    _, A = f.local(a)
    return [A(p) for p in pts]


def test_adjacency_examples():
    K = triangle_boundary()
    idm = identity_map(K)
    assert are_adjacent(idm, idm)
    for S in corpus_stars().values():
        idS, col = identity_map(S.base), collapse_map(S)
        assert are_adjacent(idS, col)
        for a in S.base.maximal_simplices:
            assert S.base.smallest_simplex_containing(_images(idS, a) + _images(col, a)) is not None
    # rotation of the triangle boundary: edge 01 -> 12 and 01 together span the whole triangle
    rot = simplicial_map(K, K, {0: 1, 1: 2, 2: 0})
    assert not are_adjacent(idm, rot)
    bad = [a for a in K.maximal_simplices
           if K.smallest_simplex_containing(_images(idm, a) + _images(rot, a)) is None]
    assert len(bad) == 3


def test_simplicial_map_requires_simplex_images():
    K = triangle_boundary()
    with pytest.raises(ValueError):
        simplicial_map(interval(), K, {0: 0, 1: 5})


# -- components and corpus ---------------------------------------------------------

def test_connected_components_examples():
    assert connected_components(triangle_boundary())[0] == 1
    assert connected_components(disjoint_triangles())[0] == 2
    assert connected_components(point())[0] == 1


def test_random_disjoint_unions_are_valid():
    rng = random.Random(3)
    for _ in range(10):
        n = rng.randint(1, 4)
        K = random_disjoint_union(rng, n)
        assert validate_polyhedron(K).valid
        count, parts = connected_components(K)
        assert count == n
        assert sorted(v for p in parts for v in p) == list(range(len(K.vertices)))


def test_corpus_stars_are_stars():
    stars = corpus_stars()
    assert len(stars) == 5
    for S in stars.values():
        assert is_star(S.base, S.center)
        assert validate_polyhedron(S.base).valid


def test_torus_is_a_closed_surface():
    K = torus7()
    assert len(K.vertices) == 7 and len(K.simplices_of_dim(1)) == 21 and len(K.simplices_of_dim(2)) == 14
    assert all(len([t for t in K.simplices_of_dim(2) if set(e) <= set(t)]) == 2 for e in K.simplices_of_dim(1))


def test_tetrahedron_boundary_is_the_four_faces():
    K = tetrahedron_boundary()
    assert sorted(K.maximal_simplices) == list(combinations(range(4), 3))


def test_one_skeleton_drops_higher_simplices():
    assert one_skeleton(triangle()).dim == 1
