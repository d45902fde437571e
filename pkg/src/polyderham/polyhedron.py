"""Finite geometric simplicial complexes with rational vertices.

Simplices are sorted tuples of vertex indices.  Every geometric test
(affine independence, point location, pairwise intersection) is exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence

from .forms import AffineMap
from .linalg import lp_maximize, rank, solve_dense
from .poly import as_fraction

Simplex = tuple[int, ...]
Point = tuple[Fraction, ...]


def faces_of(s: Simplex) -> list[Simplex]:
    return [f for k in range(1, len(s) + 1) for f in combinations(s, k)]


def _closure(simplices: Iterable[Sequence[int]]) -> frozenset[Simplex]:
    out = set()
    for s in simplices:
        s = tuple(sorted(set(s)))
        if not s:
            continue
        out.update(faces_of(s))
    return frozenset(out)


@dataclass(frozen=True, eq=False)
class Polyhedron:
    ambient_dim: int
    vertices: tuple[Point, ...]
    simplices: frozenset[Simplex]

    @classmethod
    def build(cls, vertices: Sequence[Sequence], simplices: Iterable[Sequence[int]], ambient_dim: int | None = None) -> "Polyhedron":
        verts = tuple(tuple(as_fraction(x) for x in v) for v in vertices)
        m = ambient_dim if ambient_dim is not None else (len(verts[0]) if verts else 0)
        if any(len(v) != m for v in verts):
            raise ValueError(f"every vertex needs {m} coordinates")
        simp = _closure(simplices)
        for s in simp:
            if any(i < 0 or i >= len(verts) for i in s):
                raise ValueError(f"simplex {list(s)} refers to a missing vertex")
        return cls(m, verts, simp)

    def __eq__(self, other):
        return isinstance(other, Polyhedron) and (self.ambient_dim, self.vertices, self.simplices) == (
            other.ambient_dim, other.vertices, other.simplices)

    def __hash__(self):
        return hash((self.ambient_dim, self.vertices, self.simplices))

    def __repr__(self):
        return f"Polyhedron(dim={self.dim}, vertices={len(self.vertices)}, simplices={len(self.simplices)})"

    @cached_property
    def dim(self) -> int:
        return max((len(s) - 1 for s in self.simplices), default=-1)

    @cached_property
    def sorted_simplices(self) -> list[Simplex]:
        return sorted(self.simplices, key=lambda s: (len(s), s))

    def simplices_of_dim(self, k: int) -> list[Simplex]:
        return [s for s in self.sorted_simplices if len(s) == k + 1]

    @cached_property
    def maximal_simplices(self) -> list[Simplex]:
        simp = self.simplices
        out = []
        for s in self.sorted_simplices:
            others = set(range(len(self.vertices))) - set(s)
            if not any(tuple(sorted(s + (v,))) in simp for v in others):
                out.append(s)
        return out

    @cached_property
    def cofaces(self) -> dict[Simplex, list[Simplex]]:
        """Maximal simplices containing each simplex."""
        out: dict[Simplex, list[Simplex]] = {s: [] for s in self.simplices}
        for a in self.maximal_simplices:
            for f in faces_of(a):
                out[f].append(a)
        return out

    def points(self, s: Simplex) -> list[Point]:
        return [self.vertices[i] for i in s]

    def chart(self, s: Simplex) -> AffineMap:
        return AffineMap.simplex_chart(self.points(s))

    def barycenter(self, s: Simplex) -> Point:
        pts = self.points(s)
        n = len(pts)
        return tuple(sum(c) / n for c in zip(*pts))

    def is_affinely_independent(self, s: Simplex) -> bool:
        pts = self.points(s)
        diffs = [[a - b for a, b in zip(p, pts[0])] for p in pts[1:]]
        return rank(diffs) == len(diffs)

    def barycentric(self, s: Simplex, x: Sequence) -> list[Fraction] | None:
        """Barycentric coordinates of x in aff(s), or None if x is off the affine hull."""
        pts = self.points(s)
        x = [as_fraction(v) for v in x]
        # sum l_i p_i = x, sum l_i = 1
        a = [[p[j] for p in pts] for j in range(self.ambient_dim)] + [[Fraction(1)] * len(pts)]
        b = list(x) + [Fraction(1)]
        return solve_dense(a, b)

    def contains_point(self, s: Simplex, x: Sequence) -> bool:
        lam = self.barycentric(s, x)
        return lam is not None and all(v >= 0 for v in lam)

    def locate(self, x: Sequence) -> tuple[Simplex, list[Fraction]] | None:
        """A maximal simplex containing x with barycentric coordinates, or None."""
        for a in self.maximal_simplices:
            lam = self.barycentric(a, x)
            if lam is not None and all(v >= 0 for v in lam):
                return a, lam
        return None

    def carrier(self, x: Sequence) -> Simplex | None:
        """The smallest simplex containing x."""
        hit = self.locate(x)
        if hit is None:
            return None
        a, lam = hit
        return tuple(v for v, l in zip(a, lam) if l != 0)

    def smallest_simplex_containing(self, pts: Sequence[Sequence]) -> Simplex | None:
        """Smallest simplex of K whose closed geometric simplex holds every point."""
        verts = set()
        for p in pts:
            c = self.carrier(p)
            if c is None:
                return None
            verts.update(c)
        s = tuple(sorted(verts))
        return s if s in self.simplices else None

    def subcomplex(self, simplices: Iterable[Simplex]) -> tuple["Polyhedron", dict[int, int]]:
        """Closure of the given simplices, with vertices renumbered; returns the old->new map."""
        closed = _closure(simplices)
        used = sorted({v for s in closed for v in s})
        remap = {old: new for new, old in enumerate(used)}
        verts = [self.vertices[i] for i in used]
        simp = [tuple(remap[v] for v in s) for s in closed]
        return Polyhedron.build(verts, simp, self.ambient_dim), remap


@dataclass
class ValidityReport:
    valid: bool
    missing_faces: list[Simplex] = field(default_factory=list)
    dependent_simplices: list[Simplex] = field(default_factory=list)
    bad_pairs: list[tuple[Simplex, Simplex]] = field(default_factory=list)

    def to_json(self):
        return {
            "valid": self.valid,
            "missing_faces": [list(s) for s in self.missing_faces],
            "affinely_dependent": [list(s) for s in self.dependent_simplices],
            "bad_pairs": [[list(a), list(b)] for a, b in self.bad_pairs],
        }


def _intersection_defect(K: Polyhedron, a: Simplex, b: Simplex) -> bool:
    """True iff a and b meet outside the face spanned by their common vertices."""
    common = set(a) & set(b)
    pa, pb = K.points(a), K.points(b)
    na, nb = len(a), len(b)
    # variables: lambda (a), mu (b) >= 0
    rows, rhs = [], []
    rows.append([1] * na + [0] * nb)
    rhs.append(1)
    rows.append([0] * na + [1] * nb)
    rhs.append(1)
    for j in range(K.ambient_dim):
        rows.append([p[j] for p in pa] + [-p[j] for p in pb])
        rhs.append(0)
    c = [0 if v in common else 1 for v in a] + [0] * nb
    status, value, _ = lp_maximize(c, rows, rhs)
    if status == "infeasible":
        return False
    return value > 0


def validate_polyhedron(K: Polyhedron, raw_simplices: Iterable[Sequence[int]] | None = None) -> ValidityReport:
    """Check face closure, affine independence and the common-face intersection rule.

    ``raw_simplices`` lets a caller check closure of an unclosed input list;
    a built ``Polyhedron`` is closed by construction.
    """
    missing = []
    if raw_simplices is not None:
        given = {tuple(sorted(s)) for s in raw_simplices}
        for s in given:
            for f in faces_of(s):
                if f not in given:
                    missing.append(f)
        missing = sorted(set(missing), key=lambda s: (len(s), s))
    dependent = [s for s in K.sorted_simplices if len(s) > 1 and not K.is_affinely_independent(s)]
    bad = []
    if not dependent:
        maxi = K.maximal_simplices
        for i, a in enumerate(maxi):
            for b in maxi[i + 1:]:
                if _intersection_defect(K, a, b):
                    bad.append((a, b))
    return ValidityReport(not (missing or dependent or bad), missing, dependent, bad)


def barycentric_subdivide(K: Polyhedron) -> Polyhedron:
    """First barycentric subdivision; original vertices keep their indices."""
    nv = len(K.vertices)
    verts = list(K.vertices)
    index = {(v,): v for v in range(nv)}
    for s in K.sorted_simplices:
        if len(s) > 1:
            index[s] = len(verts)
            verts.append(K.barycenter(s))
    simplices = []

    def chains(s: Simplex, acc: list[Simplex]):
        acc = acc + [s]
        if len(s) == 1:
            simplices.append(tuple(index[f] for f in acc))
            return
        for i in range(len(s)):
            chains(s[:i] + s[i + 1:], acc)

    for a in K.maximal_simplices:
        chains(a, [])
    return Polyhedron.build(verts, simplices, K.ambient_dim)


@dataclass(frozen=True, eq=False)
class Star:
    base: Polyhedron
    center: int

    def __post_init__(self):
        if not 0 <= self.center < len(self.base.vertices):
            raise ValueError("center is not a vertex")
        bad = [a for a in self.base.maximal_simplices if self.center not in a]
        if bad:
            raise ValueError(f"maximal simplices {bad} miss the center {self.center}")

    @property
    def center_point(self) -> Point:
        return self.base.vertices[self.center]


def star_neighborhood(K: Polyhedron, v: int) -> Star:
    """Closed vertex star of v, as a polyhedron of its own."""
    if not 0 <= v < len(K.vertices):
        raise ValueError(f"{v} is not a vertex of the polyhedron")
    sub, remap = K.subcomplex(a for a in K.maximal_simplices if v in a)
    star = Star(sub, remap[v])
    # x lies in the interior of |S| relative to |K|: every simplex of K touching v is in S
    for s in K.simplices:
        if v in s:
            assert tuple(sorted(remap[i] for i in s)) in sub.simplices
    return star


def is_star(K: Polyhedron, center: int) -> bool:
    return all(center in a for a in K.maximal_simplices)


# -- rectilinear maps ---------------------------------------------------------

@dataclass(frozen=True, eq=False)
class RectilinearMap:
    """A map affine on each maximal source simplex a, landing in target simplex b."""

    source: Polyhedron
    target: Polyhedron
    assignment: Mapping[Simplex, tuple[Simplex, AffineMap]]

    def __post_init__(self):
        for a in self.source.maximal_simplices:
            if a not in self.assignment:
                raise ValueError(f"no assignment for source simplex {list(a)}")
            b, f = self.assignment[a]
            if b not in self.target.simplices:
                raise ValueError(f"{list(b)} is not a target simplex")
            if f.n_in != self.source.ambient_dim or f.n_out != self.target.ambient_dim:
                raise ValueError("affine map has the wrong shape")
            for p in self.source.points(a):
                if not self.target.contains_point(b, f(p)):
                    raise ValueError(f"image of {list(a)} leaves target simplex {list(b)}")
        # agreement on shared vertices (enough for agreement on shared faces)
        seen: dict[int, tuple] = {}
        for a in self.source.maximal_simplices:
            f = self.assignment[a][1]
            for v in a:
                img = f(self.source.vertices[v])
                if seen.setdefault(v, img) != img:
                    raise ValueError(f"assignments disagree at vertex {v}")

    def vertex_image(self, v: int) -> Point:
        a = next(a for a in self.source.maximal_simplices if v in a)
        return self.assignment[a][1](self.source.vertices[v])

    def apply(self, x: Sequence) -> Point:
        hit = self.source.locate(x)
        if hit is None:
            raise ValueError("point is outside the source polyhedron")
        return self.assignment[hit[0]][1](x)

    @cached_property
    def image_carriers(self) -> dict[Simplex, frozenset[int]]:
        """For each maximal source simplex, the target vertices spanning the carrier of its image."""
        out = {}
        for a in self.source.maximal_simplices:
            b, f = self.assignment[a]
            verts: set[int] = set()
            for p in self.source.points(a):
                lam = self.target.barycentric(b, f(p))
                verts.update(v for v, l in zip(b, lam) if l)
            out[a] = frozenset(verts)
        return out

    def local(self, s: Simplex) -> tuple[Simplex, AffineMap]:
        """Assignment for any source simplex (taken from a maximal coface)."""
        if s in self.assignment:
            return self.assignment[s]
        a = self.source.cofaces[s][0]
        return self.assignment[a]


def _left_inverse_chart(K: Polyhedron, s: Simplex) -> AffineMap:
    from .piecewise import chart_left_inverse

    return chart_left_inverse(K.points(s))


def rectilinear_from_affine(source: Polyhedron, target: Polyhedron, f: AffineMap) -> RectilinearMap:
    """Restrict a global affine map; each simplex goes to the smallest target simplex holding its image."""
    assignment = {}
    for a in source.maximal_simplices:
        b = target.smallest_simplex_containing([f(p) for p in source.points(a)])
        if b is None:
            raise ValueError(f"image of {list(a)} is not inside a single target simplex")
        assignment[a] = (b, f)
    return RectilinearMap(source, target, assignment)


def simplicial_map(source: Polyhedron, target: Polyhedron, vertex_map: Mapping[int, int]) -> RectilinearMap:
    """The rectilinear map interpolating a vertex map affinely on each simplex."""
    assignment = {}
    for a in source.maximal_simplices:
        b = tuple(sorted({vertex_map[v] for v in a}))
        if b not in target.simplices:
            raise ValueError(f"vertices of {list(a)} do not map onto a target simplex")
        pts_tgt = [target.vertices[vertex_map[v]] for v in a]
        inv = _left_inverse_chart(source, a)  # R^m -> R^k
        k = len(a) - 1
        out_chart = AffineMap(
            [[pts_tgt[i + 1][j] - pts_tgt[0][j] for i in range(k)] for j in range(target.ambient_dim)],
            pts_tgt[0], k)
        f = out_chart.compose(inv)
        assignment[a] = (b, f)
    return RectilinearMap(source, target, assignment)


def identity_map(K: Polyhedron) -> RectilinearMap:
    return RectilinearMap(K, K, {a: (a, AffineMap.identity(K.ambient_dim)) for a in K.maximal_simplices})


def collapse_map(star: Star) -> RectilinearMap:
    K = star.base
    f = AffineMap.constant(K.ambient_dim, star.center_point)
    return RectilinearMap(K, K, {a: ((star.center,), f) for a in K.maximal_simplices})


def are_adjacent(f: RectilinearMap, g: RectilinearMap) -> bool:
    """For every source simplex a, f(a) u g(a) lies in one target simplex."""
    if f.source != g.source or f.target != g.target:
        raise ValueError("maps must share source and target")
    return all(common_target_simplex(f, g, a) is not None for a in f.source.maximal_simplices)


def common_target_simplex(f: RectilinearMap, g: RectilinearMap, a: Simplex) -> Simplex | None:
    """Smallest target simplex holding f(a) and g(a), if there is one.

    A point set lies in a closed simplex exactly when the carrier of every
    point is a face of it, so the candidate is the union of the carriers.
    """
    s = tuple(sorted(f.image_carriers[a] | g.image_carriers[a]))
    return s if s in f.target.simplices else None


def connected_components(K: Polyhedron) -> tuple[int, list[list[int]]]:
    parent = list(range(len(K.vertices)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s in K.simplices_of_dim(1):
        ra, rb = find(s[0]), find(s[1])
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = {}
    for v in range(len(K.vertices)):
        groups.setdefault(find(v), []).append(v)
    parts = sorted(groups.values())
    return len(parts), parts


# -- standard complexes -------------------------------------------------------

def point() -> Polyhedron:
    return Polyhedron.build([[0]], [[0]])


def interval() -> Polyhedron:
    return Polyhedron.build([[0], [1]], [[0, 1]])


def triangle() -> Polyhedron:
    return Polyhedron.build([[0, 0], [1, 0], [0, 1]], [[0, 1, 2]])


def triangle_boundary() -> Polyhedron:
    return Polyhedron.build([[0, 0], [1, 0], [0, 1]], [[0, 1], [1, 2], [0, 2]])


def tetrahedron_boundary() -> Polyhedron:
    verts = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]
    return Polyhedron.build(verts, [f for f in combinations(range(4), 3)])


def torus7() -> Polyhedron:
    """The 7-vertex (Moebius) torus, realized inside the standard 6-simplex."""
    tris = set()
    for i in range(7):
        tris.add(tuple(sorted((i, (i + 1) % 7, (i + 3) % 7))))
        tris.add(tuple(sorted((i, (i + 2) % 7, (i + 3) % 7))))
    verts = [[0] * 6] + [[int(j == i) for j in range(6)] for i in range(6)]
    return Polyhedron.build(verts, sorted(tris))


def disjoint_union(K: Polyhedron, L: Polyhedron, shift: Sequence | None = None) -> Polyhedron:
    """K and a translated copy of L side by side (translation along the first axis by default)."""
    m = max(K.ambient_dim, L.ambient_dim)

    def pad(v):
        return list(v) + [Fraction(0)] * (m - len(v))

    if shift is None:
        span = max((v[0] for v in K.vertices), default=0) - min((v[0] for v in L.vertices), default=0)
        shift = [span + 1] + [0] * (m - 1)
    shift = [as_fraction(s) for s in shift]
    verts = [pad(v) for v in K.vertices] + [[a + b for a, b in zip(pad(v), shift)] for v in L.vertices]
    n = len(K.vertices)
    simp = list(K.simplices) + [tuple(i + n for i in s) for s in L.simplices]
    return Polyhedron.build(verts, simp, m)


def disjoint_triangles() -> Polyhedron:
    return disjoint_union(triangle(), triangle())


def cone(K: Polyhedron) -> Star:
    """Cone over K with the apex one unit above in a new coordinate; a star centered at the apex."""
    verts = [list(v) + [Fraction(0)] for v in K.vertices]
    apex = len(verts)
    verts.append([Fraction(0)] * K.ambient_dim + [Fraction(1)])
    simp = [s + (apex,) for s in K.simplices] + [(apex,)]
    return Star(Polyhedron.build(verts, simp, K.ambient_dim + 1), apex)


def one_skeleton(K: Polyhedron) -> Polyhedron:
    simp = [s for s in K.simplices if len(s) <= 2]
    return Polyhedron.build(K.vertices, simp, K.ambient_dim)


def corpus() -> dict[str, Polyhedron]:
    return {
        "interval": interval(),
        "triangle_boundary": triangle_boundary(),
        "triangle": triangle(),
        "tetrahedron_boundary": tetrahedron_boundary(),
        "torus7": torus7(),
        "two_triangles": disjoint_triangles(),
    }


def corpus_stars() -> dict[str, Star]:
    base = corpus()
    # the triangle and its boundary share a 1-skeleton, so it is listed once
    names = ["interval", "triangle_boundary", "tetrahedron_boundary", "torus7", "two_triangles"]
    return {f"cone_{n}": cone(one_skeleton(base[n])) for n in names}


def random_disjoint_union(rng: random.Random, pieces: int | None = None) -> Polyhedron:
    """A union of small random complexes placed far apart along the first axis."""
    makers = [point, interval, triangle_boundary, triangle, lambda: one_skeleton(triangle())]
    count = pieces if pieces is not None else rng.randint(1, 4)
    K = rng.choice(makers)()
    for _ in range(count - 1):
        K = disjoint_union(K, rng.choice(makers)())
    return K
