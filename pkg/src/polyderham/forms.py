"""Differential forms with polynomial coefficients on a single affine chart.

A ``PolyForm`` of degree n in ``nvars`` variables is a finite sum
``sum_I p_I dx_I`` over strictly increasing index tuples ``I`` of length n.
Coefficients are ``MultiPoly`` or ``LaurentPoly``.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .poly import LaurentPoly, MultiPoly, _Poly, affine_polys, as_fraction

Index = tuple[int, ...]


def merge_sign(a: Index, b: Index) -> int:
    """Sign of the shuffle sorting a+b, or 0 if they overlap."""
    if set(a) & set(b):
        return 0
    inversions = 0
    for x in a:
        for y in b:
            if x > y:
                inversions += 1
    return -1 if inversions & 1 else 1


def perm_sign(seq: Sequence[int]) -> int:
    seq = list(seq)
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
            elif seq[i] == seq[j]:
                return 0
    return sign


class PolyForm:
    __slots__ = ("nvars", "degree", "terms", "ctype")

    def __init__(self, nvars: int, degree: int, terms: Mapping[Index, _Poly] | None = None, ctype=None):
        if degree < 0:
            raise ValueError("form degree must be >= 0")
        self.nvars = nvars
        self.degree = degree
        clean: dict[Index, _Poly] = {}
        laurent = ctype is LaurentPoly
        for idx, p in (terms or {}).items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"index tuple {idx} does not match degree {degree}")
            if any(i < 0 or i >= nvars for i in idx):
                raise ValueError(f"index tuple {idx} out of range for {nvars} variables")
            if list(idx) != sorted(set(idx)):
                raise ValueError(f"index tuple {idx} must be strictly increasing")
            if not isinstance(p, _Poly):
                p = MultiPoly.constant(nvars, p)
            if p.nvars != nvars:
                raise ValueError("coefficient variable count mismatch")
            laurent = laurent or p.allow_negative
            if p:
                clean[idx] = p
        self.ctype = LaurentPoly if laurent else MultiPoly
        if laurent:
            clean = {i: p if p.allow_negative else p.to_laurent() for i, p in clean.items()}
        self.terms = clean

    @classmethod
    def _raw(cls, nvars, degree, terms, ctype):
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.degree = degree
        obj.terms = terms
        obj.ctype = ctype
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars: int, degree: int, ctype=MultiPoly):
        return cls._raw(nvars, degree, {}, ctype)

    @classmethod
    def function(cls, p: _Poly):
        return cls(p.nvars, 0, {(): p})

    @classmethod
    def constant(cls, nvars: int, c, ctype=MultiPoly):
        p = ctype.constant(nvars, c)
        return cls._raw(nvars, 0, {(): p} if p else {}, ctype)

    @classmethod
    def dx(cls, nvars: int, *indices: int, ctype=MultiPoly):
        """The basis form dx_{i1} ^ ... ^ dx_{ik} (any order; sign applied)."""
        s = perm_sign(indices)
        idx = tuple(sorted(indices))
        if len(set(idx)) != len(idx):
            return cls.zero(nvars, len(indices), ctype)
        return cls(nvars, len(indices), {idx: ctype.constant(nvars, s)}, ctype)

    # -- protocol -----------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, PolyForm):
            return NotImplemented
        if self.nvars != other.nvars or self.degree != other.degree:
            return False
        if self.terms.keys() != other.terms.keys():
            return False
        return all(self.terms[i].terms == other.terms[i].terms for i in self.terms)

    def __hash__(self):
        return hash((self.nvars, self.degree, frozenset((i, p) for i, p in self.terms.items())))

    def __repr__(self):
        if not self.terms:
            return f"PolyForm({self.nvars}, deg={self.degree}, 0)"
        parts = []
        for idx in sorted(self.terms):
            basis = "^".join(f"dx{i}" for i in idx)
            parts.append(f"({self.terms[idx]})" + (f" {basis}" if basis else ""))
        return f"PolyForm({self.nvars}, deg={self.degree}, " + " + ".join(parts) + ")"

    def coefficient(self, idx: Sequence[int]) -> _Poly:
        return self.terms.get(tuple(idx), self.ctype.zero(self.nvars))

    def total_degrees(self) -> dict[tuple, int]:
        """Coefficient degree plus form degree for each (monomial, index) term."""
        return {(e, i): sum(e) + self.degree for i, p in self.terms.items() for e in p.terms}

    def max_total_degree(self) -> int:
        return max(self.total_degrees().values(), default=-1)

    def is_laurent(self) -> bool:
        return self.ctype is LaurentPoly

    # -- linear structure ---------------------------------------------
    def _check(self, other: "PolyForm"):
        if self.nvars != other.nvars:
            raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")

    def __add__(self, other):
        if not isinstance(other, PolyForm):
            return NotImplemented
        self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if self.degree != other.degree:
            raise ValueError(f"cannot add forms of degree {self.degree} and {other.degree}")
        ctype = LaurentPoly if LaurentPoly in (self.ctype, other.ctype) else MultiPoly
        out = dict(self.terms)
        for i, p in other.terms.items():
            q = out[i] + p if i in out else p
            if q:
                out[i] = q
            else:
                out.pop(i, None)
        if ctype is LaurentPoly:
            out = {i: q if q.allow_negative else q.to_laurent() for i, q in out.items()}
        return PolyForm._raw(self.nvars, self.degree, out, ctype)

    def __neg__(self):
        return PolyForm._raw(self.nvars, self.degree, {i: -p for i, p in self.terms.items()}, self.ctype)

    def __sub__(self, other):
        if not isinstance(other, PolyForm):
            return NotImplemented
        return self + (-other)

    def scale(self, c) -> "PolyForm":
        c = as_fraction(c)
        if not c:
            return PolyForm.zero(self.nvars, self.degree, self.ctype)
        return PolyForm._raw(self.nvars, self.degree, {i: p.scale(c) for i, p in self.terms.items()}, self.ctype)

    def mul_function(self, f: _Poly) -> "PolyForm":
        out = {}
        for i, p in self.terms.items():
            q = f * p
            if q:
                out[i] = q
        ctype = LaurentPoly if (f.allow_negative or self.ctype is LaurentPoly) else MultiPoly
        if ctype is LaurentPoly:
            out = {i: q if q.allow_negative else q.to_laurent() for i, q in out.items()}
        return PolyForm._raw(self.nvars, self.degree, out, ctype)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if isinstance(other, _Poly):
            return self.mul_function(other)
        if isinstance(other, PolyForm):
            return self.wedge(other)
        return NotImplemented

    __rmul__ = __mul__

    # -- algebra ------------------------------------------------------
    def wedge(self, other: "PolyForm") -> "PolyForm":
        self._check(other)
        deg = self.degree + other.degree
        ctype = LaurentPoly if LaurentPoly in (self.ctype, other.ctype) else MultiPoly
        if deg > self.nvars:
            return PolyForm.zero(self.nvars, deg, ctype)
        out: dict[Index, _Poly] = {}
        for i, p in self.terms.items():
            for j, q in other.terms.items():
                s = merge_sign(i, j)
                if not s:
                    continue
                k = tuple(sorted(i + j))
                r = p * q
                if s < 0:
                    r = -r
                if k in out:
                    r = out[k] + r
                if r:
                    out[k] = r
                else:
                    out.pop(k, None)
        if ctype is LaurentPoly:
            out = {i: q if q.allow_negative else q.to_laurent() for i, q in out.items()}
        return PolyForm._raw(self.nvars, deg, out, ctype)

    __xor__ = wedge

    def d(self) -> "PolyForm":
        deg = self.degree + 1
        out: dict[Index, _Poly] = {}
        for idx, p in self.terms.items():
            for i in range(self.nvars):
                if i in idx:
                    continue
                dp = p.partial(i)
                if not dp:
                    continue
                pos = sum(1 for j in idx if j < i)
                k = idx[:pos] + (i,) + idx[pos:]
                if pos & 1:
                    dp = -dp
                if k in out:
                    dp = out[k] + dp
                if dp:
                    out[k] = dp
                else:
                    out.pop(k, None)
        return PolyForm._raw(self.nvars, deg, out, self.ctype)

    def pullback(self, components: Sequence[_Poly], n_in: int | None = None) -> "PolyForm":
        """Pull back along the polynomial map y_j = components[j](x)."""
        if len(components) != self.nvars:
            raise ValueError(f"map has {len(components)} components, form lives on {self.nvars} variables")
        if n_in is None:
            if not components:
                raise ValueError("n_in required for a map out of 0 variables")
            n_in = components[0].nvars
        k = self.degree
        if k > n_in:
            return PolyForm.zero(n_in, k)
        jac = [[c.partial(i) for i in range(n_in)] for c in components]
        constant_jac = all(p.is_constant() for row in jac for p in row)
        targets = list(combinations(range(n_in), k))
        minor_cache: dict[tuple[Index, Index], _Poly] = {}

        def minor(rows: Index, cols: Index):
            key = (rows, cols)
            if key not in minor_cache:
                if constant_jac:
                    m = [[jac[r][c].constant_term() for c in cols] for r in rows]
                    minor_cache[key] = MultiPoly.constant(n_in, det(m))
                else:
                    m = [[jac[r][c] for c in cols] for r in rows]
                    minor_cache[key] = poly_det(m, n_in)
            return minor_cache[key]

        acc: dict[Index, _Poly] = {}
        for idx, p in self.terms.items():
            q = p.substitute(list(components), n_in)
            if not q:
                continue
            for cols in targets:
                m = minor(idx, cols)
                if not m:
                    continue
                r = q * m
                if cols in acc:
                    r = acc[cols] + r
                if r:
                    acc[cols] = r
                else:
                    acc.pop(cols, None)
        ctype = LaurentPoly if any(v.allow_negative for v in acc.values()) else MultiPoly
        if ctype is LaurentPoly:
            acc = {i: q if q.allow_negative else q.to_laurent() for i, q in acc.items()}
        return PolyForm._raw(n_in, k, acc, ctype)

    def pullback_affine(self, f: "AffineMap") -> "PolyForm":
        if f.n_out != self.nvars:
            raise ValueError(f"affine map lands in {f.n_out} dimensions, form lives on {self.nvars}")
        return self.pullback(f.components(), f.n_in)

    def evaluate_coefficients(self, point: Sequence) -> dict[Index, Fraction]:
        return {i: p.evaluate(point) for i, p in self.terms.items()}

    def split_last_variable(self) -> tuple["PolyForm", "PolyForm"]:
        """Write the form as alpha + dt ^ beta where t is the last variable."""
        t = self.nvars - 1
        alpha, beta = {}, {}
        for idx, p in self.terms.items():
            if idx and idx[-1] == t:
                rest = idx[:-1]
                # dx_rest ^ dt = (-1)^|rest| dt ^ dx_rest
                beta[rest] = -p if len(rest) & 1 else p
            else:
                alpha[idx] = p
        return (
            PolyForm._raw(self.nvars, self.degree, alpha, self.ctype),
            PolyForm._raw(self.nvars, max(self.degree - 1, 0), beta, self.ctype) if self.degree else PolyForm.zero(self.nvars, 0),
        )


def integrate_last_variable(form: PolyForm, lo=0, hi=1) -> PolyForm:
    """Integrate the coefficients of a form (with no dt) over t in [lo, hi]; drops t."""
    t = form.nvars - 1
    lo, hi = as_fraction(lo), as_fraction(hi)
    out: dict[Index, MultiPoly] = {}
    for idx, p in form.terms.items():
        if t in idx:
            raise ValueError("form still contains dt")
        acc: dict = {}
        for exp, c in p.terms.items():
            e = exp[t]
            if e < 0:
                raise ValueError("cannot integrate a negative power of t")
            v = c * (hi ** (e + 1) - lo ** (e + 1)) / (e + 1)
            if v:
                key = exp[:t]
                acc[key] = acc.get(key, 0) + v
        q = MultiPoly(t, {k: v for k, v in acc.items() if v})
        if q:
            out[idx] = q
    return PolyForm._raw(t, form.degree, out, MultiPoly)


def det(m: list[list[Fraction]]) -> Fraction:
    """Exact determinant by fraction-valued elimination."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    a = [list(r) for r in m]
    sign = 1
    result = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if a[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        p = a[c][c]
        result *= p
        for r in range(c + 1, n):
            f = a[r][c]
            if f:
                f = f / p
                a[r] = [x - f * y for x, y in zip(a[r], a[c])]
    return result * sign


def poly_det(m: list[list[_Poly]], nvars: int) -> _Poly:
    n = len(m)
    if n == 0:
        return MultiPoly.constant(nvars, 1)
    if n == 1:
        return m[0][0]
    total = MultiPoly.zero(nvars)
    for j in range(n):
        if not m[0][j]:
            continue
        sub = [row[:j] + row[j + 1:] for row in m[1:]]
        term = m[0][j] * poly_det(sub, nvars)
        total = total + term if j % 2 == 0 else total - term
    return total


class AffineMap:
    """x -> matrix @ x + offset, exact over the rationals."""

    __slots__ = ("matrix", "offset", "n_in", "n_out")

    def __init__(self, matrix: Sequence[Sequence], offset: Sequence, n_in: int | None = None):
        self.matrix = tuple(tuple(as_fraction(a) for a in row) for row in matrix)
        self.offset = tuple(as_fraction(b) for b in offset)
        if len(self.matrix) != len(self.offset):
            raise ValueError("matrix rows and offset length differ")
        widths = {len(r) for r in self.matrix}
        if len(widths) > 1:
            raise ValueError("ragged matrix")
        self.n_out = len(self.offset)
        self.n_in = widths.pop() if widths else (n_in or 0)
        if n_in is not None and self.matrix and self.n_in != n_in:
            raise ValueError("n_in disagrees with matrix width")

    @classmethod
    def identity(cls, n: int) -> "AffineMap":
        return cls([[int(i == j) for j in range(n)] for i in range(n)], [0] * n, n)

    @classmethod
    def constant(cls, n_in: int, point: Sequence) -> "AffineMap":
        return cls([[0] * n_in for _ in point], point, n_in)

    @classmethod
    def simplex_chart(cls, vertices: Sequence[Sequence]) -> "AffineMap":
        """t -> v0 + sum t_i (v_i - v0); the standard parametrization of a simplex."""
        v0 = [as_fraction(x) for x in vertices[0]]
        k = len(vertices) - 1
        cols = [[as_fraction(x) - y for x, y in zip(v, v0)] for v in vertices[1:]]
        matrix = [[cols[i][j] for i in range(k)] for j in range(len(v0))]
        return cls(matrix, v0, k)

    def __call__(self, x: Sequence) -> tuple[Fraction, ...]:
        if len(x) != self.n_in:
            raise ValueError(f"point has {len(x)} coordinates, map expects {self.n_in}")
        x = [as_fraction(v) for v in x]
        return tuple(sum((a * v for a, v in zip(row, x)), Fraction(0)) + b for row, b in zip(self.matrix, self.offset))

    def compose(self, inner: "AffineMap") -> "AffineMap":
        """self o inner."""
        if inner.n_out != self.n_in:
            raise ValueError("dimension mismatch in composition")
        m = [
            [sum((self.matrix[i][k] * inner.matrix[k][j] for k in range(self.n_in)), Fraction(0)) for j in range(inner.n_in)]
            for i in range(self.n_out)
        ]
        b = [
            sum((self.matrix[i][k] * inner.offset[k] for k in range(self.n_in)), Fraction(0)) + self.offset[i]
            for i in range(self.n_out)
        ]
        return AffineMap(m, b, inner.n_in)

    def __matmul__(self, inner: "AffineMap") -> "AffineMap":
        return self.compose(inner)

    def components(self) -> list[MultiPoly]:
        return affine_polys(self.matrix, self.offset, self.n_in)

    def __eq__(self, other):
        return isinstance(other, AffineMap) and (self.matrix, self.offset, self.n_in) == (other.matrix, other.offset, other.n_in)

    def __hash__(self):
        return hash((self.matrix, self.offset, self.n_in))

    def __repr__(self):
        return f"AffineMap({[[str(a) for a in r] for r in self.matrix]}, {[str(b) for b in self.offset]})"


def form_wedge(a: PolyForm, b: PolyForm) -> PolyForm:
    return a.wedge(b)


def form_d(a: PolyForm) -> PolyForm:
    return a.d()


def form_pullback_affine(a: PolyForm, f: AffineMap) -> PolyForm:
    return a.pullback_affine(f)
