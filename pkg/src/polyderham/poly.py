"""Sparse multivariate polynomials over the rationals.

A polynomial is a map from exponent tuples to nonzero ``Fraction``
coefficients.  ``MultiPoly`` only admits non-negative exponents,
``LaurentPoly`` admits negative ones as well.  Both are immutable and
compare structurally, so equality is exact polynomial identity.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

Exponent = tuple[int, ...]


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an int, Fraction or 'p/q' string")
    return Fraction(x)


def grlex_key(exp: Exponent):
    return (sum(exp), exp)


class _Poly:
    __slots__ = ("nvars", "terms", "_hash")
    allow_negative = False

    def __init__(self, nvars: int, terms: Mapping[Exponent, object] | None = None):
        self.nvars = nvars
        clean: dict[Exponent, Fraction] = {}
        if terms:
            for exp, c in terms.items():
                exp = tuple(int(e) for e in exp)
                if len(exp) != nvars:
                    raise ValueError(f"exponent {exp} has length {len(exp)}, expected {nvars}")
                if not self.allow_negative and any(e < 0 for e in exp):
                    raise ValueError(f"negative exponent {exp} in {type(self).__name__}")
                c = as_fraction(c)
                if c:
                    clean[exp] = clean.get(exp, 0) + c
                    if not clean[exp]:
                        del clean[exp]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict[Exponent, Fraction]):
        # trusted constructor: terms already nonzero and well-shaped
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj.terms = terms
        obj._hash = None
        return obj

    # -- constructors -------------------------------------------------
    @classmethod
    def zero(cls, nvars: int):
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c):
        c = as_fraction(c)
        return cls._raw(nvars, {(0,) * nvars: c} if c else {})

    @classmethod
    def var(cls, nvars: int, i: int, power: int = 1):
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for {nvars} variables")
        exp = [0] * nvars
        exp[i] = power
        return cls._raw(nvars, {tuple(exp): Fraction(1)})

    @classmethod
    def monomial(cls, exp: Sequence[int], c=1):
        return cls(len(exp), {tuple(exp): c})

    # -- basic protocol -----------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, _Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == type(self).constant(self.nvars, other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda kv: grlex_key(kv[0]))

    def __repr__(self):
        return f"{type(self).__name__}({self.nvars}, {self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp, c in reversed(self.sorted_terms()):
            mono = "*".join(
                f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(exp) if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def max_abs_exponent(self) -> int:
        return max((abs(e) for exp in self.terms for e in exp), default=0)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    # -- arithmetic ---------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, _Poly):
            if other.nvars != self.nvars:
                raise ValueError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Fraction)):
            return type(self).constant(self.nvars, other)
        return None

    def _result_type(self, other):
        if isinstance(other, _Poly) and (self.allow_negative or other.allow_negative):
            return LaurentPoly
        return type(self)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self.terms)
        for exp, c in other.terms.items():
            v = out.get(exp, 0) + c
            if v:
                out[exp] = v
            else:
                out.pop(exp, None)
        return self._result_type(other)._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c):
        c = as_fraction(c)
        if not c:
            return type(self).zero(self.nvars)
        return type(self)._raw(self.nvars, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    del out[e]
        return self._result_type(other)._raw(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power; use LaurentPoly.monomial for inverses of monomials")
        result = type(self).constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- calculus and evaluation --------------------------------------
    def partial(self, i: int):
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for {self.nvars} variables")
        out = {}
        for exp, c in self.terms.items():
            e = exp[i]
            if e:
                new = exp[:i] + (e - 1,) + exp[i + 1:]
                out[new] = c * e
        return type(self)._raw(self.nvars, out)

    def euler(self, i: int):
        """x_i * d/dx_i: scales each monomial by its exponent in x_i."""
        out = {exp: c * exp[i] for exp, c in self.terms.items() if exp[i]}
        return type(self)._raw(self.nvars, out)

    def __call__(self, *point):
        return self.evaluate(point[0] if len(point) == 1 and isinstance(point[0], (list, tuple)) else point)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(f"arity mismatch: point has {len(point)} coordinates, polynomial has {self.nvars} variables")
        pt = [as_fraction(x) for x in point]
        total = Fraction(0)
        for exp, c in self.terms.items():
            v = c
            for x, e in zip(pt, exp):
                if e:
                    if e < 0 and not x:
                        raise ZeroDivisionError("negative power of a zero coordinate")
                    v *= x ** e
            total += v
        return total

    def substitute(self, images: Sequence["_Poly"], n_in: int | None = None) -> "_Poly":
        """Compose with a polynomial map: x_i -> images[i].

        ``n_in`` is only needed when there are no images (a constant).
        """
        if len(images) != self.nvars:
            raise ValueError(f"need {self.nvars} images, got {len(images)}")
        if n_in is None:
            if not images:
                raise ValueError("n_in required to substitute into a 0-variable polynomial")
            n_in = images[0].nvars
        rtype = MultiPoly if all(not im.allow_negative for im in images) else LaurentPoly
        if any(e < 0 for exp in self.terms for e in exp):
            # negative powers only allowed for monomial images
            for exp in self.terms:
                for i, e in enumerate(exp):
                    if e < 0 and len(images[i].terms) != 1:
                        raise ValueError("cannot substitute a non-monomial into a negative power")
            rtype = LaurentPoly
        cache: dict[tuple[int, int], _Poly] = {}

        def power(i, e):
            key = (i, e)
            if key not in cache:
                if e >= 0:
                    cache[key] = images[i] ** e
                else:
                    (mexp, mc), = images[i].terms.items()
                    cache[key] = LaurentPoly._raw(n_in, {tuple(m * e for m in mexp): mc ** e})
            return cache[key]

        out = rtype.zero(n_in)
        for exp, c in self.terms.items():
            term = rtype.constant(n_in, c)
            for i, e in enumerate(exp):
                if e:
                    term = term * power(i, e)
            out = out + term
        return rtype._raw(n_in, out.terms)

    def to_laurent(self) -> "LaurentPoly":
        return LaurentPoly._raw(self.nvars, dict(self.terms))


class MultiPoly(_Poly):
    __slots__ = ()
    allow_negative = False


class LaurentPoly(_Poly):
    __slots__ = ()
    allow_negative = True

    def to_multipoly(self) -> MultiPoly:
        return MultiPoly(self.nvars, self.terms)

    def multidegrees(self) -> set[Exponent]:
        return set(self.terms)


def poly_eval(p: _Poly, x: Sequence) -> Fraction:
    return p.evaluate(x)


def poly_partial(p: _Poly, i: int) -> _Poly:
    return p.partial(i)


def affine_polys(matrix: Sequence[Sequence[Fraction]], offset: Sequence[Fraction], n_in: int) -> list[MultiPoly]:
    """Coordinate polynomials of x -> matrix x + offset."""
    out = []
    for row, b in zip(matrix, offset):
        terms = {}
        if b:
            terms[(0,) * n_in] = as_fraction(b)
        for i, a in enumerate(row):
            if a:
                e = [0] * n_in
                e[i] = 1
                terms[tuple(e)] = as_fraction(a)
        out.append(MultiPoly._raw(n_in, terms))
    return out


def monomials_up_to(nvars: int, degree: int) -> list[Exponent]:
    """All exponent vectors of total degree <= degree, in graded-lex order."""
    if degree < 0:
        return []
    result: list[Exponent] = []

    def rec(prefix, remaining, slots):
        if slots == 0:
            result.append(tuple(prefix))
            return
        for e in range(remaining + 1):
            prefix.append(e)
            rec(prefix, remaining - e, slots - 1)
            prefix.pop()

    rec([], degree, nvars)
    return sorted(result, key=grlex_key)


def exponent_box(nvars: int, bound: int) -> list[Exponent]:
    """All exponent vectors with entries in [-bound, bound]."""
    result: list[Exponent] = [()]
    for _ in range(nvars):
        result = [e + (k,) for e in result for k in range(-bound, bound + 1)]
    return result
