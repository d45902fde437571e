"""JSON encoding of the library's values.

Rationals are strings ``"p/q"`` (or ``"p"``), so every round trip is
bit-exact.  Decoders raise ``InputError`` carrying a JSON path such as
``$.vertices[2][0]`` that points at the offending value.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .forms import PolyForm
from .poly import LaurentPoly, MultiPoly, _Poly


class InputError(ValueError):
    """Malformed input; the message names the location of the problem."""


def rat_str(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rat(s, where: str = "$") -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise InputError(f"{where}: expected a rational string like \"3/4\", got {json.dumps(s)}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: cannot parse {s!r} as a rational ({exc})") from None


def _get(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object")
    if key not in obj:
        raise InputError(f"{where}: missing key {key!r}")
    return obj[key]


def _int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise InputError(f"{where}: expected an integer, got {json.dumps(x)}")
    return x


def _list(x, where: str) -> list:
    if not isinstance(x, list):
        raise InputError(f"{where}: expected a list")
    return x


def loads(text: str, source: str = "<input>") -> Any:
    """Parse JSON, reporting syntax errors with line and column."""
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


# -- polynomials and forms ----------------------------------------------------

def poly_to_json(p: _Poly) -> dict:
    return {"vars": p.nvars, "terms": [{"exp": list(e), "c": rat_str(c)} for e, c in p.sorted_terms()]}


def poly_from_json(obj, where: str = "$", laurent: bool = False) -> _Poly:
    n = _int(_get(obj, "vars", where), f"{where}.vars")
    terms = {}
    for i, t in enumerate(_list(_get(obj, "terms", where), f"{where}.terms")):
        w = f"{where}.terms[{i}]"
        exp = tuple(_int(e, f"{w}.exp") for e in _list(_get(t, "exp", w), f"{w}.exp"))
        if len(exp) != n:
            raise InputError(f"{w}.exp: length {len(exp)} does not match vars = {n}")
        terms[exp] = terms.get(exp, 0) + parse_rat(_get(t, "c", w), f"{w}.c")
    neg = any(e < 0 for exp in terms for e in exp)
    if neg and not laurent:
        raise InputError(f"{where}: negative exponents need a Laurent context")
    return (LaurentPoly if laurent else MultiPoly)(n, terms)


def form_to_json(w: PolyForm) -> dict:
    terms = []
    for idx in sorted(w.terms):
        for e, c in w.terms[idx].sorted_terms():
            terms.append({"dvars": list(idx), "exp": list(e), "c": rat_str(c)})
    return {"vars": w.nvars, "degree": w.degree, "terms": terms}


def form_from_json(obj, where: str = "$", laurent: bool = False) -> PolyForm:
    n = _int(_get(obj, "vars", where), f"{where}.vars")
    k = _int(_get(obj, "degree", where), f"{where}.degree")
    acc: dict[tuple, dict] = {}
    for i, t in enumerate(_list(_get(obj, "terms", where), f"{where}.terms")):
        w = f"{where}.terms[{i}]"
        idx = tuple(_int(e, f"{w}.dvars") for e in _list(_get(t, "dvars", w), f"{w}.dvars"))
        exp = tuple(_int(e, f"{w}.exp") for e in _list(_get(t, "exp", w), f"{w}.exp"))
        if len(idx) != k or list(idx) != sorted(set(idx)) or any(not 0 <= j < n for j in idx):
            raise InputError(f"{w}.dvars: need {k} strictly increasing indices below {n}")
        if len(exp) != n:
            raise InputError(f"{w}.exp: length {len(exp)} does not match vars = {n}")
        if not laurent and any(e < 0 for e in exp):
            raise InputError(f"{w}.exp: negative exponents need a Laurent algebra")
        d = acc.setdefault(idx, {})
        d[exp] = d.get(exp, 0) + parse_rat(_get(t, "c", w), f"{w}.c")
    ctype = LaurentPoly if laurent else MultiPoly
    return PolyForm(n, k, {idx: ctype(n, t) for idx, t in acc.items()}, ctype)


# -- polyhedra, chains, algebras ----------------------------------------------------

def polyhedron_to_json(K) -> dict:
    return {
        "ambient_dim": K.ambient_dim,
        "vertices": [[rat_str(x) for x in v] for v in K.vertices],
        "simplices": [list(s) for s in K.sorted_simplices],
    }


def raw_polyhedron_from_json(obj, where: str = "$"):
    """(vertices, simplices, ambient_dim) without building the polyhedron."""
    m = _int(_get(obj, "ambient_dim", where), f"{where}.ambient_dim")
    verts = []
    for i, v in enumerate(_list(_get(obj, "vertices", where), f"{where}.vertices")):
        w = f"{where}.vertices[{i}]"
        v = _list(v, w)
        if len(v) != m:
            raise InputError(f"{w}: vertex has {len(v)} coordinates, ambient_dim is {m}")
        verts.append([parse_rat(x, f"{w}[{j}]") for j, x in enumerate(v)])
    simps = []
    for i, s in enumerate(_list(_get(obj, "simplices", where), f"{where}.simplices")):
        w = f"{where}.simplices[{i}]"
        s = [_int(x, w) for x in _list(s, w)]
        if not s:
            raise InputError(f"{w}: empty simplex")
        if len(set(s)) != len(s):
            raise InputError(f"{w}: repeated vertex")
        if any(not 0 <= x < len(verts) for x in s):
            raise InputError(f"{w}: vertex index out of range")
        simps.append(s)
    return verts, simps, m


def polyhedron_from_json(obj, where: str = "$"):
    from .polyhedron import Polyhedron

    verts, simps, m = raw_polyhedron_from_json(obj, where)
    return Polyhedron.build(verts, simps, m)


def chain_to_json(c) -> dict:
    return {
        "ambient_dim": c.ambient_dim,
        "degree": c.degree,
        "terms": [{"c": rat_str(a), "vertices": [[rat_str(x) for x in v] for v in verts]} for a, verts in c.terms],
    }


def chain_from_json(obj, where: str = "$"):
    from .pairing import AffineChain

    m = _int(_get(obj, "ambient_dim", where), f"{where}.ambient_dim")
    k = _int(_get(obj, "degree", where), f"{where}.degree")
    terms = []
    for i, t in enumerate(_list(_get(obj, "terms", where), f"{where}.terms")):
        w = f"{where}.terms[{i}]"
        verts = []
        for j, v in enumerate(_list(_get(t, "vertices", w), f"{w}.vertices")):
            v = _list(v, f"{w}.vertices[{j}]")
            if len(v) != m:
                raise InputError(f"{w}.vertices[{j}]: expected {m} coordinates")
            verts.append(tuple(parse_rat(x, f"{w}.vertices[{j}][{q}]") for q, x in enumerate(v)))
        if len(verts) != k + 1:
            raise InputError(f"{w}.vertices: a {k}-simplex needs {k + 1} vertices")
        terms.append((parse_rat(_get(t, "c", w), f"{w}.c"), tuple(verts)))
    return AffineChain(m, k, tuple(terms))


def algebra_to_json(A) -> dict:
    out = {"kind": A.kind, "vars": A.nvars}
    if A.kind == "monomial_quotient":
        out["ideal_monomials"] = [list(g) for g in A.ideal_monomials]
    if A.kind == "univariate_quotient":
        out["modulus"] = poly_to_json(A.modulus)
    return out


def algebra_from_json(obj, where: str = "$"):
    from .kahler import KINDS, FinPresAlgebra

    kind = _get(obj, "kind", where)
    if kind not in KINDS:
        raise InputError(f"{where}.kind: expected one of {list(KINDS)}, got {json.dumps(kind)}")
    n = _int(_get(obj, "vars", where), f"{where}.vars")
    gens = ()
    modulus = None
    if kind == "monomial_quotient":
        raw = _list(_get(obj, "ideal_monomials", where), f"{where}.ideal_monomials")
        gens = tuple(tuple(_int(e, f"{where}.ideal_monomials[{i}]") for e in _list(g, f"{where}.ideal_monomials[{i}]"))
                     for i, g in enumerate(raw))
    if kind == "univariate_quotient":
        modulus = poly_from_json(_get(obj, "modulus", where), f"{where}.modulus")
    try:
        return FinPresAlgebra(kind, n, gens, modulus)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None


def piecewise_to_json(w) -> dict:
    return {
        "polyhedron": polyhedron_to_json(w.base),
        "degree": w.degree,
        "pieces": [{"simplex": list(a), "form": form_to_json(p)} for a, p in sorted(w.pieces.items())],
    }


def piecewise_from_json(obj, where: str = "$"):
    from .piecewise import PiecewiseForm

    K = polyhedron_from_json(_get(obj, "polyhedron", where), f"{where}.polyhedron")
    k = _int(_get(obj, "degree", where), f"{where}.degree")
    pieces = {}
    for i, t in enumerate(_list(_get(obj, "pieces", where), f"{where}.pieces")):
        w = f"{where}.pieces[{i}]"
        s = tuple(sorted(_int(x, f"{w}.simplex") for x in _list(_get(t, "simplex", w), f"{w}.simplex")))
        pieces[s] = form_from_json(_get(t, "form", w), f"{w}.form")
    try:
        return PiecewiseForm.from_ambient(K, k, pieces)
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None
