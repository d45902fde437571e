"""Command line front end.

Every subcommand reads JSON, prints a JSON report (to stdout or ``--out``)
and exits with 0 on success, 1 when a mathematical check fails and 2 on
malformed input or a violated precondition.
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

from . import __version__
from .serialize import (
    InputError,
    algebra_from_json,
    chain_from_json,
    dumps,
    form_from_json,
    loads,
    raw_polyhedron_from_json,
    rat_str,
)

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class RejectedInput(InputError):
    """Input parsed but failed validation; carries the report to print."""

    def __init__(self, message: str, report: dict):
        super().__init__(message)
        self.report = report


class CheckFailed(Exception):
    """A mathematical assertion did not hold; carries the report to print."""

    def __init__(self, report: dict):
        super().__init__(report.get("message", "check failed"))
        self.report = report


def _read_json(path: str):
    p = Path(path)
    if not p.is_file():
        raise InputError(f"{path}: no such file")
    return loads(p.read_text(), path)


def _polyhedron(path: str):
    from .polyhedron import Polyhedron, validate_polyhedron

    obj = _read_json(path)
    verts, simps, m = raw_polyhedron_from_json(obj)
    K = Polyhedron.build(verts, simps, m)
    report = validate_polyhedron(K)
    if not report.valid:
        raise InputError(f"{path}: not a valid polyhedron: {report.to_json()}")
    return K, obj


# -- subcommands --------------------------------------------------------------

def cmd_validate(args) -> dict:
    from .polyhedron import Polyhedron, validate_polyhedron

    verts, simps, m = raw_polyhedron_from_json(_read_json(args.path))
    K = Polyhedron.build(verts, simps, m)
    report = validate_polyhedron(K)
    out = report.to_json()
    out["closure_simplex_count"] = len(K.simplices)
    if not report.valid:
        raise RejectedInput(f"{args.path}: invalid polyhedron; offending simplex pairs {out['bad_pairs']}", out)
    return out


def cmd_betti(args) -> dict:
    from .cohomology import simplicial_cohomology, truncated_pw_derham

    K, _ = _polyhedron(args.path)
    simplicial = simplicial_cohomology(K)
    if args.mode == "simplicial":
        return {"mode": "simplicial", **simplicial.to_json()}
    report = truncated_pw_derham(K, args.max_degree)
    out = {"mode": "derham", **report.to_json(timing=args.timing), "simplicial_betti": simplicial.betti}
    if not report.stabilized:
        print(f"warning: Betti numbers changed between bound {args.max_degree} and {args.max_degree + 1}; "
              "raise --max-degree", file=sys.stderr)
    elif report.betti != simplicial.betti:
        raise CheckFailed({**out, "message": "stabilized Betti numbers differ from simplicial cohomology"})
    return out


def cmd_pair(args) -> dict:
    from .pairing import pair_form_chain

    form = form_from_json(_read_json(args.form), "$form")
    chain = chain_from_json(_read_json(args.chain), "$chain")
    return {"value": rat_str(pair_form_chain(form, chain))}


def cmd_xi(args) -> dict:
    from .kahler import AlgForm
    from .pairing import xi_evaluate

    A = algebra_from_json(_read_json(args.algebra), "$algebra")
    form = form_from_json(_read_json(args.form), "$form", laurent=A.kind == "laurent")
    chain = chain_from_json(_read_json(args.chain), "$chain")
    return {"value": rat_str(xi_evaluate(A, AlgForm(A, form), chain))}


def cmd_witness(args) -> dict:
    from .cohomology import laurent_block_complex
    from .kahler import torus_witness, truncated_exactness_solve

    if args.n < 1:
        raise InputError("--n must be at least 1")
    w = torus_witness(args.n)
    rows = []
    conclusive = True
    feasible = False
    for D in range(args.max_degree + 1):
        r = truncated_exactness_solve(w, D)
        rows.append({"bound": D, "feasible": r.feasible, "obstructed_blocks": [list(m) for m in r.obstructed]})
        conclusive &= r.conclusive
        feasible |= r.feasible
    zero_block = laurent_block_complex((0,) * args.n).betti().betti
    out = {
        "model": "torus",
        "n": args.n,
        "max_degree": args.max_degree,
        "bounds": rows,
        "zero_block_betti": zero_block,
        "top_class_nonzero": zero_block[args.n] > 0 and conclusive,
        "summary": "infeasible at all blocks; class nonzero" if (conclusive and not feasible) else "witness failed",
    }
    if feasible or not conclusive:
        raise CheckFailed({**out, "message": "torus witness turned out exact"})
    return out


def cmd_h0(args) -> dict:
    from .cohomology import h0_report

    K, _ = _polyhedron(args.path)
    r = h0_report(K)
    if not r.ok:
        raise CheckFailed({**r.to_json(), "message": "dim H0 differs from the component count"})
    return r.to_json()


def cmd_poincare(args) -> dict:
    from .cohomology import TruncatedComplex, truncated_pw_derham
    from .piecewise import star_contraction_exactness
    from .polyhedron import Star

    K, obj = _polyhedron(args.star)
    center = obj.get("center") if isinstance(obj, dict) else None
    if center is None:
        centers = [v for v in range(len(K.vertices)) if all(v in a for a in K.maximal_simplices)]
        if not centers:
            raise InputError(f"{args.star}: no vertex lies in every maximal simplex; not a star")
        center = centers[0]
    try:
        S = Star(K, center)
    except ValueError as exc:
        raise InputError(f"{args.star}: {exc}") from None
    bettis = []
    for D in range(1, args.max_degree + 1):
        bettis.append({"bound": D, "betti": truncated_pw_derham(K, D, check_stability=False).betti})
    cx = TruncatedComplex(K, args.max_degree)
    primitives = 0
    for k in range(1, cx.top + 1):
        for w in cx.basis_forms(k):
            if w.d().is_zero():
                star_contraction_exactness(S, w)
                primitives += 1
    expected = [1] + [0] * K.dim
    out = {"center": center, "bounds": bettis, "expected": expected, "closed_forms_contracted": primitives}
    if any(b["betti"] != expected for b in bettis):
        raise CheckFailed({**out, "message": "a star has nonzero cohomology in positive degree"})
    return out


def cmd_compare(args) -> dict:
    from .cohomology import compare_lambda_psi

    K, _ = _polyhedron(args.path)
    r = compare_lambda_psi(K)
    if not r.ok:
        raise CheckFailed({**r.to_json(), "message": "integration after Whitney realization is not the identity"})
    return r.to_json()


def cmd_selftest(args) -> dict:
    from .selftest import dg_law_failures, stokes_failures

    rng = random.Random(args.seed)
    stokes_bad = stokes_failures(rng, args.cases)
    laws = dg_law_failures(rng, args.cases)
    out = {"cases": args.cases, "stokes_failures": stokes_bad, "dg_law_failures": laws}
    if stokes_bad or any(laws.values()):
        raise CheckFailed({**out, "message": "randomized law check failed"})
    return out


# -- plumbing -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--seed", type=int, default=0, help="seed recorded in the report (and used by selftest)")

    parser = argparse.ArgumentParser(prog="polyderham", description="Exact piecewise polynomial de Rham computations.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a polyhedron")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("betti", parents=[common], help="Betti numbers (simplicial or truncated de Rham)")
    p.add_argument("path")
    p.add_argument("--mode", choices=["simplicial", "derham"], default="simplicial")
    p.add_argument("--max-degree", type=int, default=3, dest="max_degree")
    p.add_argument("--timing", action="store_true", help="include wall-clock time (breaks byte-identical output)")
    p.set_defaults(func=cmd_betti)

    p = sub.add_parser("pair", parents=[common], help="integrate a polynomial form over an affine chain")
    p.add_argument("--form", required=True)
    p.add_argument("--chain", required=True)
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("xi", parents=[common], help="integrate an algebra form over simplices in its real spectrum")
    p.add_argument("--algebra", required=True)
    p.add_argument("--form", required=True)
    p.add_argument("--chain", required=True)
    p.set_defaults(func=cmd_xi)

    p = sub.add_parser("witness", parents=[common], help="non-exactness of the Laurent torus form")
    p.add_argument("--model", choices=["torus"], default="torus")
    p.add_argument("--n", type=int, default=2)
    p.add_argument("--max-degree", type=int, default=4, dest="max_degree")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("h0", parents=[common], help="degree-zero cohomology against connected components")
    p.add_argument("path")
    p.set_defaults(func=cmd_h0)

    p = sub.add_parser("poincare", parents=[common], help="vanishing cohomology of a star")
    p.add_argument("--star", required=True, help="polyhedron JSON, optionally with a \"center\" vertex")
    p.add_argument("--max-degree", type=int, default=3, dest="max_degree")
    p.set_defaults(func=cmd_poincare)

    p = sub.add_parser("compare", parents=[common], help="Whitney realization followed by integration")
    p.add_argument("path")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("selftest", parents=[common], help="randomized Stokes and dg-algebra law checks")
    p.add_argument("--cases", type=int, default=100)
    p.set_defaults(func=cmd_selftest)
    return parser


def _emit(report: dict, args) -> None:
    text = dumps(report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "max_degree", 1) < 1 and args.command != "witness":
        print("error: --max-degree must be at least 1", file=sys.stderr)
        return EXIT_INPUT
    header = {"command": args.command, "seed": args.seed, "version": __version__}
    try:
        body = args.func(args)
    except CheckFailed as exc:
        _emit({**header, "status": "fail", **exc.report}, args)
        return EXIT_FAIL
    except (InputError, ValueError, OSError) as exc:
        if isinstance(exc, RejectedInput):
            _emit({**header, "status": "invalid", **exc.report}, args)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit({**header, "status": "ok", **body}, args)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
