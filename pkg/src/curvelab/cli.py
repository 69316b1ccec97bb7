"""Command-line front end.

Every command prints one JSON document on stdout.  Numbers are exact
dyadics ``{"m": "<int>", "e": <int>}``; failures print ``{"error": ...}``
and exit with a nonzero status.
"""

from __future__ import annotations

import argparse
import json
import sys

from .arith import Dyadic, DyadicComplex
from .bisolve import CommonFactorError, refine_solutions, solve
from .elim import DegenerateDegree, resultant_modular
from .poly.exact import IntPoly1, IntPoly2
from .poly.multipoint import multipoint_eval
from .poly.parse import PolySyntaxError, parse_poly
from .postsolve import separating_form, sign_at_solutions
from .topology import curve_topology

__all__ = ["build_parser", "read_poly", "read_points", "run", "main"]

EXIT_USAGE = 2
EXIT_MATH = 3
EXIT_INTERNAL = 4


def read_poly(text: str) -> IntPoly2:
    """Text grammar, or the sparse JSON form ``[[i, j, "c"], ...]``."""
    t = text.strip()
    if t.startswith("["):
        return IntPoly2.from_json(json.loads(t))
    return parse_poly(t)


def _read_number(tok: str) -> Dyadic:
    if "*" in tok:
        return Dyadic.parse(tok)
    return Dyadic(int(tok))


def read_points(path: str) -> list:
    """One point per line: ``re`` or ``re im``, each an integer or ``m*2^e``.

    A file starting with ``[`` is read as a JSON list of dyadics or
    ``{"re": ..., "im": ...}`` objects.
    """
    with open(path) as fh:
        text = fh.read()
    if text.lstrip().startswith("["):
        return [DyadicComplex.from_json(o) for o in json.loads(text)]
    pts = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.replace(",", " ").split()
        if len(toks) > 2:
            raise ValueError(f"bad point line {line!r}")
        re = _read_number(toks[0])
        im = _read_number(toks[1]) if len(toks) == 2 else Dyadic(0)
        pts.append(DyadicComplex(re, im))
    return pts


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="curvelab", description="Certified bivariate solving and curve topology.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="isolate all complex solutions of f = g = 0")
    p.add_argument("-f", required=True)
    p.add_argument("-g", required=True)
    p.add_argument("--refine", type=int, metavar="L", help="refine polydisks below 2^-L")

    p = sub.add_parser("sepform", help="separating form x + s*y for f = g = 0")
    p.add_argument("-f", required=True)
    p.add_argument("-g", required=True)

    # -h names the third polynomial here, so help moves to --help
    p = sub.add_parser("signat", help="sign of h at the real solutions of f = g = 0", add_help=False)
    p.add_argument("--help", action="help", help="show this help message and exit")
    p.add_argument("-f", required=True)
    p.add_argument("-g", required=True)
    p.add_argument("-h", dest="h", required=True)

    p = sub.add_parser("topology", help="straight-line graph isotopic to the real curve f = 0")
    p.add_argument("-f", required=True)
    p.add_argument("--svg", metavar="PATH", help="write a debug rendering")
    p.add_argument("--dot", metavar="PATH", help="write the graph in DOT format")
    p.add_argument("--refine", type=int, metavar="L", help="refine vertices below 2^-L")
    p.add_argument("--shear", type=int, help="force an admissible shear parameter")

    p = sub.add_parser("resultant", help="exact resultant eliminating one variable")
    p.add_argument("-f", required=True)
    p.add_argument("-g", required=True)
    p.add_argument("--axis", choices=("x", "y"), default="y", help="variable to eliminate")

    p = sub.add_parser("mpeval", help="certified evaluation of a univariate polynomial at many points")
    p.add_argument("-F", required=True)
    p.add_argument("--points", required=True, metavar="FILE")
    p.add_argument("-L", type=int, required=True, help="absolute error 2^-L")
    return ap


def _univariate(p: IntPoly2) -> IntPoly1:
    if p.deg_y > 0:
        raise ValueError("mpeval needs a polynomial in x only")
    return p.coeff_view("y", 0)


def run(args: argparse.Namespace) -> dict:
    cmd = args.command
    if cmd == "solve":
        sr = solve(read_poly(args.f), read_poly(args.g))
        if args.refine is not None:
            sr = refine_solutions(sr, args.refine)
        return sr.to_json()
    if cmd == "sepform":
        return separating_form(solve(read_poly(args.f), read_poly(args.g))).to_json()
    if cmd == "signat":
        sr = solve(read_poly(args.f), read_poly(args.g))
        return {"signs": sign_at_solutions(sr, read_poly(args.h)).to_json()}
    if cmd == "topology":
        g = curve_topology(read_poly(args.f), s=args.shear, refine=args.refine)
        if args.svg:
            from .report import render_svg

            render_svg(g, args.svg)
        if args.dot:
            from .report import write_dot

            write_dot(g, args.dot)
        return g.to_json()
    if cmd == "resultant":
        R = resultant_modular(read_poly(args.f), read_poly(args.g), args.axis)
        var = "x" if args.axis == "y" else "y"
        return {"eliminated": args.axis, "variable": var, "resultant": str(R).replace("x", var),
                "coeffs": [str(c) for c in R.coeffs]}
    if cmd == "mpeval":
        F = _univariate(read_poly(args.F))
        vals = multipoint_eval(F, read_points(args.points), args.L)
        return {"L": args.L, "values": [v.to_json() for v in vals]}
    raise ValueError(f"unknown command {cmd!r}")


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def main(argv: list | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        out = run(args)
    except PolySyntaxError as e:
        print(_dump({"error": "syntax", "message": e.message, "offset": e.offset}))
        return EXIT_USAGE
    except CommonFactorError as e:
        print(_dump({"error": "common_factor", "message": str(e)}))
        return EXIT_MATH
    except (DegenerateDegree, ValueError, OSError) as e:
        print(_dump({"error": "invalid_input", "message": str(e)}))
        return EXIT_MATH
    except RuntimeError as e:
        print(_dump({"error": "internal", "message": str(e)}))
        return EXIT_INTERNAL
    print(_dump(out))
    return 0


if __name__ == "__main__":
    sys.exit(main())
