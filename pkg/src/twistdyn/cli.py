"""Command-line front end: ``twistdyn <command> SPEC [options]``.

Exit codes: 0 success, 1 bad input, 2 hypothesis not met, 3 field extension
needed, 4 precision exhausted, 5 internal cross-check failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import dynamics, measure, trucco
from .berkovich import BerkPoint, convex_hull, format_point, parse_point
from .errors import (
    ExceptionalStart,
    ExtensionRequired,
    HypothesisViolated,
    InvariantViolation,
    NotFixed,
    PrecisionLoss,
    SegmentNotInvariant,
    SimpleMap,
    SpecSemanticError,
    SpecSyntaxError,
    TwistDynError,
)
from .gamma import format_gamma, set_alpha_squared
from .mapspec import parse_spec
from .puiseux import set_relative_precision

SCHEMA_VERSION = 1

EXIT_CODES = [
    ((SpecSyntaxError, SpecSemanticError), 1),
    ((SimpleMap, HypothesisViolated, ExceptionalStart, NotFixed, SegmentNotInvariant), 2),
    ((ExtensionRequired,), 3),
    ((PrecisionLoss,), 4),
    ((InvariantViolation,), 5),
]


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def exit_code_for(exc: BaseException) -> int:
    for kinds, code in EXIT_CODES:
        if isinstance(exc, kinds):
            return code
    return 1


def _points(pts):
    return [format_point(p) for p in pts]


def _tree_dot(points, name):
    pts = list(dict.fromkeys(points))
    return convex_hull(pts).to_dot(name) if pts else f"graph {name} {{\n}}\n"


# -- commands -------------------------------------------------------------------------
def cmd_image(F, args):
    xi = parse_point(args.point)
    image = F.image_point(xi)
    out = {"point": format_point(xi), "image": format_point(image), "local_degree": F.local_degree(xi)}
    if xi.is_type_ii:
        out["tangent_map"] = str(F.tangent_map(xi))
    return out, _tree_dot([xi, image], "image")


def cmd_orbit(F, args):
    pts = dynamics.orbit(F, parse_point(args.point), args.n)
    return {"orbit": _points(pts)}, _tree_dot(pts, "orbit")


def cmd_classify_fixed(F, args):
    G = dynamics.iterate(F, args.iterate)
    xi = parse_point(args.point)
    cls = dynamics.classify_fixed(G, xi)
    out = {"point": format_point(xi), "iterate": args.iterate}
    out.update(cls.to_json())
    return out, _tree_dot([xi], "fixed")


def cmd_segment_fixed(F, args):
    model = dynamics.segment_model(F)
    found = dynamics.fixed_points_on_invariant_segment(F)
    rows = []
    for rec in found:
        row = {"point": format_point(rec.point)}
        if rec.interval is not None:
            lo, hi = rec.interval
            row["interval"] = [None if lo is None else format_gamma(lo), None if hi is None else format_gamma(hi)]
        row.update(rec.fixed_class.to_json())
        rows.append(row)
    out = {
        "model": {
            "orientation": model.orientation,
            "breakpoints": [format_gamma(b) for b in model.breakpoints],
            "pieces": [
                {
                    "lo": None if p.lo is None else format_gamma(p.lo),
                    "hi": None if p.hi is None else format_gamma(p.hi),
                    "slope": format_gamma(p.slope),
                    "offset": format_gamma(p.offset),
                }
                for p in model.pieces
            ],
        },
        "fixed_points": rows,
    }
    return out, _tree_dot([r.point for r in found], "segment")


def cmd_exceptional(F, args):
    rep = dynamics.is_exceptional(F, parse_point(args.point), args.bound)
    verdict = {True: "exceptional", False: "not exceptional", None: "inconclusive"}[rep.is_exceptional]
    out = {
        "point": format_point(rep.point),
        "is_exceptional": rep.is_exceptional,
        "verdict": verdict,
        "orbit_found": _points(rep.orbit_found),
        "bound": rep.bound,
    }
    return out, None


def cmd_trucco(F, args):
    depth = args.depth
    tree = trucco.levels(F, depth, jobs=args.jobs)
    out = tree.to_json()
    codes = trucco.shift_code(tree, depth)
    out["full_shift"] = trucco.is_full_shift(codes, F.degree, depth)
    out["leaves"] = len(tree.levels[depth])
    return out, tree.to_dot("trucco")


def cmd_equidistribute(F, args):
    rep = measure.equidistribution_run(F, parse_point(args.start), args.n, jobs=args.jobs)
    last = rep.levels[-1].support_tree
    return rep.to_json(), None if last is None else last.to_dot("support")


def _random_tree_function(seed: int):
    rng = random.Random(seed)
    pts = {BerkPoint.gauss()}
    while len(pts) < 4:
        center = Fraction(rng.randint(-3, 3), rng.choice([1, 2]))
        pts.add(BerkPoint.ball(center, Fraction(rng.randint(0, 6), 2)))
    tree = convex_hull(sorted(pts, key=BerkPoint.sort_key))
    return measure.TreeFunction(tree, [rng.randint(-4, 4) for _ in tree.vertices])


def _given_tree_function(specs):
    values = {}
    for item in specs:
        point_text, _, value = item.rpartition("=")
        if not point_text:
            raise _UsageError(f"--vertex needs POINT=VALUE, got {item!r}")
        values[parse_point(point_text)] = Fraction(value)
    tree = convex_hull(list(values))
    missing = [p for p in tree.vertices if p not in values]
    if missing:
        raise _UsageError("give values at the joins too: " + ", ".join(_points(missing)))
    return measure.TreeFunction(tree, values)


def cmd_laplacian_check(F, args):
    f = _given_tree_function(args.vertex) if args.vertex else _random_tree_function(args.seed)
    check = measure.laplacian_pullback_check(F, f)
    out = {
        "function": f.to_json(),
        "holds": check.holds,
        "left": check.left.to_json(),
        "right": check.right.to_json(),
        "discrepancy": check.discrepancy.to_json(),
        "seed": args.seed if not args.vertex else None,
    }
    return out, measure.pulled_back_function(F, f).tree.to_dot("pullback")


COMMANDS = {
    "image": cmd_image,
    "orbit": cmd_orbit,
    "classify-fixed": cmd_classify_fixed,
    "segment-fixed": cmd_segment_fixed,
    "exceptional": cmd_exceptional,
    "trucco": cmd_trucco,
    "equidistribute": cmd_equidistribute,
    "laplacian-check": cmd_laplacian_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twistdyn", description="Dynamics of twisted rational maps on the Berkovich line.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = _Parser(add_help=False)
    common.add_argument("spec", help="map spec file, or - for standard input")
    common.add_argument("--dot", metavar="PATH", help="also write a DOT graph")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1, help="worker processes for fibre computations")
    p = sub.add_parser("image", parents=[common])
    p.add_argument("--point", required=True)
    p = sub.add_parser("orbit", parents=[common])
    p.add_argument("--point", required=True)
    p.add_argument("--n", type=int, default=5)
    p = sub.add_parser("classify-fixed", parents=[common])
    p.add_argument("--point", required=True)
    p.add_argument("--iterate", type=int, default=1, help="classify as a fixed point of F^k")
    sub.add_parser("segment-fixed", parents=[common])
    p = sub.add_parser("exceptional", parents=[common])
    p.add_argument("--point", required=True)
    p.add_argument("--bound", type=int, default=8)
    p = sub.add_parser("trucco", parents=[common])
    p.add_argument("--depth", type=int)
    p = sub.add_parser("equidistribute", parents=[common])
    p.add_argument("--start", required=True)
    p.add_argument("--n", type=int, default=3)
    p = sub.add_parser("laplacian-check", parents=[common])
    p.add_argument("--vertex", action="append", default=[], metavar="POINT=VALUE")
    return parser


def _emit(payload, stream):
    stream.write(json.dumps(payload, indent=2) + "\n")


def main(argv=None, stdout=None, stdin=None) -> int:
    stdout = stdout or sys.stdout
    stdin = stdin or sys.stdin
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        _emit({"schema": SCHEMA_VERSION, "error": "UsageError", "message": str(exc)}, stdout)
        return 1
    header = {"schema": SCHEMA_VERSION, "command": args.command}
    try:
        text = stdin.read() if args.spec == "-" else open(args.spec, encoding="utf-8").read()
        spec = parse_spec(text)
        set_relative_precision(int(spec.precision))
        set_alpha_squared(int(spec.alpha2))
        if args.command == "trucco" and args.depth is None:
            args.depth = int(spec.depth)
        F = spec.to_map()
        result, dot = COMMANDS[args.command](F, args)
    except (TwistDynError, _UsageError, OSError, ValueError, ZeroDivisionError) as exc:
        payload = dict(header, error=type(exc).__name__, message=str(exc))
        if getattr(exc, "depth", None) is not None:
            payload["depth_reached"] = exc.depth
        if isinstance(exc, SpecSyntaxError):
            payload["line"], payload["column"] = exc.line, exc.column
        _emit(payload, stdout)
        return exit_code_for(exc) if isinstance(exc, TwistDynError) else 1
    payload = dict(header, map=spec.to_json(), result=result)
    _emit(payload, stdout)
    if args.dot and dot is not None:
        with open(args.dot, "w", encoding="utf-8") as fh:
            fh.write(dot)
    return 0


def main_entry():
    sys.exit(main())
