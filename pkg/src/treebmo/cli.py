"""Command-line surface.

Exit codes: 0 all assertions passed, 1 a suite found a counterexample,
2 usage or certification errors.  Exact values are printed as "p/q"
strings; approximate values are tagged.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import jsonio
from .bmo import DomainError, bmo_norm, hormander_constant
from .funcs import FinFunc
from .hardy import good_bad_split, h1_estimate, telescoping_h1_upper
from .maximal import hl_maximal, sharp_maximal
from .randgen import RunConfig, nonzero_function
from .sets import (
    EnumerationError,
    covering_family,
    covering_index,
    envelope,
    set_measure,
)
from .simplex import InfeasibleError
from .suites import SUITES, run_suite
from .tree import (
    Tree,
    Vertex,
    Window,
    format_vertex,
    parse_vertex,
    parse_window,
)

USAGE_ERROR = 2
COUNTEREXAMPLE = 1


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return USAGE_ERROR
    try:
        payload, code = dispatch(args)
    except (EnumerationError, DomainError, InfeasibleError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return USAGE_ERROR
    text = jsonio.dumps(payload)
    if getattr(args, "out", None):
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treebmo",
        description="Exact CZ-set geometry, BMO/Hardy norms and maximal functions "
        "on weighted homogeneous trees.",
    )
    parser.add_argument("--m", type=int, default=2, help="branching factor (>= 2)")
    parser.add_argument("--seed", type=int, default=0, help="seed for generated suites")
    parser.add_argument(
        "--window",
        default="root=2:,depth=4",
        help="window spec 'root=<vertex>,depth=<int>'",
    )
    parser.add_argument("--out", default=None, help="write the JSON report here")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("measure", help="exact measure of a vertex, ball, trapezoid or CZ set")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--vertex", help='vertex "n:w"')
    g.add_argument("--ball", nargs=2, metavar=("VERTEX", "RADIUS"))
    g.add_argument("--cz", help='CZ set "cz root=<v> h=<int> [deg]"')
    g.add_argument("--trapezoid", help='"trapezoid root=<v> h=<int> [deg]"')

    p = sub.add_parser("ball", help="enumerate a ball and check the closed form")
    p.add_argument("--center", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--members", action="store_true", help="include the member list")

    p = sub.add_parser("cz", help="envelope and enlargement data of an admissible trapezoid")
    p.add_argument("--trapezoid", required=True, help='"trapezoid root=<v> h=<int> [deg]"')

    p = sub.add_parser("cover", help="the nested covering family")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--vertex")

    p = sub.add_parser("bmo-norm", help="BMO_q norm of a function")
    p.add_argument("--q", default="1")
    p.add_argument("--in", dest="infile", required=True)

    p = sub.add_parser("sharp", help="sharp maximal function at a point or on a window")
    p.add_argument("--q", default="1")
    p.add_argument("--at", default=None, help="single vertex")
    p.add_argument(
        "--window",
        dest="window_override",
        default=None,
        help="evaluate on this window instead of a single point",
    )
    p.add_argument("--in", dest="infile", required=True)

    p = sub.add_parser("maximal", help="Hardy-Littlewood-type maximal function")
    p.add_argument("--at", default=None)
    p.add_argument(
        "--window", dest="window_override", default=None, help="evaluate on this window"
    )
    p.add_argument("--in", dest="infile", required=True)

    p = sub.add_parser("decompose", help="good/bad split(s) of a function")
    p.add_argument("--q", default="2")
    p.add_argument("--in", dest="infile", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--j", type=int)
    g.add_argument("--all", action="store_true", help="full telescoping decomposition")

    p = sub.add_parser("h1", help="two-sided atomic-norm estimate")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--family", default=None, help="'auto:<window>' (defaults to the global window)")
    p.add_argument("--candidates", default="random:0:8", help="'random:<seed>:<count>'")

    p = sub.add_parser("hormander", help="kernel regularity constant over a CZ family")
    p.add_argument("--kernel", required=True, help="kernel JSON file")
    p.add_argument("--family", default=None, help="'auto:<window>'")
    p.add_argument("--h-max", type=int, default=2)

    for name, help_text in (
        ("check", "run a property suite; exit 1 on counterexample"),
        ("constants", "run every suite and report empirical constants"),
    ):
        p = sub.add_parser(name, help=help_text)
        if name == "check":
            p.add_argument("suite", choices=("all",) + SUITES)
        p.add_argument("--size", type=int, default=25)
        p.add_argument("--q", default="1", help="oscillation exponent for the sharp suite")
        p.add_argument("--p", default="2", help="norm exponent for the lp-ratio suite")
        p.add_argument("--p0", default="3/2", help="sharp exponent for the lp-ratio suite")
    return parser


def _config(args, size: int | None = None) -> RunConfig:
    tree = Tree(args.m)
    window = parse_window(tree, args.window)
    return RunConfig(
        m=args.m,
        window=window,
        q=Fraction(getattr(args, "q", "1")),
        p=Fraction(getattr(args, "p", "2")),
        p0=Fraction(getattr(args, "p0", "3/2")),
        seed=args.seed,
        size=size if size is not None else 25,
    )


def _load_func(tree: Tree, path: str) -> FinFunc:
    with open(path) as fh:
        return jsonio.parse_finfunc(tree, json.load(fh))


def _points(tree: Tree, args) -> list[Vertex]:
    if args.at is not None:
        return [parse_vertex(tree, args.at)]
    if getattr(args, "window_override", None) is not None:
        return parse_window(tree, args.window_override).members(tree)
    raise ValueError("give --at <vertex> or --window <spec>")


def dispatch(args) -> tuple[object, int]:
    tree = Tree(args.m)
    cmd = args.command

    if cmd == "measure":
        if args.vertex is not None:
            v = parse_vertex(tree, args.vertex)
            return {"vertex": format_vertex(v), "measure": jsonio.frac_str(tree.weight(v))}, 0
        if args.ball is not None:
            v = parse_vertex(tree, args.ball[0])
            r = int(args.ball[1])
            return {
                "center": format_vertex(v),
                "radius": r,
                "measure": jsonio.frac_str(tree.ball_measure_closed(v, r)),
            }, 0
        if args.cz is not None:
            s = jsonio.parse_cz(tree, args.cz)
            return jsonio.set_json(tree, s), 0
        s = jsonio.parse_trapezoid(tree, args.trapezoid)
        return jsonio.set_json(tree, s), 0

    if cmd == "ball":
        v = parse_vertex(tree, args.center)
        closed = tree.ball_measure_closed(v, args.radius)
        enumerated = tree.ball_measure_enumerated(v, args.radius)
        payload = {
            "center": format_vertex(v),
            "radius": args.radius,
            "measure_closed": jsonio.frac_str(closed),
            "measure_enumerated": jsonio.frac_str(enumerated),
            "agree": closed == enumerated,
        }
        if args.members:
            payload["members"] = [format_vertex(u) for u in tree.ball(v, args.radius)]
        return payload, 0 if closed == enumerated else COUNTEREXAMPLE

    if cmd == "cz":
        from .sets import enlargement_depth_range, enlargement_measure

        r = jsonio.parse_trapezoid(tree, args.trapezoid)
        s = envelope(r)
        lo, hi = enlargement_depth_range(s)
        return {
            "trapezoid": jsonio.set_json(tree, r),
            "envelope": jsonio.set_json(tree, s),
            "envelope_ratio": jsonio.frac_str(set_measure(tree, s) / set_measure(tree, r)),
            "enlargement_depths": [lo, hi],
            "enlargement_measure": jsonio.frac_str(enlargement_measure(tree, s)),
            "enlargement_ratio": jsonio.frac_str(
                enlargement_measure(tree, s) / set_measure(tree, s)
            ),
        }, 0

    if cmd == "cover":
        if args.n is not None:
            s = covering_family(args.n)
            return {"n": args.n, "set": jsonio.set_json(tree, s)}, 0
        v = parse_vertex(tree, args.vertex)
        n = covering_index(v)
        return {
            "vertex": format_vertex(v),
            "index": n,
            "set": jsonio.set_json(tree, covering_family(n)),
        }, 0

    if cmd == "bmo-norm":
        f = _load_func(tree, args.infile)
        return jsonio.bmo_report_json(tree, bmo_norm(tree, f, Fraction(args.q))), 0

    if cmd == "sharp":
        f = _load_func(tree, args.infile)
        q = Fraction(args.q)
        out = {
            format_vertex(x): jsonio.maximal_json(tree, sharp_maximal(tree, f, q, x))
            for x in _points(tree, args)
        }
        return out, 0

    if cmd == "maximal":
        phi = _load_func(tree, args.infile)
        out = {
            format_vertex(x): jsonio.maximal_json(tree, hl_maximal(tree, phi, x))
            for x in _points(tree, args)
        }
        return out, 0

    if cmd == "decompose":
        g = _load_func(tree, args.infile)
        q = Fraction(args.q)
        if args.all:
            return jsonio.telescoping_json(tree, telescoping_h1_upper(tree, g, q)), 0
        return jsonio.split_json(tree, good_bad_split(tree, g, q, args.j)), 0

    if cmd == "h1":
        g = _load_func(tree, args.infile)
        window = _family_window(tree, args)
        family = _auto_family(tree, window)
        candidates = _candidates(tree, window, args.candidates)
        return jsonio.h1_json(tree, h1_estimate(tree, g, family, candidates)), 0

    if cmd == "hormander":
        from .bruteforce import cz_in_window

        with open(args.kernel) as fh:
            kernel = jsonio.parse_kernel(tree, json.load(fh))
        window = _family_window(tree, args)
        family = cz_in_window(tree, window, args.h_max, include_degenerate=False)
        return jsonio.hormander_json(tree, hormander_constant(tree, kernel, family)), 0

    if cmd == "check":
        report = run_suite(_config(args, args.size), args.suite)
        return report.to_json(), 0 if report.ok else COUNTEREXAMPLE

    if cmd == "constants":
        report = run_suite(_config(args, args.size), "all")
        return report.to_json(), 0 if report.ok else COUNTEREXAMPLE

    raise ValueError(f"unknown command {cmd!r}")


def _family_window(tree: Tree, args) -> Window:
    spec = getattr(args, "family", None)
    if spec is None:
        return parse_window(tree, args.window)
    if not spec.startswith("auto:"):
        raise ValueError("family spec must be 'auto:root=<vertex>,depth=<int>'")
    return parse_window(tree, spec[len("auto:") :])


def _auto_family(tree: Tree, window: Window):
    from .bruteforce import cz_in_window

    return cz_in_window(
        tree, window, max(1, (window.depth + 1) // 4), include_degenerate=False
    )


def _candidates(tree: Tree, window: Window, spec: str) -> list[FinFunc]:
    parts = spec.split(":")
    if len(parts) != 3 or parts[0] != "random":
        raise ValueError("candidates spec must be 'random:<seed>:<count>'")
    seed, count = int(parts[1]), int(parts[2])
    return [
        nonzero_function(tree, window, seed, "sparse", i) for i in range(count)
    ]


if __name__ == "__main__":
    sys.exit(main())
