"""Command line interface.

Every command except ``gen`` writes a JSON RunReport::

    {"command": [...argv...], "spec": "...", "parameters": {...},
     "result": {...}, "wall_time": seconds, "version": "..."}

``check`` results carry the verdict (property, k, outcome, search_radius,
spec, classes, orbits, witness) plus ``expected`` and, on failure,
``witness_verified``.  A witness lists both address sets, their induced edge
lists, the vertex mapping and both footprint codes.

Exit codes: 0 Holds / success, 1 Fails (or a failed grid criterion), 2 bad
input, 3 size cap exceeded, 4 the classification is ambiguous for this
instance (the checker's own verdict is in the report), 5 no two ends,
6 no nested subsystem preserving the separation.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from importlib.metadata import PackageNotFoundError, version as _dist_version

from . import grid
from .families import SpecError, ball, parse_spec
from .graph import SizeLimitExceeded
from .homogeneous import EParams, enumerate_class_E
from .structure import (CannotPreserveSeparation, NoTwoEnds, NotNested, basic_subsystem, nested_subsystem,
                        ray_surrogate_cuts, report, structural_symmetries, structure_tree)
from .transitivity import (AMBIGUOUS, FAILS, HOLDS, check_k_cs_homogeneous, check_k_cs_transitive,
                           check_k_distance_transitive, expected_verdict, find_spoon_fork_witness,
                           verify_witness)

EXIT_OK, EXIT_FAILS, EXIT_INPUT, EXIT_SIZE, EXIT_AMBIGUOUS, EXIT_NO_ENDS, EXIT_NO_NESTED = range(7)

PROPERTIES = {"cs": ("kCS", check_k_cs_transitive),
              "cshom": ("kCSHom", check_k_cs_homogeneous),
              "dist": ("kDist", check_k_distance_transitive)}


def tool_version() -> str:
    try:
        return _dist_version("artifact")
    except PackageNotFoundError:
        return "0.1.0"


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report(argv, spec_text, params, result, t0) -> str:
    doc = {"command": list(argv), "spec": spec_text, "parameters": params, "result": result,
           "wall_time": round(time.perf_counter() - t0, 3), "version": tool_version()}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def cmd_gen(args, argv, t0) -> int:
    spec = parse_spec(args.spec)
    b = ball(spec, args.radius)
    _emit(b.to_dot() if args.format == "dot" else b.graph.to_text(), args.out)
    return EXIT_OK


def cmd_check(args, argv, t0) -> int:
    spec = parse_spec(args.spec)
    prop, fn = PROPERTIES[args.property]
    v = fn(spec, args.k, args.radius)
    result = v.to_json(spec)
    expected = None
    if prop != "kDist" and args.k >= 3:
        expected = expected_verdict(spec, args.k, prop)
    result["expected"] = expected
    if v.outcome == FAILS:
        result["witness_verified"] = verify_witness(spec, v.witness)
    params = {"property": args.property, "k": args.k, "radius": v.search_radius}
    _emit(_report(argv, spec.text, params, result, t0), args.out)
    if expected == AMBIGUOUS:
        return EXIT_AMBIGUOUS
    return EXIT_OK if v.outcome == HOLDS else EXIT_FAILS


def cmd_witness(args, argv, t0) -> int:
    spec = parse_spec(args.spec)
    w = find_spoon_fork_witness(spec, args.k, args.radius)
    result = None if w is None else dict(w.to_json(spec), verified=verify_witness(spec, w))
    _emit(_report(argv, spec.text, {"k": args.k}, {"witness": result}, t0), args.out)
    return EXIT_OK


def cmd_enum_e(args, argv, t0) -> int:
    p = EParams(args.k, args.m, args.n)
    members = [{"name": name, "graph": g.to_text()} for name, g in enumerate_class_E(p, args.max_order)]
    params = {"k": args.k, "m": args.m, "n": args.n, "max_order": args.max_order}
    _emit(_report(argv, None, params, {"members": members}, t0), args.out)
    return EXIT_OK


def cmd_structure(args, argv, t0) -> int:
    spec = parse_spec(args.spec)
    b = ball(spec, args.radius)
    full = ray_surrogate_cuts(b)
    nested = nested_subsystem(full, structural_symmetries(b))
    basic = basic_subsystem(nested)
    t = structure_tree(basic)
    result = report(t, basic)
    result["cut_counts"] = {"all": len(full.cuts), "nested": len(nested.cuts), "basic": len(basic.cuts)}
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(t.to_dot())
    _emit(_report(argv, spec.text, {"radius": args.radius}, result, t0), args.out)
    return EXIT_OK


def cmd_grid(args, argv, t0) -> int:
    only = None if not args.only else {int(x) for x in args.only.split(",")}
    results = []
    for number, name, fn in grid.CRITERIA:
        if only is not None and number not in only:
            continue
        r = grid._timed(number, name, fn)
        print(r.line(), flush=True)
        results.append(r)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILS


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="endgraph", description="Generate and analyse the X, Y and Z graph families.")
    ap.add_argument("--grid", action="store_true", help="run the acceptance matrix and print a pass/fail table")
    ap.add_argument("--only", help="with --grid: comma separated criterion numbers")
    sub = ap.add_subparsers(dest="command")

    p = sub.add_parser("gen", help="write a ball of the graph")
    p.add_argument("--spec", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--format", choices=("dot", "text"), default="dot")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="decide a transitivity property")
    p.add_argument("--spec", required=True)
    p.add_argument("--property", choices=sorted(PROPERTIES), required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--radius", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("witness", help="search for a spoon or fork witness")
    p.add_argument("--spec", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--radius", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("enum-e", help="list the members of the class E_{k,m,n}")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-order", type=int, default=9)
    p.add_argument("--out")
    p.set_defaults(func=cmd_enum_e)

    p = sub.add_parser("structure", help="cut system and structure tree of a ball")
    p.add_argument("--spec", required=True)
    p.add_argument("--radius", type=int, required=True)
    p.add_argument("--dot", help="write the structure tree as DOT to this file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_structure)
    return ap


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    ap = build_parser()
    args = ap.parse_args(argv)
    t0 = time.perf_counter()
    if args.grid:
        return cmd_grid(args, argv, t0)
    if args.command is None:
        ap.print_usage(sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args, argv, t0)
    except SpecError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT
    except SizeLimitExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_SIZE
    except NoTwoEnds as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NO_ENDS
    except (NotNested, CannotPreserveSeparation) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NO_NESTED
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
