"""Command line entry point: ``wideknap <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .conflict import build_conflict_graph
from .driver import SolveOptions, pas_solve
from .errors import BudgetExceeded, OrderingError
from .exact import ExactQuery, exact_pack
from .geometry import Box, Rect, Region
from .model import Profile, generate_instance, instance_from_json, instance_to_json, \
    packing_from_json, packing_to_json, validate_packing
from .oracle import opt_pack
from .structure import structural_transform, structured_from_json, structured_to_json, \
    verify_structured
from .suite import SuiteSpec, format_table, report_json, run_suite
from .svg import render_svg


def _fraction(text):
    try:
        f = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a fraction: {text!r}") from None
    return f


def _emit(text, output):
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _read(path):
    return sys.stdin.read() if path == "-" else Path(path).read_text()


def _budget_args(p):
    p.add_argument("--budget-nodes", type=int, default=None, help="exact-search node budget")
    p.add_argument("--budget-polylines", type=int, default=None)
    p.add_argument("--budget-pairs", type=int, default=None)
    p.add_argument("--budget-subsets", type=int, default=None)
    p.add_argument("--budget-colorings", type=int, default=None,
                   help="largest exhaustive coloring family allowed")


def cmd_solve(a):
    inst = instance_from_json(_read(a.instance))
    opts = SolveOptions(coloring_mode=a.coloring_mode,
                        coloring_seed=a.coloring_seed if a.coloring_seed is not None else a.seed,
                        coloring_failure_bound=a.coloring_failure_bound)
    for name, attr in (("budget_nodes", "node_budget"), ("budget_polylines", "polyline_budget"),
                       ("budget_pairs", "pair_budget"), ("budget_subsets", "subset_budget"),
                       ("budget_colorings", "coloring_budget")):
        if getattr(a, name) is not None:
            setattr(opts, attr, getattr(a, name))
    rep = pas_solve(inst, a.epsilon, opts)
    if a.output and rep.packing is not None:
        Path(a.output).write_text(packing_to_json(rep.packing) + "\n")
    sys.stdout.write(json.dumps(rep.to_dict(), indent=2, default=str) + "\n")
    return 0 if rep.verdict != "inconclusive-budget" else 3


def cmd_exact(a):
    d = json.loads(_read(a.query))
    box = Box(int(d["box"]["w"]), int(d["box"]["h"]))
    region = Region.full(box) if "cells" not in d else \
        Region.from_cells(box, [tuple(c) for c in d["cells"]])
    rects = tuple(Rect(int(r["w"]), int(r["h"])) for r in d["rects"])
    budget = a.budget_nodes if a.budget_nodes is not None else 10**7
    try:
        pk = exact_pack(ExactQuery(rects, region, budget))
    except BudgetExceeded as e:
        _emit(json.dumps({"status": "budget", "detail": str(e)}, indent=2), a.output)
        return 3
    out = {"status": "feasible" if pk is not None else "infeasible"}
    if pk is not None:
        out["placements"] = [{"index": i, "x": q.x, "y": q.y, "w": q.w, "h": q.h} for i, q in pk]
    _emit(json.dumps(out, indent=2), a.output)
    return 0


def cmd_oracle(a):
    inst = instance_from_json(_read(a.instance))
    try:
        res = opt_pack(inst, a.budget_nodes if a.budget_nodes is not None else 5_000_000)
    except BudgetExceeded as e:
        _emit(json.dumps({"status": "budget", "detail": str(e)}, indent=2), a.output)
        return 3
    out = {"opt": res.opt, "nodes": res.nodes,
           "placements": [{"id": i, "x": q.x, "y": q.y} for i, q in res.witness]}
    _emit(json.dumps(out, indent=2), a.output)
    return 0


def cmd_verify(a):
    inst = instance_from_json(_read(a.instance))
    try:
        pk = packing_from_json(_read(a.packing), inst)
    except KeyError as e:
        rep = {"ok": False, "violation": str(e.args[0])}
    else:
        rep = validate_packing(inst, pk).to_dict()
        rep["size"] = len(pk)
    _emit(json.dumps(rep, indent=2), a.output)
    return 0 if rep["ok"] else 1


def cmd_structure(a):
    inst = instance_from_json(_read(a.instance))
    pk = packing_from_json(_read(a.packing), inst)
    if a.dot:
        Path(a.dot).write_text(build_conflict_graph(pk, inst.box).to_dot())
    sp = structural_transform(pk, a.epsilon, a.ell, inst.box)
    rep = verify_structured(sp, inst.items)
    d = json.loads(structured_to_json(sp))
    d["verification"] = rep
    _emit(json.dumps(d, indent=2), a.output)
    return 0 if rep["ok"] else 1


def cmd_gen(a):
    prof = {}
    if a.profile:
        p = Path(a.profile)
        prof = json.loads(p.read_text() if p.exists() else a.profile)
    inst = generate_instance(a.seed, Profile.from_dict(prof))
    _emit(instance_to_json(inst), a.output)
    return 0


def cmd_render(a):
    d = json.loads(_read(a.input))
    if "polylines" in d:
        sp = structured_from_json(d)
        svg = render_svg(sp.box, sp.packing, sp.polylines)
    else:
        if not a.instance:
            raise SystemExit("render: a plain packing needs --instance")
        inst = instance_from_json(_read(a.instance))
        svg = render_svg(inst.box, packing_from_json(d, inst))
    _emit(svg, a.output)
    return 0


def cmd_suite(a):
    spec = SuiteSpec.load(a.spec)
    rep = run_suite(spec, a.gallery)
    _emit(report_json(rep), a.output)
    sys.stderr.write(format_table(rep))
    return 0 if rep["pass"] else 1


def build_parser():
    p = argparse.ArgumentParser(prog="wideknap", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("solve", help="approximate a size-k packing")
    s.add_argument("instance")
    s.add_argument("--epsilon", type=_fraction, default=Fraction(1, 2), help="accuracy as p/q")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--coloring-mode", choices=["exhaustive", "randomized"], default="randomized")
    s.add_argument("--coloring-seed", type=int, default=None)
    s.add_argument("--coloring-failure-bound", type=float, default=0.01)
    _budget_args(s)
    s.add_argument("--output", help="write the packing JSON here")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("exact", help="decide whether rectangles fit a region")
    s.add_argument("query", help='JSON {"box":{"w","h"},"rects":[{"w","h"}],"cells":[[x,y],...]}')
    _budget_args(s)
    s.add_argument("--output")
    s.set_defaults(func=cmd_exact)

    s = sub.add_parser("oracle", help="brute-force optimum")
    s.add_argument("instance")
    _budget_args(s)
    s.add_argument("--output")
    s.set_defaults(func=cmd_oracle)

    s = sub.add_parser("verify", help="check a packing against an instance")
    s.add_argument("instance")
    s.add_argument("packing")
    s.add_argument("--output")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("structure", help="structured form of a packing")
    s.add_argument("instance")
    s.add_argument("packing")
    s.add_argument("--epsilon", type=_fraction, default=Fraction(1, 2))
    s.add_argument("--ell", type=int, default=1)
    s.add_argument("--dot", help="also write the conflict graph as DOT")
    s.add_argument("--output")
    s.set_defaults(func=cmd_structure)

    s = sub.add_parser("gen", help="random instance")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--profile", help="profile JSON text or file")
    s.add_argument("--output")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("render", help="SVG of a packing or structured dump")
    s.add_argument("input")
    s.add_argument("--instance")
    s.add_argument("--output")
    s.set_defaults(func=cmd_render)

    s = sub.add_parser("suite", help="run a seeded suite spec")
    s.add_argument("spec")
    s.add_argument("--gallery", help="directory for SVGs (<dir>/<suite>/<case>.svg)")
    s.add_argument("--output")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as e:
        sys.stderr.write(f"wideknap {args.cmd}: {e}\n")
        return 3
    except (ValueError, KeyError, OSError, OrderingError) as e:
        sys.stderr.write(f"wideknap {args.cmd}: error: {e}\n")
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
