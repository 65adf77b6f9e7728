"""Seeded reproducibility suites: generate, solve, check against the oracle, tabulate."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .driver import NO_PACKING, PACKING, SolveOptions, pas_solve
from .errors import BudgetExceeded
from .model import Profile, generate_instance, validate_packing
from .oracle import opt_pack
from .svg import render_svg

__all__ = ["SuiteSpec", "run_suite", "format_table"]


@dataclass
class SuiteSpec:
    name: str
    profile: Profile = field(default_factory=Profile)
    eps: list = field(default_factory=lambda: [Fraction(1, 2)])
    seeds: list = field(default_factory=list)
    budgets: dict = field(default_factory=dict)
    k_rule: str = "opt"              # "opt": k = oracle optimum; "profile": keep generated k
    coloring_mode: str = "randomized"
    coloring_seed: int = 0

    @classmethod
    def from_dict(cls, d):
        seeds = d.get("seeds", [])
        if isinstance(seeds, int):
            seeds = list(range(seeds))
        return cls(
            name=d["name"],
            profile=Profile.from_dict(d.get("profile", {})),
            eps=[Fraction(str(e)) for e in d.get("eps", ["1/2"])],
            seeds=list(seeds),
            budgets=dict(d.get("budgets", {})),
            k_rule=d.get("k_rule", "opt"),
            coloring_mode=d.get("coloring_mode", "randomized"),
            coloring_seed=int(d.get("coloring_seed", 0)),
        )

    @classmethod
    def load(cls, path):
        return cls.from_dict(json.loads(Path(path).read_text()))


def _options(spec):
    kw = {f"{k}_budget": v for k, v in spec.budgets.items()}
    return SolveOptions(coloring_mode=spec.coloring_mode, coloring_seed=spec.coloring_seed, **kw)


def run_suite(spec: SuiteSpec, out_dir=None):
    """Run every (seed, eps) case. Returns a JSON-ready report; writes SVGs under out_dir."""
    cases = []
    opts = _options(spec)
    for seed in spec.seeds:
        inst = generate_instance(seed, spec.profile)
        try:
            opt = opt_pack(inst).opt
        except BudgetExceeded:
            cases.append({"seed": seed, "status": "inconclusive", "reason": "oracle budget"})
            continue
        if spec.k_rule == "opt":
            if opt == 0:
                cases.append({"seed": seed, "status": "skipped", "reason": "opt is 0"})
                continue
            inst = inst.with_k(opt)
        for eps in spec.eps:
            rep = pas_solve(inst, eps, opts)
            row = {"seed": seed, "eps": str(eps), "k": inst.k, "opt": opt,
                   "verdict": rep.verdict, "guarantee": rep.guarantee,
                   "branch": rep.trace.get("branch")}
            if rep.verdict == PACKING:
                valid = bool(validate_packing(inst, rep.packing))
                size = len(rep.packing)
                row.update(size=size, valid=valid, ratio=round(size / inst.k, 6))
                row["status"] = "pass" if valid and size >= rep.guarantee else "fail"
                if out_dir is not None:
                    d = Path(out_dir) / spec.name
                    d.mkdir(parents=True, exist_ok=True)
                    name = f"seed{seed}_eps{eps.numerator}-{eps.denominator}.svg"
                    (d / name).write_text(render_svg(inst.box, rep.packing))
            elif rep.verdict == NO_PACKING:
                row["status"] = "pass" if opt < inst.k else "fail"
            else:
                row["status"] = "inconclusive"
            cases.append(row)
    counts = {s: sum(1 for c in cases if c["status"] == s)
              for s in ("pass", "fail", "inconclusive", "skipped")}
    ratios = [c["ratio"] for c in cases if "ratio" in c]
    return {
        "suite": spec.name,
        "cases": cases,
        "summary": {**counts, "total": len(cases),
                    "min_ratio": min(ratios) if ratios else None},
        "pass": counts["fail"] == 0,
    }


def format_table(report):
    head = f"{'seed':>5} {'eps':>5} {'k':>3} {'opt':>4} {'size':>5} {'need':>5} {'branch':>13} status"
    lines = [f"suite {report['suite']}", head]
    for c in report["cases"]:
        if "eps" not in c:
            lines.append(f"{c['seed']:>5} {'-':>5} {'-':>3} {'-':>4} {'-':>5} {'-':>5} {'-':>13} "
                         f"{c['status']} ({c['reason']})")
            continue
        lines.append(f"{c['seed']:>5} {c['eps']:>5} {c['k']:>3} {c['opt']:>4} "
                     f"{c.get('size', '-'):>5} {c['guarantee']:>5} {str(c['branch']):>13} {c['status']}")
    s = report["summary"]
    lines.append(f"pass {s['pass']}  fail {s['fail']}  inconclusive {s['inconclusive']}  "
                 f"skipped {s['skipped']}  min ratio {s['min_ratio']}")
    return "\n".join(lines) + "\n"


def report_json(report):
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


