"""Top-level solver: small-k exact case, thin-item reduction, coloring loop."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .colorcode import build_family
from .dp import DpConfig, dp_solve
from .errors import BudgetExceeded
from .exact import DEFAULT_NODE_BUDGET, ExactQuery, ExactSolver, exact_pack
from .geometry import PlacedRect, Region
from .model import Instance, Packing, aspect_ratio, validate_packing

__all__ = ["SolveOptions", "SolveReport", "solve_small_k", "reduce_and_solve", "pas_solve"]

PACKING, NO_PACKING, INCONCLUSIVE = "packing", "no-packing-of-size-k", "inconclusive-budget"


@dataclass
class SolveOptions:
    coloring_mode: str = "randomized"
    coloring_seed: int = 0
    coloring_failure_bound: float = 0.01
    coloring_budget: int = 1_000_000
    node_budget: int = DEFAULT_NODE_BUDGET
    polyline_budget: int = 200_000
    pair_budget: int = 2_000_000
    subset_budget: int = 1_000_000
    exhaustive_states: bool = False


@dataclass
class SolveReport:
    verdict: str
    packing: Packing | None
    guarantee: int
    trace: dict = field(default_factory=dict)

    def to_dict(self):
        pk = None if self.packing is None else \
            [{"id": i, "x": q.x, "y": q.y} for i, q in self.packing]
        return {"verdict": self.verdict, "guarantee": self.guarantee,
                "size": None if self.packing is None else len(self.packing),
                "placements": pk, "trace": self.trace}


def solve_small_k(instance: Instance, k: int, node_budget=DEFAULT_NODE_BUDGET,
                  solver: ExactSolver | None = None) -> Packing | None:
    """Exact: a packing of k items if one exists, found by trying every k-subset."""
    solver = solver or ExactSolver()
    full = Region.full(instance.box)
    seen = set()
    items = sorted(instance.items, key=lambda it: it.id)
    for combo in combinations(items, k):
        key = tuple(sorted((it.w, it.h) for it in combo))
        if key in seen:
            continue
        seen.add(key)
        if sum(w * h for w, h in key) > full.area:
            continue
        pk = exact_pack(ExactQuery(combo, full, node_budget), solver)
        if pk is not None:
            return pk
    return None


def _stack_vertical(items, box):
    y, out = 0, []
    for it in items:
        out.append((it.id, PlacedRect(it.rect, 0, y)))
        y += it.h
    assert y <= box.n2, "vertical stack exceeds the box height"
    assert all(it.w <= box.n1 for it in items), "stacked item wider than the box"
    return Packing(out)


def _combine(s_prime: Packing, thin, box, by_id, hcut):
    """Add the thin items to the dp packing, by stacking or by the removal swap."""
    if not thin:
        return s_prime, "dp"
    if all(q.h <= hcut for _, q in s_prime):
        members = [by_id[i] for i in sorted(s_prime.ids)] + list(thin)
        return _stack_vertical(members, box), "stacking"
    victim = min((i for i, q in s_prime if q.h >= hcut), key=lambda i: i)
    vq = s_prime.as_dict()[victim]
    x, out = vq.x, [(i, q) for i, q in s_prime if i != victim]
    for it in thin:
        assert it.h <= vq.h, "thin item taller than the removed one"
        out.append((it.id, PlacedRect(it.rect, x, vq.y)))
        x += it.w
    assert x <= vq.x2, "thin items overflow the freed footprint"
    return Packing(out), "removal-swap"


def reduce_and_solve(instance: Instance, k: int, eps, options: SolveOptions = SolveOptions()):
    """Thin-item reduction around the dp; aims for (1-2eps)k."""
    eps = Fraction(eps)
    box = instance.box
    guarantee = max(0, math.ceil((1 - 2 * eps) * k))
    trace = {"eps_reduction": str(eps)}
    if k <= 1 / eps:
        trace["branch"] = "base-case"
        try:
            pk = solve_small_k(instance, k, options.node_budget)
        except BudgetExceeded as e:
            trace["budget"] = str(e)
            return SolveReport(INCONCLUSIVE, None, guarantee, trace)
        return SolveReport(PACKING if pk else NO_PACKING, pk, guarantee, trace)

    delta = aspect_ratio(box)
    thin_cut = box.n1 / (delta * k * k)
    thin = sorted((it for it in instance.items if it.w <= thin_cut), key=lambda it: it.id)
    trace.update(delta=str(delta), thin_threshold=str(thin_cut), thin=len(thin))
    if len(thin) >= k:
        trace["branch"] = "stacking"
        return SolveReport(PACKING, _stack_vertical(thin[:k], box), guarantee, trace)

    thin_ids = {it.id for it in thin}
    rest = [it for it in instance.items if it.id not in thin_ids]
    k2 = k - len(thin)
    alpha = delta * k * k
    eps_dp = eps / 3
    trace.update(k_dp=k2, alpha=str(alpha), eps_dp=str(eps_dp))
    family = build_family([it.id for it in rest], k2, options.coloring_mode, options.coloring_seed,
                          options.coloring_failure_bound, options.coloring_budget)
    trace["colorings"] = len(family)
    sub = Instance(box, rest, k2)
    by_id = instance.by_id
    hcut = box.n1 / (delta * k)
    hit_budget = None
    for idx in range(len(family)):
        cfg = DpConfig(eps_dp, alpha, family.coloring(idx), node_budget=options.node_budget,
                       polyline_budget=options.polyline_budget, pair_budget=options.pair_budget,
                       subset_budget=options.subset_budget,
                       exhaustive_states=options.exhaustive_states)
        res = dp_solve(sub, cfg)
        if res.status == "budget":
            hit_budget = hit_budget or res.stats.get("budget")
            continue
        if res.status == "packing":
            pk, branch = _combine(res.packing, thin, box, by_id, hcut)
            trace.update(branch=branch, coloring_index=idx, dp=res.stats)
            return SolveReport(PACKING, pk, guarantee, trace)
    trace["colorings_tried"] = len(family)
    if hit_budget:
        trace["budget"] = hit_budget
        return SolveReport(INCONCLUSIVE, None, guarantee, trace)
    trace["branch"] = "dp"
    trace["failure_probability"] = options.coloring_failure_bound \
        if family.mode == "randomized" and k2 > 1 else 0.0
    return SolveReport(NO_PACKING, None, guarantee, trace)


def pas_solve(instance: Instance, eps, options: SolveOptions = SolveOptions()) -> SolveReport:
    """A packing of at least ceil((1-eps)k) items, or the verdict that k items do not fit."""
    eps = Fraction(eps)
    if not 0 < eps < 1:
        raise ValueError("eps must lie in (0, 1)")
    if not instance.is_wide():
        raise ValueError("every item must be wide (w >= h)")
    k = instance.k
    guarantee = math.ceil((1 - eps) * k)
    if k <= 1 / eps:
        trace = {"branch": "base-case", "eps": str(eps)}
        try:
            pk = solve_small_k(instance, k, options.node_budget)
        except BudgetExceeded as e:
            trace["budget"] = str(e)
            return SolveReport(INCONCLUSIVE, None, guarantee, trace)
        rep = SolveReport(PACKING if pk else NO_PACKING, pk, guarantee, trace)
    else:
        rep = reduce_and_solve(instance, k, eps / 2, options)
        rep.trace["eps"] = str(eps)
        rep.guarantee = guarantee
    if rep.verdict == PACKING:
        ok = validate_packing(instance, rep.packing)
        assert ok, f"solver emitted an invalid packing: {ok.violation}"
        assert len(rep.packing) >= guarantee, "solver missed its guarantee"
    return rep
