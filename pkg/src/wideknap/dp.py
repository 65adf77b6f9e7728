"""Polyline-indexed dynamic program for wide items with a color-coded target.

States are (polyline, color set). A state's value is the largest distinctly
colored packing found below the polyline. A transition takes the region
between a lower polyline and the current one, packs it with one of two
sub-solvers, and adds the best value of the lower polyline on the remaining
colors. The sub-solvers are S1, up to floor(2/eps^2) original items, and S2, up
to k reduced rounded items.

Polylines are enumerated on the doubled grid. Regions are coarsened back to
original cells before packing, so placements stay integral.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import BudgetExceeded
from .exact import DEFAULT_NODE_BUDGET, ExactSolver
from .geometry import Box, Polyline, Region, container_between, polyline_below
from .model import Instance, Packing, RoundingParams, reduce_k, round_rect, \
    validate_packing

__all__ = [
    "DpConfig", "DpResult", "RegionTable", "enumerate_polylines", "solve_region",
    "region_table", "dp_solve",
]


def enumerate_polylines(box: Box, max_complexity: int, budget: int | None = None):
    """Every canonical monotone polyline of the box with at most max_complexity segments."""
    if max_complexity < 1:
        raise ValueError("max_complexity must be >= 1")
    count = 0
    max_cuts = min((max_complexity - 1) // 2, box.n1 - 1)
    for j in range(max_cuts + 1):
        for cuts in itertools.combinations(range(1, box.n1), j):
            stack = [[y] for y in range(box.n2 + 1)]
            stack.reverse()
            while stack:
                levels = stack.pop()
                if len(levels) == j + 1:
                    count += 1
                    if budget is not None and count > budget:
                        raise BudgetExceeded("polyline enumeration", budget, count)
                    yield Polyline(box, tuple(levels), cuts)
                    continue
                for y in range(box.n2, -1, -1):
                    if y != levels[-1]:
                        stack.append(levels + [y])


@dataclass
class DpConfig:
    eps: Fraction
    alpha: Fraction
    coloring: dict                  # item id -> color in 1..k
    max_complexity: int | None = None
    polylines: list | None = None   # candidate doubled-grid polylines; None enumerates all
    exhaustive_states: bool = False
    polyline_budget: int = 200_000
    pair_budget: int = 2_000_000
    subset_budget: int = 1_000_000
    node_budget: int = DEFAULT_NODE_BUDGET
    record_states: bool = False     # keep the full (polyline, color set) table in stats["states"]


@dataclass
class DpResult:
    status: str                     # "packing", "no-packing" or "budget"
    packing: Packing | None
    best: int
    threshold: int
    stats: dict = field(default_factory=dict)


@dataclass
class RegionTable:
    """Best packing per color set (as bitmask), already closed under supersets."""
    k: int
    best: list                      # index = color mask; entries (size, is_s1, Packing)

    def get(self, colors_mask):
        return self.best[colors_mask]


def _feasible(solver, rects, region, node_budget):
    if sum(r.w * r.h for r in rects) > region.area:
        return None
    placed = solver.solve(rects, region, node_budget)
    return placed


def _collect(pool, limit, region, k, solver, node_budget, counter, subset_budget, is_s1, best):
    """DFS over distinctly colored subsets of pool that pack into region."""
    n = len(pool)
    full = (1 << k) - 1
    done = [False]

    def rec(start, chosen, cmask):
        for j in range(start, n):
            if done[0]:
                return
            it = pool[j]
            bit = 1 << (it.color - 1)
            if cmask & bit:
                continue
            trial = chosen + [it]
            counter[0] += 1
            if subset_budget is not None and counter[0] > subset_budget:
                raise BudgetExceeded("subset enumeration", subset_budget, counter[0])
            placed = _feasible(solver, [t.rect for t in trial], region, node_budget)
            if placed is None:
                continue
            m = cmask | bit
            size = len(trial)
            cur = best[m]
            if cur is None or size > cur[0] or (size == cur[0] and is_s1 and not cur[1]):
                best[m] = (size, is_s1, Packing([(t.source, q) for t, q in zip(trial, placed)]))
            if size == k and m == full:
                done[0] = True
                return
            if size < limit:
                rec(j + 1, trial, m)

    rec(0, [], 0)
    if done[0]:
        # restricting the full-color packing is optimal for every color set
        whole = best[full]
        for m in range(1, full):
            sub = Packing([(i, q) for (i, q), t in zip(whole[2], _colors_of(whole[2], pool))
                           if m >> (t - 1) & 1])
            cur = best[m]
            size = len(sub)
            if cur is None or size > cur[0] or (size == cur[0] and is_s1 and not cur[1]):
                best[m] = (size, is_s1, sub)


def _colors_of(pk, pool):
    color = {c.source: c.color for c in pool}
    return [color[i] for i, _ in pk]


@dataclass(frozen=True)
class _Cand:
    source: int
    rect: object
    color: int


def region_table(region: Region, items, reduced_rounded, k, eps, solver=None,
                 node_budget=DEFAULT_NODE_BUDGET, subset_budget=None, counter=None) -> RegionTable:
    """S1/S2 optimum for every color set, for one region (original grid)."""
    solver = solver or ExactSolver()
    counter = counter if counter is not None else [0]
    cap1 = math.floor(2 / (Fraction(eps) ** 2))
    best = [None] * (1 << k)
    best[0] = (0, True, Packing(()))
    if not region.is_empty():
        s2 = [_Cand(it.source, it.rect, it.color) for it in reduced_rounded]
        s1 = [_Cand(it.id, it.rect, it.color) for it in items]
        for pool, limit, is_s1 in ((s2, k, False), (s1, cap1, True)):
            fits = [c for c in pool if any(True for _ in _fit_somewhere(region, c.rect))]
            fits.sort(key=lambda c: (c.color, c.rect.w * c.rect.h, c.source))
            _collect(fits, min(limit, k), region, k, solver, node_budget, counter,
                     subset_budget, is_s1, best)
    if any(b is not None and not b[1] for b in best):
        best = _translate_s2(best, items)
    for bit in range(k):
        for m in range(1 << k):
            if m >> bit & 1:
                sub = best[m ^ (1 << bit)]
                cur = best[m]
                if sub is not None and (cur is None or sub[0] > cur[0] or
                                        (sub[0] == cur[0] and sub[1] and not cur[1])):
                    best[m] = sub
    return RegionTable(k, best)


def _fit_somewhere(region, rect):
    box = region.box
    for y in range(box.n2 - rect.h + 1):
        for x in range(box.n1 - rect.w + 1):
            if region.contains(rect.at(x, y)):
                yield (x, y)
                return


def _translate_s2(best, items):
    """Swap rounded rectangles for their narrower originals at the same corner."""
    by_id = {it.id: it for it in items}
    out = []
    for b in best:
        if b is None or b[1]:
            out.append(b)
            continue
        pk = Packing([(i, by_id[i].rect.at(q.x, q.y)) for i, q in b[2]])
        out.append((b[0], False, pk))
    return out


def _color_mask(colors):
    m = 0
    for c in colors:
        m |= 1 << (c - 1)
    return m


def _rounded_pool(items, k, params):
    pool = []
    for it in items:
        r = round_rect(it.rect, params)
        pool.append(_Rounded(it.id, r, it.color, it.id))
    return reduce_k(pool, k)


@dataclass(frozen=True)
class _Rounded:
    id: int
    rect: object
    color: int
    source: int

    @property
    def w(self):
        return self.rect.w

    @property
    def h(self):
        return self.rect.h


def solve_region(region: Region, items, colors_allowed, eps, k, reduced_rounded_items=None,
                 params: RoundingParams | None = None, node_budget=DEFAULT_NODE_BUDGET,
                 subset_budget=None) -> Packing:
    """Best of S1 and S2 inside region using only colors from colors_allowed (ties go to S1).

    ``reduced_rounded_items`` may be given directly (objects with id, rect, color
    and source); otherwise they are derived from items with ``params``.
    """
    if reduced_rounded_items is None:
        params = params or RoundingParams(1, 1)
        reduced_rounded_items = _rounded_pool(items, k, params)
    tbl = region_table(region, items, reduced_rounded_items, k, eps,
                       node_budget=node_budget, subset_budget=subset_budget)
    return tbl.get(_color_mask(colors_allowed))[2]


def _merge(a: Packing, b: Packing):
    return Packing(sorted(a.placements + b.placements, key=lambda p: p[0]))


def dp_solve(instance: Instance, config: DpConfig) -> DpResult:
    """Run the DP; 'packing' when the best value reaches ceil((1-3eps)k)."""
    eps = Fraction(config.eps)
    alpha = Fraction(config.alpha)
    box, k = instance.box, instance.k
    for it in instance.items:
        if not it.rect.is_wide or Fraction(it.w) < box.n1 / alpha:
            raise ValueError(f"item {it.id} is not wide with width >= n1/alpha")
        if config.coloring.get(it.id) is None or not 1 <= config.coloring[it.id] <= k:
            raise ValueError(f"item {it.id} lacks a color in 1..{k}")
    items = [it.colored(config.coloring[it.id]) for it in instance.items]
    ell = box.n1 / (2 * alpha)
    params = RoundingParams.for_box(max(1, math.floor(ell)), box.n1)
    pool = _rounded_pool(items, k, params)
    threshold = max(0, math.ceil((1 - 3 * eps) * k))
    cap1 = math.floor(2 / (eps * eps))
    solver = ExactSolver()
    counter = [0]
    stats = {"ell": str(ell), "rounding_c": params.c, "s1_cap": cap1, "reduced_pool": len(pool)}
    full = (1 << k) - 1
    try:
        if cap1 >= k and not config.exhaustive_states and config.polylines is None:
            stats["mode"] = "single-region"
            tbl = region_table(Region.full(box), items, pool, k, eps, solver,
                               config.node_budget, config.subset_budget, counter)
            answer = tbl.get(full)[2]
        else:
            stats["mode"] = "polyline-dp"
            answer = _run_dp(box, items, pool, k, eps, config, solver, counter, stats)
    except BudgetExceeded as e:
        stats["budget"] = str(e)
        stats["subsets"] = counter[0]
        return DpResult("budget", None, 0, threshold, stats)
    stats["subsets"] = counter[0]
    assert validate_packing(instance, answer), "dp produced an invalid packing"
    used = [config.coloring[i] for i in answer.ids]
    assert len(set(used)) == len(used), "dp reused a color"
    if len(answer) >= threshold:
        return DpResult("packing", answer, len(answer), threshold, stats)
    return DpResult("no-packing", None, len(answer), threshold, stats)


def _run_dp(box, items, pool, k, eps, config, solver, counter, stats):
    box2 = box.scaled(2)
    bottom, top = Polyline.horizontal(box2, 0), Polyline.horizontal(box2, box2.n2)
    if config.polylines is not None:
        polys = set(config.polylines) | {bottom, top}
    else:
        mc = config.max_complexity or math.ceil(4 / eps) + 1
        polys = set(enumerate_polylines(box2, mc, config.polyline_budget))
    order = sorted(polys, key=lambda p: (p.area_below(), p.encode()))
    stats["polylines"] = len(order)
    full = (1 << k) - 1
    masks = range(1 << k)
    empty = Packing(())
    value = {}
    tables = {}
    pairs = 0
    for P in order:
        if P == bottom:
            value[P] = [empty] * (1 << k)
            continue
        row = [empty] * (1 << k)
        for Q in order:
            if Q is P or Q not in value or not polyline_below(Q, P):
                continue
            pairs += 1
            if pairs > config.pair_budget:
                raise BudgetExceeded("polyline pairs", config.pair_budget, pairs)
            region = container_between(Q, P).coarsen(2)
            tbl = tables.get(region.mask)
            if tbl is None:
                tbl = region_table(region, items, pool, k, eps, solver, config.node_budget,
                                   config.subset_budget, counter)
                tables[region.mask] = tbl
            below = value[Q]
            for C in masks:
                sub = C
                while True:
                    cand_n = tbl.get(sub)[0] + len(below[C ^ sub])
                    if cand_n > len(row[C]):
                        row[C] = _merge(tbl.get(sub)[2], below[C ^ sub])
                    if sub == 0:
                        break
                    sub = (sub - 1) & C
        value[P] = row
    stats["pairs"] = pairs
    stats["regions"] = len(tables)
    if config.record_states:
        stats["states"] = value
    return value[top][full]
