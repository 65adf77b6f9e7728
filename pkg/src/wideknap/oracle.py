"""Brute-force ground truth, deliberately naive.

Placements are tried in plain lexicographic (x, y) order against explicit cell
sets. No flushness, no memoization, no bitmasks: the point is to fail in
different ways than the real solvers.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import BudgetExceeded
from .geometry import PlacedRect, Region, overlaps
from .model import Instance, Item, Packing

__all__ = ["OracleResult", "opt_pack", "feasible_subset", "DEFAULT_ORACLE_BUDGET"]

DEFAULT_ORACLE_BUDGET = 5_000_000


@dataclass(frozen=True)
class OracleResult:
    opt: int
    witness: Packing
    nodes: int


class _Counter:
    def __init__(self, budget):
        self.budget = budget
        self.n = 0

    def tick(self):
        self.n += 1
        if self.budget is not None and self.n > self.budget:
            raise BudgetExceeded("oracle nodes", self.budget, self.n)


def _place_all(dims, cells, n1, n2, counter):
    """Depth-first placement of dims in order; returns placements or None."""
    positions = [(x, y) for x in range(n1) for y in range(n2)]
    placed = []

    def rec(i, start):
        if i == len(dims):
            return True
        counter.tick()
        d = dims[i]
        for p in range(start, len(positions)):
            x, y = positions[p]
            q = PlacedRect(d, x, y)
            if x + d.w > n1 or y + d.h > n2:
                continue
            if not all(c in cells for c in q.cells()):
                continue
            if any(overlaps(q, o) for o in placed):
                continue
            placed.append(q)
            same_next = i + 1 < len(dims) and dims[i + 1] == d
            if rec(i + 1, p + 1 if same_next else 0):
                return True
            placed.pop()
        return False

    return list(placed) if rec(0, 0) else None


def feasible_subset(rects, region: Region, node_budget=DEFAULT_ORACLE_BUDGET, _counter=None):
    """Naive verdict: do the rectangles fit into the region together?"""
    dims = sorted((r.rect if isinstance(r, Item) else r) for r in rects)
    counter = _counter or _Counter(node_budget)
    cells = region.cells
    if sum(d.w * d.h for d in dims) > len(cells):
        return False
    return _place_all(dims, cells, region.box.n1, region.box.n2, counter) is not None


def opt_pack(instance: Instance, node_budget=DEFAULT_ORACLE_BUDGET) -> OracleResult:
    """Largest packable subset of the instance's items, by decreasing subset size."""
    counter = _Counter(node_budget)
    box = instance.box
    cells = Region.full(box).cells
    items = list(instance.items)
    for size in range(len(items), 0, -1):
        tried = set()
        for combo in combinations(items, size):
            shape_key = tuple(sorted((it.w, it.h) for it in combo))
            if shape_key in tried:
                continue
            tried.add(shape_key)
            if sum(w * h for w, h in shape_key) > box.n1 * box.n2:
                continue
            order = sorted(combo, key=lambda it: (it.rect, it.id))
            dims = [it.rect for it in order]
            placed = _place_all(dims, cells, box.n1, box.n2, counter)
            if placed is not None:
                pk = Packing([(it.id, q) for it, q in zip(order, placed)])
                return OracleResult(size, pk, counter.n)
    return OracleResult(0, Packing(()), counter.n)
