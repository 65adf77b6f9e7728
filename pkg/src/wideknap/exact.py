"""Exact feasibility of packing a multiset of rectangles into a cell region.

The search places one rectangle at a flush position (it can move neither one
unit left nor one unit down inside the region), carves it out and recurses.
Some pushed bottom-left packing always exists when any packing does, and in it
the rectangle touching the region boundary on both its left and bottom side is
flush, so branching over flush positions loses nothing. Identical shapes are
branched once. Results are memoized on (region mask, shape multiset).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import BudgetExceeded
from .geometry import PlacedRect, Rect, Region, rect_mask
from .model import Item, Packing, validate_in_region

__all__ = ["ExactQuery", "ExactSolver", "exact_pack", "flush_positions", "DEFAULT_NODE_BUDGET"]

DEFAULT_NODE_BUDGET = 10**7


@dataclass(frozen=True)
class ExactQuery:
    rects: tuple          # Rect or Item entries
    region: Region
    node_budget: int | None = DEFAULT_NODE_BUDGET


def flush_positions(mask, n1, n2, w, h):
    """Bottom-left corners where a w x h rectangle fits and is flush left and down."""
    if w > n1 or h > n2:
        return []
    fits = {}
    for y in range(n2 - h + 1):
        for x in range(n1 - w + 1):
            pm = rect_mask(n1, x, y, w, h)
            fits[x, y] = pm & mask == pm
    return [(x, y) for (x, y), ok in fits.items()
            if ok and (x == 0 or not fits[x - 1, y]) and (y == 0 or not fits[x, y - 1])]


class ExactSolver:
    """Memoizing solver. One instance may serve many queries on the same grid sizes."""

    def __init__(self, max_cache=2_000_000):
        self.cache = {}
        self.max_cache = max_cache
        self.nodes = 0

    def _search(self, n1, n2, mask, shapes, budget):
        if not shapes:
            return []
        key = (n1, n2, mask, shapes)
        if key in self.cache:
            return self.cache[key]
        self.nodes += 1
        if budget is not None and self.nodes > budget:
            raise BudgetExceeded("exact search nodes", budget, self.nodes)
        found = None
        if sum(w * h * c for (w, h), c in shapes) <= mask.bit_count():
            options = []
            for idx, ((w, h), c) in enumerate(shapes):
                pos = flush_positions(mask, n1, n2, w, h)
                if not pos:
                    options = None
                    break
                options.append((idx, w, h, c, pos))
            # try the most constrained shape first
            for idx, w, h, c, pos in sorted(options or (), key=lambda o: (len(o[4]), -o[1] * o[2])):
                rest = shapes[:idx] + (((w, h), c - 1),) + shapes[idx + 1:] if c > 1 \
                    else shapes[:idx] + shapes[idx + 1:]
                for x, y in pos:
                    sub = self._search(n1, n2, mask & ~rect_mask(n1, x, y, w, h), rest, budget)
                    if sub is not None:
                        found = [(w, h, x, y)] + sub
                        break
                if found is not None:
                    break
        if len(self.cache) >= self.max_cache:
            self.cache.clear()
        self.cache[key] = found
        return found

    def solve(self, rects, region: Region, node_budget=DEFAULT_NODE_BUDGET):
        """Return a list of PlacedRect (aligned with ``rects``) or None if infeasible."""
        dims = [r.rect if isinstance(r, Item) else r for r in rects]
        shapes = tuple(sorted(Counter((d.w, d.h) for d in dims).items()))
        box = region.box
        self.nodes = 0
        raw = self._search(box.n1, box.n2, region.mask, shapes, node_budget)
        if raw is None:
            return None
        slots = {}
        for w, h, x, y in raw:
            slots.setdefault((w, h), []).append((x, y))
        out = []
        for d in dims:
            x, y = slots[(d.w, d.h)].pop()
            out.append(PlacedRect(Rect(d.w, d.h), x, y))
        return out


_default_solver = ExactSolver()


def exact_pack(q: ExactQuery, solver: ExactSolver | None = None) -> Packing | None:
    """Packing witness if q.rects fit into q.region, None if they cannot.

    Raises BudgetExceeded when the node budget runs out first. Witness ids are
    item ids when the query holds Items, list positions otherwise.
    """
    solver = solver or _default_solver
    if not q.rects:
        return Packing(())
    placed = solver.solve(q.rects, q.region, q.node_budget)
    if placed is None:
        return None
    ids = [r.id if isinstance(r, Item) else i for i, r in enumerate(q.rects)]
    pk = Packing(list(zip(ids, placed)))
    assert validate_in_region(pk.placements, q.region), "exact witness failed validation"
    return pk
