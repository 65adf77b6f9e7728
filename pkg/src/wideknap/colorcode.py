"""Coloring families for color coding.

Exhaustive families list every map ids -> [k]; randomized ones draw
``ceil(e^k * ln(1/failure_bound))`` uniform colorings from a seeded generator,
so a fixed k-subset is missed by all of them with probability at most
failure_bound.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExceeded

__all__ = ["ColoringFamily", "build_family", "is_good_for", "randomized_size"]

DEFAULT_EXHAUSTIVE_BUDGET = 1_000_000


@dataclass(frozen=True)
class ColoringFamily:
    item_ids: tuple
    k: int
    colorings: tuple      # each a tuple of colors aligned with item_ids
    mode: str
    seed: int | None = None
    failure_bound: float | None = None

    def __len__(self):
        return len(self.colorings)

    def coloring(self, i):
        return dict(zip(self.item_ids, self.colorings[i]))

    def __iter__(self):
        for i in range(len(self.colorings)):
            yield self.coloring(i)


def randomized_size(k, failure_bound):
    if not 0 < failure_bound < 1:
        raise ValueError("failure_bound must lie in (0, 1)")
    return math.ceil(math.exp(k) * math.log(1 / failure_bound))


def build_family(item_ids, k, mode="randomized", seed=0, failure_bound=0.01,
                 budget=DEFAULT_EXHAUSTIVE_BUDGET) -> ColoringFamily:
    item_ids = tuple(item_ids)
    if k < 1:
        raise ValueError("k must be >= 1")
    n = len(item_ids)
    if k == 1:
        return ColoringFamily(item_ids, 1, ((1,) * n,), mode, seed, failure_bound)
    if mode == "exhaustive":
        if k ** n > budget:
            raise BudgetExceeded("exhaustive coloring", budget, k ** n)
        cols = tuple(itertools.product(range(1, k + 1), repeat=n))
        return ColoringFamily(item_ids, k, cols, mode)
    if mode == "randomized":
        t = randomized_size(k, failure_bound)
        rng = np.random.default_rng(seed)
        draws = rng.integers(1, k + 1, size=(t, n))
        cols = tuple(tuple(int(c) for c in row) for row in draws)
        return ColoringFamily(item_ids, k, cols, mode, seed, failure_bound)
    raise ValueError(f"unknown coloring mode {mode!r}")


def is_good_for(coloring, subset) -> bool:
    """True iff the coloring gives every id of subset a different color."""
    colors = [coloring[i] for i in subset]
    return len(set(colors)) == len(colors)
