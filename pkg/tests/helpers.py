"""Seeded catalogues shared by the module tests and the acceptance run."""
from itertools import combinations
from itertools import combinations_with_replacement

import numpy as np

from wideknap.exact import ExactQuery, exact_pack
from wideknap.geometry import Box, PlacedRect, Rect, Region
from wideknap.model import Item, reduce_k


def small_regions(n=4, random_count=200, seed=0):
    """All rectangular sub-boxes of an n x n box plus seeded random cell subsets."""
    box = Box(n, n)
    out = []
    for x in range(n):
        for y in range(n):
            for w in range(1, n - x + 1):
                for h in range(1, n - y + 1):
                    out.append(Region.from_rect(box, PlacedRect.of(x, y, w, h)))
    rng = np.random.default_rng(seed)
    for _ in range(random_count):
        out.append(Region.from_array(rng.random((n, n)) < rng.uniform(0.3, 0.95)))
    return out


def small_multisets(max_count=3, max_dim=3):
    shapes = [Rect(w, h) for w in range(1, max_dim + 1) for h in range(1, max_dim + 1)]
    out = []
    for c in range(1, max_count + 1):
        out.extend(combinations_with_replacement(shapes, c))
    return out


def push_flush(placed, region):
    """Slide rectangles left/down one unit at a time until none can move."""
    placed = list(placed)
    moved = True
    while moved:
        moved = False
        for i, q in enumerate(placed):
            for dx, dy in ((-1, 0), (0, -1)):
                t = q.shifted(dx, dy)
                if t.x < 0 or t.y < 0 or not region.contains(t):
                    continue
                if any(j != i and _hit(t, o) for j, o in enumerate(placed)):
                    continue
                placed[i] = q = t
                moved = True
    return placed


def _hit(a, b):
    return a.x < b.x2 and b.x < a.x2 and a.y < b.y2 and b.y < a.y2


def is_flush(q, others, region):
    def free(t):
        return t.x >= 0 and t.y >= 0 and region.contains(t) and \
            not any(_hit(t, o) for o in others)
    return not free(q.shifted(-1, 0)) and not free(q.shifted(0, -1))


FIGURE_RECTS = {          # (x1, x2, y1, y2) of the 16-rectangle conflict-graph layout, box 70 x 20
    1: (0, 6, 3, 9), 2: (0, 5, 9, 12), 3: (6, 14, 6, 15), 4: (14, 20, 6, 9),
    5: (14, 20, 9, 12), 6: (14, 20, 12, 15), 7: (0, 20, 15, 17), 8: (6, 16, 3, 6),
    9: (16, 30, 2, 6), 10: (20, 36, 6, 19), 11: (36, 50, 2, 12), 12: (36, 43, 12, 15),
    13: (43, 50, 12, 15), 14: (50, 60, 9, 17), 15: (50, 60, 4, 9), 16: (60, 70, 6, 13),
}
FIGURE_EDGES = (
    "s-1 s-2 s-3 s-7 s-9 s-10 1-3 1-8 2-3 3-4 3-5 3-6 8-9 4-10 5-10 6-10 7-10 9-11 "
    "10-11 10-12 10-14 11-14 11-15 12-13 13-14 14-16 15-16 10-t 11-t 14-t 15-t 16-t"
).split()


def figure_packing():
    from wideknap.model import Packing
    return Packing([(i, PlacedRect.of(x1, y1, x2 - x1, y2 - y1))
                    for i, (x1, x2, y1, y2) in FIGURE_RECTS.items()]), Box(70, 20)


def figure_edges():
    def v(x):
        return x if x in ("s", "t") else int(x)
    return {frozenset(v(p) for p in e.split("-")) for e in FIGURE_EDGES}


def premise_graph(seed, eps):
    """Random graph on s, t and <= 10 inner vertices whose s-t paths all have
    at least ceil(1/eps) internal vertices; None when the draw misses the premise."""
    import math
    import networkx as nx
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 11))
    g = nx.gnp_random_graph(n, float(rng.uniform(0.15, 0.6)), seed=int(rng.integers(1 << 30)))
    g.add_nodes_from(["s", "t"])
    for end in ("s", "t"):
        for v in rng.choice(n, size=int(rng.integers(1, 3)), replace=False):
            g.add_edge(end, int(v))
    need = math.ceil(1 / eps)
    # exhaustive premise check over all simple paths
    if any(len(p) - 2 < need for p in nx.all_simple_paths(g, "s", "t")):
        return None
    return g


def brute_min_separator(g, s="s", t="t"):
    import itertools
    import networkx as nx
    inner = [v for v in g.nodes if v not in (s, t)]
    for size in range(len(inner) + 1):
        for cut in itertools.combinations(inner, size):
            h = g.subgraph([v for v in g.nodes if v not in cut])
            if not nx.has_path(h, s, t):
                return size
    return None


def _colored_subsets(items, size):
    for combo in combinations(items, size):
        if len({it.color for it in combo}) == size:
            yield combo


def replacement_case(seed):
    """One seeded reduction case: (items, k, region) with random colors and a random region."""
    rng = np.random.default_rng(seed)
    box = Box(int(rng.integers(3, 6)), int(rng.integers(3, 6)))
    k = int(rng.integers(1, 5))
    n = int(rng.integers(k, k + 6))
    items = []
    for i in range(n):
        w = int(rng.integers(1, box.n1 + 1))
        h = int(rng.integers(1, min(w, box.n2) + 1))
        items.append(Item(i, Rect(w, h), int(rng.integers(1, k + 1))))
    arr = rng.random((box.n2, box.n1)) < rng.uniform(0.6, 1.0)
    return items, k, Region.from_array(arr)


def check_replacement(items, k, region):
    """Largest colorful packable subset size must be the same before and after reduce_k."""
    reduced = reduce_k(items, k)

    def best(pool):
        for size in range(k, 0, -1):
            for combo in _colored_subsets(pool, size):
                if exact_pack(ExactQuery(combo, region)) is not None:
                    return size
        return 0
    return best(items), best(reduced)


def repack_triple(seed):
    """(packing, zone, ell, separator, graph) with zone clear of the right margin."""
    from wideknap.conflict import build_conflict_graph, min_vertex_separator
    from wideknap.model import generate_packing
    rng = np.random.default_rng(seed)
    n1, n2 = int(rng.integers(8, 17)), int(rng.integers(3, 9))
    ell = int(rng.integers(1, n1 // 3 + 1))
    _, pk = generate_packing(seed, Box(n1 - ell, n2), int(rng.integers(1, 9)), 2 * ell)
    box = Box(n1, n2)
    extra = rng.random((n2, n1)) < 0.4
    extra[:, n1 - ell:] = False
    zone = Region.from_array(extra)
    for _, q in pk:
        zone = zone | Region.from_rect(box, q)
    cg = build_conflict_graph(pk, box)
    return pk, zone, ell, min_vertex_separator(cg.graph), cg


def check_repack(pk, zone, ell, sep, cg):
    """Violations of the shift and round repacking contracts for one triple."""
    from wideknap.geometry import shift_zone
    from wideknap.model import RoundingParams, round_rect, validate_in_region
    from wideknap.structure import repack_round, repack_shift
    bad = []
    neg = shift_zone(zone, ell, "negative")
    shifted = repack_shift(pk, zone, ell, sep, cg)
    if len(shifted) != len(pk) - len(sep) or not validate_in_region(shifted.placements, neg):
        bad.append("shift")
    params = RoundingParams.for_box(ell, zone.box.n1)
    for src, src_zone in ((shifted, neg), (pk, zone)):
        out = repack_round(src, src_zone, params)
        if not validate_in_region(out.placements, shift_zone(src_zone, ell, "positive")):
            bad.append("round")
        before = dict(src.placements)
        if any(q.rect != round_rect(before[i].rect, params) or q.y != before[i].y for i, q in out):
            bad.append("round-dims")
    return bad
