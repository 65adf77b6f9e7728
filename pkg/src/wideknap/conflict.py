"""Horizontal-visibility (conflict) graphs, short disjoint s-t paths, vertex separators."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from .errors import OrderingError, SeparatorError
from .geometry import Box, PlacedRect, polyline_below
from .model import Packing

__all__ = [
    "S", "T", "Segment", "ConflictGraph", "sees", "build_conflict_graph",
    "short_disjoint_path_family", "min_vertex_separator",
]

S, T = "s", "t"


@dataclass(frozen=True, slots=True)
class Segment:
    """Horizontal segment [x1, x2] x {y}; y is a multiple of 1/2."""
    x1: int
    x2: int
    y: Fraction

    @property
    def y2(self):
        """The level on the doubled grid, an integer."""
        return int(2 * self.y)


def _left_right(a, b):
    if a.x2 <= b.x:
        return a, b
    if b.x2 <= a.x:
        return b, a
    return None


def sees(a: PlacedRect, b: PlacedRect, others, y=None) -> Segment | None:
    """Witness segment if a and b see each other horizontally, else None.

    The segment joins the open right side of the left rectangle to the open
    left side of the right one and meets no rectangle of ``others`` (closed).
    Among free levels the one nearest the middle of the shared y-range is
    returned, ties going down. Passing ``y`` tests that single level instead.
    """
    lr = _left_right(a, b)
    if lr is None:
        return None
    left, right = lr
    lo, hi = max(a.y, b.y), min(a.y2, b.y2)
    if lo >= hi:
        return None
    x1, x2 = left.x2, right.x
    blockers = [o for o in others if o.x <= x2 and o.x2 >= x1 and o.y <= hi and o.y2 >= lo]
    mid2 = lo + hi  # the midpoint, doubled like the candidates
    cands = sorted(range(2 * lo + 1, 2 * hi), key=lambda v: (abs(v - mid2), v))
    if y is not None:
        y = Fraction(y)
        cands = [int(2 * y)] if 2 * y in cands else []
    for v in cands:
        y = Fraction(v, 2)
        if not any(o.y <= y <= o.y2 for o in blockers):
            return Segment(x1, x2, y)
    return None


def _vkey(v):
    return (isinstance(v, str), v if not isinstance(v, str) else 0, str(v))


@dataclass
class ConflictGraph:
    box: Box
    rects: dict                 # vertex -> PlacedRect, including S and T
    graph: nx.Graph
    witness: dict = field(default_factory=dict)   # (left, right) -> Segment

    @property
    def items(self):
        return [v for v in self.rects if v not in (S, T)]

    def oriented(self, u, v):
        """(left, right, segment) for the edge uv."""
        if (u, v) in self.witness:
            return u, v, self.witness[u, v]
        if (v, u) in self.witness:
            return v, u, self.witness[v, u]
        raise KeyError(f"no witness for edge {u}-{v}")

    def rightward(self):
        """Directed graph with each edge pointing from its left to its right endpoint."""
        d = nx.DiGraph()
        d.add_nodes_from(self.graph.nodes)
        d.add_edges_from(self.witness.keys())
        return d

    def edge_set(self):
        return {frozenset(e) for e in self.graph.edges}

    def to_dot(self):
        lines = ["graph conflict {"]
        for v in sorted(self.graph.nodes, key=_vkey):
            q = self.rects[v]
            lines.append(f'  "{v}" [label="{v}\\n{q!r}"];')
        for (u, v), seg in sorted(self.witness.items(), key=lambda e: (_vkey(e[0][0]), _vkey(e[0][1]))):
            lines.append(f'  "{u}" -- "{v}" [label="y={seg.y}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def virtual_rects(box):
    return {S: PlacedRect.of(-1, 0, 1, box.n2), T: PlacedRect.of(box.n1, 0, 1, box.n2)}


def build_conflict_graph(pk, box: Box) -> ConflictGraph:
    """Visibility graph over the placements plus the box sides S and T."""
    placements = list(pk.placements) if isinstance(pk, Packing) else list(pk)
    rects = {iid: q for iid, q in placements}
    rects.update(virtual_rects(box))
    g = nx.Graph()
    g.add_nodes_from(rects)
    cg = ConflictGraph(box, rects, g)
    verts = list(rects)
    for i, u in enumerate(verts):
        for v in verts[i + 1:]:
            if {u, v} == {S, T}:
                continue
            a, b = rects[u], rects[v]
            others = [rects[w] for w in verts if w not in (u, v, S, T)]
            seg = sees(a, b, others)
            if seg is None:
                continue
            left = u if _left_right(a, b)[0] is a else v
            right = v if left == u else u
            g.add_edge(u, v)
            cg.witness[left, right] = seg
    return cg


def _shortest_rightward(dg, alive, max_internal):
    """BFS from S to T through alive vertices, at most max_internal inner vertices."""
    parent = {S: None}
    depth = {S: 0}
    queue = deque([S])
    while queue:
        u = queue.popleft()
        if depth[u] > max_internal:
            continue
        for v in sorted(dg.successors(u), key=_vkey):
            if v in parent or (v != T and v not in alive):
                continue
            parent[v] = u
            depth[v] = depth[u] + 1
            if v == T:
                path = [T]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                return path[::-1]
            queue.append(v)
    return None


def short_disjoint_path_family(cg: ConflictGraph, max_internal: int):
    """Greedy maximal family of internally disjoint short S-T paths, bottom to top.

    Paths follow edges left to right. Each has at most max_internal internal
    vertices. The family is ordered by the height of each path's middle polyline
    at mid-box, and the order is checked pairwise; an inconsistent order raises
    OrderingError.
    """
    from .structure import path_polylines

    if max_internal < 1:
        raise ValueError("max_internal must be >= 1")
    dg = cg.rightward()
    alive = set(cg.items)
    paths = []
    while True:
        p = _shortest_rightward(dg, alive, max_internal)
        if p is None:
            break
        paths.append(p)
        alive -= set(p[1:-1])
    if len(paths) < 2:
        return paths
    mids = {}
    for i, p in enumerate(paths):
        mids[i] = path_polylines(p, cg).middle

    def key(i):
        m = mids[i]
        lead = cg.rects[paths[i][1]].y
        return (m.ys_at(cg.box.n1), lead)   # doubled grid: x = n1 is mid-box

    order = sorted(range(len(paths)), key=key)
    for a, b in zip(order, order[1:]):
        if not polyline_below(mids[a], mids[b]):
            raise OrderingError(f"middle polylines of paths {paths[a]} and {paths[b]} are not ordered")
    return [paths[i] for i in order]


def min_vertex_separator(g: nx.Graph, s=S, t=T):
    """Minimum set of vertices (other than s, t) meeting every s-t path."""
    if g.has_edge(s, t):
        raise SeparatorError("s and t are adjacent; no vertex separator exists")
    if not nx.has_path(g, s, t):
        return set()
    from networkx.algorithms.connectivity import minimum_st_node_cut
    return set(minimum_st_node_cut(g, s, t))
