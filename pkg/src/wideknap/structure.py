"""Structured packings: path polylines, shift and round repacking, the transform, a verifier.

Polylines through rectangle centers have half-integer breakpoints, so every
polyline here lives on the doubled grid (box ``2*n1 x 2*n2``). Packings stay on
the original grid; regions are coarsened back when packings are checked
against them.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

import networkx as nx

from .conflict import S, T, ConflictGraph, build_conflict_graph, min_vertex_separator, \
    sees, short_disjoint_path_family
from .errors import GeometryError, OrderingError, SeparatorError
from .exact import ExactQuery, exact_pack
from .geometry import Box, PlacedRect, Polyline, Region, container_between, \
    polyline_below, polyline_crosses, segment_crosses, shift_zone
from .model import Packing, RoundingParams, round_rect, validate_in_region

__all__ = [
    "PathPolylines", "StructuredPacking", "path_polylines", "repack_shift", "repack_round",
    "structural_transform", "verify_structured", "chain_complexity",
    "structured_to_json", "structured_from_json",
]


def chain_complexity(points):
    """Segments of a raw chain, merging collinear pieces that keep their direction."""
    dirs = []
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        d = ((x1 > x0) - (x1 < x0), (y1 > y0) - (y1 < y0))
        if d == (0, 0):
            continue
        if not dirs or dirs[-1] != d:
            dirs.append(d)
    return len(dirs)


@dataclass(frozen=True)
class PathPolylines:
    path: tuple
    top: Polyline
    bottom: Polyline
    middle: Polyline
    raw: dict             # name -> list of doubled-grid points, before canonicalization
    segments: tuple       # witness Segment per step, shared by all three

    @property
    def internal(self):
        return len(self.path) - 2

    def complexities(self):
        return {name: chain_complexity(pts) for name, pts in self.raw.items()}


def path_polylines(path, cg: ConflictGraph, levels=None) -> PathPolylines:
    """Top, bottom and middle polylines of an S-T path, on the doubled grid.

    ``levels`` optionally fixes the witness height of every step instead of the
    stored one; each must be a valid witness level for its edge.
    """
    path = tuple(path)
    if path[0] != S or path[-1] != T:
        raise GeometryError("path must run from S to T")
    if levels is not None and len(levels) != len(path) - 1:
        raise GeometryError("need one witness level per step")
    segs = []
    for i, (u, v) in enumerate(zip(path, path[1:])):
        try:
            left, right, seg = cg.oriented(u, v)
        except KeyError:
            raise GeometryError(f"missing witness for step {u}-{v}") from None
        if left != u:
            raise GeometryError(f"step {u}->{v} runs right to left")
        if levels is not None:
            others = [q for w, q in cg.rects.items() if w not in (u, v, S, T)]
            seg = sees(cg.rects[u], cg.rects[v], others, levels[i])
            if seg is None:
                raise GeometryError(f"y={levels[i]} is not a witness level for {u}-{v}")
        segs.append(seg)
    n1 = cg.box.n1
    box2 = cg.box.scaled(2)
    ys = [s.y2 for s in segs]
    inner = [cg.rects[v] for v in path[1:-1]]
    bottom, top, middle = [(0, ys[0])], [(0, ys[0])], [(0, ys[0])]
    for i, q in enumerate(inner):
        yin, yout = ys[i], ys[i + 1]
        for chain, level in ((bottom, 2 * q.y), (top, 2 * q.y2)):
            chain += [(2 * q.x, yin), (2 * q.x, level), (2 * q.x2, level), (2 * q.x2, yout)]
        cx, cy = 2 * q.x + q.w, 2 * q.y + q.h
        middle += [(cx, yin), (cx, cy), (cx, yout)]
    for chain in (bottom, top, middle):
        chain.append((2 * n1, ys[-1]))
    raw = {"top": top, "bottom": bottom, "middle": middle}
    return PathPolylines(
        path=path,
        top=Polyline.from_points(box2, top),
        bottom=Polyline.from_points(box2, bottom),
        middle=Polyline.from_points(box2, middle),
        raw=raw,
        segments=tuple(segs),
    )


def _check_widths(rects, ell):
    for iid, q in rects:
        if q.w < 2 * ell:
            raise GeometryError(f"item {iid} has width {q.w} < 2*ell = {2 * ell}")


def repack_shift(pk: Packing, zone: Region, ell: int, separator, graph=None) -> Packing:
    """Drop the separator and move everything cut off from S left by ell."""
    _check_widths(pk, ell)
    if graph is None:
        graph = build_conflict_graph(pk, zone.box)
    g = graph.graph if isinstance(graph, ConflictGraph) else graph
    sep = set(separator)
    rest = g.subgraph([v for v in g.nodes if v not in sep])
    reach = nx.node_connected_component(rest, S) if S in rest else {S}
    if T in reach:
        raise SeparatorError("separator does not separate S from T")
    out = []
    for iid, q in pk:
        if iid in sep:
            continue
        out.append((iid, q if iid in reach else q.shifted(dx=-ell)))
    return Packing(out)


def repack_round(pk: Packing, zone: Region, params: RoundingParams) -> Packing:
    """Scale x by 1 + ell/n1 (rounding down) and widen every item to its rounded width."""
    ell = params.ell
    _check_widths(pk, ell)
    n1 = zone.box.n1
    right = Region.from_rect(zone.box, PlacedRect.of(max(n1 - ell, 0), 0, min(ell, n1), zone.box.n2))
    if zone.mask & right.mask:
        raise GeometryError("zone reaches into the right margin [n1-ell, n1]")
    lam = Fraction(n1 + ell, n1)
    out = []
    for iid, q in pk:
        out.append((iid, PlacedRect(round_rect(q.rect, params), math.floor(lam * q.x), q.y)))
    return Packing(out)


@dataclass
class StructuredPacking:
    box: Box
    packing: Packing
    polylines: list                 # doubled-grid Polylines, bottom to top
    region_of: dict                 # item id -> region index
    eps: Fraction
    ell: int
    rounded: dict = field(default_factory=dict)      # region index -> rounded witness Packing
    diagnostics: dict = field(default_factory=dict)

    def boundaries(self):
        box2 = self.box.scaled(2)
        return [Polyline.horizontal(box2, 0)] + list(self.polylines) + \
            [Polyline.horizontal(box2, box2.n2)]

    def regions(self):
        """Doubled-grid regions B_0..B_m between consecutive boundaries."""
        b = self.boundaries()
        return [container_between(lo, hi) for lo, hi in zip(b, b[1:])]


def _inside(q: PlacedRect, region2: Region):
    return region2.contains(q.scaled(2))


def _crossing_violations(pp: PathPolylines, rects, ell, n1):
    bad = []
    on_path = set(pp.path)
    pts = pp.raw["middle"]
    segs = [s for s in zip(pts, pts[1:]) if s[0] != s[1]]
    for iid, q in rects.items():
        if iid in on_path:
            continue
        x0, x1 = max(q.x - ell, 0), min(q.x2 + ell, n1)
        both = PlacedRect.of(2 * x0, 2 * q.y, 2 * (x1 - x0), 2 * q.h)
        if any(segment_crosses(s, both) for s in segs):
            bad.append((pp.path, iid))
    return bad


def structural_transform(pk: Packing, eps, ell: int, box: Box) -> StructuredPacking:
    """Turn a packing of wide items (widths >= 2*ell) into an (eps, ell)-structured one."""
    eps = Fraction(eps)
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    if ell < 1 or int(ell) != ell:
        raise ValueError("ell must be a positive integer")
    ell = int(ell)
    _check_widths(pk, ell)
    rects = dict(pk.placements)
    box2 = box.scaled(2)
    if not rects:
        return StructuredPacking(box, Packing(()), [], {}, eps, ell)
    cap = 1 / (eps * eps)
    cg = build_conflict_graph(pk, box)
    paths = short_disjoint_path_family(cg, math.floor(1 / eps))
    pps = [path_polylines(p, cg) for p in paths]
    m = len(pps)
    diag = {"paths": [list(p) for p in paths], "complexity": [], "crossing": []}
    for pp in pps:
        for name, c in pp.complexities().items():
            if c > 4 * pp.internal + 1:
                diag["complexity"].append((list(pp.path), name, c))
        diag["crossing"].extend(_crossing_violations(pp, rects, ell, box.n1))

    # zones Z_i between the top polyline of P_i and the bottom polyline of P_{i+1}
    bottom_side, top_side = Polyline.horizontal(box2, 0), Polyline.horizontal(box2, box2.n2)
    lows = [bottom_side] + [pp.top for pp in pps]
    highs = [pp.bottom for pp in pps] + [top_side]
    zones = []
    for lo, hi in zip(lows, highs):
        if not polyline_below(lo, hi):
            raise OrderingError("top polyline of a path rises above the bottom polyline of the next")
        zones.append(container_between(lo, hi))
    on_path = {v for p in paths for v in p[1:-1]}
    V = [[] for _ in range(m + 1)]
    for iid in sorted(rects):
        if iid in on_path:
            continue
        homes = [i for i, z in enumerate(zones) if _inside(rects[iid], z)]
        if len(homes) != 1:
            raise OrderingError(f"item {iid} lies in {len(homes)} zones")
        V[homes[0]].append(iid)
    light = [len(v) <= cap for v in V]

    chosen = []
    for i in range(1, m + 1):
        chosen.append(pps[i - 1].bottom if light[i - 1] and light[i] else pps[i - 1].middle)
    bounds = [bottom_side] + chosen + [top_side]
    for lo, hi in zip(bounds, bounds[1:]):
        if not polyline_below(lo, hi):
            raise OrderingError("separating polylines are not ordered bottom to top")

    params = RoundingParams.for_box(ell, box.n1)
    region_of, rounded, seps = {}, {}, {}
    for i in range(m + 1):
        internal = list(paths[i - 1][1:-1]) if i >= 1 else []
        prev_light = light[i - 1] if i >= 1 else True
        if prev_light and light[i]:
            keep = V[i] + internal
        elif light[i]:
            keep = list(V[i])
        else:
            sub = cg.graph.subgraph(V[i] + [S, T])
            sep = min_vertex_separator(sub)
            seps[i] = sorted(sep)
            keep = [v for v in V[i] if v not in sep]
            zone = zones[i].coarsen(2)
            zpk = Packing([(v, rects[v]) for v in V[i]])
            shifted = repack_shift(zpk, zone, ell, sep, graph=sub)
            rounded[i] = repack_round(shifted, shift_zone(zone, ell, "negative"), params)
        for v in keep:
            region_of[v] = i
    diag["V_sizes"] = [len(v) for v in V]
    diag["heavy"] = [i for i, ok in enumerate(light) if not ok]
    diag["separators"] = seps
    out = Packing([(v, rects[v]) for v in sorted(region_of)])
    return StructuredPacking(box, out, chosen, region_of, eps, ell, rounded, diag)


def verify_structured(sp: StructuredPacking, items=None, k=None, node_budget=10**6):
    """Check the structured-packing conditions; returns {"ok": bool, "violations": [...]}."""
    bad = []
    eps, ell = sp.eps, sp.ell
    dims = None if items is None else {it.id: it.rect for it in items}
    rep = validate_in_region(sp.packing.placements, Region.full(sp.box), dims)
    if not rep:
        bad.append(f"packing invalid: {rep.violation}")
    for iid, q in sp.packing:
        if q.w < 2 * ell:
            bad.append(f"item {iid} narrower than 2*ell")
    for j, p in enumerate(sp.polylines):
        if p.complexity > 4 / eps + 1:
            bad.append(f"polyline {j} has complexity {p.complexity} > 4/eps+1")
    bounds = sp.boundaries()
    ordered = all(polyline_below(a, b) for a, b in zip(bounds, bounds[1:]))
    if not ordered:
        bad.append("polylines not ordered bottom to top")
    for j, p in enumerate(sp.polylines):
        for iid, q in sp.packing:
            if polyline_crosses(p, q.scaled(2)):
                bad.append(f"polyline {j} crosses item {iid}")
    if ordered:
        regions = sp.regions()
        members = {}
        for iid, q in sp.packing:
            i = sp.region_of.get(iid)
            if i is None or not 0 <= i < len(regions):
                bad.append(f"item {iid} has no region")
                continue
            if not _inside(q, regions[i]):
                bad.append(f"item {iid} not inside region {i}")
            members.setdefault(i, []).append((iid, q))
        params = RoundingParams.for_box(ell, sp.box.n1)
        for i, mem in sorted(members.items()):
            if len(mem) <= 2 / (eps * eps):
                continue
            coarse = regions[i].coarsen(2)
            want = {iid: round_rect(q.rect, params) for iid, q in mem}
            wit = sp.rounded.get(i)
            if wit is not None and {iid for iid, _ in wit} == set(want) and \
                    validate_in_region(wit.placements, coarse, want):
                continue
            res = exact_pack(ExactQuery(tuple(want.values()), coarse, node_budget))
            if res is None:
                bad.append(f"region {i}: heavy and rounded items do not pack")
    if k is not None and len(sp.packing) < math.ceil((1 - 3 * eps) * k):
        bad.append(f"size {len(sp.packing)} below (1-3eps)k")
    return {"ok": not bad, "violations": bad}


def structured_to_json(sp: StructuredPacking) -> str:
    return json.dumps({
        "box": {"w": sp.box.n1, "h": sp.box.n2},
        "epsilon": str(sp.eps),
        "ell": sp.ell,
        "grid_scale": 2,
        "items": [{"id": i, "w": q.w, "h": q.h} for i, q in sp.packing],
        "placements": [{"id": i, "x": q.x, "y": q.y} for i, q in sp.packing],
        "polylines": [[list(pt) for pt in p.breakpoints] for p in sp.polylines],
        "regions": {str(i): r for i, r in sorted(sp.region_of.items())},
        "rounded": {str(r): [{"id": i, "x": q.x, "y": q.y, "w": q.w, "h": q.h} for i, q in pk]
                    for r, pk in sorted(sp.rounded.items())},
    }, indent=2)


def structured_from_json(text) -> StructuredPacking:
    d = json.loads(text) if isinstance(text, str) else text
    box = Box(d["box"]["w"], d["box"]["h"])
    dims = {e["id"]: (e["w"], e["h"]) for e in d["items"]}
    pk = Packing([(e["id"], PlacedRect.of(e["x"], e["y"], *dims[e["id"]])) for e in d["placements"]])
    box2 = box.scaled(2)
    polys = [Polyline.from_points(box2, [tuple(p) for p in pl]) for pl in d["polylines"]]
    region_of = {int(k): v for k, v in d["regions"].items()}
    rounded = {int(r): Packing([(e["id"], PlacedRect.of(e["x"], e["y"], e["w"], e["h"])) for e in lst])
               for r, lst in d.get("rounded", {}).items()}
    return StructuredPacking(box, pk, polys, region_of, Fraction(d["epsilon"]), int(d["ell"]), rounded)
