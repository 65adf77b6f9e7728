"""Integer-grid primitives: rectangles, placements, cell regions and monotone polylines.

Every coordinate is an integer. A region is a set of closed unit cells, stored
as a Python int bitmask with bit ``cy * n1 + cx`` for cell ``(cx, cy)``. That
keeps carving and containment tests to a couple of integer operations, which is
what the exact solver spends its time on.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from functools import cached_property, lru_cache
from numbers import Integral

import numpy as np

from .errors import GeometryError

__all__ = [
    "Rect", "PlacedRect", "Box", "Region", "Polyline",
    "overlaps", "carve", "boundary_complexity", "shift_zone",
    "polyline_below", "container_between", "polyline_crosses", "segment_crosses",
]


def _check_int(name, v, lo=None):
    if isinstance(v, bool) or not isinstance(v, Integral):
        raise GeometryError(f"{name} must be an integer, got {v!r}")
    if lo is not None and v < lo:
        raise GeometryError(f"{name} must be >= {lo}, got {v}")


@dataclass(frozen=True, slots=True, order=True)
class Rect:
    w: int
    h: int

    def __post_init__(self):
        _check_int("w", self.w, 1)
        _check_int("h", self.h, 1)

    @property
    def area(self):
        return self.w * self.h

    @property
    def is_wide(self):
        return self.w >= self.h

    def at(self, x, y):
        return PlacedRect(self, x, y)


@dataclass(frozen=True, slots=True, order=True)
class PlacedRect:
    rect: Rect
    x: int
    y: int

    def __post_init__(self):
        _check_int("x", self.x)
        _check_int("y", self.y)

    @classmethod
    def of(cls, x, y, w, h):
        return cls(Rect(w, h), x, y)

    @property
    def w(self):
        return self.rect.w

    @property
    def h(self):
        return self.rect.h

    @property
    def x2(self):
        return self.x + self.rect.w

    @property
    def y2(self):
        return self.y + self.rect.h

    def shifted(self, dx=0, dy=0):
        return PlacedRect(self.rect, self.x + dx, self.y + dy)

    def scaled(self, f):
        return PlacedRect(Rect(self.w * f, self.h * f), self.x * f, self.y * f)

    def cells(self):
        return [(cx, cy) for cy in range(self.y, self.y2) for cx in range(self.x, self.x2)]

    def __repr__(self):
        return f"[{self.x},{self.x2}]x[{self.y},{self.y2}]"


@dataclass(frozen=True, slots=True)
class Box:
    n1: int
    n2: int

    def __post_init__(self):
        _check_int("n1", self.n1, 1)
        _check_int("n2", self.n2, 1)

    @property
    def size(self):
        return self.n1 + self.n2

    def contains(self, q: PlacedRect):
        return q.x >= 0 and q.y >= 0 and q.x2 <= self.n1 and q.y2 <= self.n2

    def scaled(self, f):
        return Box(self.n1 * f, self.n2 * f)


def overlaps(a: PlacedRect, b: PlacedRect) -> bool:
    """True iff the open interiors intersect."""
    return a.x < b.x2 and b.x < a.x2 and a.y < b.y2 and b.y < a.y2


@lru_cache(maxsize=1 << 16)
def rect_mask(n1, x, y, w, h):
    """Bitmask of the cells covered by ``[x,x+w]x[y,y+h]`` in a grid of width n1."""
    row = ((1 << w) - 1) << x
    m = 0
    for r in range(y, y + h):
        m |= row << (r * n1)
    return m


@dataclass(frozen=True, slots=True)
class Region:
    box: Box
    mask: int = 0

    @classmethod
    def full(cls, box):
        return cls(box, (1 << (box.n1 * box.n2)) - 1)

    @classmethod
    def empty(cls, box):
        return cls(box, 0)

    @classmethod
    def from_cells(cls, box, cells):
        m = 0
        for cx, cy in cells:
            if not (0 <= cx < box.n1 and 0 <= cy < box.n2):
                raise GeometryError(f"cell {(cx, cy)} outside box {box}")
            m |= 1 << (cy * box.n1 + cx)
        return cls(box, m)

    @classmethod
    def from_rect(cls, box, q: PlacedRect):
        if not box.contains(q):
            raise GeometryError(f"{q} not inside box {box}")
        return cls(box, rect_mask(box.n1, q.x, q.y, q.w, q.h))

    @classmethod
    def from_array(cls, arr):
        """Build from a boolean array indexed ``[cy, cx]``."""
        arr = np.asarray(arr, dtype=bool)
        n2, n1 = arr.shape
        box = Box(n1, n2)
        raw = np.packbits(arr.ravel(), bitorder="little").tobytes()
        return cls(box, int.from_bytes(raw, "little"))

    def to_array(self):
        n1, n2 = self.box.n1, self.box.n2
        nbytes = (n1 * n2 + 7) // 8
        raw = np.frombuffer(self.mask.to_bytes(nbytes, "little"), dtype=np.uint8)
        bits = np.unpackbits(raw, bitorder="little")[: n1 * n2]
        return bits.astype(bool).reshape(n2, n1)

    @property
    def cells(self):
        n1 = self.box.n1
        m, out, i = self.mask, [], 0
        while m:
            if m & 1:
                out.append((i % n1, i // n1))
            m >>= 1
            i += 1
        return frozenset(out)

    @property
    def area(self):
        return self.mask.bit_count()

    def __len__(self):
        return self.area

    def __contains__(self, cell):
        cx, cy = cell
        if not (0 <= cx < self.box.n1 and 0 <= cy < self.box.n2):
            return False
        return bool(self.mask >> (cy * self.box.n1 + cx) & 1)

    def is_empty(self):
        return self.mask == 0

    def placement_mask(self, q: PlacedRect):
        """Mask of q's cells, or None if q leaves the bounding box."""
        if not self.box.contains(q):
            return None
        return rect_mask(self.box.n1, q.x, q.y, q.w, q.h)

    def contains(self, q: PlacedRect):
        qm = self.placement_mask(q)
        return qm is not None and qm & self.mask == qm

    def _same_box(self, other):
        if other.box != self.box:
            raise GeometryError("regions live in different boxes")

    def __or__(self, other):
        self._same_box(other)
        return Region(self.box, self.mask | other.mask)

    def __and__(self, other):
        self._same_box(other)
        return Region(self.box, self.mask & other.mask)

    def __sub__(self, other):
        self._same_box(other)
        return Region(self.box, self.mask & ~other.mask)

    def issubset(self, other):
        self._same_box(other)
        return self.mask & ~other.mask == 0

    def coarsen(self, f):
        """Region on the grid shrunk by f; a coarse cell survives iff all f*f fine cells do."""
        n1, n2 = self.box.n1, self.box.n2
        if n1 % f or n2 % f:
            raise GeometryError(f"box {self.box} not divisible by {f}")
        arr = self.to_array().reshape(n2 // f, f, n1 // f, f)
        return Region.from_array(arr.all(axis=(1, 3)))

    def refine(self, f):
        arr = self.to_array()
        return Region.from_array(np.kron(arr, np.ones((f, f), dtype=bool)).astype(bool))

    def __repr__(self):
        return f"Region({self.box.n1}x{self.box.n2}, {self.area} cells)"


def carve(r: Region, q: PlacedRect) -> Region:
    """Remove q's cells from r. q must lie entirely inside r."""
    qm = r.placement_mask(q)
    if qm is None or qm & r.mask != qm:
        raise GeometryError(f"{q} is not contained in the region")
    return Region(r.box, r.mask & ~qm)


def _count_runs(edges):
    # edges: bool array, runs counted along the last axis
    if edges.size == 0:
        return 0
    prev = np.zeros_like(edges)
    prev[..., 1:] = edges[..., :-1]
    return int(np.count_nonzero(edges & ~prev))


def boundary_complexity(r: Region) -> int:
    """Number of maximal axis-parallel boundary segments of r.

    A segment is a maximal run of unit boundary edges on one grid line with the
    region on the same side. Runs with the region on opposite sides stay distinct,
    so two cells meeting at a corner contribute four sides each.
    """
    if r.is_empty():
        raise GeometryError("boundary complexity of an empty region")
    a = np.pad(r.to_array(), 1)
    below, above = a[:-1, :], a[1:, :]
    horiz = _count_runs(below & ~above) + _count_runs(above & ~below)
    left, right = a[:, :-1], a[:, 1:]
    vert = _count_runs((left & ~right).T) + _count_runs((right & ~left).T)
    return horiz + vert


def shift_zone(r: Region, ell, direction) -> Region:
    """Zone extended by ell to the left, right or both, clamped to the box.

    A cell is kept iff its closed square lies in the extended point set. For a
    zone made of cells this means: negative keeps cell c when some zone cell of
    the same row lies in [c, c+ell] and c+1 <= n1-ell; positive when one lies in
    [c-ell, c]; both when one lies in [c-ell, c+ell].
    """
    _check_int("ell", ell)
    if ell < 1:
        raise GeometryError(f"shift length must be >= 1, got {ell}")
    if direction not in ("negative", "positive", "both"):
        raise GeometryError(f"unknown direction {direction!r}")
    arr = r.to_array()
    n1 = r.box.n1
    res = arr.copy()
    reach = min(ell, n1)
    for d in range(1, reach + 1):
        if direction in ("negative", "both"):
            res[:, : n1 - d] |= arr[:, d:]
        if direction in ("positive", "both"):
            res[:, d:] |= arr[:, : n1 - d]
    if direction == "negative":
        res[:, max(n1 - ell, 0):] = False
    return Region.from_array(res)


@dataclass(frozen=True)
class Polyline:
    """Canonical x-monotone polyline from the left to the right side of ``box``.

    ``levels[i]`` is the height of the i-th horizontal piece and ``cuts[i]`` the
    x where the chain steps from ``levels[i]`` to ``levels[i+1]``. Cuts lie
    strictly inside (0, n1) and consecutive levels differ, so the complexity is
    ``2 * len(cuts) + 1``. Vertical pieces on the box sides and dead-end spikes
    are not part of the canonical form (see ``from_points``).
    """
    box: Box
    levels: tuple
    cuts: tuple = ()

    def __post_init__(self):
        if len(self.levels) != len(self.cuts) + 1:
            raise GeometryError("need exactly one more level than cuts")
        for y in self.levels:
            _check_int("level", y)
            if not 0 <= y <= self.box.n2:
                raise GeometryError(f"level {y} outside box height {self.box.n2}")
        prev = 0
        for a in self.cuts:
            _check_int("cut", a)
            if not prev < a < self.box.n1:
                raise GeometryError(f"cuts must increase strictly inside (0, {self.box.n1})")
            prev = a
        for y0, y1 in zip(self.levels, self.levels[1:]):
            if y0 == y1:
                raise GeometryError("consecutive levels must differ")

    @classmethod
    def horizontal(cls, box, y):
        return cls(box, (y,), ())

    @classmethod
    def from_columns(cls, box, cols):
        levels, cuts = [cols[0]], []
        for cx in range(1, len(cols)):
            if cols[cx] != levels[-1]:
                cuts.append(cx)
                levels.append(cols[cx])
        return cls(box, tuple(levels), tuple(cuts))

    @classmethod
    def from_points(cls, box, points):
        """Canonicalize a chain of breakpoints.

        The chain must start at x=0, end at x=n1, use axis-parallel steps and never
        move left. Zero-length steps are allowed. The result keeps the horizontal
        pieces and the vertical steps between them; vertical excursions that turn
        back on themselves collapse to the part actually joining two levels.
        """
        pts = [(int(x), int(y)) for x, y in points]
        if len(pts) < 2:
            raise GeometryError("a polyline needs at least two points")
        if pts[0][0] != 0 or pts[-1][0] != box.n1:
            raise GeometryError("polyline must run from x=0 to x=n1")
        cols = [None] * box.n1
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if x0 != x1 and y0 != y1:
                raise GeometryError(f"step {(x0, y0)}->{(x1, y1)} is not axis-parallel")
            if x1 < x0:
                raise GeometryError("polyline is not x-monotone")
            for y in (y0, y1):
                if not 0 <= y <= box.n2:
                    raise GeometryError(f"y={y} outside the box")
            for cx in range(x0, x1):
                cols[cx] = y0
        if any(c is None for c in cols):
            raise GeometryError("polyline leaves a gap")
        return cls.from_columns(box, cols)

    @cached_property
    def columns(self):
        """Level over each open column interval (cx, cx+1)."""
        out = []
        bounds = (0,) + self.cuts + (self.box.n1,)
        for y, a, b in zip(self.levels, bounds, bounds[1:]):
            out.extend([y] * (b - a))
        return tuple(out)

    @property
    def complexity(self):
        return 2 * len(self.cuts) + 1

    @property
    def breakpoints(self):
        pts = [(0, self.levels[0])]
        for a, y0, y1 in zip(self.cuts, self.levels, self.levels[1:]):
            pts.append((a, y0))
            pts.append((a, y1))
        pts.append((self.box.n1, self.levels[-1]))
        return pts

    def segments(self):
        bp = self.breakpoints
        return list(zip(bp, bp[1:]))

    def ys_at(self, x):
        """Closed interval of heights the polyline occupies at abscissa x."""
        if not 0 <= x <= self.box.n1:
            raise GeometryError(f"x={x} outside the box")
        i = bisect_right(self.cuts, x)
        if i > 0 and self.cuts[i - 1] == x:
            a, b = self.levels[i - 1], self.levels[i]
            return (min(a, b), max(a, b))
        return (self.levels[i], self.levels[i])

    def area_below(self):
        return sum(self.columns)

    def scaled(self, f):
        return Polyline(self.box.scaled(f), tuple(y * f for y in self.levels),
                        tuple(a * f for a in self.cuts))

    def encode(self):
        return (self.levels, self.cuts)

    def __repr__(self):
        return f"Polyline({self.breakpoints})"


def polyline_below(p_low: Polyline, p_high: Polyline) -> bool:
    """True iff p_low lies below p_high at every abscissa.

    At each x both polylines occupy a closed vertical interval (a point away
    from the cuts). p_low is below when its interval's lower and upper ends are
    each no higher than p_high's. Away from cuts that is a level comparison, and
    at a cut it follows from the two adjacent columns, so the test is
    column-wise. Two polylines running along the same vertical piece in
    opposite directions are therefore comparable, and every polyline is below
    itself.
    """
    if p_low.box != p_high.box:
        raise GeometryError("polylines from different boxes")
    return all(a <= b for a, b in zip(p_low.columns, p_high.columns))


def container_between(p_low: Polyline, p_high: Polyline) -> Region:
    """Cells whose closed square lies on or above p_low and on or below p_high."""
    if not polyline_below(p_low, p_high):
        raise GeometryError("lower polyline is not below the upper one")
    box = p_low.box
    m = 0
    for cx, (a, b) in enumerate(zip(p_low.columns, p_high.columns)):
        for cy in range(a, b):
            m |= 1 << (cy * box.n1 + cx)
    return Region(box, m)


def segment_crosses(seg, q: PlacedRect) -> bool:
    """Does the closed axis-parallel segment meet the open interior of q?"""
    (x0, y0), (x1, y1) = seg
    xa, xb = min(x0, x1), max(x0, x1)
    ya, yb = min(y0, y1), max(y0, y1)
    if ya == yb:
        return q.y < ya < q.y2 and xa < q.x2 and xb > q.x
    if xa == xb:
        return q.x < xa < q.x2 and ya < q.y2 and yb > q.y
    raise GeometryError("segment is not axis-parallel")


def polyline_crosses(p: Polyline, q: PlacedRect) -> bool:
    """True iff p meets the open interior of q."""
    return any(segment_crosses(s, q) for s in p.segments() if s[0] != s[1])

