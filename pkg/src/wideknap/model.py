"""Instances, packings, rounding, reduce_k, validation, JSON I/O and generators."""
from __future__ import annotations

import json
import math
from collections import defaultdict
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .geometry import Box, PlacedRect, Rect, Region, overlaps

__all__ = [
    "Item", "Instance", "Packing", "RoundingParams", "ValidationReport", "Profile",
    "aspect_ratio", "round_rect", "reduce_k", "validate_packing", "validate_in_region",
    "generate_instance", "instance_to_json", "instance_from_json",
    "packing_to_json", "packing_from_json", "generate_packing",
]


@dataclass(frozen=True, slots=True)
class Item:
    id: int
    rect: Rect
    color: int | None = None

    @property
    def w(self):
        return self.rect.w

    @property
    def h(self):
        return self.rect.h

    def colored(self, c):
        return replace(self, color=c)


@dataclass(frozen=True)
class Instance:
    box: Box
    items: tuple
    k: int

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))
        ids = [it.id for it in self.items]
        if len(set(ids)) != len(ids):
            raise ValueError("item ids must be unique")
        if not 1 <= self.k <= len(self.items):
            raise ValueError(f"k={self.k} must lie in [1, {len(self.items)}]")

    @property
    def by_id(self):
        return {it.id: it for it in self.items}

    def is_wide(self):
        return all(it.rect.is_wide for it in self.items)

    def with_k(self, k):
        return Instance(self.box, self.items, k)


@dataclass(frozen=True)
class Packing:
    """Placements as ``(item id, PlacedRect)`` pairs."""
    placements: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "placements", tuple(self.placements))

    def __len__(self):
        return len(self.placements)

    def __iter__(self):
        return iter(self.placements)

    @property
    def ids(self):
        return [i for i, _ in self.placements]

    def as_dict(self):
        return dict(self.placements)


@dataclass(frozen=True, slots=True)
class RoundingParams:
    ell: int
    c: int

    @classmethod
    def for_box(cls, ell, n1):
        if ell < 1 or int(ell) != ell:
            raise ValueError(f"ell must be a positive integer, got {ell}")
        ell = int(ell)
        return cls(ell, max(1, ell * ell // n1))


def aspect_ratio(b: Box) -> Fraction:
    return max(Fraction(b.n1, b.n2), Fraction(b.n2, b.n1))


def round_rect(r: Rect, p: RoundingParams) -> Rect:
    return Rect(p.c * -(-r.w // p.c), r.h)


def reduce_k(items, k):
    """Keep the k lowest items of every (width, color) class, ties by id."""
    classes = defaultdict(list)
    for it in items:
        if it.color is None:
            raise ValueError(f"item {it.id} has no color")
        classes[(it.w, it.color)].append(it)
    out = []
    for key in sorted(classes):
        out.extend(sorted(classes[key], key=lambda it: (it.h, it.id))[:k])
    return out


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violation: str | None = None

    def __bool__(self):
        return self.ok

    def to_dict(self):
        return {"ok": self.ok, "violation": self.violation}


def validate_in_region(placements, region: Region, dims=None) -> ValidationReport:
    """Containment in a cell region plus pairwise non-overlap.

    ``dims`` optionally maps ids to the Rect each placement must have.
    """
    seen = set()
    placed = []
    for iid, q in placements:
        if iid in seen:
            return ValidationReport(False, f"duplicate id {iid}")
        seen.add(iid)
        if dims is not None:
            if iid not in dims:
                return ValidationReport(False, f"unknown id {iid}")
            if dims[iid] != q.rect:
                return ValidationReport(False, f"id {iid} placed with wrong dimensions")
        if not region.box.contains(q):
            return ValidationReport(False, f"id {iid} out of box")
        if not region.contains(q):
            return ValidationReport(False, f"id {iid} leaves the region")
        placed.append((iid, q))
    for i, (a, qa) in enumerate(placed):
        for b, qb in placed[i + 1:]:
            if overlaps(qa, qb):
                return ValidationReport(False, f"ids {a} and {b} overlap")
    return ValidationReport(True)


def validate_packing(inst: Instance, pk: Packing) -> ValidationReport:
    dims = {it.id: it.rect for it in inst.items}
    return validate_in_region(pk.placements, Region.full(inst.box), dims)


# --- generators -----------------------------------------------------------

@dataclass(frozen=True)
class Profile:
    """Parameters for random instances. Ranges are inclusive."""
    box_w: tuple = (2, 6)
    box_h: tuple = (2, 6)
    n_items: tuple = (1, 6)
    wide: bool = True
    width: tuple = (1, None)
    max_aspect: Fraction | None = None
    k: int | None = None

    def check(self):
        for name in ("box_w", "box_h", "n_items"):
            lo, hi = getattr(self, name)
            if lo < 1 or hi < lo:
                raise ValueError(f"bad range {name}={lo, hi}")
        wlo, whi = self.width
        if wlo < 1 or (whi is not None and whi < wlo):
            raise ValueError(f"bad width range {self.width}")
        if wlo > self.box_w[1]:
            raise ValueError(f"minimum width {wlo} exceeds every box width")
        if self.max_aspect is not None and self.max_aspect < 1:
            raise ValueError("max_aspect must be >= 1")
        if self.k is not None and self.k > self.n_items[1]:
            raise ValueError("k larger than the item count")

    @classmethod
    def from_dict(cls, d):
        kw = {}
        for key in ("box_w", "box_h", "n_items", "width"):
            if key in d:
                kw[key] = tuple(d[key])
        for key in ("wide", "k"):
            if key in d:
                kw[key] = d[key]
        if d.get("max_aspect") is not None:
            kw["max_aspect"] = Fraction(str(d["max_aspect"]))
        return cls(**kw)

    def to_dict(self):
        return {
            "box_w": list(self.box_w), "box_h": list(self.box_h),
            "n_items": list(self.n_items), "wide": self.wide,
            "width": list(self.width),
            "max_aspect": None if self.max_aspect is None else str(self.max_aspect),
            "k": self.k,
        }


def generate_instance(seed, profile: Profile = Profile()) -> Instance:
    profile.check()
    rng = np.random.default_rng(seed)
    wlo = profile.width[0]
    while True:
        n1 = int(rng.integers(max(profile.box_w[0], wlo), profile.box_w[1] + 1))
        n2 = int(rng.integers(profile.box_h[0], profile.box_h[1] + 1))
        if profile.max_aspect is None or aspect_ratio(Box(n1, n2)) <= profile.max_aspect:
            break
    whi = n1 if profile.width[1] is None else min(profile.width[1], n1)
    n = int(rng.integers(profile.n_items[0], profile.n_items[1] + 1))
    items = []
    for i in range(n):
        w = int(rng.integers(wlo, whi + 1))
        hcap = min(w, n2) if profile.wide else n2
        h = int(rng.integers(1, hcap + 1))
        items.append(Item(i, Rect(w, h)))
    k = profile.k if profile.k is not None else int(rng.integers(1, n + 1))
    return Instance(Box(n1, n2), items, min(k, n))


# --- JSON -----------------------------------------------------------------

def instance_to_json(inst: Instance) -> str:
    return json.dumps({
        "box": {"w": inst.box.n1, "h": inst.box.n2},
        "k": inst.k,
        "items": [{"id": it.id, "w": it.w, "h": it.h} for it in inst.items],
    }, indent=2)


def instance_from_json(text) -> Instance:
    d = json.loads(text) if isinstance(text, str) else text
    box = Box(int(d["box"]["w"]), int(d["box"]["h"]))
    items = [Item(int(e["id"]), Rect(int(e["w"]), int(e["h"]))) for e in d["items"]]
    return Instance(box, items, int(d["k"]))


def packing_to_json(pk: Packing) -> str:
    return json.dumps({"placements": [{"id": i, "x": q.x, "y": q.y} for i, q in pk]}, indent=2)


def packing_from_json(text, inst: Instance) -> Packing:
    """Read placements; dimensions come from the instance. Unknown ids raise KeyError."""
    d = json.loads(text) if isinstance(text, str) else text
    by_id = inst.by_id
    out = []
    for e in d["placements"]:
        iid = int(e["id"])
        if iid not in by_id:
            raise KeyError(f"placement refers to unknown id {iid}")
        out.append((iid, PlacedRect(by_id[iid].rect, int(e["x"]), int(e["y"]))))
    return Packing(out)


def ceil_frac(q) -> int:
    return math.ceil(Fraction(q))


def generate_packing(seed, box: Box, n, min_width=1, max_width=None, attempts=400):
    """Up to n wide items dropped at random free spots of the box.

    Returns (instance, packing) where the instance holds exactly the placed items
    and k equals their count. Fewer than n items are placed when the box fills up.
    """
    rng = np.random.default_rng(seed)
    max_width = box.n1 if max_width is None else min(max_width, box.n1)
    if min_width > max_width:
        raise ValueError("min_width exceeds the box width")
    placed = []
    for _ in range(attempts):
        if len(placed) == n:
            break
        w = int(rng.integers(min_width, max_width + 1))
        h = int(rng.integers(1, min(w, box.n2) + 1))
        x = int(rng.integers(0, box.n1 - w + 1))
        y = int(rng.integers(0, box.n2 - h + 1))
        q = PlacedRect(Rect(w, h), x, y)
        if not any(overlaps(q, o) for o in placed):
            placed.append(q)
    if not placed:
        raise ValueError("could not place a single item")
    items = [Item(i, q.rect) for i, q in enumerate(placed)]
    return Instance(box, items, len(items)), Packing(list(enumerate(placed)))
