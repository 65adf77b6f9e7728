import json
from fractions import Fraction

import pytest

from helpers import check_repack, repack_triple
from wideknap.conflict import S, T, build_conflict_graph
from wideknap.errors import GeometryError, SeparatorError
from wideknap.geometry import Box, PlacedRect, Polyline, Region, polyline_below, shift_zone
from wideknap.model import Item, Packing, RoundingParams, generate_packing, validate_in_region
from wideknap.structure import (
    StructuredPacking, path_polylines, repack_round, repack_shift, structural_transform,
    structured_from_json, structured_to_json, verify_structured,
)

R = PlacedRect.of
F = Fraction


def _pts(p):
    return [(F(x, 2), F(y, 2)) for x, y in p.breakpoints]


def test_empty_path_is_flat():
    cg = build_conflict_graph(Packing(()), Box(6, 4))
    # S and T never get an edge, so feed the witness directly
    from wideknap.conflict import Segment
    cg.witness[S, T] = Segment(0, 6, F(3, 2))
    pp = path_polylines([S, T], cg)
    flat = Polyline.horizontal(Box(12, 8), 3)
    assert pp.top == pp.bottom == pp.middle == flat


def test_single_rect_path():
    cg = build_conflict_graph(Packing([(0, R(2, 2, 4, 2))]), Box(8, 6))
    pp = path_polylines([S, 0, T], cg)
    assert pp.segments[0].y == 3 and pp.segments[1].y == 3
    assert pp.middle.ys_at(2 * 4) == (6, 6)             # passes (4, 3), the center
    assert _pts(pp.bottom) == [(0, 3), (2, 3), (2, 2), (6, 2), (6, 3), (8, 3)]
    assert _pts(pp.top) == [(0, 3), (2, 3), (2, 4), (6, 4), (6, 3), (8, 3)]


FIVE = {1: R(5, 6, 6, 8), 2: R(20, 6, 10, 12), 3: R(30, 2, 8, 10), 4: R(38, 9, 8, 7), 5: R(46, 6, 8, 8)}


def test_five_rectangle_figure():
    cg = build_conflict_graph(Packing(list(FIVE.items())), Box(60, 20))
    pp = path_polylines([S, 1, 2, 3, 4, 5, T], cg, levels=[10, 10, 7, 10, 11, 10])
    assert _pts(pp.top) == [(0, 10), (5, 10), (5, 14), (11, 14), (11, 10), (20, 10), (20, 18),
                            (30, 18), (30, 12), (38, 12), (38, 16), (46, 16), (46, 14),
                            (54, 14), (54, 10), (60, 10)]
    assert _pts(pp.bottom) == [(0, 10), (5, 10), (5, 6), (11, 6), (11, 10), (20, 10), (20, 6),
                               (30, 6), (30, 2), (38, 2), (38, 9), (46, 9), (46, 6),
                               (54, 6), (54, 10), (60, 10)]
    assert _pts(pp.middle) == [(0, 10), (25, 10), (25, 7), (34, 7), (34, 10), (42, 10),
                               (42, 11), (50, 11), (50, 10), (60, 10)]
    assert all(c <= 4 * 5 + 1 for c in pp.complexities().values())
    assert polyline_below(pp.bottom, pp.middle) and polyline_below(pp.middle, pp.top)


def test_path_polylines_errors():
    cg = build_conflict_graph(Packing(list(FIVE.items())), Box(60, 20))
    with pytest.raises(GeometryError):
        path_polylines([S, 1, 3, T], cg)                # 1 and 3 do not see each other
    with pytest.raises(GeometryError):
        path_polylines([S, 1, 2, 3, 4, 5, T], cg, levels=[10, 10, 16, 10, 11, 10])


def test_repack_shift_examples():
    box = Box(10, 2)
    pk = Packing([(0, R(4, 0, 4, 2))])
    zone = Region.from_rect(box, R(4, 0, 4, 2))
    assert len(repack_shift(pk, zone, 2, {0})) == 0
    # two corridors; the lower one is the separator, the upper one must also go
    box = Box(8, 4)
    two = Packing([(0, R(0, 0, 4, 1)), (1, R(4, 0, 4, 1)), (2, R(0, 2, 4, 1)), (3, R(4, 2, 4, 1))])
    zone = Region.full(box)
    with pytest.raises(SeparatorError):
        repack_shift(two, zone, 1, {0})
    out = repack_shift(two, zone, 1, {0, 3})
    assert dict(out) == {1: R(3, 0, 4, 1), 2: R(0, 2, 4, 1)}
    assert validate_in_region(out.placements, shift_zone(zone, 1, "negative"))


def test_repack_shift_width_precondition():
    with pytest.raises(GeometryError):
        repack_shift(Packing([(0, R(0, 0, 3, 1))]), Region.full(Box(8, 2)), 2, {0})


def test_repack_round_examples():
    box = Box(16, 2)
    params = RoundingParams.for_box(4, 16)
    zone = Region.from_rect(box, R(8, 0, 4, 2)) | Region.from_rect(box, R(0, 0, 12, 2))
    assert len(repack_round(Packing(()), zone, params)) == 0
    out = repack_round(Packing([(0, R(4, 0, 8, 2))]), zone, params)
    assert dict(out)[0] == R(5, 0, 8, 2)
    box = Box(16, 1)
    # N1 = 16, x = 8, w = 8: the zone reaches the right margin
    with pytest.raises(GeometryError):
        repack_round(Packing([(0, R(8, 0, 8, 1))]), Region.full(box), RoundingParams.for_box(4, 16))
    box = Box(24, 1)
    pk = Packing([(0, R(0, 0, 8, 1)), (1, R(8, 0, 8, 1))])
    zone = Region.from_rect(box, R(0, 0, 16, 1))
    out = dict(repack_round(pk, zone, RoundingParams.for_box(4, 24)))
    assert (out[0].x, out[1].x) == (0, 9)
    assert validate_in_region(list(out.items()), shift_zone(zone, 4, "positive"))


def test_repack_triples():
    for seed in range(60):
        assert check_repack(*repack_triple(seed)) == [], seed


def test_round_gap_inequality():
    # floor(lam*x1) + rounded(w1) <= floor(lam*x2) whenever x1 + w1 <= x2
    from wideknap.model import round_rect
    from wideknap.geometry import Rect
    for n1 in range(8, 40):
        for ell in range(1, n1 // 2 + 1):
            p = RoundingParams.for_box(ell, n1)
            lam = F(n1 + ell, n1)
            for w in range(2 * ell, n1 + 1):
                rw = round_rect(Rect(w, 1), p).w
                for x1 in range(0, n1 - w + 1):
                    x2 = x1 + w
                    assert int(lam * x1) + rw <= int(lam * x2)


def test_transform_examples():
    sp = structural_transform(Packing(()), F(1, 2), 1, Box(4, 4))
    assert len(sp.packing) == 0 and verify_structured(sp)["ok"]
    pk = Packing([(0, R(0, 0, 2, 1)), (1, R(2, 2, 2, 1))])
    sp = structural_transform(pk, 1, 1, Box(4, 4))
    assert sp.packing == pk
    assert verify_structured(sp)["ok"]


def test_transform_random_suite():
    for seed in range(40):
        box = Box(6 + seed % 7, 6 + seed % 5)
        ell = 1 + seed % 2
        inst, pk = generate_packing(seed, box, 8, 2 * ell)
        for eps in (F(1, 2), F(1, 3)):
            sp = structural_transform(pk, eps, ell, box)
            rep = verify_structured(sp, inst.items, k=len(pk))
            assert rep["ok"], (seed, eps, rep)
            assert not sp.diagnostics["complexity"] and not sp.diagnostics["crossing"]


def test_verify_flags_heavy_region():
    # eps = 1: light bound 2. Three 11-wide items in a region whose bottom row
    # loses column 0; rounded to width 12 (c = 2) only two rows can take them.
    box = Box(12, 3)
    box2 = box.scaled(2)
    low = Polyline.from_points(box2, [(0, 2), (2, 2), (2, 0), (24, 0)])
    items = [Item(i, R(1, i, 11, 1).rect) for i in range(3)]
    pk = Packing([(i, R(1, i, 11, 1)) for i in range(3)])
    sp = StructuredPacking(box, pk, [low], {0: 1, 1: 1, 2: 1}, F(1), 5)
    rep = verify_structured(sp, items)
    assert not rep["ok"]
    assert any(v.startswith("region 1") for v in rep["violations"])


def test_verify_catches_crossing_and_size():
    box = Box(4, 4)
    pk = Packing([(0, R(0, 1, 4, 2))])
    cut = Polyline.horizontal(box.scaled(2), 4)
    sp = StructuredPacking(box, pk, [cut], {0: 0}, F(1, 2), 1)
    rep = verify_structured(sp, k=1)
    assert any("crosses" in v for v in rep["violations"])
    sp = StructuredPacking(box, Packing(()), [], {}, F(1, 4), 1)
    assert not verify_structured(sp, k=4)["ok"]


def test_json_roundtrip():
    inst, pk = generate_packing(5, Box(10, 8), 7, 2)
    sp = structural_transform(pk, F(1, 2), 1, inst.box)
    back = structured_from_json(structured_to_json(sp))
    assert back.packing == sp.packing and back.polylines == sp.polylines
    assert back.region_of == sp.region_of and back.rounded == sp.rounded
    assert json.loads(structured_to_json(sp))["grid_scale"] == 2


def test_transform_dense_packings_hit_heavy_regions():
    heavy = 0
    for seed in range(60):
        inst, pk = generate_packing(seed, Box(12, 12), 20, 2, 5)
        for eps in (F(1, 2), F(1)):
            sp = structural_transform(pk, eps, 1, inst.box)
            heavy += bool(sp.diagnostics["heavy"])
            rep = verify_structured(sp, inst.items, k=len(pk))
            assert rep["ok"], (seed, eps, rep)
            for i in sp.diagnostics["heavy"]:
                kept = {v for v, r in sp.region_of.items() if r == i}
                assert set(sp.rounded[i].ids) == kept
    assert heavy > 50
