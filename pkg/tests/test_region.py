import json

import numpy as np
import pytest

from hexcover.geometry import Point, Polygon, area, rectangle, regular_ngon
from hexcover.region import (
    ObstacleClass,
    Region,
    RegionError,
    accessible_land,
    obstacle_union,
    parse_region,
    region_document,
    sensable_land,
)

from geomtools import grid_area, pset_rings


def square_doc(**extra):
    doc = {
        "r_s": 1.0,
        "boundary": [[0, 0], [10, 0], [10, 10], [0, 10]],
        "obstacles": [],
    }
    doc.update(extra)
    return doc


class TestParse:
    def test_minimal_document(self):
        r = parse_region(json.dumps(square_doc()))
        assert len(r.obstacles) == 0
        assert r.r_s == 1.0
        assert area(accessible_land(r)) == pytest.approx(100.0)

    def test_one_transparent_lake(self):
        doc = square_doc(
            obstacles=[{"class": "transparent", "ring": [[2, 2], [5, 2], [5, 5], [2, 5]]}]
        )
        r = parse_region(json.dumps(doc))
        assert len(r.obstacles) == 1
        assert r.obstacles[0][1] is ObstacleClass.TRANSPARENT
        assert not r.has_opaque

    def test_self_intersecting_obstacle_named(self):
        doc = square_doc(
            obstacles=[{"class": "opaque", "ring": [[1, 1], [3, 3], [3, 1], [1, 3]]}]
        )
        with pytest.raises(RegionError, match="obstacle 0"):
            parse_region(json.dumps(doc))

    def test_accepts_decoded_mapping(self):
        r = parse_region(square_doc())
        assert r.r_s == 1.0

    def test_missing_fields(self):
        with pytest.raises(RegionError, match="r_s"):
            parse_region({"boundary": [[0, 0], [1, 0], [1, 1]]})
        with pytest.raises(RegionError, match="boundary"):
            parse_region({"r_s": 1})

    def test_bad_class(self):
        doc = square_doc(obstacles=[{"class": "soggy", "ring": [[1, 1], [2, 1], [2, 2]]}])
        with pytest.raises(RegionError, match="class"):
            parse_region(doc)

    def test_not_json(self):
        with pytest.raises(RegionError, match="JSON"):
            parse_region("{nope")

    def test_obstacle_with_island_hole(self):
        doc = square_doc(
            obstacles=[
                {
                    "class": "transparent",
                    "ring": [[1, 1], [9, 1], [9, 9], [1, 9]],
                    "holes": [[[4, 4], [6, 4], [6, 6], [4, 6]]],
                }
            ]
        )
        r = parse_region(doc)
        # island stays land: 100 - (64 - 4)
        assert area(accessible_land(r)) == pytest.approx(40.0)

    def test_round_trip(self):
        doc = square_doc(
            obstacles=[{"class": "opaque", "ring": [[2, 2], [5, 2], [5, 5], [2, 5]]}]
        )
        r1 = parse_region(doc)
        r2 = parse_region(region_document(r1))
        assert r1 == r2


class TestValidation:
    def test_r_s_positive(self):
        with pytest.raises(RegionError, match="radius"):
            Region(rectangle(0, 0, 1, 1), (), r_s=0.0)

    def test_obstacle_outside_boundary_rejected(self):
        ob = (rectangle(20, 20, 21, 21), ObstacleClass.OPAQUE)
        with pytest.raises(RegionError, match="obstacle 0"):
            Region(rectangle(0, 0, 10, 10), (ob,), r_s=1.0)

    def test_obstacles_may_overlap_each_other(self):
        obs = (
            (rectangle(1, 1, 4, 4), ObstacleClass.TRANSPARENT),
            (rectangle(3, 3, 6, 6), ObstacleClass.TRANSPARENT),
        )
        r = Region(rectangle(0, 0, 10, 10), obs, r_s=1.0)
        # 9 + 9 - 1 overlap
        assert area(obstacle_union(r)) == pytest.approx(17.0)
        assert area(accessible_land(r)) == pytest.approx(83.0)

    def test_obstacle_clipped_at_boundary(self):
        obs = ((rectangle(8, 8, 12, 12), ObstacleClass.OPAQUE),)
        r = Region(rectangle(0, 0, 10, 10), obs, r_s=1.0)
        assert area(obstacle_union(r)) == pytest.approx(4.0)
        assert area(accessible_land(r)) == pytest.approx(96.0)

    def test_region_hashable(self):
        r = Region(rectangle(0, 0, 10, 10), (), r_s=2.0)
        assert hash(r) == hash(Region(rectangle(0, 0, 10, 10), (), r_s=2.0))


class TestLand:
    def test_simple_subtraction(self):
        obs = ((rectangle(2, 2, 5, 2 + 10 / 3), ObstacleClass.TRANSPARENT),)
        r = Region(rectangle(0, 0, 10, 10), obs, r_s=1.0)
        assert area(accessible_land(r)) == pytest.approx(90.0)

    def test_obstacles_covering_everything(self):
        obs = ((rectangle(-1, -1, 11, 11), ObstacleClass.OPAQUE),)
        r = Region(rectangle(0, 0, 10, 10), obs, r_s=1.0)
        land = accessible_land(r)
        assert land.is_empty
        assert area(land) == 0.0

    def test_overlapping_obstacles_vs_sampling(self):
        obs = (
            (regular_ngon(Point(3, 3), 2.5, 7, phase=0.3), ObstacleClass.TRANSPARENT),
            (regular_ngon(Point(5, 4), 2.0, 5, phase=1.1), ObstacleClass.OPAQUE),
        )
        r = Region(rectangle(0, 0, 10, 10), obs, r_s=1.0)
        land = accessible_land(r)
        est, se = grid_area(
            pset_rings(land), (0, 0, 10, 10), 400_000, rng=np.random.default_rng(5)
        )
        assert abs(area(land) - est) < 3 * se + 1e-2

    def test_sensable_equals_accessible(self):
        for cls in ObstacleClass:
            obs = ((rectangle(2, 2, 4, 4), cls),)
            r = Region(rectangle(0, 0, 10, 10), obs, r_s=1.0)
            assert area(sensable_land(r)) == area(accessible_land(r))

    def test_empty_obstacles_equals_boundary(self):
        r = Region(rectangle(0, 0, 7, 3), (), r_s=1.0)
        assert area(sensable_land(r)) == pytest.approx(21.0)

    def test_adding_obstacle_never_grows_land(self):
        base = Region(rectangle(0, 0, 10, 10), (), r_s=1.0)
        a0 = area(accessible_land(base))
        more = base.with_obstacles(
            [(rectangle(1, 1, 2, 2), ObstacleClass.TRANSPARENT)]
        )
        assert area(accessible_land(more)) <= a0

    def test_class_does_not_change_land(self):
        ring = rectangle(2, 2, 6, 5)
        rt = Region(rectangle(0, 0, 10, 10), ((ring, ObstacleClass.TRANSPARENT),), 1.0)
        ro = Region(rectangle(0, 0, 10, 10), ((ring, ObstacleClass.OPAQUE),), 1.0)
        assert area(accessible_land(rt)) == area(accessible_land(ro))

    def test_obstacle_union_by_class(self):
        obs = (
            (rectangle(1, 1, 3, 3), ObstacleClass.TRANSPARENT),
            (rectangle(5, 5, 8, 8), ObstacleClass.OPAQUE),
        )
        r = Region(rectangle(0, 0, 10, 10), obs, r_s=1.0)
        assert area(obstacle_union(r, ObstacleClass.TRANSPARENT)) == pytest.approx(4.0)
        assert area(obstacle_union(r, ObstacleClass.OPAQUE)) == pytest.approx(9.0)
        assert area(obstacle_union(r)) == pytest.approx(13.0)
