"""Line-of-sight computation tests.

Areas are checked against a ray-casting oracle and membership against a
per-point segment-crossing oracle, both implemented here independently
of the library's sweep.
"""

import math

import numpy as np
import pytest
import shapely.geometry as sgeom

from hexcover.geometry import (
    GeometryError,
    Point,
    Polygon,
    PolygonSet,
    area,
    boolean,
    rectangle,
    regular_ngon,
)
from hexcover.hexgrid import hexagon_at
from hexcover.oracle import coverage_report
from hexcover.region import ObstacleClass, Region, sensable_land
from hexcover.visibility import (
    PlacementError,
    SegmentSet,
    opaque_segments,
    rsp,
    visibility_polygon,
)

from geomtools import polygon_contains, segment_hits_polygon


def ray_cast_area(x, segments, radius, n_rays=10000):
    """Visible area via dense ray casting against segments and the
    true circular horizon."""
    th = (np.arange(n_rays) + 0.5) * 2.0 * np.pi / n_rays
    d = np.stack([np.cos(th), np.sin(th)], axis=1)
    hits = np.full(n_rays, float(radius))
    for (p, q) in segments:
        ex, ey = q[0] - p[0], q[1] - p[1]
        wx, wy = p[0] - x[0], p[1] - x[1]
        den = d[:, 0] * ey - d[:, 1] * ex
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (wx * ey - wy * ex) / den
            s = (wx * d[:, 1] - wy * d[:, 0]) / den
        ok = (np.abs(den) > 1e-15) & (t > 1e-12) & (s >= -1e-9) & (s <= 1 + 1e-9)
        hits = np.where(ok & (t < hits), t, hits)
    return 0.5 * float(np.sum(hits**2)) * (2.0 * np.pi / n_rays)


def make_region(obstacles, half=5.0, r_s=1.0):
    return Region(rectangle(-half, -half, half, half), tuple(obstacles), r_s=r_s)


WALL = rectangle(-3.0, 0.5, 3.0, 0.52)


class TestVisibilityPolygon:
    def test_obstacle_free_matches_closed_form(self):
        vis = visibility_polygon(Point(0, 0), SegmentSet(()), 1.0, ngon=64)
        got = area(PolygonSet.of(vis))
        want = 32.0 * math.sin(2.0 * math.pi / 64.0)
        assert got == pytest.approx(want, rel=1e-6)

    def test_closed_form_scales_with_radius_and_ngon(self):
        for n, r in ((12, 1.0), (48, 2.5), (96, 0.4)):
            vis = visibility_polygon(Point(1, -2), SegmentSet(()), r, ngon=n)
            want = 0.5 * n * math.sin(2.0 * math.pi / n) * r * r
            assert area(PolygonSet.of(vis)) == pytest.approx(want, rel=1e-6)

    def test_long_wall_matches_ray_oracle(self):
        region = make_region([(WALL, ObstacleClass.OPAQUE)])
        segs = opaque_segments(region, Point(0, 0), 1.0)
        vis = visibility_polygon(Point(0, 0), segs, 1.0, ngon=64)
        got = area(PolygonSet.of(vis))
        want = ray_cast_area((0.0, 0.0), segs.segments, 1.0)
        assert got == pytest.approx(want, rel=0.01)

    def test_anchor_on_wall_edge(self):
        region = make_region([(WALL, ObstacleClass.OPAQUE)])
        segs = opaque_segments(region, Point(0.0, 0.5), 1.0)
        vis = visibility_polygon(Point(0.0, 0.5), segs, 1.0, ngon=64)
        got = area(PolygonSet.of(vis))
        want = ray_cast_area((0.0, 0.5), segs.segments, 1.0)
        assert got == pytest.approx(want, rel=0.01)
        # roughly the half disk below the wall
        assert got == pytest.approx(math.pi / 2.0, rel=0.05)

    def test_shadow_boundary_position(self):
        # block corner at (0.2, 0.2): its shadow edge is the ray through
        # it; check points just either side at radius 0.8
        blk = rectangle(0.2, -5.0, 0.6, 0.2)
        region = make_region([(blk, ObstacleClass.OPAQUE)], half=6.0)
        segs = opaque_segments(region, Point(0, 0), 1.0)
        vis = visibility_polygon(Point(0, 0), segs, 1.0, ngon=256)
        g = sgeom.Polygon(vis.outer, vis.holes)
        th = math.atan2(0.2, 0.2)
        for dth, want in ((0.01, True), (-0.01, False)):
            p = sgeom.Point(0.8 * math.cos(th + dth), 0.8 * math.sin(th + dth))
            assert g.covers(p) is want

    def test_inside_obstacle_raises(self):
        region = make_region([(WALL, ObstacleClass.OPAQUE)])
        segs = opaque_segments(region, Point(0.0, 0.51), 1.0)
        with pytest.raises(PlacementError):
            visibility_polygon(Point(0.0, 0.51), segs, 1.0)

    def test_parameter_validation(self):
        with pytest.raises(GeometryError):
            visibility_polygon(Point(0, 0), SegmentSet(()), 0.0)
        with pytest.raises(GeometryError):
            visibility_polygon(Point(0, 0), SegmentSet(()), 1.0, ngon=8)
        with pytest.raises(GeometryError):
            SegmentSet((((0.0, 0.0), (0.0, 0.0)),))


class TestOpaqueSegments:
    def test_keeps_only_edges_in_range(self):
        near = rectangle(0.3, -0.2, 0.7, 0.2)
        far = rectangle(3.0, 3.0, 4.0, 4.0)
        region = make_region(
            [(near, ObstacleClass.OPAQUE), (far, ObstacleClass.OPAQUE)]
        )
        segs = opaque_segments(region, Point(0, 0), 1.0)
        assert len(segs) == 4  # all four near edges, no far ones

    def test_transparent_obstacles_ignored(self):
        lake = rectangle(0.3, -0.2, 0.7, 0.2)
        region = make_region([(lake, ObstacleClass.TRANSPARENT)])
        segs = opaque_segments(region, Point(0, 0), 1.0)
        assert len(segs) == 0

    def test_hole_edges_included(self):
        ring = rectangle(-2.0, -2.0, 2.0, 2.0)
        courtyard = Polygon(
            ring.outer,
            (tuple(reversed(rectangle(-0.5, -0.5, 0.5, 0.5).outer)),),
        )
        region = make_region([(courtyard, ObstacleClass.OPAQUE)], half=6.0)
        segs = opaque_segments(region, Point(0, 0), 1.0)
        assert len(segs) == 4  # courtyard walls; outer ring is out of range


class TestRsp:
    def test_transparent_only_equals_clipped_ngon(self):
        lake = rectangle(-0.5, -0.5, 0.5, 2.0)
        region = make_region([(lake, ObstacleClass.TRANSPARENT)])
        r = rsp(Point(-1.0, 0.0), region, 64)
        direct = boolean(
            "intersection",
            PolygonSet.of(regular_ngon(Point(-1.0, 0.0), 1.0, 64)),
            sensable_land(region),
            min_area=0.0,
        )
        assert r.covered_area == pytest.approx(area(direct), abs=1e-12)

    def test_signal_passes_over_narrow_lake(self):
        # land strip beyond the lake stays covered: two pieces
        lake = rectangle(-0.2, -3.0, 0.2, 3.0)
        region = make_region([(lake, ObstacleClass.TRANSPARENT)])
        r = rsp(Point(-0.5, 0.0), region, 64)
        assert len(r.cover.polygons) == 2
        assert r.cover.geom.covers(sgeom.Point(0.4, 0.0))
        assert not r.cover.geom.covers(sgeom.Point(0.0, 0.0))
        assert r.polygon is not None  # anchor piece resolvable

    def test_opaque_wall_blocks_what_a_lake_would_not(self):
        strip = rectangle(-0.2, -3.0, 0.2, 3.0)
        as_lake = make_region([(strip, ObstacleClass.TRANSPARENT)])
        as_wall = make_region([(strip, ObstacleClass.OPAQUE)])
        r_lake = rsp(Point(-0.5, 0.0), as_lake, 64)
        r_wall = rsp(Point(-0.5, 0.0), as_wall, 64)
        assert not r_wall.cover.geom.covers(sgeom.Point(0.4, 0.0))
        assert r_wall.covered_area < r_lake.covered_area

    def test_membership_matches_segment_oracle(self):
        blocks = [rectangle(0.2, -0.3, 0.6, 0.3), rectangle(-0.9, 0.4, -0.2, 0.9)]
        region = make_region([(b, ObstacleClass.OPAQUE) for b in blocks])
        x = Point(-0.3, 0.0)
        r = rsp(x, region, 64)
        band_lo = math.cos(math.pi / 64.0) - 1e-6
        rng = np.random.default_rng(20)
        checked = 0
        cover_boundary = r.cover.geom.boundary
        while checked < 1000:
            px, py = rng.uniform(-1.4, 1.4, size=2) + (x.x, x.y)
            d = math.hypot(px - x.x, py - x.y)
            if band_lo <= d <= 1.0 + 1e-6:
                continue  # chord band of the range n-gon
            if cover_boundary.distance(sgeom.Point(px, py)) <= 1e-6:
                continue  # on a shadow line or wall face, ties possible
            claimed = r.cover.geom.covers(sgeom.Point(px, py))
            visible = d <= 1.0 and not any(
                segment_hits_polygon((x.x, x.y), (px, py), b.outer)
                for b in blocks
            )
            on_land = abs(px) <= 5 and abs(py) <= 5 and not any(
                polygon_contains(b.outer, (), np.array([px]), np.array([py]))[0]
                for b in blocks
            )
            assert claimed == (visible and on_land), (px, py)
            checked += 1

    def test_star_shape_at_every_vertex(self):
        blocks = [rectangle(0.2, -0.3, 0.6, 0.3), rectangle(-0.9, 0.4, -0.2, 0.9)]
        region = make_region([(b, ObstacleClass.OPAQUE) for b in blocks])
        x = Point(-0.3, 0.0)
        r = rsp(x, region, 64)
        gblocks = [sgeom.Polygon(b.outer) for b in blocks]
        for piece in r.cover.polygons:
            for ring in (piece.outer, *piece.holes):
                for v in ring:
                    seg = sgeom.LineString([(x.x, x.y), v])
                    depth = max(seg.intersection(g).length for g in gblocks)
                    assert depth <= 1e-6

    def test_ngon_refinement_nests(self):
        blocks = [rectangle(0.2, -0.3, 0.6, 0.3)]
        region = make_region([(b, ObstacleClass.OPAQUE) for b in blocks])
        coarse = rsp(Point(-0.3, 0.0), region, 16)
        fine = rsp(Point(-0.3, 0.0), region, 32)
        missing = boolean("difference", coarse.cover, fine.cover, min_area=0.0)
        assert area(missing) <= 1e-6

    def test_hexagon_fits_aligned_ngon(self):
        # a multiple-of-6 n-gon phased to the tessellation contains the
        # cell exactly; the opaque planner counts on this
        region = make_region([])
        for orient in (0.0, 0.3, math.pi / 6.0):
            r = rsp(Point(0, 0), region, 66, phase=orient)
            hexp = hexagon_at(Point(0, 0), 1.0, orient).polygon
            gap = boolean("difference", PolygonSet.of(hexp), r.cover, min_area=0.0)
            assert area(gap) == 0.0

    def test_anchor_inside_obstacle_raises(self):
        blk = rectangle(0.2, -0.3, 0.6, 0.3)
        for cls in (ObstacleClass.OPAQUE, ObstacleClass.TRANSPARENT):
            region = make_region([(blk, cls)])
            with pytest.raises(PlacementError):
                rsp(Point(0.4, 0.0), region, 64)

    def test_anchor_on_shore_allowed(self):
        blk = rectangle(0.2, -0.3, 0.6, 0.3)
        region = make_region([(blk, ObstacleClass.OPAQUE)])
        r = rsp(Point(0.2, 0.0), region, 64)
        assert r.covered_area > 1.0  # more than the open half disk

    def test_ngon_floor(self):
        region = make_region([])
        with pytest.raises(GeometryError):
            rsp(Point(0, 0), region, 11)

    def test_agrees_with_coverage_oracle_fraction(self):
        # single sensor: oracle-covered fraction equals rsp area / land
        # area within sampling noise
        blk = rectangle(0.2, -1.5, 0.5, 1.5)
        region = Region(
            rectangle(-1.2, -1.2, 1.2, 1.2),
            ((blk, ObstacleClass.OPAQUE),),
            r_s=1.0,
        )
        x = Point(-0.2, 0.0)
        r = rsp(x, region, 256)
        land_area = area(sensable_land(region))
        rep = coverage_report(region, [x], mode="opaque", density=40000.0, seed=9)
        assert rep.fraction == pytest.approx(r.covered_area / land_area, abs=0.01)
