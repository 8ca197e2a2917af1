"""Seeded random instance generators for the end-to-end suite.

Every generator is a pure function of its seed. Obstacles are kept
pairwise disjoint and clear of the boundary by bounding-circle rejection
sampling, so instance validity never rests on boolean cleanup. Shapes
come in three kinds: star-convex blobs (lakes), convex hulls (blocks),
and a comb-shaped wall (the standard nonconvex stress case for
line-of-sight planners).
"""

from __future__ import annotations

import math

import numpy as np
import shapely

from hexcover.geometry import Point, Polygon, rectangle
from hexcover.hexgrid import generate
from hexcover.planner import classify, clusters
from hexcover.region import ObstacleClass, Region


def blob_ring(cx, cy, radius, rng, n_lo=7, n_hi=12, rough=0.45):
    """Star-convex ring around (cx, cy), jittered sector angles."""
    n = int(rng.integers(n_lo, n_hi + 1))
    angles = (np.arange(n) + rng.uniform(0.15, 0.85, n)) * (2 * math.pi / n)
    radii = radius * rng.uniform(1.0 - rough, 1.0, n)
    return tuple(
        (cx + r * math.cos(a), cy + r * math.sin(a))
        for a, r in zip(angles, radii)
    )


def shrunk_ring(ring, factor):
    """Ring scaled about its centroid; strictly inside for star shapes."""
    cx = sum(x for x, _ in ring) / len(ring)
    cy = sum(y for _, y in ring) / len(ring)
    return tuple(
        (cx + factor * (x - cx), cy + factor * (y - cy)) for x, y in ring
    )


def convex_ring(cx, cy, radius, rng, npts=10):
    """Convex hull of random points in a disk around (cx, cy)."""
    while True:
        pts = rng.uniform(-radius, radius, size=(npts, 2))
        pts = pts[np.hypot(pts[:, 0], pts[:, 1]) <= radius]
        if len(pts) < 3:
            continue
        hull = shapely.MultiPoint([tuple(p) for p in pts]).convex_hull
        if hull.geom_type == "Polygon" and hull.area > 0.3 * radius * radius:
            break
    ring = shapely.geometry.polygon.orient(hull).exterior.coords[:-1]
    return tuple((cx + x, cy + y) for x, y in ring)


def regular_ring(cx, cy, radius, sides, theta):
    return tuple(
        (
            cx + radius * math.cos(theta + 2 * math.pi * i / sides),
            cy + radius * math.sin(theta + 2 * math.pi * i / sides),
        )
        for i in range(sides)
    )


def comb_ring(x0, y0, width, spine_h, tooth_h, teeth, duty=0.5):
    """Spine along the bottom, evenly spaced teeth pointing up."""
    pitch = width / teeth
    pts = [(x0, y0), (x0 + width, y0), (x0 + width, y0 + spine_h)]
    for i in range(teeth - 1, -1, -1):
        tx0 = x0 + i * pitch
        tx1 = tx0 + duty * pitch
        pts += [
            (tx1, y0 + spine_h),
            (tx1, y0 + spine_h + tooth_h),
            (tx0, y0 + spine_h + tooth_h),
            (tx0, y0 + spine_h),
        ]
    if pts[-1] == pts[0]:
        pts.pop()
    return tuple(pts)


def _fits(cx, cy, radius, placed, gap):
    return all(
        math.hypot(cx - x, cy - y) >= radius + r + gap for x, y, r in placed
    )


def _place(rng, radius, placed, width, height, margin, gap, attempts=300):
    """A centre keeping the bounding circle inside and off other shapes."""
    lo_x, hi_x = radius + margin, width - radius - margin
    lo_y, hi_y = radius + margin, height - radius - margin
    if lo_x >= hi_x or lo_y >= hi_y:
        return None
    for _ in range(attempts):
        cx = rng.uniform(lo_x, hi_x)
        cy = rng.uniform(lo_y, hi_y)
        if _fits(cx, cy, radius, placed, gap):
            return cx, cy
    return None


def transparent_instance(seed, side=30.0, r_s=1.0):
    """1 to 5 lakes in a square; larger lakes may hold an island."""
    rng = np.random.default_rng(seed)
    n_obs = int(rng.integers(1, 6))
    placed: list[tuple[float, float, float]] = []
    obstacles = []
    for _ in range(n_obs):
        radius = float(rng.uniform(1.6, 4.2))
        spot = _place(rng, radius, placed, side, side, 0.8, 0.7)
        if spot is None:
            continue
        cx, cy = spot
        outer = blob_ring(cx, cy, radius, rng)
        holes = ()
        if radius >= 2.4 and rng.random() < 0.6:
            holes = (shrunk_ring(outer, float(rng.uniform(0.30, 0.45))),)
        placed.append((cx, cy, radius))
        obstacles.append((Polygon(outer, holes), ObstacleClass.TRANSPARENT))
    return Region(
        rectangle(0.0, 0.0, side, side), tuple(obstacles), r_s=r_s
    )


def opaque_instance(seed, width=20.0, height=14.0, r_s=1.0):
    """1 to 3 convex blocks plus one comb-shaped wall."""
    rng = np.random.default_rng(seed)
    teeth = int(rng.integers(3, 5))
    cw = float(rng.uniform(5.0, 8.0))
    spine = float(rng.uniform(0.5, 0.8))
    tooth = float(rng.uniform(1.4, 2.4))
    x0 = float(rng.uniform(1.0, width - cw - 1.0))
    y0 = float(rng.uniform(1.0, height - spine - tooth - 1.0))
    comb = comb_ring(x0, y0, cw, spine, tooth, teeth)
    ccx, ccy = x0 + cw / 2.0, y0 + (spine + tooth) / 2.0
    placed = [(ccx, ccy, math.hypot(cw / 2.0, (spine + tooth) / 2.0))]
    obstacles = [(Polygon(comb), ObstacleClass.OPAQUE)]
    for _ in range(int(rng.integers(1, 4))):
        radius = float(rng.uniform(0.9, 1.8))
        spot = _place(rng, radius, placed, width, height, 0.8, 0.6)
        if spot is None:
            continue
        cx, cy = spot
        placed.append((cx, cy, radius))
        obstacles.append(
            (Polygon(convex_ring(cx, cy, radius, rng)), ObstacleClass.OPAQUE)
        )
    return Region(
        rectangle(0.0, 0.0, width, height), tuple(obstacles), r_s=r_s
    )


def conforming_opaque_instance(seed, width=18.0, height=12.0, r_s=1.0,
                               R_O=0.25):
    """Convex blocks only, each thick enough to hold an R_O cell, and
    wide land corridors everywhere, so the opaque count bound applies."""
    rng = np.random.default_rng(seed)
    placed: list[tuple[float, float, float]] = []
    obstacles = []
    for _ in range(int(rng.integers(1, 4))):
        radius = float(rng.uniform(0.9, 1.6))
        spot = _place(rng, radius, placed, width, height, 1.2, 2.5)
        if spot is None:
            continue
        cx, cy = spot
        sides = int(rng.integers(5, 9))
        theta = float(rng.uniform(0.0, 2 * math.pi))
        ring = regular_ring(cx, cy, radius, sides, theta)
        # inradius = radius * cos(pi/sides) >= 0.9 * cos(36 deg) >> R_O
        assert radius * math.cos(math.pi / sides) >= 2 * R_O
        placed.append((cx, cy, radius))
        obstacles.append((Polygon(ring), ObstacleClass.OPAQUE))
    if not obstacles:
        ring = regular_ring(width / 2.0, height / 2.0, 1.2, 6, 0.3)
        obstacles.append((Polygon(ring), ObstacleClass.OPAQUE))
    return Region(
        rectangle(0.0, 0.0, width, height), tuple(obstacles), r_s=r_s
    )


def _cluster_count(region):
    xs = [x for x, _ in region.boundary.outer]
    ys = [y for _, y in region.boundary.outer]
    t = generate((min(xs), min(ys), max(xs), max(ys)), region.r_s)
    return len(clusters(t, classify(region, t)))


def single_cluster_instance(seed, width=14.0, height=12.0, r_s=1.0):
    """One lake producing exactly one cluster of anomalous cells."""
    for attempt in range(50):
        rng = np.random.default_rng(seed * 1000 + attempt)
        radius = float(rng.uniform(1.4, 2.4))
        cx = float(rng.uniform(radius + 1.0, width - radius - 1.0))
        cy = float(rng.uniform(radius + 1.0, height - radius - 1.0))
        region = Region(
            rectangle(0.0, 0.0, width, height),
            ((Polygon(blob_ring(cx, cy, radius, rng)),
              ObstacleClass.TRANSPARENT),),
            r_s=r_s,
        )
        if _cluster_count(region) == 1:
            return region
    raise RuntimeError(f"no single-cluster instance found for seed {seed}")


def two_cluster_instance(seed, width=20.0, height=12.0, r_s=1.0):
    """Two lakes producing exactly two clusters, so far apart that no
    lattice shift of one cluster's cells can reach the other's land."""
    for attempt in range(50):
        rng = np.random.default_rng(seed * 1000 + attempt)
        rings = []
        for lo, hi in ((3.0, 5.5), (15.5, 17.0)):
            radius = float(rng.uniform(1.3, 1.8))
            cx = float(rng.uniform(lo, hi))
            cy = float(rng.uniform(radius + 1.0, height - radius - 1.0))
            rings.append(blob_ring(cx, cy, radius, rng))
        region = Region(
            rectangle(0.0, 0.0, width, height),
            tuple((Polygon(r), ObstacleClass.TRANSPARENT) for r in rings),
            r_s=r_s,
        )
        if _cluster_count(region) == 2:
            return region
    raise RuntimeError(f"no two-cluster instance found for seed {seed}")


def opaque_scene(seed, width=16.0, height=12.0, r_s=1.0):
    """A few opaque shapes plus an accessible anchor with clearance.

    The anchor stays at least 1.5 r_s from the boundary so the sensing
    disk is interior, and 0.05 r_s from every obstacle so membership
    probes near the anchor are unambiguous.
    """
    rng = np.random.default_rng(seed)
    placed: list[tuple[float, float, float]] = []
    obstacles = []
    shapely_obs = []
    for _ in range(int(rng.integers(2, 5))):
        radius = float(rng.uniform(0.5, 1.4))
        spot = _place(rng, radius, placed, width, height, 0.6, 0.4)
        if spot is None:
            continue
        cx, cy = spot
        if rng.random() < 0.3:
            ring = regular_ring(cx, cy, radius, 4, float(rng.uniform(0, math.pi)))
        else:
            ring = convex_ring(cx, cy, radius, rng)
        placed.append((cx, cy, radius))
        obstacles.append((Polygon(ring), ObstacleClass.OPAQUE))
        shapely_obs.append(shapely.Polygon(ring))
    region = Region(
        rectangle(0.0, 0.0, width, height), tuple(obstacles), r_s=r_s
    )
    while True:
        ax = float(rng.uniform(1.5, width - 1.5))
        ay = float(rng.uniform(1.5, height - 1.5))
        p = shapely.Point(ax, ay)
        if all(o.distance(p) >= 0.05 for o in shapely_obs):
            return region, Point(ax, ay)
