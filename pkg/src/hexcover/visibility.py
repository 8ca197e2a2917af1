"""Bounded line-of-sight evaluation around a sensor.

What a sensor at x can cover is the set of points within the sensing
radius that an unbroken straight segment from x can reach: opaque
obstacle walls throw shadows, transparent obstacles let the signal pass.
The circular range limit is represented by an inscribed regular n-gon,
never a circumscribed one, so any area the result claims is genuinely
within range.

The computation runs as an angular sweep: rays are cast at the n-gon's
angles plus a bracketed ray triple around every obstacle corner within
range, each ray is cut at its nearest wall crossing, and the resulting
star polygon is intersected with the inscribed n-gon and then with the
land that actually needs covering.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import (
    GeometryError,
    Point,
    Polygon,
    PolygonSet,
    area,
    boolean,
    locate,
    regular_ngon,
)
from .region import ObstacleClass, Region, is_accessible, sensable_land

__all__ = [
    "PlacementError",
    "SegmentSet",
    "RspPolygon",
    "opaque_segments",
    "visibility_polygon",
    "rsp",
]

# angular half-width of the bracket rays around an obstacle corner; the
# resulting positional slack (~1e-7 * horizon) stays far below the snap
# grid used by callers
_BRACKET = 1e-7


class PlacementError(ValueError):
    """Sensor anchor is strictly inside an obstacle."""


@dataclass(frozen=True)
class SegmentSet:
    """Occluding wall segments near a query point.

    ``blockers`` optionally carries the polygons the segments came from,
    enabling the inside-an-obstacle placement check; bare segment sets
    skip that check.
    """

    segments: tuple[tuple[tuple[float, float], tuple[float, float]], ...]
    blockers: PolygonSet | None = None

    def __post_init__(self):
        for i, (p, q) in enumerate(self.segments):
            if not all(map(math.isfinite, (*p, *q))):
                raise GeometryError(f"segment {i}: non-finite endpoint")
            if p == q:
                raise GeometryError(f"segment {i}: degenerate (zero length)")

    def __len__(self):
        return len(self.segments)


@dataclass(frozen=True)
class RspPolygon:
    """Everything a sensor at ``anchor`` covers within range.

    ``cover`` may have several pieces: land beyond a lake is reachable
    by the signal even though the lake itself is not part of it.
    """

    anchor: Point
    cover: PolygonSet
    ngon: int

    @property
    def polygon(self) -> Polygon | None:
        """The piece the anchor itself stands on, if any; anchors just
        outside the monitored boundary cover land they do not stand on,
        in which case the largest piece is returned."""
        pieces = self.cover.polygons
        if not pieces:
            return None
        for p in pieces:
            if locate(self.anchor, PolygonSet.of(p), band=1e-9) != "exterior":
                return p
        return max(pieces, key=lambda p: area(PolygonSet.of(p)))

    @property
    def covered_area(self) -> float:
        return area(self.cover)


def _point_segment_dist(px, py, ax, ay, bx, by):
    ex, ey = bx - ax, by - ay
    denom = ex * ex + ey * ey
    t = np.clip(((px - ax) * ex + (py - ay) * ey) / denom, 0.0, 1.0)
    return np.hypot(ax + t * ex - px, ay + t * ey - py)


def opaque_segments(region: Region, x: Point, horizon: float) -> SegmentSet:
    """Opaque obstacle edges within ``horizon`` of x, plus their source
    polygons for placement checking. Transparent obstacles contribute
    nothing: the signal passes over them."""
    segs = []
    blockers = PolygonSet()
    for poly in region.obstacles_of(ObstacleClass.OPAQUE):
        blockers = boolean(
            "union", blockers, PolygonSet.of(poly),
            snap=1e-9 * region.r_s, min_area=0.0,
        )
        zero = 1e-12 * region.r_s
        for ring in (poly.outer, *poly.holes):
            for i in range(len(ring)):
                a, b = ring[i], ring[(i + 1) % len(ring)]
                if math.hypot(b[0] - a[0], b[1] - a[1]) <= zero:
                    continue  # repeated vertex, blocks nothing
                d = _point_segment_dist(x.x, x.y, a[0], a[1], b[0], b[1])
                if d <= horizon + 1e-9 * horizon:
                    segs.append((a, b))
    return SegmentSet(tuple(segs), blockers)


def _cast(x: Point, segments, angles: np.ndarray, far: float) -> np.ndarray:
    """Distance each ray travels before a wall stops it, capped at far."""
    if not segments:
        return np.full(angles.shape, far)
    S = np.asarray(segments, dtype=float)  # (m, 2, 2)
    P = S[:, 0]
    E = S[:, 1] - P
    W = P - np.array([x.x, x.y])
    dx, dy = np.cos(angles), np.sin(angles)  # (k,)
    denom = dx[:, None] * E[None, :, 1] - dy[:, None] * E[None, :, 0]
    wxe = W[None, :, 0] * E[None, :, 1] - W[None, :, 1] * E[None, :, 0]
    wxd = W[None, :, 0] * dy[:, None] - W[None, :, 1] * dx[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = wxe / denom
        s = wxd / denom
    ok = (
        (np.abs(denom) > 1e-15)
        & (t > 1e-9 * far)
        & (s >= -1e-9)
        & (s <= 1.0 + 1e-9)
    )
    t = np.where(ok, t, np.inf)
    return np.minimum(t.min(axis=1), far)


def visibility_polygon(
    x: Point,
    obstacles: SegmentSet,
    horizon: float,
    *,
    ngon: int = 64,
    phase: float = 0.0,
) -> Polygon:
    """Star polygon of points seen from x within the inscribed n-gon.

    Rays at the n-gon angles establish the range boundary; a bracketed
    triple of rays around each obstacle corner pins the shadow edges.
    The anchor may sit on an obstacle edge or corner: the supporting
    wall does not cut rays at zero range, the obstacle's far walls do.
    """
    if not horizon > 0:
        raise GeometryError(f"horizon must be positive, got {horizon}")
    if ngon < 12:
        raise GeometryError(f"ngon must be at least 12, got {ngon}")
    if obstacles.blockers is not None and not obstacles.blockers.is_empty:
        if locate(x, obstacles.blockers, band=1e-9 * horizon) == "interior":
            raise PlacementError(
                f"anchor ({x.x}, {x.y}) is strictly inside an opaque obstacle"
            )
    angles = [
        (phase + 2.0 * math.pi * k / ngon) % (2.0 * math.pi) for k in range(ngon)
    ]
    for p, q in obstacles.segments:
        for ex, ey in (p, q):
            d = math.hypot(ex - x.x, ey - x.y)
            if 1e-12 < d <= horizon:
                th = math.atan2(ey - x.y, ex - x.x) % (2.0 * math.pi)
                angles.extend((th - _BRACKET, th, th + _BRACKET))
    arr = np.sort(np.asarray(angles) % (2.0 * math.pi))
    arr = arr[np.concatenate(([True], np.diff(arr) > 1e-12))]

    far = 2.0 * horizon  # beyond the n-gon everywhere, given >= ngon rays
    dist = _cast(x, obstacles.segments, arr, far)
    vx = x.x + dist * np.cos(arr)
    vy = x.y + dist * np.sin(arr)
    pts: list[tuple[float, float]] = []
    for px, py in zip(vx.tolist(), vy.tolist()):
        if pts and math.hypot(px - pts[-1][0], py - pts[-1][1]) < 1e-12 * horizon:
            continue
        pts.append((px, py))
    if len(pts) > 2 and math.hypot(
        pts[0][0] - pts[-1][0], pts[0][1] - pts[-1][1]
    ) < 1e-12 * horizon:
        pts.pop()
    if len(pts) < 3:
        raise PlacementError(f"anchor ({x.x}, {x.y}) sees no area")
    sweep = Polygon(tuple(pts))
    disk = regular_ngon(x, horizon, ngon, phase)
    out = boolean(
        "intersection", PolygonSet.of(sweep), PolygonSet.of(disk),
        snap=1e-9 * horizon, min_area=1e-12 * horizon * horizon,
    )
    pieces = out.polygons
    if not pieces:
        raise PlacementError(f"anchor ({x.x}, {x.y}) sees no area")
    if len(pieces) == 1:
        return pieces[0]
    # snap dust can split off crumbs; keep the piece holding the anchor
    for p in pieces:
        if locate(x, PolygonSet.of(p), band=1e-9 * horizon) != "exterior":
            return p
    return max(pieces, key=lambda p: area(PolygonSet.of(p)))


def rsp(x: Point, region: Region, ngon: int = 64, *, phase: float = 0.0) -> RspPolygon:
    """Covered set of a sensor at x: within range, in line of sight, on
    land that needs covering.

    ``phase`` rotates the range n-gon; planners align it with the
    tessellation so hexagon cells sit exactly inside it (ngon a multiple
    of 6). Raises :class:`PlacementError` if x is strictly inside an
    obstacle of either class.
    """
    if ngon < 12:
        raise GeometryError(f"ngon must be at least 12, got {ngon}")
    if not is_accessible(region, x):
        raise PlacementError(
            f"sensor anchor ({x.x}, {x.y}) is strictly inside an obstacle"
        )
    segs = opaque_segments(region, x, region.r_s)
    vis = visibility_polygon(x, segs, region.r_s, ngon=ngon, phase=phase)
    cover = boolean(
        "intersection", PolygonSet.of(vis), sensable_land(region),
        snap=1e-9 * region.r_s, min_area=0.0,
    )
    return RspPolygon(anchor=x, cover=cover, ngon=ngon)
