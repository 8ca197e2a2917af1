"""2-D polygon kernel: areas, boolean operations, point location.

A deliberately thin layer over shapely/GEOS. All downstream machinery
(tessellation, planners, bounds) speaks in terms of these types, so the
robustness policy lives in one place: coordinates are snap-rounded to a
fine grid during boolean operations and sliver pieces below the area
tolerance are discarded.

Everything here is a pure function of immutable values; results do not
depend on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Literal

import numpy as np
import shapely
import shapely.geometry as sgeom
from shapely.errors import GEOSException
from shapely.geometry.polygon import orient

__all__ = [
    "GeometryError",
    "RobustnessError",
    "SNAP_EPS",
    "AREA_EPS",
    "Point",
    "Polygon",
    "PolygonSet",
    "area",
    "boolean",
    "overlap_area",
    "locate",
    "rectangle",
    "regular_ngon",
]

# Default tolerances, expressed for a sensing radius of 1. Callers working
# at another scale pass snap ~ 1e-9 * r_s and area eps ~ 1e-6 * r_s**2.
SNAP_EPS = 1e-9
AREA_EPS = 1e-6


class GeometryError(ValueError):
    """Invalid geometric input: bad ring, degenerate polygon, NaN coordinate."""


class RobustnessError(RuntimeError):
    """A boolean operation failed even after snap-rounding retries."""


def _as_ring(coords, label: str) -> tuple[tuple[float, float], ...]:
    pts = [(float(x), float(y)) for x, y in coords]
    if len(pts) >= 2 and pts[0] == pts[-1]:
        pts = pts[:-1]  # drop explicit closing vertex
    if len(pts) < 3:
        raise GeometryError(f"{label}: ring needs at least 3 vertices, got {len(pts)}")
    for x, y in pts:
        if not (math.isfinite(x) and math.isfinite(y)):
            raise GeometryError(f"{label}: non-finite coordinate ({x}, {y})")
    return tuple(pts)


@dataclass(frozen=True)
class Point:
    """A planar point; coordinates share the unit of the sensing radius."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError(f"non-finite point ({self.x}, {self.y})")

    def as_tuple(self) -> tuple[float, float]:
        return (self.x, self.y)


@dataclass(frozen=True)
class Polygon:
    """Simple polygon with optional holes.

    The outer ring is stored counter-clockwise and holes clockwise; input
    rings in the opposite winding are normalized on construction. Rings
    must be simple, the outer ring must enclose positive area, and holes
    must lie strictly inside the outer ring.
    """

    outer: tuple[tuple[float, float], ...]
    holes: tuple[tuple[tuple[float, float], ...], ...] = ()

    def __post_init__(self):
        outer = _as_ring(self.outer, "outer ring")
        holes = tuple(_as_ring(h, f"hole {i}") for i, h in enumerate(self.holes))
        sp = self._validated(outer, holes)
        sp = orient(sp, sign=1.0)  # CCW shell, CW holes
        object.__setattr__(self, "outer", tuple(sp.exterior.coords[:-1]))
        object.__setattr__(
            self, "holes", tuple(tuple(r.coords[:-1]) for r in sp.interiors)
        )

    @staticmethod
    def _validated(outer, holes) -> sgeom.Polygon:
        for label, ring in [("outer ring", outer)] + [
            (f"hole {i}", h) for i, h in enumerate(holes)
        ]:
            lr = sgeom.LinearRing(ring)
            if not lr.is_simple:
                raise GeometryError(f"{label}: self-intersecting")
        shell = sgeom.Polygon(outer)
        if shell.area <= 0.0:
            raise GeometryError("outer ring: degenerate (zero area)")
        for i, h in enumerate(holes):
            if not shell.contains_properly(sgeom.Polygon(h)):
                raise GeometryError(f"hole {i}: not strictly inside outer ring")
        sp = sgeom.Polygon(outer, holes)
        if not sp.is_valid:
            raise GeometryError(shapely.is_valid_reason(sp))
        return sp


@lru_cache(maxsize=4096)
def _shapely_of(p: Polygon) -> sgeom.Polygon:
    return sgeom.Polygon(p.outer, p.holes)


def _iter_polygons(geom) -> Iterator[sgeom.Polygon]:
    if geom is None or geom.is_empty:
        return
    if isinstance(geom, sgeom.Polygon):
        yield geom
    elif isinstance(geom, (sgeom.MultiPolygon, sgeom.GeometryCollection)):
        for g in geom.geoms:
            yield from _iter_polygons(g)
    # lines / points from degenerate booleans are dropped


class PolygonSet:
    """A set of pairwise interior-disjoint polygons; the working
    representation of covered and uncovered area.

    Instances are immutable. ``geom`` exposes the underlying shapely
    geometry for read-only interop.
    """

    __slots__ = ("_geom", "_polygons")

    def __init__(self, polygons: Iterable[Polygon] = ()):
        polys = tuple(polygons)
        geoms = [_shapely_of(p) for p in polys]
        merged = shapely.union_all(geoms) if geoms else sgeom.Polygon()
        total = sum(g.area for g in geoms)
        if abs(merged.area - total) > AREA_EPS * max(1.0, len(polys)):
            raise GeometryError("polygons overlap: interiors are not disjoint")
        self._geom = merged
        self._polygons = polys

    @classmethod
    def of(cls, *polygons: Polygon) -> "PolygonSet":
        return cls(polygons)

    @classmethod
    def _from_geom(cls, geom, min_area: float = 0.0) -> "PolygonSet":
        """Wrap GEOS output without re-validation, dropping slivers."""
        ps = object.__new__(cls)
        kept = [g for g in _iter_polygons(geom) if g.area > min_area]
        if not kept:
            ps._geom = sgeom.Polygon()
        elif len(kept) == 1:
            ps._geom = kept[0]
        else:
            ps._geom = sgeom.MultiPolygon(kept)
        ps._polygons = None  # built lazily
        return ps

    @property
    def geom(self):
        return self._geom

    @property
    def polygons(self) -> tuple[Polygon, ...]:
        if self._polygons is None:
            out = []
            for g in _iter_polygons(self._geom):
                g = orient(g, sign=1.0)
                out.append(
                    Polygon(
                        tuple(g.exterior.coords[:-1]),
                        tuple(tuple(r.coords[:-1]) for r in g.interiors),
                    )
                )
            self._polygons = tuple(out)
        return self._polygons

    @property
    def is_empty(self) -> bool:
        return self._geom.is_empty

    def __repr__(self):
        return f"PolygonSet({len(list(_iter_polygons(self._geom)))} polygons, area={self._geom.area:.6g})"


def area(s: PolygonSet) -> float:
    """Total area of the set (holes subtract)."""
    return s.geom.area


BooleanOp = Literal["union", "intersection", "difference"]
_OPS = {
    "union": shapely.union,
    "intersection": shapely.intersection,
    "difference": shapely.difference,
}


def boolean(
    op: BooleanOp,
    a: PolygonSet,
    b: PolygonSet,
    *,
    snap: float = SNAP_EPS,
    min_area: float = AREA_EPS,
) -> PolygonSet:
    """Boolean operation with snap-rounding.

    Operand coordinates are rounded to a grid of pitch ``snap`` before the
    operation; output pieces with area below ``min_area`` are discarded as
    numerical dust. On GEOS failure the operation is retried on a 1000x
    coarser grid; a second failure raises :class:`RobustnessError` rather
    than returning a silently wrong result.
    """
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown boolean op {op!r}") from None
    for grid in (snap, snap * 1e3):
        try:
            ga = shapely.set_precision(a.geom, grid)
            gb = shapely.set_precision(b.geom, grid)
            return PolygonSet._from_geom(fn(ga, gb), min_area=min_area)
        except GEOSException:
            continue
    raise RobustnessError(f"boolean {op} failed after snap-rounding retry")


def overlap_area(a: PolygonSet, b: PolygonSet) -> float:
    """Area of a ∩ b, measured without building a snapped result set.

    Used on hot paths that only need the number; falls back to the
    snapped pipeline when GEOS rejects the direct computation.
    """
    if a.is_empty or b.is_empty:
        return 0.0
    try:
        return a.geom.intersection(b.geom).area
    except GEOSException:
        return area(boolean("intersection", a, b, min_area=0.0))


def locate(
    p: Point, s: PolygonSet, *, band: float = AREA_EPS
) -> Literal["interior", "boundary", "exterior"]:
    """Classify a point against a polygon set.

    Points within ``band`` of the boundary are reported as ``boundary``;
    points inside a hole are ``exterior``.
    """
    sp = sgeom.Point(p.x, p.y)
    if s.geom.is_empty:
        return "exterior"
    if s.geom.boundary.distance(sp) <= band:
        return "boundary"
    return "interior" if s.geom.contains(sp) else "exterior"


def rectangle(xmin: float, ymin: float, xmax: float, ymax: float) -> Polygon:
    if not (xmax > xmin and ymax > ymin):
        raise GeometryError(f"degenerate rectangle [{xmin},{xmax}]x[{ymin},{ymax}]")
    return Polygon(((xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)))


def regular_ngon(centre: Point, radius: float, n: int, phase: float = 0.0) -> Polygon:
    """Regular n-gon inscribed in the circle of ``radius`` about ``centre``,
    first vertex at angle ``phase``."""
    if n < 3:
        raise GeometryError(f"n-gon needs n >= 3, got {n}")
    if radius <= 0:
        raise GeometryError(f"radius must be positive, got {radius}")
    ang = phase + np.arange(n) * (2.0 * math.pi / n)
    vx = centre.x + radius * np.cos(ang)
    vy = centre.y + radius * np.sin(ang)
    return Polygon(tuple(zip(vx.tolist(), vy.tolist())))
