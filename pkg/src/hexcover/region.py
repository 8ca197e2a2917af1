"""Problem instances: a bounded field, obstacles, and a sensing radius.

An obstacle is a polygon where sensors cannot be placed and whose own
area needs no coverage. Transparent obstacles (lakes, swamps) let the
sensing signal pass over them; opaque obstacles (walls, buildings) block
line of sight, which matters to the planners downstream but not to the
land computation here.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Any

import shapely
import shapely.geometry as sgeom

from .geometry import (
    GeometryError,
    Point,
    Polygon,
    PolygonSet,
    area,
    boolean,
)

__all__ = [
    "ObstacleClass",
    "Region",
    "RegionError",
    "parse_region",
    "region_document",
    "accessible_land",
    "sensable_land",
    "obstacle_union",
    "is_accessible",
]


class RegionError(ValueError):
    """Instance-level validation failure (bad document or invariant)."""


class ObstacleClass(enum.Enum):
    TRANSPARENT = "transparent"
    OPAQUE = "opaque"


@dataclass(frozen=True)
class Region:
    """Immutable problem instance.

    ``obstacles`` is a tuple of (polygon, class) pairs. Obstacle polygons
    may overlap one another and may stick out past the boundary; each must
    at least reach the boundary's interior, otherwise it is dead weight
    that silently changes area bookkeeping.
    """

    boundary: Polygon
    obstacles: tuple[tuple[Polygon, ObstacleClass], ...] = ()
    r_s: float = 1.0

    def __post_init__(self):
        if not self.r_s > 0:
            raise RegionError(f"sensing radius must be positive, got {self.r_s}")
        object.__setattr__(self, "r_s", float(self.r_s))
        object.__setattr__(self, "obstacles", tuple(tuple(ob) for ob in self.obstacles))
        bset = PolygonSet.of(self.boundary)
        if area(bset) <= 0:
            raise RegionError("boundary encloses no area")
        for i, (poly, cls) in enumerate(self.obstacles):
            if not isinstance(cls, ObstacleClass):
                raise RegionError(f"obstacle {i}: class must be ObstacleClass, got {cls!r}")
            inter = boolean("intersection", PolygonSet.of(poly), bset)
            if area(inter) <= 0:
                raise RegionError(f"obstacle {i}: does not reach the boundary interior")

    def with_obstacles(self, obstacles) -> "Region":
        return Region(self.boundary, tuple(obstacles), self.r_s)

    @property
    def has_opaque(self) -> bool:
        return any(cls is ObstacleClass.OPAQUE for _, cls in self.obstacles)

    def obstacles_of(self, cls: ObstacleClass) -> tuple[Polygon, ...]:
        return tuple(p for p, c in self.obstacles if c is cls)


def _fold_union(polys: tuple[Polygon, ...]) -> PolygonSet:
    acc = PolygonSet()
    for p in polys:
        acc = boolean("union", acc, PolygonSet.of(p))
    return acc


@lru_cache(maxsize=256)
def obstacle_union(r: Region, cls: ObstacleClass | None = None) -> PolygonSet:
    """Union of obstacle polygons, optionally restricted to one class,
    clipped to the boundary."""
    polys = tuple(p for p, c in r.obstacles if cls is None or c is cls)
    return boolean("intersection", _fold_union(polys), PolygonSet.of(r.boundary))


@lru_cache(maxsize=256)
def accessible_land(r: Region) -> PolygonSet:
    """The coverage target: boundary minus every obstacle, either class.

    Sensors may only be placed here (boundary points of the closure
    included); only points here need covering.
    """
    return boolean("difference", PolygonSet.of(r.boundary), obstacle_union(r))


def sensable_land(r: Region) -> PolygonSet:
    """Alias of :func:`accessible_land`.

    Obstacle class changes what a placed sensor can see, never which area
    is in play; call sites that care about the distinction read better
    with the separate name.
    """
    return accessible_land(r)


@lru_cache(maxsize=256)
def _obstacle_blockage(r: Region):
    """Unclipped union of obstacle polygons, prepared for point queries."""
    geoms = [sgeom.Polygon(p.outer, p.holes) for p, _ in r.obstacles]
    u = shapely.union_all(geoms) if geoms else sgeom.Polygon()
    shapely.prepare(u)
    return u, u.boundary


def is_accessible(r: Region, p: Point, band: float | None = None) -> bool:
    """Whether a sensor may stand at p.

    Only obstacle interiors block placement: obstacle edges count as
    reachable shore, and ground beyond the monitored boundary is ordinary
    terrain (the tessellation overhangs the field there, and its centres
    still hold sensors). Points within ``band`` of an obstacle edge are
    treated as on it; the default band is 1e-9 * r_s.
    """
    if band is None:
        band = 1e-9 * r.r_s
    blocked, edges = _obstacle_blockage(r)
    pt = sgeom.Point(p.x, p.y)
    if not blocked.contains(pt):
        return True
    return edges.distance(pt) <= band


def _ring_from_json(raw, label: str) -> tuple[tuple[float, float], ...]:
    if not isinstance(raw, (list, tuple)) or len(raw) < 3:
        raise RegionError(f"{label}: expected an array of at least 3 [x, y] pairs")
    out = []
    for j, pt in enumerate(raw):
        if not isinstance(pt, (list, tuple)) or len(pt) != 2:
            raise RegionError(f"{label}: vertex {j} is not an [x, y] pair")
        try:
            out.append((float(pt[0]), float(pt[1])))
        except (TypeError, ValueError):
            raise RegionError(f"{label}: vertex {j} is not numeric") from None
    return tuple(out)


def parse_region(document: str | bytes | dict[str, Any]) -> Region:
    """Build a validated Region from an instance document.

    The document is JSON text (or an already-decoded mapping) with fields
    ``r_s``, ``boundary`` (CCW array of [x, y]) and ``obstacles`` (array
    of objects with ``class`` in {"transparent", "opaque"} and ``ring``;
    an optional ``holes`` array of rings cuts islands out of an
    obstacle). Coordinates are taken verbatim, no unit conversion.
    """
    if isinstance(document, (str, bytes)):
        try:
            doc = json.loads(document)
        except json.JSONDecodeError as e:
            raise RegionError(f"instance document is not valid JSON: {e}") from None
    else:
        doc = document
    if not isinstance(doc, dict):
        raise RegionError("instance document must be a JSON object")

    try:
        r_s = float(doc["r_s"])
    except KeyError:
        raise RegionError("missing required field 'r_s'") from None
    except (TypeError, ValueError):
        raise RegionError("'r_s' must be a number") from None

    if "boundary" not in doc:
        raise RegionError("missing required field 'boundary'")
    try:
        bnd = Polygon(_ring_from_json(doc["boundary"], "boundary"))
    except GeometryError as e:
        raise RegionError(f"boundary: {e}") from None

    obstacles = []
    for i, ob in enumerate(doc.get("obstacles", [])):
        if not isinstance(ob, dict):
            raise RegionError(f"obstacle {i}: expected an object")
        cls_raw = ob.get("class")
        try:
            cls = ObstacleClass(cls_raw)
        except ValueError:
            raise RegionError(
                f"obstacle {i}: class must be 'transparent' or 'opaque', got {cls_raw!r}"
            ) from None
        if "ring" not in ob:
            raise RegionError(f"obstacle {i}: missing 'ring'")
        ring = _ring_from_json(ob["ring"], f"obstacle {i} ring")
        holes = tuple(
            _ring_from_json(h, f"obstacle {i} hole {j}")
            for j, h in enumerate(ob.get("holes", []))
        )
        try:
            poly = Polygon(ring, holes)
        except GeometryError as e:
            raise RegionError(f"obstacle {i}: {e}") from None
        obstacles.append((poly, cls))

    try:
        return Region(bnd, tuple(obstacles), r_s)
    except GeometryError as e:
        raise RegionError(str(e)) from None


def region_document(r: Region) -> dict[str, Any]:
    """Inverse of :func:`parse_region` (up to ring rotation/winding)."""
    obstacles = []
    for poly, cls in r.obstacles:
        ob: dict[str, Any] = {
            "class": cls.value,
            "ring": [list(pt) for pt in poly.outer],
        }
        if poly.holes:
            ob["holes"] = [[list(pt) for pt in h] for h in poly.holes]
        obstacles.append(ob)
    return {
        "r_s": r.r_s,
        "boundary": [list(pt) for pt in r.boundary.outer],
        "obstacles": obstacles,
    }
