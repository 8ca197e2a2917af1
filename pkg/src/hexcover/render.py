"""Plain SVG pictures of instances and placements.

Layer order, back to front: land fill, transparent obstacles (hatched),
opaque obstacles (solid), tessellation outlines, sight-polygon outlines
when signals are blocked, sensors, and finally any uncovered residue so
problems are impossible to miss. Coordinates are mapped in Python so the
output needs no transforms and renders identically everywhere.
"""

from __future__ import annotations

from typing import Sequence

from .geometry import Point, PolygonSet, area, boolean
from .hexgrid import hexagon_at, generate
from .planner import PlanConfig, _snap
from .planner_opaque import _sight_cover, aligned_ngon
from .region import ObstacleClass, Region, accessible_land

__all__ = ["render_svg"]

_LAYER_COLORS = ("#c0392b", "#2471a3", "#1e8449")


class _Canvas:
    def __init__(self, bbox, width):
        minx, miny, maxx, maxy = bbox
        pad = 0.03 * max(maxx - minx, maxy - miny)
        self.minx, self.miny = minx - pad, miny - pad
        self.maxx, self.maxy = maxx + pad, maxy + pad
        self.scale = width / (self.maxx - self.minx)
        self.w = width
        self.h = (self.maxy - self.miny) * self.scale

    def xy(self, x: float, y: float) -> tuple[float, float]:
        return (
            (x - self.minx) * self.scale,
            (self.maxy - y) * self.scale,
        )

    def path(self, rings) -> str:
        parts = []
        for ring in rings:
            pts = [self.xy(x, y) for x, y in ring]
            parts.append(
                "M" + " L".join(f"{x:.2f},{y:.2f}" for x, y in pts) + " Z"
            )
        return " ".join(parts)


def _poly_paths(c: _Canvas, pset: PolygonSet) -> list[str]:
    return [c.path((p.outer, *p.holes)) for p in pset.polygons]


def render_svg(
    region: Region,
    sensors_by_layer: Sequence[Sequence[Point]] = (),
    *,
    config: PlanConfig | None = None,
    show_tessellation: bool = True,
    show_rsp: bool | None = None,
    show_uncovered: bool = True,
    width: int = 800,
) -> str:
    """Draw a region and, optionally, a layered placement on it.

    ``show_rsp`` defaults to drawing sight polygons exactly when the
    region blocks signals. The uncovered residue is recomputed here from
    the sensors, so the picture reflects what the plan actually covers
    rather than what it reported.
    """
    cfg = config or PlanConfig()
    r_s = region.r_s
    if show_rsp is None:
        show_rsp = region.has_opaque
    xs = [x for x, _ in region.boundary.outer]
    ys = [y for _, y in region.boundary.outer]
    c = _Canvas((min(xs), min(ys), max(xs), max(ys)), width)

    out = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{c.w:.0f}" '
        f'height="{c.h:.0f}" viewBox="0 0 {c.w:.0f} {c.h:.0f}">'
    )
    out.append(
        '<defs><pattern id="hatch" width="6" height="6" '
        'patternUnits="userSpaceOnUse" patternTransform="rotate(45)">'
        '<rect width="6" height="6" fill="#d6eaf8"/>'
        '<line x1="0" y1="0" x2="0" y2="6" stroke="#5dade2" stroke-width="1.5"/>'
        "</pattern></defs>"
    )
    out.append(f'<rect width="{c.w:.0f}" height="{c.h:.0f}" fill="#ffffff"/>')

    land = accessible_land(region)
    for d in _poly_paths(c, land):
        out.append(f'<path d="{d}" fill="#eaf2e3" stroke="#7d8a6a" '
                   'stroke-width="1.2" fill-rule="evenodd"/>')
    for poly in region.obstacles_of(ObstacleClass.TRANSPARENT):
        d = c.path((poly.outer, *poly.holes))
        out.append(f'<path d="{d}" fill="url(#hatch)" stroke="#2e86c1" '
                   'stroke-width="1" fill-rule="evenodd"/>')
    for poly in region.obstacles_of(ObstacleClass.OPAQUE):
        d = c.path((poly.outer, *poly.holes))
        out.append(f'<path d="{d}" fill="#4d4d4d" stroke="#1b1b1b" '
                   'stroke-width="1" fill-rule="evenodd"/>')

    if show_tessellation:
        t = generate(
            (c.minx, c.miny, c.maxx, c.maxy), r_s, cfg.origin, cfg.orientation
        )
        for cell in t.cells:
            d = c.path((cell.polygon.outer,))
            out.append(f'<path d="{d}" fill="none" stroke="#b5b5b5" '
                       'stroke-width="0.6"/>')

    covers: list[PolygonSet] = []
    need_cover = show_uncovered or (show_rsp and region.has_opaque)
    ngon = aligned_ngon(cfg.ngon)
    cache: dict = {}
    for li, layer in enumerate(sensors_by_layer):
        for s in layer:
            if not need_cover:
                continue
            sight = None
            if region.has_opaque:
                sight = _sight_cover(s, region, ngon, cfg.orientation, cache)
            if sight is None:
                sight = PolygonSet.of(
                    hexagon_at(s, r_s, cfg.orientation).polygon
                )
            covers.append(sight)
            if show_rsp and region.has_opaque:
                for d in _poly_paths(c, sight):
                    out.append(
                        f'<path d="{d}" fill="none" stroke="{_LAYER_COLORS[li % 3]}" '
                        'stroke-width="0.8" stroke-dasharray="4 3" opacity="0.7"/>'
                    )

    for li, layer in enumerate(sensors_by_layer):
        color = _LAYER_COLORS[li % 3]
        r_px = max(2.5, 0.055 * r_s * c.scale)
        for s in layer:
            px, py = c.xy(s.x, s.y)
            out.append(
                f'<circle cx="{px:.2f}" cy="{py:.2f}" r="{r_px:.2f}" '
                f'fill="{color}" stroke="#ffffff" stroke-width="0.7"/>'
            )

    if show_uncovered and covers:
        acc = PolygonSet()
        for s in covers:
            acc = boolean("union", acc, s, snap=_snap(r_s), min_area=0.0)
        residue = boolean("difference", land, acc, snap=_snap(r_s), min_area=0.0)
        if area(residue) > 0:
            for d in _poly_paths(c, residue):
                out.append(f'<path d="{d}" fill="#e74c3c" opacity="0.6" '
                           'stroke="#922b21" stroke-width="0.8" '
                           'fill-rule="evenodd"/>')

    out.append("</svg>")
    return "\n".join(out)
