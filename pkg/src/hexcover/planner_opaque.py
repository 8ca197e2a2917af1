"""Placement planning when obstacles block the sensing signal.

Same outer loop as the transparent planner, but a sensor is only
credited with the part of its cell it can actually see. That changes
which cells count as problematic: a cell whose centre stands on open
ground can still be anomalous if a wall shadows a corner of it. Such a
cell keeps its centre sensor; only the shadowed residue joins a cluster
and gets repaired by the shift iteration.

Line-of-sight polygons are the dominant cost, so they are cached per
snapped anchor and skipped entirely when no opaque edge lies within
sensing range. The sensing disk is polygonized with a vertex count
rounded up to a multiple of six and phased to the tessellation, which
makes the polygonized disk contain each hexagon cell exactly; without
that alignment every open cell would show a spurious sliver of shadow.
"""

from __future__ import annotations

import math

from .bounds import BoundsReport, opaque_bounds
from .geometry import Point, PolygonSet, area, boolean, overlap_area
from .hexgrid import Hexagon, Shift, ShiftLattice, Tessellation, hex_area, hexagon_at
from .planner import (
    CellClass,
    Cluster,
    EvalCounter,
    Plan,
    PlanConfig,
    _Engine,
    _cell_orientation,
    _eps_geom,
    _fold_union,
    _land_in,
    _snap,
    plan_transparent,
)
from .region import Region, is_accessible, sensable_land
from .visibility import opaque_segments, visibility_polygon

__all__ = [
    "aligned_ngon",
    "classify_opaque",
    "eval_shift_opaque",
    "best_shift_opaque",
    "plan_opaque",
]


def aligned_ngon(ngon: int) -> int:
    """Smallest multiple of 6 at or above the requested vertex count."""
    return 6 * math.ceil(ngon / 6)


def _sight_cover(
    x: Point,
    region: Region,
    ngon: int,
    orientation: float,
    cache: dict | None,
) -> PolygonSet | None:
    """Hexagon-limited visible set for a sensor at x.

    Returns None when no opaque edge lies within sensing range of x: the
    visible set then contains the whole cell and callers can use the
    bare hexagon. The result is not clipped to land; callers intersect
    with an uncovered set or with land as needed.
    """
    r_s = region.r_s
    key = None
    if cache is not None:
        g = _snap(r_s)
        key = (round(x.x / g), round(x.y / g), ngon)
        if key in cache:
            return cache[key]
    segs = opaque_segments(region, x, r_s)
    if len(segs) == 0:
        out = None
    else:
        vis = visibility_polygon(x, segs, r_s, ngon=ngon, phase=orientation)
        out = boolean(
            "intersection",
            PolygonSet.of(vis),
            PolygonSet.of(hexagon_at(x, r_s, orientation).polygon),
            snap=_snap(r_s),
            min_area=0.0,
        )
    if cache is not None:
        cache[key] = out
    return out


def classify_opaque(
    region: Region, t: Tessellation, ngon: int = 64
) -> dict[tuple[int, int], CellClass]:
    """Label every cell by whether its centre sensor suffices.

    A cell with an accessible centre is normal only if the centre sees
    all the cell's land; a shadowed remainder above tolerance makes it
    anomalous even though the centre sensor stays. Cells with blocked
    centres are anomalous whenever they hold land at all, as in the
    transparent classification.
    """
    land = sensable_land(region)
    eps = _eps_geom(region.r_s)
    n = aligned_ngon(ngon)
    cache: dict = {}
    out: dict[tuple[int, int], CellClass] = {}
    for cell in t.cells:
        target = _land_in(cell.polygon, land)
        if is_accessible(region, cell.centre):
            if target <= eps:
                out[cell.index] = CellClass.NORMAL
                continue
            s = _sight_cover(cell.centre, region, n, _cell_orientation(cell), cache)
            covered = target if s is None else overlap_area(s, land)
            if target - covered > eps:
                out[cell.index] = CellClass.ANOMALOUS
            else:
                out[cell.index] = CellClass.NORMAL
        elif target > eps:
            out[cell.index] = CellClass.ANOMALOUS
        else:
            out[cell.index] = CellClass.VOID
    return out


def eval_shift_opaque(
    cluster: Cluster,
    uncovered: PolygonSet,
    region: Region,
    l: Shift,
    ngon: int = 64,
    cache: dict | None = None,
    counter: EvalCounter | None = None,
) -> tuple[float, tuple[Point, ...]]:
    """Uncovered area left in a cluster after one shift, sight-limited.

    Like the transparent evaluation except each accessible shifted
    centre is credited with hexagon ∩ visible set instead of the whole
    hexagon. Passing a shared ``cache`` dict lets repeated evaluations
    of the same centres (across shifts and iterations) reuse their
    line-of-sight polygons.
    """
    u_area = area(uncovered)
    if uncovered.is_empty:
        return 0.0, ()
    r_s = region.r_s
    eps = _eps_geom(r_s)
    n = aligned_ngon(ngon)
    covered = 0.0
    placed: list[Point] = []
    for cell in cluster.cells:
        if counter is not None:
            counter.units += 1
        x = Point(cell.centre.x + l.dx, cell.centre.y + l.dy)
        if not is_accessible(region, x):
            continue
        orient = _cell_orientation(cell)
        s = _sight_cover(x, region, n, orient, cache)
        if s is None:
            s = PolygonSet.of(hexagon_at(x, r_s, orient).polygon)
        # sight-limited pieces sit inside disjoint shifted cells, so the
        # covered areas add up without double counting
        a = overlap_area(s, uncovered)
        covered += a
        if a > eps:
            placed.append(x)
    return max(u_area - covered, 0.0), tuple(placed)


def best_shift_opaque(
    cluster: Cluster,
    uncovered: PolygonSet,
    region: Region,
    lattice: ShiftLattice,
    ngon: int = 64,
    cache: dict | None = None,
    counter: EvalCounter | None = None,
) -> tuple[Shift, float, tuple[Point, ...]]:
    """Minimize the cluster's remaining area over the whole lattice.

    Ties keep the earliest shift in canonical order, exactly as in the
    transparent planner.
    """
    best_l = None
    best_u = math.inf
    best_placed: tuple[Point, ...] = ()
    for l in lattice:
        u, placed = eval_shift_opaque(
            cluster, uncovered, region, l, ngon, cache, counter
        )
        if u < best_u:
            best_l, best_u, best_placed = l, u, placed
    return best_l, best_u, best_placed


class _OpaqueEngine(_Engine):
    mode = "opaque"

    def __init__(self, region: Region, config: PlanConfig):
        super().__init__(region, config)
        self.ngon = aligned_ngon(config.ngon)
        self._cache: dict = {}

    def _cover(self, p: Point, orientation: float) -> PolygonSet:
        s = _sight_cover(p, self.region, self.ngon, orientation, self._cache)
        if s is None:
            return PolygonSet.of(hexagon_at(p, self.r_s, orientation).polygon)
        return s

    def classify_cells(self):
        return classify_opaque(self.region, self.t, self.ngon)

    def initial_sensors(self, classes):
        """Centre sensors for every accessible centre that sees land.

        Cells anomalous only through shadowing keep their centre sensor;
        the shift iteration covers just the residue.
        """
        sensors: list[Point] = []
        covers: list[PolygonSet] = []
        for cell in self.t.cells:
            if not is_accessible(self.region, cell.centre):
                continue
            cov = self._cover(cell.centre, _cell_orientation(cell))
            if overlap_area(cov, self.land) > self.eps_geom:
                sensors.append(cell.centre)
                covers.append(cov)
        return sensors, _fold_union(covers, self.r_s)

    def cluster_best(self, cluster: Cluster, cluster_unc: PolygonSet,
                     lattice: ShiftLattice, counter: EvalCounter | None = None):
        return best_shift_opaque(
            cluster, cluster_unc, self.region, lattice,
            self.ngon, self._cache, counter,
        )

    def coverage_of(self, p: Point, cell: Hexagon) -> PolygonSet:
        return self._cover(p, _cell_orientation(cell))

    def greedy_cover(self, p: Point) -> PolygonSet:
        # a residual component is open land, so a point inside it always
        # sees a neighbourhood of itself and progress is guaranteed
        return self._cover(p, self.config.orientation)

    def prune_cover(self, s: Point) -> PolygonSet:
        return boolean(
            "intersection",
            self._cover(s, self.config.orientation),
            self.land,
            snap=_snap(self.r_s), min_area=0.0,
        )

    def make_bounds(self, classes) -> BoundsReport:
        n_norm = sum(1 for c in classes.values() if c is CellClass.NORMAL)
        n_anom = sum(1 for c in classes.values() if c is CellClass.ANOMALOUS)
        ah = hex_area(self.r_s)
        A, A_o = n_norm * ah, n_anom * ah
        if self.config.R_O is not None:
            return opaque_bounds(A, A_o, self.r_s, self.config.R_O)
        # without a granularity radius the count bound has no finite
        # upper form; report the bracket as one-sided
        return BoundsReport(
            A=A, A_o=A_o, A_hex=ah,
            lower=(A + A_o) / ah, upper=math.inf,
            mode="opaque",
        )


def plan_opaque(region: Region, config: PlanConfig | None = None) -> Plan:
    """Cover a region whose obstacles block the sensing signal.

    Sensors are credited only with what they can see, so coverage claims
    survive a per-point line-of-sight check. A region without opaque
    obstacles reduces exactly to the transparent planner and returns its
    plan unchanged. Set ``config.R_O`` to get the granularity-conditional
    count bound in the result; without it the upper bound is infinite.
    """
    if not region.has_opaque:
        return plan_transparent(region, config)
    return _OpaqueEngine(region, config or PlanConfig()).run()
