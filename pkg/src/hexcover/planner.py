"""Iterative shifted-tessellation placement for transparent obstacles.

The planner tessellates the instance's bounding box, puts a sensor at
the centre of every cell whose centre is accessible (those cells are
then fully covered, the hexagon being inscribed in the sensing disk),
and repairs the rest iteratively: cells whose centres sit inside an
obstacle but which still hold land are grouped into edge-adjacent
clusters, and for each
cluster the whole tessellation is conceptually slid by a candidate
shift; sensors go to the shifted centres that land on accessible ground.
The shift minimizing the cluster's remaining uncovered area wins. Covered
area is subtracted globally and the loop repeats until the residual is
below tolerance.

A finite shift lattice cannot always realize the progress the infinite
shift set guarantees, so two bridges keep the postcondition: the lattice
is refined (depth doubled) when no cluster improves, and after the
refinement budget a greedy pass drops one sensor into each residual
component. Both events are recorded in the trace.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Mapping

import shapely.geometry as sgeom

from .bounds import BoundsReport, transparent_bounds
from .geometry import Point, Polygon, PolygonSet, area, boolean, overlap_area
from .hexgrid import (
    AXIAL_NEIGHBORS,
    Hexagon,
    Shift,
    ShiftLattice,
    Tessellation,
    generate,
    hex_area,
    hexagon_at,
    shift_lattice,
)
from .region import Region, accessible_land, is_accessible

__all__ = [
    "CellClass",
    "Cluster",
    "IterationRecord",
    "RefinementRecord",
    "IterationTrace",
    "Plan",
    "PlanConfig",
    "PlannerError",
    "EvalCounter",
    "classify",
    "clusters",
    "eval_shift",
    "best_shift",
    "plan_transparent",
]


class CellClass(enum.Enum):
    NORMAL = "normal"  # centre accessible (not inside an obstacle)
    ANOMALOUS = "anomalous"  # centre blocked, land left in the cell
    VOID = "void"  # centre blocked, no land in the cell


class PlannerError(RuntimeError):
    """Planner could not reach the coverage tolerance; carries the
    residual uncovered set for diagnosis."""

    def __init__(self, message: str, residual: PolygonSet | None = None):
        super().__init__(message)
        self.residual = residual


@dataclass(frozen=True)
class Cluster:
    """A maximal edge-connected group of anomalous cells."""

    id: int
    cells: tuple[Hexagon, ...]


@dataclass
class EvalCounter:
    """Tally of per-cell shift evaluations, for complexity accounting.

    Incremented by the evaluators themselves, one unit per cluster cell
    visited per shift, so the trace reports work actually done rather
    than a formula.
    """

    units: int = 0


@dataclass(frozen=True)
class IterationRecord:
    """State after one completed iteration.

    ``j`` = 0 is the initial whole-tessellation placement. ``clusters``
    counts the clusters still carrying uncovered area after this
    iteration. ``cells_total`` sums the cell counts of the clusters
    evaluated during the iteration and ``eval_units`` the per-cell shift
    evaluations actually performed; a clean shift iteration satisfies
    eval_units == cells_total * lattice_size.
    """

    j: int
    uncovered_area: float
    clusters: int
    sensors_added: int
    shifts: tuple[Shift, ...]
    depth: int = 0
    lattice_size: int = 0
    cells_total: int = 0
    eval_units: int = 0
    greedy: bool = False


@dataclass(frozen=True)
class RefinementRecord:
    """A lattice depth doubling between iterations (no sensors placed)."""

    after_iteration: int
    old_depth: int
    new_depth: int


@dataclass(frozen=True)
class IterationTrace:
    records: tuple[IterationRecord, ...]
    refinements: tuple[RefinementRecord, ...] = ()

    @property
    def final_uncovered(self) -> float:
        return self.records[-1].uncovered_area

    @property
    def iterations(self) -> int:
        """Completed sensor-placing iterations (excludes the initial one)."""
        return sum(1 for r in self.records if r.j > 0)


@dataclass(frozen=True)
class Plan:
    sensors: tuple[Point, ...]
    trace: IterationTrace
    bounds: BoundsReport
    mode: str
    k: int = 1

    @property
    def sensor_count(self) -> int:
        return len(self.sensors)


@dataclass(frozen=True)
class PlanConfig:
    """Knobs shared by both planners; defaults match the CLI."""

    origin: Point = Point(0.0, 0.0)
    orientation: float = 0.0
    lattice_depth: int = 2
    max_refinements: int = 4
    epsilon_area: float | None = None  # None: 1e-4 * A_hex
    ngon: int = 64  # visibility polygon resolution (opaque planner)
    prune: bool = False
    max_iterations: int = 1000
    R_O: float | None = None  # granularity radius for the opaque count bound

    def resolve_epsilon(self, r_s: float) -> float:
        if self.epsilon_area is not None:
            return self.epsilon_area
        return 1e-4 * hex_area(r_s)


def _eps_geom(r_s: float) -> float:
    return 1e-6 * r_s * r_s


def _snap(r_s: float) -> float:
    return 1e-9 * r_s


def _cell_orientation(cell: Hexagon) -> float:
    vx, vy = cell.polygon.outer[0]
    return math.atan2(vy - cell.centre.y, vx - cell.centre.x)


def _land_in(poly: Polygon, land: PolygonSet) -> float:
    return overlap_area(PolygonSet.of(poly), land)


def classify(region: Region, t: Tessellation) -> dict[tuple[int, int], CellClass]:
    """Label every cell by what its centre and interior allow."""
    land = accessible_land(region)
    eps = _eps_geom(region.r_s)
    out: dict[tuple[int, int], CellClass] = {}
    for cell in t.cells:
        if is_accessible(region, cell.centre):
            out[cell.index] = CellClass.NORMAL
        elif _land_in(cell.polygon, land) > eps:
            out[cell.index] = CellClass.ANOMALOUS
        else:
            out[cell.index] = CellClass.VOID
    return out


def _components(cells: list[Hexagon]) -> tuple[Cluster, ...]:
    """Edge-adjacency connected components, in canonical order."""
    by_index = {c.index: c for c in cells}
    unseen = set(by_index)
    comps: list[tuple[Hexagon, ...]] = []
    while unseen:
        start = min(unseen)
        stack = [start]
        unseen.discard(start)
        members = [start]
        while stack:
            q, r = stack.pop()
            for dq, dr in AXIAL_NEIGHBORS:
                nb = (q + dq, r + dr)
                if nb in unseen:
                    unseen.discard(nb)
                    stack.append(nb)
                    members.append(nb)
        comps.append(tuple(by_index[idx] for idx in sorted(members)))
    comps.sort(key=lambda cs: cs[0].index)
    return tuple(Cluster(i, cs) for i, cs in enumerate(comps))


def clusters(
    t: Tessellation, classes: Mapping[tuple[int, int], CellClass]
) -> tuple[Cluster, ...]:
    """Group anomalous cells into maximal edge-adjacent clusters."""
    anomalous = [c for c in t.cells if classes.get(c.index) is CellClass.ANOMALOUS]
    return _components(anomalous)


def eval_shift(
    cluster: Cluster, uncovered: PolygonSet, region: Region, l: Shift,
    counter: EvalCounter | None = None,
) -> tuple[float, tuple[Point, ...]]:
    """Uncovered area left in a cluster after applying one shift.

    Every cluster cell centre is displaced by ``l``; centres that land
    off accessible ground contribute nothing. The returned area is
    area(uncovered) minus what the accessible shifted hexagons cover;
    ``placed`` holds the accessible shifted centres whose hexagon
    actually covers something.
    """
    u_area = area(uncovered)
    if uncovered.is_empty:
        return 0.0, ()
    r_s = region.r_s
    eps = _eps_geom(r_s)
    covered = 0.0
    placed: list[Point] = []
    for cell in cluster.cells:
        if counter is not None:
            counter.units += 1
        x = Point(cell.centre.x + l.dx, cell.centre.y + l.dy)
        if not is_accessible(region, x):
            continue
        h = hexagon_at(x, r_s, _cell_orientation(cell))
        # shifted hexagons are disjoint cells of one tessellation, so
        # their covered pieces add up without double counting
        a = overlap_area(PolygonSet.of(h.polygon), uncovered)
        covered += a
        if a > eps:
            placed.append(x)
    return max(u_area - covered, 0.0), tuple(placed)


def best_shift(
    cluster: Cluster,
    uncovered: PolygonSet,
    region: Region,
    lattice: ShiftLattice,
    counter: EvalCounter | None = None,
) -> tuple[Shift, float, tuple[Point, ...]]:
    """Minimize the cluster's remaining area over the whole lattice.

    Every shift is evaluated; ties keep the earliest shift in the
    lattice's canonical order, so an all-tie case returns the zero shift.
    """
    best_l = None
    best_u = math.inf
    best_placed: tuple[Point, ...] = ()
    for l in lattice:
        u, placed = eval_shift(cluster, uncovered, region, l, counter)
        if u < best_u:
            best_l, best_u, best_placed = l, u, placed
    return best_l, best_u, best_placed


def _dedupe_key(p: Point, r_s: float) -> tuple[int, int]:
    g = _snap(r_s)
    return (round(p.x / g), round(p.y / g))


def _fold_union(sets, r_s: float) -> PolygonSet:
    acc = PolygonSet()
    for s in sets:
        acc = boolean("union", acc, s, snap=_snap(r_s), min_area=0.0)
    return acc


def _restrict(uncovered: PolygonSet, cells: tuple[Hexagon, ...], r_s: float) -> PolygonSet:
    return boolean(
        "intersection",
        PolygonSet(tuple(c.polygon for c in cells)),
        uncovered,
        snap=_snap(r_s),
        min_area=0.0,
    )


class _Engine:
    """Shared iteration machinery; the opaque planner subclasses the
    classification and per-shift coverage steps."""

    mode = "transparent"

    def __init__(self, region: Region, config: PlanConfig):
        self.region = region
        self.config = config
        self.r_s = region.r_s
        self.eps_area = config.resolve_epsilon(region.r_s)
        self.eps_geom = _eps_geom(region.r_s)
        self.land = accessible_land(region)
        xs = [x for x, _ in region.boundary.outer]
        ys = [y for _, y in region.boundary.outer]
        self.t = generate(
            (min(xs), min(ys), max(xs), max(ys)),
            region.r_s,
            config.origin,
            config.orientation,
        )

    # hooks the opaque planner overrides
    def classify_cells(self) -> dict[tuple[int, int], CellClass]:
        return classify(self.region, self.t)

    def initial_sensors(self, classes) -> tuple[list[Point], PolygonSet]:
        """Centre sensors and the cover they are credited with."""
        sensors: list[Point] = []
        hexes: list[Polygon] = []
        for cell in self.t.cells:
            if classes[cell.index] is not CellClass.NORMAL:
                continue
            if _land_in(cell.polygon, self.land) > self.eps_geom:
                sensors.append(cell.centre)
                hexes.append(cell.polygon)
        return sensors, PolygonSet(tuple(hexes))

    def repair_cells(self, classes) -> list[Hexagon]:
        """Cells whose residual land the iteration loop works on."""
        return [
            c for c in self.t.cells if classes[c.index] is CellClass.ANOMALOUS
        ]

    def cluster_best(self, cluster: Cluster, cluster_unc: PolygonSet,
                     lattice: ShiftLattice, counter: EvalCounter | None = None):
        return best_shift(cluster, cluster_unc, self.region, lattice, counter)

    def coverage_of(self, p: Point, cell: Hexagon) -> PolygonSet:
        """What a sensor at p contributes; transparent case: its hexagon."""
        h = hexagon_at(p, self.r_s, _cell_orientation(cell))
        return PolygonSet.of(h.polygon)

    def greedy_cover(self, p: Point) -> PolygonSet:
        """Cover credited to a fallback sensor dropped at p."""
        return PolygonSet.of(hexagon_at(p, self.r_s, self.config.orientation).polygon)

    def prune_cover(self, s: Point) -> PolygonSet:
        """Land a kept sensor holds against pruning of its neighbours."""
        return boolean(
            "intersection",
            PolygonSet.of(hexagon_at(s, self.r_s, self.config.orientation).polygon),
            self.land,
            snap=_snap(self.r_s), min_area=0.0,
        )

    def make_bounds(self, classes) -> BoundsReport:
        n_norm = sum(1 for c in classes.values() if c is CellClass.NORMAL)
        n_anom = sum(1 for c in classes.values() if c is CellClass.ANOMALOUS)
        ah = hex_area(self.r_s)
        return transparent_bounds(n_norm * ah, n_anom * ah, self.r_s)

    # the loop itself
    def run(self) -> Plan:
        cfg = self.config
        classes = self.classify_cells()
        sensors, init_cover = self.initial_sensors(classes)
        seen = {_dedupe_key(s, self.r_s) for s in sensors}
        uncovered = boolean(
            "difference", self.land, init_cover,
            snap=_snap(self.r_s), min_area=0.0,
        )
        repairable = self.repair_cells(classes)

        def active_clusters(unc: PolygonSet) -> tuple[Cluster, ...]:
            live = [
                c for c in repairable
                if _land_in(c.polygon, unc) > self.eps_geom
            ]
            return _components(live)

        comps = active_clusters(uncovered)
        records = [
            IterationRecord(
                j=0,
                uncovered_area=area(uncovered),
                clusters=len(comps),
                sensors_added=len(sensors),
                shifts=(),
            )
        ]
        refinements: list[RefinementRecord] = []
        depth = cfg.lattice_depth
        lattice = shift_lattice(self.r_s, depth, cfg.orientation)
        j = 0

        while area(uncovered) > self.eps_area:
            if j >= cfg.max_iterations:
                raise PlannerError(
                    f"no convergence after {j} iterations; "
                    f"residual area {area(uncovered):.6g}",
                    residual=uncovered,
                )
            placed_now: list[tuple[Point, Hexagon]] = []
            shifts_chosen: list[Shift] = []
            cells_total = 0
            counter = EvalCounter()
            if comps:
                for cluster in comps:
                    cluster_unc = _restrict(uncovered, cluster.cells, self.r_s)
                    l, u, placed = self.cluster_best(
                        cluster, cluster_unc, lattice, counter
                    )
                    cells_total += len(cluster.cells)
                    reduction = area(cluster_unc) - u
                    if reduction >= self.eps_area and placed:
                        shifts_chosen.append(l)
                        for p in placed:
                            placed_now.append((p, cluster.cells[0]))
                if placed_now:
                    cover = _fold_union(
                        (self.coverage_of(p, cell) for p, cell in placed_now),
                        self.r_s,
                    )
                    uncovered = boolean(
                        "difference", uncovered, cover,
                        snap=_snap(self.r_s), min_area=0.0,
                    )
                    added = 0
                    for p, _ in placed_now:
                        key = _dedupe_key(p, self.r_s)
                        if key not in seen:
                            seen.add(key)
                            sensors.append(p)
                            added += 1
                    j += 1
                    comps = active_clusters(uncovered)
                    records.append(
                        IterationRecord(
                            j=j,
                            uncovered_area=area(uncovered),
                            clusters=len(comps),
                            sensors_added=added,
                            shifts=tuple(shifts_chosen),
                            depth=depth,
                            lattice_size=len(lattice),
                            cells_total=cells_total,
                            eval_units=counter.units,
                        )
                    )
                    continue
                if len(refinements) < cfg.max_refinements:
                    refinements.append(
                        RefinementRecord(j, depth, 2 * depth)
                    )
                    depth *= 2
                    lattice = shift_lattice(self.r_s, depth, cfg.orientation)
                    continue
            # greedy fallback: one sensor per residual component
            adds: list[Point] = []
            hexes: list[PolygonSet] = []
            for geom_poly in uncovered.polygons:
                rp = sgeom.Polygon(geom_poly.outer, geom_poly.holes).representative_point()
                p = Point(rp.x, rp.y)
                adds.append(p)
                hexes.append(self.greedy_cover(p))
            if not adds:
                break  # residual below construction floor
            cover = _fold_union(hexes, self.r_s)
            uncovered = boolean(
                "difference", uncovered, cover, snap=_snap(self.r_s), min_area=0.0
            )
            added = 0
            for p in adds:
                key = _dedupe_key(p, self.r_s)
                if key not in seen:
                    seen.add(key)
                    sensors.append(p)
                    added += 1
            j += 1
            comps = active_clusters(uncovered)
            records.append(
                IterationRecord(
                    j=j,
                    uncovered_area=area(uncovered),
                    clusters=len(comps),
                    sensors_added=added,
                    shifts=(),
                    depth=depth,
                    greedy=True,
                )
            )

        if cfg.prune:
            sensors = self._pruned(sensors)
        for s in sensors:
            if not is_accessible(self.region, s):
                raise PlannerError(f"sensor off accessible land: ({s.x}, {s.y})")
        return Plan(
            sensors=tuple(sensors),
            trace=IterationTrace(tuple(records), tuple(refinements)),
            bounds=self.make_bounds(classes),
            mode=self.mode,
        )

    def _pruned(self, sensors: list[Point]) -> list[Point]:
        """Drop sensors whose exclusive land coverage is negligible.

        Later sensors are candidates first; each drop re-checks against
        the survivors so coverage never regresses.
        """
        hexes = [self.prune_cover(s) for s in sensors]
        prefix: list[PolygonSet] = [PolygonSet()]
        for h in hexes[:-1]:
            prefix.append(boolean("union", prefix[-1], h, snap=_snap(self.r_s),
                                  min_area=0.0))
        kept: list[Point] = []
        kept_union = PolygonSet()
        for i in range(len(sensors) - 1, -1, -1):
            others = boolean("union", prefix[i], kept_union, snap=_snap(self.r_s),
                             min_area=0.0)
            exclusive = boolean("difference", hexes[i], others,
                                snap=_snap(self.r_s), min_area=0.0)
            if area(exclusive) > self.eps_geom:
                kept.append(sensors[i])
                kept_union = boolean("union", kept_union, hexes[i],
                                     snap=_snap(self.r_s), min_area=0.0)
        kept.reverse()
        return kept


def plan_transparent(region: Region, config: PlanConfig | None = None) -> Plan:
    """Cover a region whose obstacles pass the sensing signal.

    Returns the accumulated sensor list, the full iteration trace, and
    the sensor-count bracket for the classified tessellation. Raises
    :class:`PlannerError` (with the residual attached) if the coverage
    tolerance cannot be reached within the iteration budget.
    """
    if region.has_opaque:
        raise ValueError(
            "region has opaque obstacles; use plan_opaque (or mode='auto')"
        )
    return _Engine(region, config or PlanConfig()).run()
