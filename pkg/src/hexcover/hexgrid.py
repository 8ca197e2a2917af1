"""Hexagonal tessellations, the finite shift lattice, and shift application.

A tessellation is pinned down by one hexagon centre (the origin) and an
orientation angle, measured from the +x axis to one of the hexagon's
vertex directions. Cells are regular hexagons of circumradius r_s, the
sensing radius, so a sensor at a cell centre covers its whole cell.
Centres form a triangular lattice of spacing sqrt(3) * r_s; cells are
addressed by integer axial indices (q, r) on that lattice.

Shifts displace every centre at once. The planner optimizes over a
finite triangular lattice of candidate shifts inside one cell (depth d
gives spacing r_s / d); arbitrary displacements are reduced modulo the
centre lattice to a canonical in-cell representative, which leaves the
tessellation as a point set unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import shapely
import shapely.geometry as sgeom

from .geometry import GeometryError, Point, Polygon

__all__ = [
    "HEX_AREA_FACTOR",
    "AXIAL_NEIGHBORS",
    "Hexagon",
    "Tessellation",
    "TessellationError",
    "Shift",
    "ShiftLattice",
    "hex_area",
    "hexagon_at",
    "generate",
    "shift_lattice",
    "apply_shift",
    "normalize_shift",
    "validate_tessellation",
]

SQRT3 = math.sqrt(3.0)

# Area of a regular hexagon with circumradius 1.
HEX_AREA_FACTOR = 1.5 * SQRT3

# Axial index offsets of the six edge-adjacent cells.
AXIAL_NEIGHBORS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))


class TessellationError(RuntimeError):
    """A tessellation failed validation."""


def hex_area(r_s: float) -> float:
    """Area of one cell: (3*sqrt(3)/2) * r_s**2."""
    return HEX_AREA_FACTOR * r_s * r_s


def _basis(r_s: float, orientation: float):
    """Centre-lattice basis vectors u, v (each of length sqrt(3)*r_s).

    Vertex directions sit at orientation + k*60 deg; centre-to-centre
    directions bisect them at orientation + 30 deg + k*60 deg.
    """
    s = SQRT3 * r_s
    a30 = orientation + math.pi / 6.0
    a90 = orientation + math.pi / 2.0
    u = (s * math.cos(a30), s * math.sin(a30))
    v = (s * math.cos(a90), s * math.sin(a90))
    return u, v


def _vertex_offsets(r_s: float, orientation: float):
    return tuple(
        (r_s * math.cos(orientation + k * math.pi / 3.0),
         r_s * math.sin(orientation + k * math.pi / 3.0))
        for k in range(6)
    )


@dataclass(frozen=True)
class Hexagon:
    """One tessellation cell: centre, axial index, and its polygon."""

    centre: Point
    index: tuple[int, int]
    polygon: Polygon


def hexagon_at(centre: Point, r_s: float, orientation: float = 0.0,
               index: tuple[int, int] = (0, 0)) -> Hexagon:
    """Regular hexagon of circumradius r_s at an arbitrary centre."""
    offs = _vertex_offsets(r_s, orientation)
    poly = Polygon(tuple((centre.x + ox, centre.y + oy) for ox, oy in offs))
    return Hexagon(centre, index, poly)


@dataclass(frozen=True)
class Shift:
    """A displacement applied uniformly to every tessellation centre."""

    dx: float
    dy: float

    @property
    def norm(self) -> float:
        return math.hypot(self.dx, self.dy)

    def as_tuple(self) -> tuple[float, float]:
        return (self.dx, self.dy)


ZERO_SHIFT = Shift(0.0, 0.0)


@dataclass(frozen=True)
class Tessellation:
    """Cells of the hexagonal tessellation that meet a bounding box.

    ``cells`` is sorted by axial index and covers every point of ``bbox``
    (cells whose interiors overlap the box are kept).
    """

    bbox: tuple[float, float, float, float]
    r_s: float
    origin: Point
    orientation: float
    cells: tuple[Hexagon, ...]

    @cached_property
    def by_index(self) -> dict[tuple[int, int], Hexagon]:
        return {c.index: c for c in self.cells}

    @property
    def centres(self) -> tuple[Point, ...]:
        return tuple(c.centre for c in self.cells)


def generate(bbox, r_s: float, origin: Point = Point(0.0, 0.0),
             orientation: float = 0.0) -> Tessellation:
    """Tessellate an axis-aligned bounding box.

    Keeps exactly the cells whose interior overlaps the box, so every
    point of the closed box lies in at least one kept cell.
    """
    xmin, ymin, xmax, ymax = map(float, bbox)
    if not (r_s > 0):
        raise GeometryError(f"r_s must be positive, got {r_s}")
    if not (xmax > xmin and ymax > ymin):
        raise GeometryError(f"degenerate bbox {bbox}")

    u, v = _basis(r_s, orientation)
    det = u[0] * v[1] - u[1] * v[0]
    corners = [(xmin, ymin), (xmax, ymin), (xmax, ymax), (xmin, ymax)]
    fq = []
    fr = []
    for x, y in corners:
        px, py = x - origin.x, y - origin.y
        fq.append((v[1] * px - v[0] * py) / det)
        fr.append((u[0] * py - u[1] * px) / det)
    q_lo, q_hi = math.floor(min(fq)) - 2, math.ceil(max(fq)) + 2
    r_lo, r_hi = math.floor(min(fr)) - 2, math.ceil(max(fr)) + 2

    offs = _vertex_offsets(r_s, orientation)
    r_in = 0.5 * SQRT3 * r_s  # inradius
    # Overlap below keep_eps counts as a mere touch and the cell is
    # dropped; the threshold sits far above float noise so the decision
    # is stable under independent re-computation.
    keep_eps = 1e-12 * r_s * r_s
    band = 1e-3 * r_s
    box = sgeom.box(xmin, ymin, xmax, ymax)
    cells = []
    for q in range(q_lo, q_hi + 1):
        for r in range(r_lo, r_hi + 1):
            cx = origin.x + q * u[0] + r * v[0]
            cy = origin.y + q * u[1] + r * v[1]
            # distance from centre to the box
            ddx = max(xmin - cx, 0.0, cx - xmax)
            ddy = max(ymin - cy, 0.0, cy - ymax)
            d = math.hypot(ddx, ddy)
            if d > r_s:
                continue  # cannot reach the box
            if d >= r_in - band:  # borderline: decide by exact overlap
                ring = [(cx + ox, cy + oy) for ox, oy in offs]
                if sgeom.Polygon(ring).intersection(box).area <= keep_eps:
                    continue
            poly = Polygon(tuple((cx + ox, cy + oy) for ox, oy in offs))
            cells.append(Hexagon(Point(cx, cy), (q, r), poly))
    cells.sort(key=lambda c: c.index)
    return Tessellation((xmin, ymin, xmax, ymax), float(r_s), origin,
                        float(orientation), tuple(cells))


def _hexnorm(i: int, j: int) -> int:
    return max(abs(i), abs(j), abs(i + j))


@dataclass(frozen=True)
class ShiftLattice:
    """Finite candidate shifts: a triangular lattice of spacing r_s/depth
    clipped to the closed cell, ordered zero-first (by squared length,
    then (dx, dy)) so ties in the planner resolve to the smallest move.
    """

    depth: int
    r_s: float
    orientation: float
    shifts: tuple[Shift, ...]

    def __len__(self) -> int:
        return len(self.shifts)

    def __iter__(self):
        return iter(self.shifts)

    def refined(self) -> "ShiftLattice":
        """The depth-doubled lattice; contains this one as a subset."""
        return shift_lattice(self.r_s, 2 * self.depth, self.orientation)


def shift_lattice(r_s: float, depth: int, orientation: float = 0.0) -> ShiftLattice:
    """Candidate shifts inside one cell.

    Lattice points i*a + j*b with basis vectors of length r_s/depth along
    two vertex directions; the points with max(|i|, |j|, |i+j|) <= depth
    are exactly those inside the closed hexagon. Count is
    1 + 3*depth*(depth+1).
    """
    if depth < 1:
        raise ValueError(f"lattice depth must be >= 1, got {depth}")
    if not (r_s > 0):
        raise ValueError(f"r_s must be positive, got {r_s}")
    s = r_s / depth
    c0, s0 = math.cos(orientation), math.sin(orientation)
    c1 = math.cos(orientation + math.pi / 3.0)
    s1 = math.sin(orientation + math.pi / 3.0)
    shifts = []
    for i in range(-depth, depth + 1):
        for j in range(-depth, depth + 1):
            if _hexnorm(i, j) > depth:
                continue
            # term-by-term form keeps depth -> 2*depth refinement bit-exact
            dx = (i * s) * c0 + (j * s) * c1
            dy = (i * s) * s0 + (j * s) * s1
            shifts.append(Shift(dx, dy))
    shifts.sort(key=lambda l: (l.dx * l.dx + l.dy * l.dy, l.dx, l.dy))
    return ShiftLattice(depth, float(r_s), float(orientation), tuple(shifts))


def normalize_shift(l: Shift, r_s: float, orientation: float = 0.0) -> Shift:
    """Reduce a displacement modulo the centre lattice.

    The hexagonal cell is the set of points closer to its own centre than
    to any other, so subtracting the nearest centre-lattice vector yields
    an equivalent shift inside the closed cell. Displacements already in
    the closed cell are returned unchanged (within 1e-9 * r_s of optimal,
    so boundary points stay put instead of flipping to a twin).
    """
    if not (math.isfinite(l.dx) and math.isfinite(l.dy)):
        raise GeometryError(f"non-finite shift ({l.dx}, {l.dy})")
    u, v = _basis(r_s, orientation)
    det = u[0] * v[1] - u[1] * v[0]
    fq = (v[1] * l.dx - v[0] * l.dy) / det
    fr = (u[0] * l.dy - u[1] * l.dx) / det
    best = None
    best_d = math.inf
    for q in (math.floor(fq) - 1, math.floor(fq), math.floor(fq) + 1, math.floor(fq) + 2):
        for r in (math.floor(fr) - 1, math.floor(fr), math.floor(fr) + 1, math.floor(fr) + 2):
            dx = l.dx - (q * u[0] + r * v[0])
            dy = l.dy - (q * u[1] + r * v[1])
            d = math.hypot(dx, dy)
            if d < best_d - 1e-15 * r_s:
                best_d = d
                best = (q, r, dx, dy)
    q, r, dx, dy = best
    if (q, r) != (0, 0) and l.norm <= best_d + 1e-9 * r_s:
        return l  # already a representative; keep verbatim
    if (q, r) == (0, 0):
        return l
    return Shift(dx, dy)


def apply_shift(t: Tessellation, l: Shift) -> Tessellation:
    """Shift every centre by l and re-materialize over the same box.

    The displacement is first reduced modulo the centre lattice, so full
    lattice vectors reproduce the input tessellation and any in-cell
    shift keeps each centre inside its original cell's closure. Cells are
    regenerated so the result again tiles the stored bounding box.
    """
    canon = normalize_shift(l, t.r_s, t.orientation)
    origin = Point(t.origin.x + canon.dx, t.origin.y + canon.dy)
    return generate(t.bbox, t.r_s, origin, t.orientation)


def validate_tessellation(t: Tessellation, *, tol: float = 1e-9) -> None:
    """Check all tessellation invariants; raise TessellationError if any fail.

    Verifies per-cell regularity (vertices at distance r_s, 120 degree
    interior angles), exact sqrt(3)*r_s spacing of edge-adjacent centres,
    unique sorted indices, and the tiling property over the stored box:
    the union of cells covers it and adjacent cells do not overlap beyond
    snap slop.
    """
    if not t.cells:
        raise TessellationError("tessellation has no cells")
    r_s = t.r_s
    ang_tol = 1e-9
    area_eps = 1e-6 * r_s * r_s

    indices = [c.index for c in t.cells]
    if len(set(indices)) != len(indices):
        raise TessellationError("duplicate axial indices")
    if indices != sorted(indices):
        raise TessellationError("cells not sorted by axial index")

    u, v = _basis(r_s, t.orientation)
    for c in t.cells:
        q, r = c.index
        ex = t.origin.x + q * u[0] + r * v[0]
        ey = t.origin.y + q * u[1] + r * v[1]
        if math.hypot(c.centre.x - ex, c.centre.y - ey) > tol * r_s:
            raise TessellationError(f"cell {c.index}: centre off lattice")
        verts = c.polygon.outer
        if len(verts) != 6:
            raise TessellationError(f"cell {c.index}: {len(verts)} vertices")
        for k, (vx, vy) in enumerate(verts):
            if abs(math.hypot(vx - c.centre.x, vy - c.centre.y) - r_s) > tol * r_s:
                raise TessellationError(f"cell {c.index}: vertex {k} not at r_s")
        for k in range(6):
            ax, ay = verts[(k - 1) % 6]
            bx, by = verts[k]
            cx, cy = verts[(k + 1) % 6]
            e1 = (ax - bx, ay - by)
            e2 = (cx - bx, cy - by)
            ang = math.atan2(
                e1[0] * e2[1] - e1[1] * e2[0], e1[0] * e2[0] + e1[1] * e2[1]
            )
            if abs(abs(ang) - 2.0 * math.pi / 3.0) > ang_tol:
                raise TessellationError(f"cell {c.index}: interior angle != 120 deg")

    by_index = t.by_index
    spacing = SQRT3 * r_s
    overlap_sum = 0.0
    seen = set()
    for c in t.cells:
        q, r = c.index
        for dq, dr in AXIAL_NEIGHBORS:
            nb = by_index.get((q + dq, r + dr))
            if nb is None or (nb.index, c.index) in seen:
                continue
            seen.add((c.index, nb.index))
            d = math.hypot(nb.centre.x - c.centre.x, nb.centre.y - c.centre.y)
            if abs(d - spacing) > tol * r_s:
                raise TessellationError(
                    f"cells {c.index}/{nb.index}: centre spacing {d} != sqrt(3)*r_s"
                )
            inter = sgeom.Polygon(c.polygon.outer).intersection(
                sgeom.Polygon(nb.polygon.outer)
            )
            overlap_sum += inter.area
    if overlap_sum > area_eps * len(t.cells):
        raise TessellationError(f"adjacent cells overlap: total {overlap_sum}")

    xmin, ymin, xmax, ymax = t.bbox
    box = sgeom.box(xmin, ymin, xmax, ymax)
    union = shapely.union_all([sgeom.Polygon(c.polygon.outer) for c in t.cells])
    covered = union.intersection(box).area
    if abs(covered - box.area) > area_eps:
        raise TessellationError(
            f"cells do not tile the box: covered {covered} of {box.area}"
        )
    for c in t.cells:
        if sgeom.Polygon(c.polygon.outer).intersection(box).area <= 0.0:
            raise TessellationError(f"cell {c.index}: does not overlap the box")
