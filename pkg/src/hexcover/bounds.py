"""Sensor-count bounds, tessellation-ratio experiments, and the
five/six-point packing facts behind them.

The bound arithmetic works on cell-area sums: A is the total area of
normal cells (one sensor each suffices), A_o the total area of anomalous
cells. A transparent-obstacle cell can demand up to five sensors (five
islands can be mutually farther than r_s apart, but never six); an
opaque-obstacle cell can demand up to n/3, where n counts the
circumradius-R_O sub-cells that fit in a cell and 3 is the densest
spacing of pairwise non-adjacent sub-cells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import shapely.geometry as sgeom

from .geometry import Point
from .hexgrid import SQRT3, _basis, _vertex_offsets, generate, hex_area

__all__ = [
    "BoundsReport",
    "transparent_bounds",
    "opaque_bounds",
    "count_inner_hexagons",
    "kershner_ratio",
    "five_point_witness",
    "random_points_in_hexagon",
    "min_pairwise_distance",
]


@dataclass(frozen=True)
class BoundsReport:
    """Sensor-count bracket for a tessellated instance."""

    A: float
    A_o: float
    A_hex: float
    lower: float
    upper: float
    mode: str
    n: int | None = None
    R_O: float | None = None


def transparent_bounds(A: float, A_o: float, r_s: float) -> BoundsReport:
    """Bracket the sensor count when obstacles pass the signal.

    ``A`` and ``A_o`` are the cell-area sums of normal and anomalous
    cells. Upper bound: one sensor per normal cell plus at most five per
    anomalous cell. The lower bound is the best case over land patterns
    (one sensor per cell) and is reported, never asserted per instance.
    """
    if A < 0 or A_o < 0:
        raise ValueError(f"cell-area sums must be nonnegative, got A={A}, A_o={A_o}")
    if not r_s > 0:
        raise ValueError(f"r_s must be positive, got {r_s}")
    ah = hex_area(r_s)
    return BoundsReport(
        A=A, A_o=A_o, A_hex=ah,
        lower=(A + A_o) / ah,
        upper=(A + 5.0 * A_o) / ah,
        mode="transparent",
    )


def opaque_bounds(
    A: float, A_o: float, r_s: float, R_O: float, *, max_ratio: float = 0.25
) -> BoundsReport:
    """Bracket the sensor count when obstacles block the signal.

    Valid only under the granularity assumptions: obstacles convex and at
    least one R_O-cell large, and no land sliver smaller than an R_O-cell
    needs covering. ``R_O`` must be small against r_s (at most
    ``max_ratio * r_s``). Per anomalous cell at most n/3 sensors: of the
    n R_O-sub-cells, demand points must be pairwise non-adjacent, and the
    densest such class packing takes every third sub-cell.
    """
    if A < 0 or A_o < 0:
        raise ValueError(f"cell-area sums must be nonnegative, got A={A}, A_o={A_o}")
    if not r_s > 0:
        raise ValueError(f"r_s must be positive, got {r_s}")
    if not 0 < R_O <= max_ratio * r_s:
        raise ValueError(
            f"R_O must be in (0, {max_ratio} * r_s], got {R_O} for r_s={r_s}"
        )
    n = count_inner_hexagons(r_s, R_O)
    ah = hex_area(r_s)
    return BoundsReport(
        A=A, A_o=A_o, A_hex=ah,
        lower=(A + A_o) / ah,
        upper=(A + (n / 3.0) * A_o) / ah,
        mode="opaque",
        n=n, R_O=R_O,
    )


def count_inner_hexagons(r_s: float, R_O: float, orientation: float = 0.0) -> int:
    """Cells of an R_O sub-tessellation meeting a closed r_s cell.

    The sub-tessellation shares the parent cell's centre and orientation;
    a sub-cell counts if it lies partially or completely inside, i.e. its
    closed intersection with the closed parent cell is nonempty.
    """
    if not 0 < R_O <= r_s:
        raise ValueError(f"need 0 < R_O <= r_s, got R_O={R_O}, r_s={r_s}")
    parent = sgeom.Polygon(_vertex_offsets(r_s, orientation))
    offs = _vertex_offsets(R_O, orientation)
    u, v = _basis(R_O, orientation)
    reach = r_s + R_O
    w = int(math.ceil(reach / (SQRT3 * R_O))) + 2
    tol = 1e-9 * r_s
    count = 0
    for q in range(-w, w + 1):
        for r in range(-w, w + 1):
            cx = q * u[0] + r * v[0]
            cy = q * u[1] + r * v[1]
            if math.hypot(cx, cy) > reach + tol:
                continue
            sub = sgeom.Polygon([(cx + ox, cy + oy) for ox, oy in offs])
            if parent.distance(sub) <= tol:
                count += 1
    return count


def kershner_ratio(l: float, w: float, r_s: float,
                   origin: Point = Point(0.0, 0.0),
                   orientation: float = 0.0) -> tuple[int, float]:
    """Cells needed for an l-by-w rectangle, over the area ideal.

    Returns (count, ratio) with ratio = count / (l*w / A_hex). The ratio
    exceeds 1 for any finite rectangle (boundary cells overhang) and
    approaches 1 as the rectangle grows.
    """
    if not (l > 2 * r_s and w > 2 * r_s):
        raise ValueError(f"rectangle must exceed 2*r_s per side, got {l} x {w}")
    t = generate((0.0, 0.0, l, w), r_s, origin, orientation)
    count = len(t.cells)
    return count, count / ((l * w) / hex_area(r_s))


def random_points_in_hexagon(n: int, r_s: float = 1.0, seed: int = 0,
                             orientation: float = 0.0) -> np.ndarray:
    """Uniform samples in the closed hexagon, shape (n, 2)."""
    rng = np.random.default_rng(seed)
    normals = [
        (math.cos(orientation + math.pi / 6 + k * math.pi / 3),
         math.sin(orientation + math.pi / 6 + k * math.pi / 3))
        for k in range(3)
    ]
    r_in = 0.5 * SQRT3 * r_s
    out = np.empty((0, 2))
    while len(out) < n:
        m = int((n - len(out)) * 1.5) + 16
        pts = rng.uniform(-r_s, r_s, size=(m, 2))
        keep = np.ones(m, dtype=bool)
        for nx, ny in normals:
            keep &= np.abs(pts[:, 0] * nx + pts[:, 1] * ny) <= r_in
        out = np.vstack([out, pts[keep]])
    return out[:n]


def min_pairwise_distance(pts) -> float:
    pts = np.asarray(pts, float)
    d = np.linalg.norm(pts[:, None, :] - pts[None, :, :], axis=-1)
    iu = np.triu_indices(len(pts), k=1)
    return float(d[iu].min())


def _hexagon_boundary_point(theta: float, r_s: float) -> tuple[float, float]:
    """Boundary point at polar angle theta (vertices at multiples of 60 deg)."""
    r_in = 0.5 * SQRT3 * r_s
    sector = math.floor(theta / (math.pi / 3.0))
    mid = (sector + 0.5) * (math.pi / 3.0)  # edge-normal direction
    rho = r_in / math.cos(theta - mid)
    return (rho * math.cos(theta), rho * math.sin(theta))


def five_point_witness(r_s: float) -> tuple[Point, ...]:
    """Five points in the closed cell, pairwise strictly farther than r_s.

    Six such points cannot exist, so this is the extremal packing. Points
    are placed on the hexagon boundary at five polar angles and the
    angles are tuned by a deterministic multi-start pattern search
    maximizing the minimum pairwise distance; the result is validated by
    direct distance computation before it is returned.
    """
    if not r_s > 0:
        raise ValueError(f"r_s must be positive, got {r_s}")
    two_pi = 2.0 * math.pi

    def config(angles):
        return np.array([_hexagon_boundary_point(a % two_pi, 1.0) for a in angles])

    def score(angles):
        return min_pairwise_distance(config(angles))

    best_angles = None
    best_score = -np.inf
    for start_deg in (0.0, 15.0, 30.0, 45.0):
        angles = np.radians(start_deg + 72.0 * np.arange(5))
        step = math.radians(8.0)
        current = score(angles)
        while step > 1e-10:
            improved = False
            for i in range(5):
                for sgn in (1.0, -1.0):
                    trial = angles.copy()
                    trial[i] += sgn * step
                    s = score(trial)
                    if s > current:
                        angles, current = trial, s
                        improved = True
            if not improved:
                step *= 0.5
        if current > best_score:
            best_score, best_angles = current, angles

    pts = config(best_angles) * r_s
    if min_pairwise_distance(pts) <= r_s:
        raise RuntimeError(
            "five-point search failed to exceed r_s; this should be impossible"
        )
    r_in = 0.5 * SQRT3 * r_s
    for x, y in pts:
        for k in range(3):
            a = math.pi / 6 + k * math.pi / 3
            if abs(x * math.cos(a) + y * math.sin(a)) > r_in + 1e-9 * r_s:
                raise RuntimeError("five-point witness left the closed hexagon")
    return tuple(Point(float(x), float(y)) for x, y in pts)
