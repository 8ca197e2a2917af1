"""k-fold coverage through stacked, mutually offset tessellations.

Each of the k layers is a complete single-coverage plan of the whole
region, with the layer's tessellation origin displaced so centres of
different layers interleave instead of piling up. Any point covered once
per layer is covered k times in total, so multiplicity follows directly
from every layer reaching 1-coverage on its own. Layers never share
coverage credit; a cheaper joint plan is deliberately out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .geometry import Point
from .hexgrid import Shift, _basis
from .planner import Plan, PlanConfig, PlannerError, _dedupe_key
from .planner_opaque import plan_opaque
from .region import Region, is_accessible

__all__ = ["KPlan", "layer_offsets", "plan_k"]


@dataclass(frozen=True)
class KPlan:
    """k stacked plans; layer 0 sits on the unshifted tessellation."""

    layers: tuple[Plan, ...]
    k: int
    layer_shifts: tuple[Shift, ...]

    @property
    def sensors(self) -> tuple[Point, ...]:
        return tuple(s for layer in self.layers for s in layer.sensors)

    @property
    def sensor_count(self) -> int:
        return sum(layer.sensor_count for layer in self.layers)


def layer_offsets(k: int, r_s: float, orientation: float = 0.0) -> tuple[Shift, ...]:
    """Global origin displacement of each layer.

    With centre basis u, v: two layers split the u+v diagonal in half,
    three layers in thirds, interleaving the centre lattices.
    """
    if k not in (1, 2, 3):
        raise ValueError(f"k must be 1, 2 or 3, got {k}")
    (ux, uy), (vx, vy) = _basis(r_s, orientation)
    dx, dy = ux + vx, uy + vy
    if k == 1:
        return (Shift(0.0, 0.0),)
    if k == 2:
        return (Shift(0.0, 0.0), Shift(dx / 2.0, dy / 2.0))
    return (
        Shift(0.0, 0.0),
        Shift(dx / 3.0, dy / 3.0),
        Shift(2.0 * dx / 3.0, 2.0 * dy / 3.0),
    )


def _nudged(s: Point, region: Region, delta: float, orientation: float,
            seen: set) -> Point:
    """First accessible point a hair away from s not already taken."""
    for j in range(6):
        a = orientation + math.pi / 6.0 + j * math.pi / 3.0
        cand = Point(s.x + delta * math.cos(a), s.y + delta * math.sin(a))
        if not is_accessible(region, cand):
            continue
        if _dedupe_key(cand, region.r_s) in seen:
            continue
        return cand
    raise PlannerError(f"cannot separate stacked sensors at ({s.x}, {s.y})")


def _separated(layers: list[Plan], region: Region, orientation: float) -> tuple[Plan, ...]:
    """Keep sensors of different layers at distinct points.

    A repair sensor of one layer can land exactly on a centre of
    another: all candidate positions are rational combinations of the
    same lattice basis. Stacking two devices is what the layer
    arithmetic means, so the later one is kept but displaced by a step
    far below the sensing scale (1e-6 r_s); the layer's residual grows
    by at most the swept sliver, orders below the area tolerance.
    """
    delta = 1e-6 * region.r_s
    seen: set = set()
    out: list[Plan] = []
    for layer in layers:
        new_sensors: list[Point] = []
        changed = False
        for s in layer.sensors:
            if _dedupe_key(s, region.r_s) in seen:
                s = _nudged(s, region, delta, orientation, seen)
                changed = True
            seen.add(_dedupe_key(s, region.r_s))
            new_sensors.append(s)
        out.append(replace(layer, sensors=tuple(new_sensors)) if changed else layer)
    return tuple(out)


def plan_k(region: Region, k: int, config: PlanConfig | None = None) -> KPlan:
    """Cover every accessible point by at least k sensors.

    Runs the single-coverage planner once per layer on the offset
    tessellations; obstacle classes are honoured per layer exactly as in
    the 1-coverage case. Layer plans keep their own traces and bounds.
    """
    cfg = config or PlanConfig()
    offsets = layer_offsets(k, region.r_s, cfg.orientation)
    layers = []
    for off in offsets:
        layer_cfg = replace(
            cfg, origin=Point(cfg.origin.x + off.dx, cfg.origin.y + off.dy)
        )
        layers.append(plan_opaque(region, layer_cfg))
    return KPlan(_separated(layers, region, cfg.orientation), k, offsets)
