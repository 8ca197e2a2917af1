"""Give every point of a field two independent sensors.

Fault tolerance by layering: a second tessellation, shifted by half a
long lattice diagonal, lands its centres as far as possible from the
first layer's. The oracle then counts, for every sampled point, how
many sensors are in range, and reports the worst case.
"""

from pathlib import Path

from hexcover import (
    ObstacleClass,
    Polygon,
    Region,
    coverage_report,
    plan_k,
    rectangle,
    render_svg,
)

lake = Polygon(((7.0, 4.0), (12.0, 5.0), (11.0, 9.0), (6.5, 8.0)))
region = Region(
    rectangle(0.0, 0.0, 20.0, 14.0),
    ((lake, ObstacleClass.TRANSPARENT),),
    r_s=1.0,
)

kp = plan_k(region, 2)
for i, (layer, shift) in enumerate(zip(kp.layers, kp.layer_shifts)):
    print(f"layer {i}: {len(layer.sensors)} sensors, "
          f"offset ({shift.dx:.3f}, {shift.dy:.3f})")

rep = coverage_report(region, kp.sensors, k=2, density=2000.0)
print(f"minimum multiplicity over {rep.samples} samples: "
      f"{rep.min_multiplicity}")

out = Path(__file__).with_suffix(".svg")
out.write_text(render_svg(region, [layer.sensors for layer in kp.layers]))
print(f"wrote {out}")
