"""hexcover: sensor placement for total coverage of obstacle-ridden regions.

The package plans near-minimal sets of sensor locations whose sensing
disks jointly cover every point of a bounded 2-D region, working around
obstacles that either permit sensing across them (lakes, marshes) or
block it (walls, buildings). Placement starts from a hexagonal
tessellation and repairs obstacle losses by locally shifting extra
tessellation layers.
"""

from .geometry import (
    AREA_EPS,
    SNAP_EPS,
    GeometryError,
    Point,
    Polygon,
    PolygonSet,
    RobustnessError,
    area,
    boolean,
    locate,
    rectangle,
    regular_ngon,
)
from .region import (
    ObstacleClass,
    Region,
    RegionError,
    accessible_land,
    is_accessible,
    parse_region,
    region_document,
    sensable_land,
)
from .hexgrid import (
    Hexagon,
    Shift,
    ShiftLattice,
    Tessellation,
    TessellationError,
    apply_shift,
    generate,
    hex_area,
    hexagon_at,
    normalize_shift,
    shift_lattice,
    validate_tessellation,
)
from .bounds import (
    BoundsReport,
    count_inner_hexagons,
    five_point_witness,
    kershner_ratio,
    min_pairwise_distance,
    opaque_bounds,
    random_points_in_hexagon,
    transparent_bounds,
)
from .oracle import CoverageReport, coverage_report
from .planner import (
    CellClass,
    Cluster,
    EvalCounter,
    IterationRecord,
    IterationTrace,
    Plan,
    PlanConfig,
    PlannerError,
    RefinementRecord,
    best_shift,
    classify,
    clusters,
    eval_shift,
    plan_transparent,
)
from .planner_opaque import (
    aligned_ngon,
    best_shift_opaque,
    classify_opaque,
    eval_shift_opaque,
    plan_opaque,
)
from .visibility import (
    PlacementError,
    RspPolygon,
    SegmentSet,
    opaque_segments,
    rsp,
    visibility_polygon,
)
from .kcover import KPlan, layer_offsets, plan_k
from .render import render_svg

__version__ = "0.1.0"
