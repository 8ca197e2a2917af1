"""Command-line interface.

Five subcommands: ``plan`` computes a placement, ``verify`` rechecks one
by point sampling, ``bounds`` reports the sensor-count bracket,
``kershner`` sweeps rectangle sizes to show the boundary overhead fade,
and ``render`` draws an instance (optionally with a placement) as SVG.

Every JSON artifact embeds the fully resolved configuration and the
SHA-256 of the input instance, so results can be traced back to their
inputs. Exit codes: 0 success, 1 invalid input, 2 planner failure,
3 verification failure. Failures emit a JSON error document.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from typing import Any

from .bounds import BoundsReport, kershner_ratio, opaque_bounds, transparent_bounds
from .geometry import Point
from .hexgrid import generate, hex_area
from .kcover import plan_k
from .oracle import coverage_report
from .planner import CellClass, PlanConfig, PlannerError, classify, plan_transparent
from .planner_opaque import classify_opaque, plan_opaque
from .region import Region, parse_region
from .render import render_svg

__all__ = ["main"]


def _sha256(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _fail(code: int, kind: str, message: str) -> int:
    print(json.dumps({"error": kind, "detail": message}))
    return code


def _emit(doc: dict[str, Any], out: str | None) -> None:
    text = json.dumps(doc, indent=2, allow_nan=False)
    if out:
        with open(out, "w") as f:
            f.write(text + "\n")
    else:
        print(text)


def _num(x: float | None) -> float | None:
    """JSON has no infinity; an unbounded value becomes null."""
    if x is None or not math.isfinite(x):
        return None
    return float(x)


def _load_region(path: str) -> tuple[Region, str]:
    with open(path, "rb") as f:
        raw = f.read()
    return parse_region(raw), _sha256(raw)


def _parse_origin(text: str) -> Point:
    try:
        xs, ys = text.split(",")
        return Point(float(xs), float(ys))
    except ValueError as e:
        raise ValueError(f"origin must be 'x,y', got {text!r}") from e


def _resolve_mode(requested: str, region: Region) -> str:
    if requested == "auto":
        return "opaque" if region.has_opaque else "transparent"
    return requested


def _plan_config(args, resolved_mode: str) -> PlanConfig:
    return PlanConfig(
        origin=_parse_origin(args.origin),
        orientation=args.orientation,
        lattice_depth=args.lattice_depth,
        max_refinements=args.max_refinements,
        epsilon_area=args.epsilon_area,
        ngon=args.ngon,
        prune=getattr(args, "prune", False),
        R_O=getattr(args, "granularity", None),
    )


def _config_doc(args, region: Region, resolved_mode: str, cfg: PlanConfig) -> dict:
    origin = _parse_origin(args.origin)
    return {
        "mode": resolved_mode,
        "k": getattr(args, "k", 1),
        "lattice_depth": args.lattice_depth,
        "max_refinements": args.max_refinements,
        "epsilon_area": cfg.resolve_epsilon(region.r_s),
        "ngon": args.ngon,
        "seed": getattr(args, "seed", 0),
        "origin": [origin.x, origin.y],
        "orientation": args.orientation,
        "density": getattr(args, "density", 10000.0),
        "prune": getattr(args, "prune", False),
        "R_O": getattr(args, "granularity", None),
    }


def _trace_doc(trace) -> list[dict]:
    return [
        {
            "j": r.j,
            "uncovered_area": r.uncovered_area,
            "clusters": r.clusters,
            "sensors_added": r.sensors_added,
        }
        for r in trace.records
    ]


def _bounds_doc(b: BoundsReport) -> dict:
    return {
        "A": b.A,
        "A_o": b.A_o,
        "A_hex": b.A_hex,
        "lower": b.lower,
        "upper": _num(b.upper),
        "mode": b.mode,
        "n": b.n,
        "R_O": b.R_O,
    }


def _points_doc(points) -> list[list[float]]:
    return [[p.x, p.y] for p in points]


def _bbox(region: Region) -> tuple[float, float, float, float]:
    xs = [x for x, _ in region.boundary.outer]
    ys = [y for _, y in region.boundary.outer]
    return min(xs), min(ys), max(xs), max(ys)


def cmd_plan(args) -> int:
    try:
        region, sha = _load_region(args.region)
    except (OSError, ValueError) as e:
        return _fail(1, "validation", str(e))
    mode = _resolve_mode(args.mode, region)
    try:
        cfg = _plan_config(args, mode)
        if args.k == 1:
            planner = plan_transparent if mode == "transparent" else plan_opaque
            layers = [planner(region, cfg)]
            shifts = None
        else:
            if mode == "transparent" and region.has_opaque:
                raise ValueError(
                    "k-coverage of a signal-blocking region needs opaque mode"
                )
            kp = plan_k(region, args.k, cfg)
            layers = list(kp.layers)
            shifts = kp.layer_shifts
    except ValueError as e:
        return _fail(1, "validation", str(e))
    except PlannerError as e:
        return _fail(2, "planner", str(e))

    doc: dict[str, Any] = {
        "sensors": [
            coords for layer in layers for coords in _points_doc(layer.sensors)
        ],
        "trace": _trace_doc(layers[0].trace),
        "bounds": _bounds_doc(layers[0].bounds),
        "config": _config_doc(args, region, mode, cfg),
        "mode": layers[0].mode,
        "k": args.k,
        "input_sha256": sha,
    }
    if args.k > 1:
        doc["layers"] = [
            {
                "sensors": _points_doc(layer.sensors),
                "trace": _trace_doc(layer.trace),
                "bounds": _bounds_doc(layer.bounds),
                "shift": [shift.dx, shift.dy],
            }
            for layer, shift in zip(layers, shifts)
        ]
    _emit(doc, args.out)
    if args.svg:
        svg = render_svg(
            region, [layer.sensors for layer in layers], config=cfg
        )
        with open(args.svg, "w") as f:
            f.write(svg)
    return 0


def cmd_verify(args) -> int:
    try:
        region, sha = _load_region(args.region)
        origin = _parse_origin(args.origin)
        with open(args.plan, "rb") as f:
            plan_raw = f.read()
        plan_doc = json.loads(plan_raw)
        sensors = [Point(float(x), float(y)) for x, y in plan_doc["sensors"]]
    except (OSError, ValueError, KeyError, TypeError) as e:
        return _fail(1, "validation", str(e))
    mode = _resolve_mode(args.mode, region)
    k = args.k if args.k is not None else int(plan_doc.get("k", 1))
    try:
        rep = coverage_report(
            region, sensors, k=k, mode=mode, density=args.density, seed=args.seed
        )
    except ValueError as e:
        return _fail(1, "validation", str(e))
    passed = rep.fraction >= args.min_fraction
    doc = {
        "samples": rep.samples,
        "covered": rep.covered,
        "fraction": rep.fraction,
        "min_multiplicity": rep.min_multiplicity,
        "uncovered_points": _points_doc(rep.uncovered_points),
        "mode": rep.mode,
        "k": rep.k,
        "density": rep.density,
        "seed": rep.seed,
        "empty_region": rep.empty_region,
        "passed": passed,
        "min_fraction": args.min_fraction,
        "config": {
            "mode": mode,
            "k": k,
            "lattice_depth": plan_doc.get("config", {}).get("lattice_depth"),
            "max_refinements": plan_doc.get("config", {}).get("max_refinements"),
            "epsilon_area": plan_doc.get("config", {}).get("epsilon_area"),
            "ngon": plan_doc.get("config", {}).get("ngon"),
            "seed": args.seed,
            "origin": [origin.x, origin.y],
            "orientation": args.orientation,
            "density": args.density,
        },
        "input_sha256": sha,
        "plan_sha256": _sha256(plan_raw),
    }
    _emit(doc, args.out)
    return 0 if passed else 3


def cmd_bounds(args) -> int:
    try:
        region, sha = _load_region(args.region)
    except (OSError, ValueError) as e:
        return _fail(1, "validation", str(e))
    mode = _resolve_mode(args.mode, region)
    try:
        cfg = _plan_config(args, mode)
        t = generate(_bbox(region), region.r_s, cfg.origin, cfg.orientation)
        if mode == "transparent":
            classes = classify(region, t)
        else:
            classes = classify_opaque(region, t, cfg.ngon)
        n_norm = sum(1 for c in classes.values() if c is CellClass.NORMAL)
        n_anom = sum(1 for c in classes.values() if c is CellClass.ANOMALOUS)
        ah = hex_area(region.r_s)
        A, A_o = n_norm * ah, n_anom * ah
        if mode == "transparent":
            rep = transparent_bounds(A, A_o, region.r_s)
        elif args.granularity is not None:
            rep = opaque_bounds(A, A_o, region.r_s, args.granularity)
        else:
            rep = BoundsReport(
                A=A, A_o=A_o, A_hex=ah,
                lower=(A + A_o) / ah, upper=math.inf, mode="opaque",
            )
    except ValueError as e:
        return _fail(1, "validation", str(e))
    doc = {
        **_bounds_doc(rep),
        "config": _config_doc(args, region, mode, cfg),
        "input_sha256": sha,
    }
    _emit(doc, args.out)
    return 0


def cmd_kershner(args) -> int:
    try:
        sizes = [float(s) for s in args.sizes.split(",") if s]
        origin = _parse_origin(args.origin)
    except ValueError as e:
        return _fail(1, "validation", str(e))
    rows = []
    for m in sizes:
        side = m * args.r_s
        try:
            count, ratio = kershner_ratio(
                side, side, args.r_s, origin, args.orientation
            )
        except ValueError as e:
            return _fail(1, "validation", str(e))
        rows.append({"l": side, "w": side, "count": count, "ratio": ratio})
    doc = {
        "rows": rows,
        "config": {
            "r_s": args.r_s,
            "sizes": sizes,
            "origin": [origin.x, origin.y],
            "orientation": args.orientation,
        },
        "input_sha256": None,
    }
    _emit(doc, args.out)
    return 0


def cmd_render(args) -> int:
    try:
        region, _ = _load_region(args.region)
    except (OSError, ValueError) as e:
        return _fail(1, "validation", str(e))
    layers: list[list[Point]] = []
    if args.plan:
        try:
            with open(args.plan, "rb") as f:
                plan_doc = json.loads(f.read())
            if "layers" in plan_doc:
                layers = [
                    [Point(float(x), float(y)) for x, y in layer["sensors"]]
                    for layer in plan_doc["layers"]
                ]
            else:
                layers = [
                    [Point(float(x), float(y)) for x, y in plan_doc["sensors"]]
                ]
        except (OSError, ValueError, KeyError, TypeError) as e:
            return _fail(1, "validation", str(e))
    mode = _resolve_mode(args.mode, region)
    try:
        cfg = _plan_config(args, mode)
    except ValueError as e:
        return _fail(1, "validation", str(e))
    svg = render_svg(
        region,
        layers,
        config=cfg,
        show_tessellation=not args.no_tessellation,
        show_uncovered=not args.no_uncovered,
        width=args.width,
    )
    if args.out:
        with open(args.out, "w") as f:
            f.write(svg)
    else:
        print(svg)
    return 0


def _add_geometry_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--origin", default="0,0", help="tessellation origin 'x,y'")
    p.add_argument("--orientation", type=float, default=0.0,
                   help="tessellation orientation in radians")
    p.add_argument("--lattice-depth", type=int, default=2)
    p.add_argument("--max-refinements", type=int, default=4)
    p.add_argument("--epsilon-area", type=float, default=None,
                   help="coverage tolerance (default 1e-4 of a cell area)")
    p.add_argument("--ngon", type=int, default=64,
                   help="sensing-disk polygonization vertices")
    p.add_argument("--mode", choices=("auto", "transparent", "opaque"),
                   default="auto")
    p.add_argument("--out", default=None, help="output file (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="hexcover",
        description="Near-minimal sensor placement for total coverage of "
                    "obstacle-ridden regions",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plan", help="compute a placement for an instance")
    p.add_argument("region", help="instance JSON file")
    _add_geometry_flags(p)
    p.add_argument("--k", type=int, default=1, choices=(1, 2, 3),
                   help="required coverage multiplicity")
    p.add_argument("--prune", action="store_true",
                   help="drop sensors with negligible exclusive coverage")
    p.add_argument("--granularity", type=float, default=None,
                   help="obstacle granularity radius for the opaque count bound")
    p.add_argument("--svg", default=None, help="also draw the placement here")
    p.set_defaults(func=cmd_plan)

    p = sub.add_parser("verify", help="recheck a placement by point sampling")
    p.add_argument("region")
    p.add_argument("plan", help="placement JSON produced by 'plan'")
    p.add_argument("--density", type=float, default=10000.0,
                   help="samples per cell area")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k", type=int, default=None,
                   help="multiplicity to check (default: from the plan)")
    p.add_argument("--min-fraction", type=float, default=0.999,
                   help="pass threshold on the covered fraction")
    p.add_argument("--mode", choices=("auto", "transparent", "opaque"),
                   default="auto")
    p.add_argument("--origin", default="0,0")
    p.add_argument("--orientation", type=float, default=0.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", help="sensor-count bracket for an instance")
    p.add_argument("region")
    _add_geometry_flags(p)
    p.add_argument("--granularity", type=float, default=None)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser(
        "kershner",
        help="tessellation count over the area ideal for growing rectangles",
    )
    p.add_argument("--sizes", default="10,20,40,80,200",
                   help="comma-separated side lengths in units of r_s")
    p.add_argument("--r-s", dest="r_s", type=float, default=1.0)
    p.add_argument("--origin", default="0,0")
    p.add_argument("--orientation", type=float, default=0.0)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_kershner)

    p = sub.add_parser("render", help="draw an instance, optionally with a plan")
    p.add_argument("region")
    p.add_argument("plan", nargs="?", default=None)
    _add_geometry_flags(p)
    p.add_argument("--width", type=int, default=800)
    p.add_argument("--no-tessellation", action="store_true")
    p.add_argument("--no-uncovered", action="store_true")
    p.set_defaults(func=cmd_render)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
