"""Chart domain types and their JSON form.

A ChartSpec is a stack of panels over one shared x-axis. Bands, reference
curves and reference lines are left-axis geometry; data series may target
the left or the (optional) right axis. All types are immutable; validation
happens in validate_spec so partially-built specs stay cheap.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from ..errors import MedgraphError

Point = tuple[float, float]

SCALES = ("linear", "log10")
AXES = ("left", "right")
MARKERS = ("circle", "square", "none")
SEVERITIES = ("alert", "action")


class InvalidSpec(MedgraphError):
    pass


class NonPositiveOnLogAxis(MedgraphError):
    pass


@dataclass(frozen=True)
class XAxisSpec:
    label: str
    domain: tuple[float, float]
    ticks: tuple[tuple[float, str], ...] = ()


@dataclass(frozen=True)
class YAxisSpec:
    label: str
    scale: str = "linear"
    range: tuple[float, float] = (0.0, 1.0)


@dataclass(frozen=True)
class Series:
    name: str
    points: tuple[Point, ...]
    axis: str = "left"
    marker: str = "circle"
    stroke: str = "#1c5d99"


@dataclass(frozen=True)
class RefCurve:
    name: str
    points: tuple[Point, ...]
    stroke: str = "#8a8a8a"


@dataclass(frozen=True)
class RefLine:
    name: str
    start: Point
    end: Point
    severity: str = "alert"
    style: str = "dashed"
    stroke: str = "#b00020"


@dataclass(frozen=True)
class Band:
    lower: RefCurve
    upper: RefCurve
    fill: str = "green"


@dataclass(frozen=True)
class Panel:
    left_axis: YAxisSpec
    right_axis: YAxisSpec | None = None
    series: tuple[Series, ...] = ()
    bands: tuple[Band, ...] = ()
    ref_curves: tuple[RefCurve, ...] = ()
    ref_lines: tuple[RefLine, ...] = ()
    weight: float = 1.0


@dataclass(frozen=True)
class ChartSpec:
    title: str
    x_axis: XAxisSpec
    panels: tuple[Panel, ...] = field(default_factory=tuple)


def _check_sorted(points, what: str):
    for (x0, _), (x1, _) in zip(points, points[1:]):
        if x1 < x0:
            raise InvalidSpec(f"{what} points must be sorted by x ({x1} after {x0})")


def _check_positive_ys(points, what: str):
    for _, y in points:
        if y <= 0:
            raise NonPositiveOnLogAxis(f"{what} carries y={y} on a log10 axis")


def interp_polyline(points, x: float) -> float:
    """Piecewise-linear value of a sorted polyline at x (clamped at the ends)."""
    if x <= points[0][0]:
        return points[0][1]
    if x >= points[-1][0]:
        return points[-1][1]
    for (x0, y0), (x1, y1) in zip(points, points[1:]):
        if x0 <= x <= x1:
            if x1 == x0:
                return y1
            return y0 + (x - x0) / (x1 - x0) * (y1 - y0)
    return points[-1][1]


def _check_axis(axis: YAxisSpec, what: str):
    if axis.scale not in SCALES:
        raise InvalidSpec(f"{what} has unknown scale {axis.scale!r}")
    lo, hi = axis.range
    if not lo < hi:
        raise InvalidSpec(f"{what} range must satisfy min < max, got [{lo}, {hi}]")
    if axis.scale == "log10" and lo <= 0:
        raise InvalidSpec(f"{what} is log10 but its range includes non-positive values")


def validate_spec(spec: ChartSpec) -> None:
    """Enforce every structural invariant; raise InvalidSpec on violation."""
    if not spec.panels:
        raise InvalidSpec("chart needs at least one panel")
    dmin, dmax = spec.x_axis.domain
    if not dmin < dmax:
        raise InvalidSpec(f"x domain must satisfy min < max, got [{dmin}, {dmax}]")
    prev = None
    for x, _ in spec.x_axis.ticks:
        if not dmin <= x <= dmax:
            raise InvalidSpec(f"tick at x={x} outside domain [{dmin}, {dmax}]")
        if prev is not None and x <= prev:
            raise InvalidSpec("x ticks must strictly increase")
        prev = x

    for i, panel in enumerate(spec.panels):
        if panel.weight <= 0:
            raise InvalidSpec(f"panel {i} weight must be positive")
        _check_axis(panel.left_axis, f"panel {i} left axis")
        if panel.right_axis is not None:
            _check_axis(panel.right_axis, f"panel {i} right axis")
        left_log = panel.left_axis.scale == "log10"
        for s in panel.series:
            if s.axis not in AXES:
                raise InvalidSpec(f"series {s.name!r} has unknown axis {s.axis!r}")
            if s.axis == "right" and panel.right_axis is None:
                raise InvalidSpec(f"series {s.name!r} targets a missing right axis")
            if s.marker not in MARKERS:
                raise InvalidSpec(f"series {s.name!r} has unknown marker {s.marker!r}")
            _check_sorted(s.points, f"series {s.name!r}")
            axis = panel.left_axis if s.axis == "left" else panel.right_axis
            if axis.scale == "log10":
                _check_positive_ys(s.points, f"series {s.name!r}")
        for c in panel.ref_curves:
            _check_sorted(c.points, f"curve {c.name!r}")
            if left_log:
                _check_positive_ys(c.points, f"curve {c.name!r}")
        for line in panel.ref_lines:
            if line.severity not in SEVERITIES:
                raise InvalidSpec(f"line {line.name!r} has unknown severity {line.severity!r}")
            if line.start == line.end:
                raise InvalidSpec(f"line {line.name!r} is degenerate (equal endpoints)")
            if left_log and (line.start[1] <= 0 or line.end[1] <= 0):
                raise NonPositiveOnLogAxis(f"line {line.name!r} carries y<=0 on a log10 axis")
        for j, band in enumerate(panel.bands):
            _check_sorted(band.lower.points, f"panel {i} band {j} lower")
            _check_sorted(band.upper.points, f"panel {i} band {j} upper")
            if not band.lower.points or not band.upper.points:
                raise InvalidSpec(f"panel {i} band {j} has an empty edge")
            if left_log:
                _check_positive_ys(band.lower.points, f"panel {i} band {j}")
                _check_positive_ys(band.upper.points, f"panel {i} band {j}")
            lo = max(band.lower.points[0][0], band.upper.points[0][0])
            hi = min(band.lower.points[-1][0], band.upper.points[-1][0])
            knots = sorted(
                {x for x, _ in band.lower.points if lo <= x <= hi}
                | {x for x, _ in band.upper.points if lo <= x <= hi}
            )
            for x in knots:
                if interp_polyline(band.lower.points, x) > interp_polyline(band.upper.points, x) + 1e-9:
                    raise InvalidSpec(f"panel {i} band {j}: lower edge above upper at x={x}")


def _points_out(points):
    return [[x, y] for x, y in points]


def _points_in(raw) -> tuple[Point, ...]:
    return tuple((float(x), float(y)) for x, y in raw)


def chart_spec_to_dict(spec: ChartSpec) -> dict:
    """Serialize to the documented JSON schema (see docs/api.md)."""

    def axis_out(a: YAxisSpec | None):
        if a is None:
            return None
        return {"label": a.label, "scale": a.scale, "range": [a.range[0], a.range[1]]}

    doc = {
        "title": spec.title,
        "x_axis": {
            "label": spec.x_axis.label,
            "domain": [spec.x_axis.domain[0], spec.x_axis.domain[1]],
            "ticks": [[x, label] for x, label in spec.x_axis.ticks],
        },
        "panels": [
            {
                "left_axis": axis_out(p.left_axis),
                "right_axis": axis_out(p.right_axis),
                "series": [
                    {
                        "name": s.name,
                        "axis": s.axis,
                        "marker": s.marker,
                        "stroke": s.stroke,
                        "points": _points_out(s.points),
                    }
                    for s in p.series
                ],
                "bands": [
                    {
                        "lower": {"name": b.lower.name, "points": _points_out(b.lower.points)},
                        "upper": {"name": b.upper.name, "points": _points_out(b.upper.points)},
                        "fill": b.fill,
                    }
                    for b in p.bands
                ],
                "ref_curves": [
                    {"name": c.name, "stroke": c.stroke, "points": _points_out(c.points)}
                    for c in p.ref_curves
                ],
                "ref_lines": [
                    {
                        "name": line.name,
                        "start": [line.start[0], line.start[1]],
                        "end": [line.end[0], line.end[1]],
                        "severity": line.severity,
                        "style": line.style,
                        "stroke": line.stroke,
                    }
                    for line in p.ref_lines
                ],
                "weight": p.weight,
            }
            for p in spec.panels
        ],
    }
    return doc


def chart_spec_to_json(spec: ChartSpec) -> str:
    return json.dumps(chart_spec_to_dict(spec), indent=2, sort_keys=False)


def chart_spec_from_dict(doc: dict) -> ChartSpec:
    def axis_in(raw) -> YAxisSpec | None:
        if raw is None:
            return None
        return YAxisSpec(
            label=raw.get("label", ""),
            scale=raw.get("scale", "linear"),
            range=(float(raw["range"][0]), float(raw["range"][1])),
        )

    def curve_in(raw) -> RefCurve:
        return RefCurve(
            name=raw.get("name", ""),
            points=_points_in(raw["points"]),
            stroke=raw.get("stroke", "#8a8a8a"),
        )

    panels = []
    for p in doc.get("panels", []):
        panels.append(
            Panel(
                left_axis=axis_in(p["left_axis"]),
                right_axis=axis_in(p.get("right_axis")),
                series=tuple(
                    Series(
                        name=s.get("name", ""),
                        axis=s.get("axis", "left"),
                        marker=s.get("marker", "circle"),
                        stroke=s.get("stroke", "#1c5d99"),
                        points=_points_in(s["points"]),
                    )
                    for s in p.get("series", [])
                ),
                bands=tuple(
                    Band(lower=curve_in(b["lower"]), upper=curve_in(b["upper"]), fill=b.get("fill", "green"))
                    for b in p.get("bands", [])
                ),
                ref_curves=tuple(curve_in(c) for c in p.get("ref_curves", [])),
                ref_lines=tuple(
                    RefLine(
                        name=line.get("name", ""),
                        start=(float(line["start"][0]), float(line["start"][1])),
                        end=(float(line["end"][0]), float(line["end"][1])),
                        severity=line.get("severity", "alert"),
                        style=line.get("style", "dashed"),
                        stroke=line.get("stroke", "#b00020"),
                    )
                    for line in p.get("ref_lines", [])
                ),
                weight=float(p.get("weight", 1.0)),
            )
        )
    x = doc["x_axis"]
    return ChartSpec(
        title=doc.get("title", ""),
        x_axis=XAxisSpec(
            label=x.get("label", ""),
            domain=(float(x["domain"][0]), float(x["domain"][1])),
            ticks=tuple((float(t[0]), str(t[1])) for t in x.get("ticks", [])),
        ),
        panels=tuple(panels),
    )


def chart_spec_from_json(text: str) -> ChartSpec:
    return chart_spec_from_dict(json.loads(text))
