"""Deterministic SVG 1.1 renderer for ChartSpec.

Byte-identical output for identical inputs: no clocks, no randomness, fixed
number formatting. Panels tile vertically over one shared x-axis whose tick
labels appear exactly once, below the bottom panel. Z-order within a panel:
bands, reference curves, reference lines, data series, markers. Every
element carries a stable id or class so tests and the UI can address it.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .model import ChartSpec, NonPositiveOnLogAxis, Panel, YAxisSpec, validate_spec
from .ticks import nice_ticks

# Named zone colors; anything else must already be "#rrggbb".
COLOR_HEX = {"green": "#3f9d51", "yellow": "#e8c93e", "red": "#cc4125"}


@dataclass(frozen=True)
class RenderOptions:
    width_px: float = 900.0
    height_px: float = 620.0
    margin_left: float = 64.0
    margin_right: float = 64.0
    margin_top: float = 46.0
    margin_bottom: float = 58.0
    panel_gap: float = 14.0
    font_family: str = "Helvetica, Arial, sans-serif"
    font_size: float = 12.0


def _fmt(v: float) -> str:
    s = f"{v:.2f}"
    s = s.rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def _esc(text: str) -> str:
    return (
        text.replace("&", "&amp;")
        .replace("<", "&lt;")
        .replace(">", "&gt;")
        .replace('"', "&quot;")
    )


def _ident(name: str) -> str:
    # XML ids may not contain arbitrary characters; squash to a safe subset
    out = re.sub(r"[^A-Za-z0-9_.-]+", "-", name).strip("-")
    return out or "unnamed"


def _fill(color: str) -> str:
    return COLOR_HEX.get(color, color)


class _Scale:
    """Value -> pixel mapping for one axis, linear or log10."""

    def __init__(self, axis: YAxisSpec | None, px_lo: float, px_hi: float, what: str):
        # px_lo is the pixel at range-min; for y axes that's the bottom edge
        self.log = axis is not None and axis.scale == "log10"
        self.what = what
        self.px_lo, self.px_hi = px_lo, px_hi
        if axis is None:
            self.v_lo, self.v_hi = 0.0, 1.0
        elif self.log:
            self.v_lo, self.v_hi = math.log10(axis.range[0]), math.log10(axis.range[1])
        else:
            self.v_lo, self.v_hi = axis.range

    def __call__(self, v: float) -> float:
        if self.log:
            if v <= 0:
                raise NonPositiveOnLogAxis(f"{self.what}: cannot map y={v} on a log10 axis")
            v = math.log10(v)
        t = (v - self.v_lo) / (self.v_hi - self.v_lo)
        return self.px_lo + t * (self.px_hi - self.px_lo)


class _XScale:
    def __init__(self, domain: tuple[float, float], px_lo: float, px_hi: float):
        self.v_lo, self.v_hi = domain
        self.px_lo, self.px_hi = px_lo, px_hi

    def __call__(self, v: float) -> float:
        t = (v - self.v_lo) / (self.v_hi - self.v_lo)
        return self.px_lo + t * (self.px_hi - self.px_lo)


def _y_tick_values(axis: YAxisSpec) -> list[float]:
    if axis.scale == "log10":
        lo = math.ceil(math.log10(axis.range[0]) - 1e-9)
        hi = math.floor(math.log10(axis.range[1]) + 1e-9)
        return [10.0**k for k in range(lo, hi + 1)]
    return [x for x, _ in nice_ticks(axis.range, target=5)]


def _y_tick_label(v: float) -> str:
    if v != 0 and abs(v) >= 1000 and math.log10(abs(v)) == int(math.log10(abs(v))):
        return f"1e{int(math.log10(abs(v)))}"
    return _fmt(v)


def _points_attr(pts: list[tuple[float, float]]) -> str:
    return " ".join(f"{_fmt(px)},{_fmt(py)}" for px, py in pts)


def render_svg(spec: ChartSpec, opts: RenderOptions = RenderOptions()) -> str:
    """Render a validated spec to an SVG 1.1 document string."""
    if opts.width_px <= 0 or opts.height_px <= 0:
        raise ValueError("render size must be positive")
    validate_spec(spec)

    x0 = opts.margin_left
    x1 = opts.width_px - opts.margin_right
    xmap = _XScale(spec.x_axis.domain, x0, x1)

    n = len(spec.panels)
    usable = opts.height_px - opts.margin_top - opts.margin_bottom - opts.panel_gap * (n - 1)
    total_weight = sum(p.weight for p in spec.panels)

    out: list[str] = []
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_fmt(opts.width_px)}" height="{_fmt(opts.height_px)}" '
        f'viewBox="0 0 {_fmt(opts.width_px)} {_fmt(opts.height_px)}" '
        f'font-family="{_esc(opts.font_family)}" font-size="{_fmt(opts.font_size)}">'
    )
    out.append(f"<title>{_esc(spec.title)}</title>")
    out.append(
        f'<text id="chart-title" class="chart-title" x="{_fmt((x0 + x1) / 2)}" '
        f'y="{_fmt(opts.margin_top - 18)}" text-anchor="middle" '
        f'font-size="{_fmt(opts.font_size + 3)}">{_esc(spec.title)}</text>'
    )

    top = opts.margin_top
    bottom_edge = top
    for i, panel in enumerate(spec.panels):
        height = usable * panel.weight / total_weight
        out.extend(_render_panel(panel, i, xmap, top, height, x0, x1, opts))
        bottom_edge = top + height
        top = bottom_edge + opts.panel_gap

    out.extend(_render_x_axis(spec, xmap, bottom_edge, opts))
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _render_panel(
    panel: Panel,
    idx: int,
    xmap: _XScale,
    top: float,
    height: float,
    x0: float,
    x1: float,
    opts: RenderOptions,
) -> list[str]:
    bot = top + height
    pid = f"panel-{idx}"
    left = _Scale(panel.left_axis, bot, top, f"{pid} left axis")
    right = _Scale(panel.right_axis, bot, top, f"{pid} right axis") if panel.right_axis else None

    out = [f'<g id="{pid}" class="panel">']
    out.append(
        f'<rect class="panel-frame" x="{_fmt(x0)}" y="{_fmt(top)}" '
        f'width="{_fmt(x1 - x0)}" height="{_fmt(height)}" fill="none" stroke="#555" stroke-width="1"/>'
    )

    for j, band in enumerate(panel.bands):
        pts = [(xmap(x), left(y)) for x, y in band.lower.points]
        pts += [(xmap(x), left(y)) for x, y in reversed(band.upper.points)]
        out.append(
            f'<polygon id="{pid}-band-{j}" class="band" fill="{_fill(band.fill)}" '
            f'fill-opacity="0.45" stroke="none" points="{_points_attr(pts)}"/>'
        )

    for curve in panel.ref_curves:
        pts = [(xmap(x), left(y)) for x, y in curve.points]
        out.append(
            f'<polyline id="{pid}-curve-{_ident(curve.name)}" class="ref-curve" fill="none" '
            f'stroke="{curve.stroke}" stroke-width="1" points="{_points_attr(pts)}"/>'
        )

    for line in panel.ref_lines:
        dash = ' stroke-dasharray="6 4"' if line.style == "dashed" else ""
        out.append(
            f'<line id="{pid}-refline-{_ident(line.name or line.severity)}" '
            f'class="ref-line {line.severity}" '
            f'x1="{_fmt(xmap(line.start[0]))}" y1="{_fmt(left(line.start[1]))}" '
            f'x2="{_fmt(xmap(line.end[0]))}" y2="{_fmt(left(line.end[1]))}" '
            f'stroke="{line.stroke}" stroke-width="1.5"{dash}/>'
        )

    for series in panel.series:
        scale = left if series.axis == "left" else right
        sid = f"{pid}-series-{_ident(series.name)}"
        pts = [(xmap(x), scale(y)) for x, y in series.points]
        if len(pts) >= 2:
            out.append(
                f'<polyline id="{sid}" class="series" fill="none" stroke="{series.stroke}" '
                f'stroke-width="1.5" points="{_points_attr(pts)}"/>'
            )
        if series.marker != "none":
            for k, (px, py) in enumerate(pts):
                if series.marker == "square":
                    out.append(
                        f'<rect id="{sid}-point-{k}" class="point" x="{_fmt(px - 3)}" '
                        f'y="{_fmt(py - 3)}" width="6" height="6" fill="{series.stroke}"/>'
                    )
                else:
                    out.append(
                        f'<circle id="{sid}-point-{k}" class="point" cx="{_fmt(px)}" '
                        f'cy="{_fmt(py)}" r="3.2" fill="{series.stroke}"/>'
                    )

    out.extend(_render_y_axis(panel.left_axis, left, pid, "left", x0, opts))
    if panel.right_axis is not None:
        out.extend(_render_y_axis(panel.right_axis, right, pid, "right", x1, opts))
    out.append("</g>")
    return out


def _render_y_axis(
    axis: YAxisSpec, scale: _Scale, pid: str, side: str, edge_x: float, opts: RenderOptions
) -> list[str]:
    sign = -1 if side == "left" else 1
    anchor = "end" if side == "left" else "start"
    out = [f'<g class="y-ticks {side}">']
    labels = []
    for v in _y_tick_values(axis):
        if not axis.range[0] <= v <= axis.range[1]:
            continue
        py = scale(v)
        out.append(
            f'<line x1="{_fmt(edge_x)}" y1="{_fmt(py)}" x2="{_fmt(edge_x + sign * 5)}" '
            f'y2="{_fmt(py)}" stroke="#555" stroke-width="1"/>'
        )
        labels.append(
            f'<text x="{_fmt(edge_x + sign * 8)}" y="{_fmt(py + opts.font_size * 0.35)}" '
            f'text-anchor="{anchor}">{_esc(_y_tick_label(v))}</text>'
        )
    out.append("</g>")
    out.append(f'<g class="y-tick-labels {side}">')
    out.extend(labels)
    out.append("</g>")
    if axis.label:
        mid = (scale.px_lo + scale.px_hi) / 2
        lx = edge_x + sign * 44
        rot = 90 if side == "right" else -90
        out.append(
            f'<text class="y-axis-label {side}" x="{_fmt(lx)}" y="{_fmt(mid)}" '
            f'text-anchor="middle" transform="rotate({rot} {_fmt(lx)} {_fmt(mid)})">'
            f"{_esc(axis.label)}</text>"
        )
    return out


def _render_x_axis(spec: ChartSpec, xmap: _XScale, bottom_edge: float, opts: RenderOptions) -> list[str]:
    out = ['<g class="x-ticks">']
    labels = []
    for x, label in spec.x_axis.ticks:
        px = xmap(x)
        out.append(
            f'<line x1="{_fmt(px)}" y1="{_fmt(bottom_edge)}" x2="{_fmt(px)}" '
            f'y2="{_fmt(bottom_edge + 5)}" stroke="#555" stroke-width="1"/>'
        )
        labels.append(
            f'<text x="{_fmt(px)}" y="{_fmt(bottom_edge + 7 + opts.font_size)}" '
            f'text-anchor="middle">{_esc(label)}</text>'
        )
    out.append("</g>")
    out.append('<g id="x-tick-labels" class="x-tick-labels">')
    out.extend(labels)
    out.append("</g>")
    if spec.x_axis.label:
        out.append(
            f'<text class="x-axis-label" x="{_fmt((xmap.px_lo + xmap.px_hi) / 2)}" '
            f'y="{_fmt(bottom_edge + opts.margin_bottom - 10)}" '
            f'text-anchor="middle">{_esc(spec.x_axis.label)}</text>'
        )
    return out
