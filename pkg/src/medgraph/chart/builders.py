"""Assemble chart specs for the three clinic chart families."""

from __future__ import annotations

from dataclasses import replace

from ..anthro import WHO_PALETTE, ZonePalette, classify
from ..errors import MedgraphError
from ..standards import StandardDataset, fmt_decimal
from .model import (
    Band,
    ChartSpec,
    NonPositiveOnLogAxis,
    Panel,
    Point,
    RefCurve,
    RefLine,
    Series,
    XAxisSpec,
    YAxisSpec,
)
from .ticks import nice_ticks


class EmptyDataset(MedgraphError):
    pass


class DomainMismatch(MedgraphError):
    pass


class DegenerateLine(MedgraphError):
    pass


def _padded_range(values, pad_frac=0.06) -> tuple[float, float]:
    lo, hi = min(values), max(values)
    if lo == hi:
        return (lo - 1.0, hi + 1.0)
    pad = (hi - lo) * pad_frac
    return (lo - pad, hi + pad)


def growth_chart_spec(
    ds: StandardDataset,
    observations: list[Point],
    palette: ZonePalette = WHO_PALETTE,
    *,
    series_name: str = "visits",
) -> tuple[ChartSpec, list[str]]:
    """Growth chart: SD reference curves, zone bands, observations on top.

    Out-of-range observations are dropped, each noted in the returned
    warning list (clinic data is messy; rendering still proceeds).
    """
    if not ds.rows:
        raise EmptyDataset(f"dataset {ds.id!r} has no rows")

    curves = tuple(
        RefCurve(name=f"sd{z}", points=tuple((r.x, r.values[z]) for r in ds.rows))
        for z in ds.z_labels
    )
    bands = tuple(
        Band(
            lower=curves[i],
            upper=curves[i + 1],
            fill=classify(max(abs(ds.z_labels[i]), abs(ds.z_labels[i + 1])), palette),
        )
        for i in range(len(curves) - 1)
    )

    warnings: list[str] = []
    kept: list[Point] = []
    for x, y in observations:
        if ds.min_x <= x <= ds.max_x:
            kept.append((x, y))
        else:
            warnings.append(
                f"dropped out-of-range observation (x={fmt_decimal(x)}, y={fmt_decimal(y)})"
            )
    kept.sort()

    all_ys = [v for c in curves for _, v in c.points] + [y for _, y in kept]
    panel = Panel(
        left_axis=YAxisSpec(label=ds.y_label or "value", range=_padded_range(all_ys)),
        series=(Series(name=series_name, points=tuple(kept)),) if kept else (),
        bands=bands,
        ref_curves=curves,
    )
    domain = (ds.min_x, ds.max_x)
    spec = ChartSpec(
        title=f"{ds.indicator.value} ({ds.sex.value})",
        x_axis=XAxisSpec(label=ds.x_label or ds.x_unit.value, domain=domain, ticks=nice_ticks(domain)),
        panels=(panel,),
    )
    return spec, warnings


_PARTOGRAPH_ORDER = ("foetal heart rate", "cervix", "descent", "contractions")


def partograph_spec(
    heart: Series,
    cervix: Series,
    descent: Series,
    contractions: Series,
    alert: RefLine,
    action: RefLine,
) -> ChartSpec:
    """Four stacked panels over one time axis; alert/action on the cervix panel."""
    for line in (alert, action):
        if line.start == line.end:
            raise DegenerateLine(f"{line.name or line.severity} line has equal endpoints")

    named = [
        replace(s, name=s.name or default, axis="left")
        for s, default in zip((heart, cervix, descent, contractions), _PARTOGRAPH_ORDER)
    ]
    spans = [(s.points[0][0], s.points[-1][0]) for s in named if s.points]
    line_spans = [(min(l.start[0], l.end[0]), max(l.start[0], l.end[0])) for l in (alert, action)]
    if not spans:
        raise DomainMismatch("all four series are empty")
    if max(lo for lo, _ in spans) > min(hi for _, hi in spans):
        raise DomainMismatch("series do not share a common time window")

    lo = min(s[0] for s in spans + line_spans)
    hi = max(s[1] for s in spans + line_spans)
    if lo == hi:
        lo, hi = lo - 0.5, hi + 0.5

    panels = []
    for s in named:
        ys = [y for _, y in s.points]
        lines: tuple[RefLine, ...] = ()
        if s is named[1]:
            lines = (alert, action)
            ys = ys + [alert.start[1], alert.end[1], action.start[1], action.end[1]]
        panels.append(
            Panel(
                left_axis=YAxisSpec(label=s.name, range=_padded_range(ys or [0.0, 1.0])),
                series=(s,) if s.points else (),
                ref_lines=lines,
            )
        )
    domain = (lo, hi)
    return ChartSpec(
        title="delivery monitoring",
        x_axis=XAxisSpec(label="time (h)", domain=domain, ticks=nice_ticks(domain)),
        panels=tuple(panels),
    )


def dual_axis_spec(
    left: Series,
    right: Series,
    left_axis: YAxisSpec,
    right_axis: YAxisSpec,
) -> ChartSpec:
    """One panel, two y-axes (e.g. linear count left, log load right)."""
    left = replace(left, axis="left")
    right = replace(right, axis="right")
    for s, axis in ((left, left_axis), (right, right_axis)):
        if axis.scale == "log10":
            for _, y in s.points:
                if y <= 0:
                    raise NonPositiveOnLogAxis(
                        f"series {s.name!r} carries y={fmt_decimal(y)} on a log10 axis"
                    )
    xs = [x for s in (left, right) for x, _ in s.points]
    domain = (min(xs), max(xs)) if xs else (0.0, 1.0)
    if domain[0] == domain[1]:
        domain = (domain[0] - 0.5, domain[1] + 0.5)
    panel = Panel(left_axis=left_axis, right_axis=right_axis, series=(left, right))
    return ChartSpec(
        title="dual-axis series",
        x_axis=XAxisSpec(label="time", domain=domain, ticks=nice_ticks(domain)),
        panels=(panel,),
    )
