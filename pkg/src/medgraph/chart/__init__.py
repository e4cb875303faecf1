"""Declarative chart model, builders, and deterministic SVG renderer."""

from .model import (
    Band,
    ChartSpec,
    InvalidSpec,
    NonPositiveOnLogAxis,
    Panel,
    RefCurve,
    RefLine,
    Series,
    XAxisSpec,
    YAxisSpec,
    chart_spec_from_dict,
    chart_spec_from_json,
    chart_spec_to_dict,
    chart_spec_to_json,
    validate_spec,
)
from .ticks import EmptyDomain, generate_ticks, nice_ticks
from .builders import (
    DegenerateLine,
    DomainMismatch,
    EmptyDataset,
    dual_axis_spec,
    growth_chart_spec,
    partograph_spec,
)
from .svg import RenderOptions, render_svg

__all__ = [
    "Band",
    "ChartSpec",
    "DegenerateLine",
    "DomainMismatch",
    "EmptyDataset",
    "EmptyDomain",
    "InvalidSpec",
    "NonPositiveOnLogAxis",
    "Panel",
    "RefCurve",
    "RefLine",
    "RenderOptions",
    "Series",
    "XAxisSpec",
    "YAxisSpec",
    "chart_spec_from_dict",
    "chart_spec_from_json",
    "chart_spec_to_dict",
    "chart_spec_to_json",
    "dual_axis_spec",
    "generate_ticks",
    "growth_chart_spec",
    "nice_ticks",
    "partograph_spec",
    "render_svg",
    "validate_spec",
]
