"""Clinical decision support: nutrition program admission, rations, crossings.

Admission thresholds follow the field guideline thresholds (MUAC in cm,
weight-for-height z). Interval bounds are lower-inclusive half-open so the
severe and moderate criteria partition cleanly; the recommendation always
carries the advisory that medical complications override it.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .chart.model import RefCurve, RefLine, interp_polyline
from .errors import MedgraphError

__all__ = [
    "Oedema",
    "Program",
    "NutritionInputs",
    "ProgramRecommendation",
    "RationTable",
    "Crossing",
    "WeightOutOfTable",
    "COMPLICATIONS_ADVISORY",
    "recommend_program",
    "rutf_rations",
    "parse_ration_table",
    "detect_crossings",
]

COMPLICATIONS_ADVISORY = (
    "Advisory only: any medical complication overrides this suggestion; "
    "assess the child clinically."
)


class Oedema(str, Enum):
    NONE = "none"
    PLUS = "+"
    PLUS2 = "++"
    PLUS3 = "+++"


class Program(str, Enum):
    OTP = "OTP"
    SFP = "SFP"
    NONE = "NONE"


class WeightOutOfTable(MedgraphError):
    pass


@dataclass(frozen=True)
class NutritionInputs:
    z_wfh: float
    muac_cm: float
    oedema: Oedema = Oedema.NONE
    recently_discharged_otp: bool = False

    def __post_init__(self):
        if self.muac_cm <= 0:
            raise ValueError(f"muac_cm must be positive, got {self.muac_cm}")


@dataclass(frozen=True)
class ProgramRecommendation:
    program: Program
    reasons: tuple[str, ...]
    advisory: str = COMPLICATIONS_ADVISORY


def recommend_program(inputs: NutritionInputs) -> ProgramRecommendation:
    """Severe criteria first (OTP), then moderate (SFP), else no program.

    OTP: MUAC < 11.5 cm, or z < -3, or any oedema.
    SFP: -3 <= z < -2, or 11.5 <= MUAC < 12.5 cm, or recent OTP discharge.
    """
    otp_reasons = []
    if inputs.muac_cm < 11.5:
        otp_reasons.append("MUAC < 11.5 cm")
    if inputs.z_wfh < -3:
        otp_reasons.append("weight-for-height z < -3")
    if inputs.oedema != Oedema.NONE:
        otp_reasons.append(f"oedema present ({inputs.oedema.value})")
    if otp_reasons:
        return ProgramRecommendation(Program.OTP, tuple(otp_reasons))

    sfp_reasons = []
    if -3 <= inputs.z_wfh < -2:
        sfp_reasons.append("weight-for-height z between -3 and -2")
    if 11.5 <= inputs.muac_cm < 12.5:
        sfp_reasons.append("MUAC between 11.5 and 12.5 cm")
    if inputs.recently_discharged_otp:
        sfp_reasons.append("recently discharged from OTP")
    if sfp_reasons:
        return ProgramRecommendation(Program.SFP, tuple(sfp_reasons))

    return ProgramRecommendation(Program.NONE, ())


@dataclass(frozen=True)
class RationTable:
    """Contiguous half-open weight ranges [lo, hi) -> daily rations."""

    ranges: tuple[tuple[float, float, int], ...]

    def __post_init__(self):
        if not self.ranges:
            raise ValueError("ration table must not be empty")
        prev_hi = None
        for lo, hi, rations in self.ranges:
            if hi <= lo:
                raise ValueError(f"empty weight range [{lo}, {hi})")
            if prev_hi is not None and lo != prev_hi:
                raise ValueError(f"ranges must be contiguous, gap before {lo}")
            if rations < 0:
                raise ValueError("rations must be non-negative")
            prev_hi = hi


def parse_ration_table(text: str) -> RationTable:
    """CSV rows ``lo,hi,rations``; ``#`` comments and blank lines skipped."""
    ranges = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r").strip()
        if not line or line.startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 3:
            raise ValueError(f"line {lineno}: expected 'lo,hi,rations'")
        try:
            ranges.append((float(parts[0]), float(parts[1]), int(parts[2])))
        except ValueError:
            raise ValueError(f"line {lineno}: malformed number in {line!r}") from None
    return RationTable(ranges=tuple(ranges))


def rutf_rations(weight_kg: float, table: RationTable) -> int:
    for lo, hi, rations in table.ranges:
        if lo <= weight_kg < hi:
            return rations
    first_lo = table.ranges[0][0]
    last_hi = table.ranges[-1][1]
    raise WeightOutOfTable(
        f"weight {weight_kg} kg outside table range [{first_lo}, {last_hi})"
    )


@dataclass(frozen=True)
class Crossing:
    x: float
    direction: str  # "upward" | "downward"
    line: str  # name of the crossed reference
    severity: str | None = None


def _as_polyline(line: RefLine | RefCurve) -> tuple[list, str, str | None]:
    if isinstance(line, RefLine):
        pts = sorted([line.start, line.end])
        return pts, line.name or line.severity, line.severity
    return list(line.points), line.name, None


def detect_crossings(series: list[tuple[float, float]], line: RefLine | RefCurve) -> list[Crossing]:
    """Exact crossings of a data polyline against a reference line or curve.

    The difference series-minus-line is piecewise linear over the merged
    knots of both polylines (clipped to their overlap); a crossing is a
    strict sign change, located by linear inversion. Touching the line
    without passing through it does not count.
    """
    line_pts, name, severity = _as_polyline(line)
    if len(series) < 2 or len(line_pts) < 2:
        return []
    lo = max(series[0][0], line_pts[0][0])
    hi = min(series[-1][0], line_pts[-1][0])
    if hi <= lo:
        return []

    knots = sorted(
        {x for x, _ in series if lo <= x <= hi}
        | {x for x, _ in line_pts if lo <= x <= hi}
        | {lo, hi}
    )
    diffs = [interp_polyline(series, x) - interp_polyline(line_pts, x) for x in knots]

    crossings: list[Crossing] = []
    last_sign = 0
    pending_zero_x: float | None = None
    for i, (x, d) in enumerate(zip(knots, diffs)):
        sign = (d > 0) - (d < 0)
        if sign == 0:
            # on the line: a crossing only if the next nonzero sign differs
            if pending_zero_x is None:
                pending_zero_x = x
            continue
        if last_sign != 0 and sign != last_sign:
            if pending_zero_x is not None:
                root = pending_zero_x
            else:
                x0, d0 = knots[i - 1], diffs[i - 1]
                root = x0 + d0 / (d0 - d) * (x - x0)
            crossings.append(
                Crossing(
                    x=root,
                    direction="upward" if sign > 0 else "downward",
                    line=name,
                    severity=severity,
                )
            )
        last_sign = sign
        pending_zero_x = None
    return crossings
