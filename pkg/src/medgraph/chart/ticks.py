"""Tick generation: calendar granularities, breakpoint segments, nice steps."""

from __future__ import annotations

import math

from ..errors import MedgraphError
from ..standards import XUnit, fmt_decimal
from .model import InvalidSpec

Tick = tuple[float, str]

# Granularity size expressed in each x unit (mean Gregorian month/year).
_GRANULARITY = {
    XUnit.AGE_DAYS: {"days": 1.0, "weeks": 7.0, "months": 30.4375, "years": 365.25},
    XUnit.AGE_MONTHS: {
        "days": 1 / 30.4375,
        "weeks": 7 / 30.4375,
        "months": 1.0,
        "years": 12.0,
    },
}


class EmptyDomain(MedgraphError):
    pass


def generate_ticks(
    domain: tuple[float, float],
    granularity: str | list | None = None,
    *,
    step: float = 1.0,
    x_unit: XUnit = XUnit.AGE_DAYS,
) -> tuple[Tick, ...]:
    """Evenly spaced ticks from the domain start.

    granularity is a calendar unit name ("days" / "weeks" / "months" /
    "years", scaled by step), or an explicit segment list
    ``[(until_x, spacing), ..., (None, spacing)]`` for mixed resolution
    (fine spacing up to each breakpoint, coarser after).
    """
    lo, hi = domain
    if not lo < hi:
        raise EmptyDomain(f"domain [{fmt_decimal(lo)}, {fmt_decimal(hi)}] is empty")

    if isinstance(granularity, list):
        segments = [(until, float(spacing)) for until, spacing in granularity]
        if not segments or segments[-1][0] is not None:
            raise InvalidSpec("segment list must end with (None, spacing)")
        ticks = []
        x = lo
        eps = (hi - lo) * 1e-9
        while x <= hi + eps:
            ticks.append((min(x, hi), fmt_decimal(round(x, 9))))
            spacing = next(sp for until, sp in segments if until is None or x < until)
            if spacing <= 0:
                raise InvalidSpec("tick spacing must be positive")
            x += spacing
        return tuple(ticks)

    if granularity is None:
        return nice_ticks(domain)

    try:
        unit_size = _GRANULARITY[x_unit][granularity]
    except KeyError:
        raise InvalidSpec(
            f"granularity {granularity!r} undefined for x unit {x_unit.value!r}"
        ) from None
    spacing = step * unit_size
    if spacing <= 0:
        raise InvalidSpec("tick spacing must be positive")
    ticks = []
    eps = (hi - lo) * 1e-9
    i = 0
    while True:
        x = lo + i * spacing
        if x > hi + eps:
            break
        ticks.append((min(x, hi), fmt_decimal(round(x, 9))))
        i += 1
    return tuple(ticks)


def nice_ticks(domain: tuple[float, float], target: int = 8) -> tuple[Tick, ...]:
    """Round-number ticks (1/2/5 x 10^k steps) covering the domain."""
    lo, hi = domain
    if not lo < hi:
        raise EmptyDomain(f"domain [{fmt_decimal(lo)}, {fmt_decimal(hi)}] is empty")
    raw = (hi - lo) / max(target, 1)
    mag = 10.0 ** math.floor(math.log10(raw))
    for mult in (1.0, 2.0, 5.0, 10.0):
        if raw <= mult * mag:
            step = mult * mag
            break
    start = math.ceil(lo / step - 1e-9) * step
    ticks = []
    x = start
    while x <= hi + step * 1e-9:
        v = round(x, 12)
        ticks.append((v, fmt_decimal(v)))
        x += step
    return tuple(ticks)
