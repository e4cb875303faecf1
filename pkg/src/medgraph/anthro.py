"""Decimal z-scores by interpolation between SD lines, plus zone colouring.

The model is piecewise linear in both directions: SD-line values are
interpolated linearly along the x-grid, and a measurement's z is obtained by
linear interpolation within the band of adjacent SD lines it falls into.
Outside the outermost lines, the outermost band's slope extends the model,
keeping z continuous and strictly monotone in the measurement.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path

from .errors import MedgraphError
from .standards import StandardDataset, fmt_decimal

__all__ = [
    "SDProfile",
    "ZonePalette",
    "ZScoreResult",
    "XOutOfRange",
    "NonPositiveMeasure",
    "InvalidPalette",
    "WHO_PALETTE",
    "PASSPORT_PALETTE",
    "BUILTIN_PALETTES",
    "profile_at",
    "zscore",
    "value_for_z",
    "classify",
    "format_z",
    "legacy_symbol",
    "load_palette",
]


class XOutOfRange(MedgraphError):
    def __init__(self, x: float, min_x: float, max_x: float):
        self.x, self.min_x, self.max_x = x, min_x, max_x
        super().__init__(
            f"x={fmt_decimal(x)} outside dataset range "
            f"[{fmt_decimal(min_x)}, {fmt_decimal(max_x)}]"
        )


class NonPositiveMeasure(MedgraphError):
    def __init__(self, y: float):
        self.y = y
        super().__init__(f"measurement must be positive, got {fmt_decimal(y)}")


class InvalidPalette(MedgraphError):
    pass


_COLOR_RE = re.compile(r"^#[0-9a-fA-F]{6}$")
_NAMED_COLORS = ("green", "yellow", "red")


@dataclass(frozen=True)
class ZonePalette:
    """Ordered |z| bands: (upper bound, color), last bound is infinity.

    A z exactly on a bound belongs to the inner (less severe) band.
    """

    name: str
    bands: tuple[tuple[float, str], ...]

    def __post_init__(self):
        if not self.bands:
            raise InvalidPalette("palette needs at least one band")
        prev = 0.0
        for bound, color in self.bands:
            if bound <= prev:
                raise InvalidPalette(f"palette bounds must strictly increase, got {bound}")
            if color not in _NAMED_COLORS and not _COLOR_RE.match(color):
                raise InvalidPalette(f"unknown color {color!r}")
            prev = bound
        if not math.isinf(self.bands[-1][0]):
            raise InvalidPalette("final palette bound must be infinity")


WHO_PALETTE = ZonePalette("who", ((1.0, "green"), (2.0, "yellow"), (math.inf, "red")))
PASSPORT_PALETTE = ZonePalette("passport", ((2.0, "green"), (3.0, "yellow"), (math.inf, "red")))
BUILTIN_PALETTES = {p.name: p for p in (WHO_PALETTE, PASSPORT_PALETTE)}


@dataclass(frozen=True)
class SDProfile:
    """SD-line values linearly interpolated at one x."""

    x: float
    values: dict[int, float]


@dataclass(frozen=True)
class ZScoreResult:
    z: float
    zone: str
    band: tuple[int | None, int | None]


def profile_at(ds: StandardDataset, x: float) -> SDProfile:
    """Componentwise linear interpolation between the bracketing rows.

    At a grid point the stored row is returned exactly (no arithmetic).
    """
    if not ds.min_x <= x <= ds.max_x:
        raise XOutOfRange(x, ds.min_x, ds.max_x)
    lo, hi = ds.bracket(x)
    if lo.x == hi.x:
        return SDProfile(x=x, values=dict(lo.values))
    t = (x - lo.x) / (hi.x - lo.x)
    values = {z: lo.values[z] + t * (hi.values[z] - lo.values[z]) for z in ds.z_labels}
    return SDProfile(x=x, values=values)


def classify(z: float, palette: ZonePalette) -> str:
    """Color of the first band whose bound >= |z|."""
    a = abs(z)
    for bound, color in palette.bands:
        if a <= bound:
            return color
    return palette.bands[-1][1]


def _band_of(z: float, labels: tuple[int, ...]) -> tuple[int | None, int | None]:
    # Enclosing band under the convention lower < z <= upper; open at extremes.
    if z <= labels[0]:
        return (None, labels[0])
    if z > labels[-1]:
        return (labels[-1], None)
    for lo, hi in zip(labels, labels[1:]):
        if lo < z <= hi:
            return (lo, hi)
    return (labels[-2], labels[-1])


def zscore(
    ds: StandardDataset, x: float, y: float, palette: ZonePalette = WHO_PALETTE
) -> ZScoreResult:
    """Decimal z for measurement y at x, with zone and enclosing band.

    Within a band [v(z_i), v(z_{i+1})] the score is
    z_i + (y - v_i) / (v_{i+1} - v_i); beyond the outermost lines the
    outermost band's slope extrapolates.
    """
    if y <= 0:
        raise NonPositiveMeasure(y)
    profile = profile_at(ds, x)
    labels = ds.z_labels
    vals = [profile.values[z] for z in labels]

    if y <= vals[0]:
        i = 0
    elif y >= vals[-1]:
        i = len(vals) - 2
    else:
        i = 0
        for j in range(len(vals) - 1):
            if vals[j] <= y:
                i = j
    z = labels[i] + (y - vals[i]) / (vals[i + 1] - vals[i]) * (labels[i + 1] - labels[i])
    return ZScoreResult(z=z, zone=classify(z, palette), band=_band_of(z, labels))


def value_for_z(ds: StandardDataset, x: float, z: float) -> float:
    """Inverse of zscore under the same piecewise-linear model."""
    profile = profile_at(ds, x)
    labels = ds.z_labels
    vals = [profile.values[lab] for lab in labels]

    if z <= labels[0]:
        i = 0
    elif z >= labels[-1]:
        i = len(labels) - 2
    else:
        i = 0
        for j in range(len(labels) - 1):
            if labels[j] <= z:
                i = j
    t = (z - labels[i]) / (labels[i + 1] - labels[i])
    return vals[i] + t * (vals[i + 1] - vals[i])


def format_z(z: float) -> str:
    """One decimal place, ties rounded away from zero ("-1.2", "0.0")."""
    q = Decimal(str(z)).quantize(Decimal("0.1"), rounding=ROUND_HALF_UP)
    if q == 0:
        return "0.0"
    return str(q)


def legacy_symbol(z: float) -> str | tuple[str, str]:
    """Health-passport inequality notation for a decimal z.

    Integer z (within 1e-9) collapses to "=k"; otherwise the pair
    (">j", "<k") names the integer SD lines bracketing z.
    """
    nearest = round(z)
    if abs(z - nearest) <= 1e-9:
        return f"={nearest}"
    j = math.floor(z)
    return (f">{j}", f"<{j + 1}")


def load_palette(path: Path | str, name: str | None = None) -> ZonePalette:
    """Read a palette from key=value lines: ``<bound>=<color>``, ``name=...``.

    Bounds must appear in strictly increasing order, the last being ``inf``.
    """
    path = Path(path)
    bands: list[tuple[float, str]] = []
    palette_name = name or path.stem
    for lineno, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InvalidPalette(f"{path}:{lineno}: expected '<bound>=<color>'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "name":
            palette_name = value
            continue
        try:
            bound = math.inf if key in ("inf", "*") else float(key)
        except ValueError:
            raise InvalidPalette(f"{path}:{lineno}: bad bound {key!r}") from None
        bands.append((bound, value))
    return ZonePalette(name=palette_name, bands=tuple(bands))
