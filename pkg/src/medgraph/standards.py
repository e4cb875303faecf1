"""Reference-table ingestion: parse, validate, serialize, fingerprint, store.

A standard dataset is a sorted x-grid with one value column per SD line
(integer z in -3..+3). The CSV carrier format:

    line 1 header  ``x,<label>{,<label>}``  with label in
    {SD3neg, SD2neg, SD1neg, SD0, SD1, SD2, SD3}
    following lines: decimal values, one row per grid point
    ``#`` starts a comment line; blank lines are skipped; LF or CRLF

Canonical serialization (the digest input) uses LF line endings, columns
ordered by ascending z, and decimals rendered without trailing zeros.
Dataset metadata (id, indicator, sex, x unit, axis labels) lives outside
the CSV body and is supplied to the parser / stored in a ``.meta`` file.
"""

from __future__ import annotations

import hashlib
from bisect import bisect_left
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from .errors import IoFailure, MedgraphError

__all__ = [
    "Indicator",
    "Sex",
    "XUnit",
    "Row",
    "StandardDataset",
    "DatasetDigest",
    "Catalog",
    "ParseError",
    "MissingHeader",
    "UnknownZLabel",
    "NonMonotonicX",
    "NonMonotonicRow",
    "FewerThanTwoRows",
    "FewerThanTwoZLabels",
    "MalformedNumber",
    "NotFound",
    "IoFailure",
    "parse_standard_table",
    "serialize_standard_table",
    "digest",
    "fmt_decimal",
]


class Indicator(str, Enum):
    WEIGHT_FOR_AGE = "weight-for-age"
    HEIGHT_FOR_AGE = "height-for-age"
    WEIGHT_FOR_HEIGHT = "weight-for-height"
    CUSTOM = "custom"


class Sex(str, Enum):
    FEMALE = "female"
    MALE = "male"
    ANY = "any"


class XUnit(str, Enum):
    AGE_DAYS = "age-days"
    AGE_MONTHS = "age-months"
    LENGTH_CM = "length-cm"


# Column header name per z label, ascending z.
_Z_COLUMN_NAMES = {
    -3: "SD3neg",
    -2: "SD2neg",
    -1: "SD1neg",
    0: "SD0",
    1: "SD1",
    2: "SD2",
    3: "SD3",
}
_Z_BY_COLUMN = {name: z for z, name in _Z_COLUMN_NAMES.items()}


class ParseError(MedgraphError):
    """Base for parse-time rejections. Carries the 1-based source line."""

    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class MissingHeader(ParseError):
    pass


class UnknownZLabel(ParseError):
    pass


class NonMonotonicX(ParseError):
    pass


class NonMonotonicRow(ParseError):
    pass


class FewerThanTwoRows(ParseError):
    pass


class FewerThanTwoZLabels(ParseError):
    pass


class MalformedNumber(ParseError):
    pass


class NotFound(MedgraphError):
    pass


def fmt_decimal(v: float) -> str:
    """Render a decimal without trailing zeros (canonical form)."""
    if v == int(v) and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


@dataclass(frozen=True)
class Row:
    """One grid point: x plus the SD-line values keyed by integer z."""

    x: float
    values: dict[int, float]


@dataclass(frozen=True)
class DatasetDigest:
    hex: str


@dataclass(frozen=True)
class StandardDataset:
    id: str
    indicator: Indicator
    sex: Sex
    x_unit: XUnit
    x_label: str
    y_label: str
    z_labels: tuple[int, ...]
    rows: tuple[Row, ...]
    _xs: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_xs", tuple(r.x for r in self.rows))

    @property
    def min_x(self) -> float:
        return self._xs[0]

    @property
    def max_x(self) -> float:
        return self._xs[-1]

    def bracket(self, x: float) -> tuple[Row, Row]:
        """Bracketing rows for x (binary search; equal rows at grid points).

        Caller guarantees min_x <= x <= max_x.
        """
        i = bisect_left(self._xs, x)
        if i < len(self._xs) and self._xs[i] == x:
            return self.rows[i], self.rows[i]
        return self.rows[i - 1], self.rows[i]


def parse_standard_table(
    text: str,
    *,
    id: str = "custom",
    indicator: Indicator = Indicator.CUSTOM,
    sex: Sex = Sex.ANY,
    x_unit: XUnit = XUnit.AGE_DAYS,
    x_label: str = "",
    y_label: str = "",
) -> StandardDataset:
    """Parse the CSV carrier format into a validated dataset.

    All structural invariants are enforced here; every rejection names the
    offending 1-based source line. A duplicated column label is reported as
    UnknownZLabel (the vocabulary admits each label once).
    """
    header_cols: list[int] | None = None
    header_line = 0
    rows: list[Row] = []
    prev_x: float | None = None
    last_line = 0

    for lineno, raw in enumerate(text.split("\n"), start=1):
        last_line = lineno
        line = raw.rstrip("\r").strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]

        if header_cols is None:
            if fields[0] != "x" or len(fields) < 2:
                raise MissingHeader(lineno, "expected header 'x,<SD label>,...'")
            cols: list[int] = []
            for name in fields[1:]:
                if name not in _Z_BY_COLUMN:
                    raise UnknownZLabel(lineno, f"unknown SD column {name!r}")
                z = _Z_BY_COLUMN[name]
                if z in cols:
                    raise UnknownZLabel(lineno, f"duplicate SD column {name!r}")
                cols.append(z)
            if len(cols) < 2:
                raise FewerThanTwoZLabels(lineno, "need at least two SD columns")
            header_cols = cols
            header_line = lineno
            continue

        if len(fields) != len(header_cols) + 1:
            raise MalformedNumber(
                lineno,
                f"expected {len(header_cols) + 1} fields, got {len(fields)}",
            )
        numbers: list[float] = []
        for f in fields:
            try:
                numbers.append(float(f))
            except ValueError:
                raise MalformedNumber(lineno, f"not a decimal number: {f!r}") from None
        x = numbers[0]
        if prev_x is not None and x <= prev_x:
            raise NonMonotonicX(
                lineno, f"x must strictly increase ({fmt_decimal(x)} after {fmt_decimal(prev_x)})"
            )
        prev_x = x
        values = dict(zip(header_cols, numbers[1:]))
        ordered = [values[z] for z in sorted(values)]
        for lo, hi in zip(ordered, ordered[1:]):
            if hi <= lo:
                raise NonMonotonicRow(
                    lineno,
                    f"values must strictly increase with z ({fmt_decimal(hi)} after {fmt_decimal(lo)})",
                )
        rows.append(Row(x=x, values=values))

    if header_cols is None:
        raise MissingHeader(max(last_line, 1), "no header line found")
    if len(rows) < 2:
        raise FewerThanTwoRows(
            last_line, f"need at least two data rows, got {len(rows)} (header at line {header_line})"
        )

    return StandardDataset(
        id=id,
        indicator=indicator,
        sex=sex,
        x_unit=x_unit,
        x_label=x_label,
        y_label=y_label,
        z_labels=tuple(sorted(header_cols)),
        rows=tuple(rows),
    )


def serialize_standard_table(ds: StandardDataset) -> str:
    """Canonical CSV body: LF endings, columns in ascending z order."""
    lines = ["x," + ",".join(_Z_COLUMN_NAMES[z] for z in ds.z_labels)]
    for row in ds.rows:
        lines.append(
            fmt_decimal(row.x) + "," + ",".join(fmt_decimal(row.values[z]) for z in ds.z_labels)
        )
    return "\n".join(lines) + "\n"


def _canonical_text(ds: StandardDataset) -> str:
    meta = (
        f"id={ds.id}\n"
        f"indicator={ds.indicator.value}\n"
        f"sex={ds.sex.value}\n"
        f"x_unit={ds.x_unit.value}\n"
        f"x_label={ds.x_label}\n"
        f"y_label={ds.y_label}\n"
    )
    return meta + serialize_standard_table(ds)


def digest(ds: StandardDataset) -> DatasetDigest:
    """SHA-256 over the canonical serialization; any field change shifts it."""
    h = hashlib.sha256(_canonical_text(ds).encode("utf-8"))
    return DatasetDigest(hex=h.hexdigest())


_META_KEYS = ("indicator", "sex", "x_unit", "x_label", "y_label")


class Catalog:
    """Directory-backed dataset store: one ``<id>.csv`` + ``<id>.meta`` each.

    Writes are expected to come from a single writer at a time; datasets are
    immutable once parsed, so concurrent readers are safe.
    """

    def __init__(self, root: Path | str):
        self.root = Path(root)
        try:
            self.root.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise IoFailure(f"cannot create catalog directory {self.root}: {e}") from e

    def _csv_path(self, ds_id: str) -> Path:
        return self.root / f"{ds_id}.csv"

    def _meta_path(self, ds_id: str) -> Path:
        return self.root / f"{ds_id}.meta"

    def put(self, ds: StandardDataset) -> None:
        try:
            self._csv_path(ds.id).write_text(serialize_standard_table(ds), encoding="utf-8")
            meta = "".join(f"{k}={getattr(ds, k).value if k in ('indicator', 'sex', 'x_unit') else getattr(ds, k)}\n" for k in _META_KEYS)
            self._meta_path(ds.id).write_text(meta, encoding="utf-8")
        except OSError as e:
            raise IoFailure(f"cannot write dataset {ds.id!r}: {e}") from e

    def get(self, ds_id: str) -> StandardDataset:
        csv_path = self._csv_path(ds_id)
        if not csv_path.exists():
            raise NotFound(f"no dataset {ds_id!r} in catalog {self.root}")
        try:
            text = csv_path.read_text(encoding="utf-8")
            meta_raw = self._meta_path(ds_id).read_text(encoding="utf-8") if self._meta_path(ds_id).exists() else ""
        except OSError as e:
            raise IoFailure(f"cannot read dataset {ds_id!r}: {e}") from e
        meta = {}
        for line in meta_raw.splitlines():
            if "=" in line:
                k, v = line.split("=", 1)
                meta[k.strip()] = v
        return parse_standard_table(
            text,
            id=ds_id,
            indicator=Indicator(meta.get("indicator", Indicator.CUSTOM.value)),
            sex=Sex(meta.get("sex", Sex.ANY.value)),
            x_unit=XUnit(meta.get("x_unit", XUnit.AGE_DAYS.value)),
            x_label=meta.get("x_label", ""),
            y_label=meta.get("y_label", ""),
        )

    def list(self) -> list[tuple[str, DatasetDigest]]:
        entries = []
        for csv_path in sorted(self.root.glob("*.csv")):
            ds_id = csv_path.stem
            entries.append((ds_id, digest(self.get(ds_id))))
        return entries

    def ids(self) -> list[str]:
        return [ds_id for ds_id, _ in self.list()]
