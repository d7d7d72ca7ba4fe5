"""Monthly weather CSV ingestion, normalization, windowing and splitting.

The input CSV needs a header row with the columns year, month, tem (or
temperature) and rain (or rainfall), matched case-insensitively. Records must
form a gapless run of consecutive months.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .errors import BadCellError, DataError, MissingColumnError

VARIABLES = ("temperature", "rainfall")

# Accepted header spellings, lowercased.
_COLUMN_ALIASES = {
    "year": ("year",),
    "month": ("month",),
    "temperature": ("tem", "temperature"),
    "rainfall": ("rain", "rainfall"),
}


@dataclass(frozen=True)
class WeatherRecord:
    """One month of observations."""

    year: int
    month: int
    temperature: float  # degrees Celsius
    rainfall: float  # millimeters


@dataclass(frozen=True)
class NormalizationSpec:
    """Affine map from [min, max] in physical units onto [lo, hi] in (0, 1)."""

    min: float
    max: float
    lo: float = 0.1
    hi: float = 0.9

    def normalize(self, v):
        return self.lo + (np.asarray(v, dtype=np.float64) - self.min) * (self.hi - self.lo) / (
            self.max - self.min
        )

    def denormalize(self, y):
        return self.min + (np.asarray(y, dtype=np.float64) - self.lo) * (self.max - self.min) / (
            self.hi - self.lo
        )


@dataclass(frozen=True)
class WindowedSample:
    """A window of normalized inputs and its one-step-ahead normalized target."""

    inputs: np.ndarray
    target: float
    target_month: tuple[int, int]  # (year, month) of the target, for reporting


class SeriesDataset:
    """Chronological month records with a selected variable.

    Construction validates ordering and that months are strictly consecutive
    with no gaps; the record list is kept immutable thereafter.
    """

    def __init__(self, records, variable: str):
        if variable not in VARIABLES:
            raise ValueError(f"unknown variable {variable!r}, expected one of {VARIABLES}")
        records = tuple(records)
        if not records:
            raise DataError("dataset holds no records")
        for prev, cur in zip(records, records[1:]):
            expected = (prev.year + 1, 1) if prev.month == 12 else (prev.year, prev.month + 1)
            if (cur.year, cur.month) != expected:
                raise DataError(
                    f"records are not consecutive months: {prev.year}-{prev.month:02d} "
                    f"is followed by {cur.year}-{cur.month:02d}"
                )
        self.records = records
        self.variable = variable

    def __len__(self) -> int:
        return len(self.records)

    def values(self) -> np.ndarray:
        """The selected variable as a float64 array, chronological."""
        return np.array([getattr(r, self.variable) for r in self.records])

    def months(self) -> list[tuple[int, int]]:
        return [(r.year, r.month) for r in self.records]


def _resolve_columns(header: list[str]) -> dict[str, int]:
    lowered = [h.strip().lower() for h in header]
    mapping = {}
    for field, aliases in _COLUMN_ALIASES.items():
        for alias in aliases:
            if alias in lowered:
                mapping[field] = lowered.index(alias)
                break
        else:
            raise MissingColumnError(field)
    return mapping


def load_csv(path) -> list[WeatherRecord]:
    """Parse and validate a weather CSV into chronologically sorted records.

    Raises DataError subclasses for a missing file, missing columns,
    unparsable cells (reported with row and column), months outside 1-12,
    negative rainfall, or duplicate (year, month) pairs.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read dataset file {path}: {exc}") from exc

    with fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: file is empty, expected a header row") from None
        columns = _resolve_columns(header)

        records = []
        seen: set[tuple[int, int]] = set()
        for row_no, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue

            def cell(field: str) -> str:
                idx = columns[field]
                if idx >= len(row):
                    raise BadCellError(row_no, field, "<missing>")
                return row[idx].strip()

            parsed = {}
            for field, caster in (
                ("year", int),
                ("month", int),
                ("temperature", float),
                ("rainfall", float),
            ):
                raw = cell(field)
                try:
                    parsed[field] = caster(raw)
                except ValueError:
                    raise BadCellError(row_no, field, raw) from None

            if not (1 <= parsed["month"] <= 12):
                raise DataError(f"row {row_no}: month {parsed['month']} outside 1-12")
            if not math.isfinite(parsed["temperature"]):
                raise DataError(f"row {row_no}: temperature is not finite")
            if not math.isfinite(parsed["rainfall"]) or parsed["rainfall"] < 0:
                raise DataError(f"row {row_no}: rainfall must be finite and >= 0")
            key = (parsed["year"], parsed["month"])
            if key in seen:
                raise DataError(f"duplicate month {key[0]}-{key[1]:02d}")
            seen.add(key)
            records.append(WeatherRecord(**parsed))

    if not records:
        raise DataError(f"{path}: no data rows")
    records.sort(key=lambda r: (r.year, r.month))
    return records


def split(data: SeriesDataset, cutoff_year: int = 2013) -> tuple[SeriesDataset, SeriesDataset]:
    """Split into training (year <= cutoff) and test (the remainder).

    Both halves must be non-empty; a cutoff outside the data range is an
    error rather than a silent empty split.
    """
    years = [r.year for r in data.records]
    if cutoff_year < years[0] or cutoff_year >= years[-1]:
        raise DataError(
            f"cutoff year {cutoff_year} must lie inside the data range "
            f"{years[0]}-{years[-1]} and leave a non-empty test split"
        )
    train = [r for r in data.records if r.year <= cutoff_year]
    test = [r for r in data.records if r.year > cutoff_year]
    return SeriesDataset(train, data.variable), SeriesDataset(test, data.variable)


def fit_normalization(train: SeriesDataset, lo: float = 0.1, hi: float = 0.9) -> NormalizationSpec:
    """Fit the min-max map on training data only.

    The sigmoid prediction head can never reach 0 or 1 exactly, so targets
    are mapped into [lo, hi] strictly inside (0, 1); the headroom also
    tolerates test values outside the training range.
    """
    if not (0.0 < lo < hi < 1.0):
        raise ValueError(f"target interval must satisfy 0 < lo < hi < 1, got [{lo}, {hi}]")
    values = train.values()
    vmin, vmax = float(values.min()), float(values.max())
    if vmax <= vmin:
        raise DataError("cannot normalize a constant series (max == min)")
    return NormalizationSpec(min=vmin, max=vmax, lo=lo, hi=hi)


def make_windows(
    data: SeriesDataset, spec: NormalizationSpec, window: int = 12
) -> list[WindowedSample]:
    """Build chronological one-step-ahead samples of the given window length.

    Sample k covers positions [k, k+window) and targets position k+window,
    giving len(data) - window samples. Values outside the normalization range
    pass through untruncated; clipping would silently corrupt extremes.
    """
    if window < 1:
        raise ValueError(f"window must be >= 1, got {window}")
    if len(data) <= window:
        raise DataError(f"need more than {window} records to window, got {len(data)}")
    normalized = spec.normalize(data.values())
    months = data.months()
    samples = []
    for k in range(len(data) - window):
        samples.append(
            WindowedSample(
                inputs=normalized[k : k + window].copy(),
                target=float(normalized[k + window]),
                target_month=months[k + window],
            )
        )
    return samples
