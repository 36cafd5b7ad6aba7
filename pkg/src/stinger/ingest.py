"""Loading, validation, and preprocessing of raw observation tables.

Input format: comma-separated UTF-8 text with a header row. Required columns
are ``date`` (ISO-8601 day), ``beach``, ``presence`` (0/1) and the five
environmental features; the ``month`` model feature is derived from ``date``
when not supplied directly. Location-specific columns are dropped, any other
unknown column triggers a warning.
"""

from __future__ import annotations

import csv
import datetime
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DataError, LabelError, ParameterError, ParseError, SchemaError
from .schema import CATEGORICAL, CIRCULAR, CONTINUOUS, DEFAULT_SCHEMA, MONTH, Dataset, FeatureSchema

LABEL_COLUMN = "presence"
BEACH_COLUMN = "beach"
DATE_COLUMN = "date"
ORIGIN_COLUMN = "origin"

#: Columns excluded from modelling so findings generalize beyond the surveyed
#: sites; dropped silently when present.
LOCATION_COLUMNS = frozenset(
    {
        "beach_key",
        "latitude",
        "longitude",
        "orientation",
        "embaymentisation",
        "surf_club",
        "slsa",
        "state",
        "length",
    }
)

#: Compass sector names in bearing order; sector i is centered at i * 45 degrees.
COMPASS_SECTORS = (
    "North",
    "North-East",
    "East",
    "South-East",
    "South",
    "South-West",
    "West",
    "North-West",
)

DISCRETE_LEVELS = ("Low", "Medium", "High", "Very High")


def bin_direction(angle) -> str:
    """Map an angle in degrees to one of the 8 named compass sectors.

    Sectors are 45 degrees wide, centered on 0, 45, ..., 315, and half-open:
    ``[center - 22.5, center + 22.5)``. The angle is reduced modulo 360 first,
    so ``bin_direction(x) == bin_direction(x + 360k)`` for any integer k.
    """
    angle = float(angle)
    if not np.isfinite(angle):
        raise ParseError(f"direction angle must be finite, got {angle!r}")
    sector = int(((angle % 360.0) + 22.5) // 45.0) % 8
    return COMPASS_SECTORS[sector]


def expand_month(month) -> np.ndarray:
    """One-hot expand a month into 12 indicators (index 0 = January).

    Accepts a month index in 1..12, a ``datetime.date``, or an ISO date string.
    """
    if isinstance(month, str):
        month = datetime.date.fromisoformat(month)
    if isinstance(month, (datetime.date, datetime.datetime)):
        month = month.month
    month = int(month)
    if not 1 <= month <= 12:
        raise ParseError(f"month index must be in 1..12, got {month}")
    out = np.zeros(12)
    out[month - 1] = 1.0
    return out


@dataclass(frozen=True)
class DiscretizationRule:
    """Equal-width binning of one numeric feature into ordered named levels."""

    source: str
    edges: tuple
    labels: tuple = DISCRETE_LEVELS

    def __post_init__(self):
        if len(self.edges) != len(self.labels) + 1:
            raise ParseError("need exactly one more edge than labels")
        if not all(a < b for a, b in zip(self.edges, self.edges[1:])):
            raise ParseError("bin edges must be strictly ascending")

    def bin_index(self, values) -> np.ndarray:
        """Vectorized bin lookup: half-open bins, top bin closed, out-of-range clamped."""
        idx = np.digitize(np.asarray(values, dtype=float), self.edges[1:-1], right=False)
        return idx

    def __call__(self, value) -> str:
        return self.labels[int(self.bin_index(value))]


def fit_discretization(values, n_bins: int = 4, labels=DISCRETE_LEVELS, source: str = "") -> DiscretizationRule:
    """Fit equal-width bin edges spanning [min(values), max(values)].

    Raises :class:`DataError` when the range is degenerate (all values equal).
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise DataError("cannot fit bins on an empty sequence")
    if n_bins != len(labels):
        raise ParseError(f"{n_bins} bins but {len(labels)} labels")
    lo, hi = float(values.min()), float(values.max())
    if lo == hi:
        raise DataError(f"degenerate range for {source or 'feature'}: all values equal {lo}")
    edges = tuple(np.linspace(lo, hi, n_bins + 1))
    return DiscretizationRule(source=source, edges=edges, labels=tuple(labels))


def apply_discretization(value, rule: DiscretizationRule) -> str:
    """Bin label for one value; values outside the fitted range clamp to the outer bins."""
    return rule(value)


@dataclass(frozen=True)
class SplitSpec:
    """Seeded shuffled train/test split; train gets round(train_fraction * n) rows."""

    train_fraction: float = 0.6
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.train_fraction < 1.0:
            raise ParameterError(f"train_fraction must be in (0,1), got {self.train_fraction}")


def split_train_test(dataset: Dataset, spec: SplitSpec):
    """Disjoint, exhaustive (train, test) partition, fully determined by the seed."""
    n = len(dataset)
    if n == 0:
        raise DataError("cannot split an empty dataset")
    rng = np.random.default_rng(spec.seed)
    perm = rng.permutation(n)
    n_train = int(np.floor(spec.train_fraction * n + 0.5))  # round half up
    return dataset.subset(perm[:n_train]), dataset.subset(perm[n_train:])


def _parse_numeric(raw: str, column: str, row_idx: int) -> float:
    try:
        val = float(raw)
    except ValueError:
        raise ParseError(f"row {row_idx}: cannot parse {column}={raw!r} as a number") from None
    if not np.isfinite(val):
        raise ParseError(f"row {row_idx}: non-finite value in {column}")
    return val


def load_observations(path, schema: FeatureSchema = DEFAULT_SCHEMA, drop_incomplete_rows: bool = False) -> Dataset:
    """Load a delimited observation file into a validated :class:`Dataset`.

    Rows keep file order. Missing cells raise :class:`ParseError` unless
    ``drop_incomplete_rows`` is set, in which case affected rows are skipped
    with a warning.
    """
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = [h.strip() for h in (reader.fieldnames or [])]
        rows = list(reader)

    if not header:
        raise SchemaError(f"{path}: empty file, no header row")
    if LABEL_COLUMN not in header:
        raise SchemaError(f"{path}: missing required label column {LABEL_COLUMN!r}")

    derive_month = False
    for feat in schema:
        if feat.name in header:
            continue
        if feat.kind == MONTH and DATE_COLUMN in header:
            derive_month = True
            continue
        raise SchemaError(f"{path}: missing required column {feat.name!r}")

    known = set(schema.names) | {LABEL_COLUMN, BEACH_COLUMN, DATE_COLUMN, ORIGIN_COLUMN}
    for col in header:
        if col in known or col in LOCATION_COLUMNS:
            continue
        warnings.warn(f"{path}: ignoring unrecognized column {col!r}")

    has_beach = BEACH_COLUMN in header
    has_date = DATE_COLUMN in header
    categories = {f.name: {} for f in schema if f.kind == CATEGORICAL}

    needed = [f.name for f in schema if not (f.kind == MONTH and derive_month)]
    needed.append(LABEL_COLUMN)
    if derive_month:
        needed.append(DATE_COLUMN)

    X, y, beaches, dates, skipped = [], [], [], [], 0
    for i, row in enumerate(rows):
        cells = {k.strip(): (v or "").strip() for k, v in row.items() if k is not None}
        if any(cells.get(c, "") == "" for c in needed):
            if drop_incomplete_rows:
                skipped += 1
                continue
            missing = [c for c in needed if cells.get(c, "") == ""]
            raise ParseError(f"row {i}: missing value(s) in {missing} (use --drop-incomplete-rows to skip)")

        label = _parse_numeric(cells[LABEL_COLUMN], LABEL_COLUMN, i)
        if label not in (0.0, 1.0):
            raise LabelError(f"row {i}: label {cells[LABEL_COLUMN]!r} is not 0 or 1")

        vec = np.empty(len(schema))
        for j, feat in enumerate(schema):
            if feat.kind == MONTH:
                raw = cells.get(feat.name, "")
                if raw:
                    m = _parse_numeric(raw, feat.name, i)
                    if m != int(m) or not 1 <= m <= 12:
                        raise ParseError(f"row {i}: month {raw!r} not in 1..12")
                    vec[j] = m
                else:
                    try:
                        vec[j] = datetime.date.fromisoformat(cells[DATE_COLUMN]).month
                    except ValueError:
                        raise ParseError(f"row {i}: cannot parse date {cells[DATE_COLUMN]!r}") from None
            elif feat.kind == CATEGORICAL:
                cat_map = categories[feat.name]
                vec[j] = cat_map.setdefault(cells[feat.name], len(cat_map))
            else:
                val = _parse_numeric(cells[feat.name], feat.name, i)
                vec[j] = val % 360.0 if feat.kind == CIRCULAR else val

        X.append(vec)
        y.append(int(label))
        if has_beach:
            beaches.append(cells.get(BEACH_COLUMN, ""))
        if has_date:
            dates.append(cells.get(DATE_COLUMN, ""))

    if skipped:
        warnings.warn(f"{path}: dropped {skipped} incomplete row(s)")

    return Dataset(
        schema=schema,
        X=np.array(X).reshape(-1, len(schema)),
        y=np.array(y, dtype=int),
        beach=tuple(beaches) if has_beach else None,
        dates=tuple(dates) if has_date else None,
        categories={name: tuple(sorted(m, key=m.get)) for name, m in categories.items()},
    )


def save_observations(dataset: Dataset, path, include_origin: bool = False) -> None:
    """Write a dataset back out in the input file format (plus optional provenance)."""
    header = []
    if dataset.dates is not None:
        header.append(DATE_COLUMN)
    if dataset.beach is not None:
        header.append(BEACH_COLUMN)
    header += list(dataset.schema.names) + [LABEL_COLUMN]
    if include_origin:
        header.append(ORIGIN_COLUMN)

    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(len(dataset)):
            row = []
            if dataset.dates is not None:
                row.append(dataset.dates[i])
            if dataset.beach is not None:
                row.append(dataset.beach[i])
            for j, feat in enumerate(dataset.schema):
                cell = dataset.X[i, j]
                if feat.kind == MONTH:
                    row.append(int(cell))
                elif feat.kind == CATEGORICAL:
                    row.append(dataset.categories[feat.name][int(cell)])
                else:
                    row.append(repr(float(cell)))
            row.append(int(dataset.y[i]))
            if include_origin:
                row.append(dataset.origin[i] if dataset.origin is not None else "real")
            writer.writerow(row)


@dataclass(frozen=True)
class BeachSummary:
    beach: str
    presence: int
    absence: int
    feature_stats: dict  # feature name -> (mean, sample SD)


def summarize(dataset: Dataset) -> list[BeachSummary]:
    """Per-beach presence/absence counts and feature mean/SD.

    Circular features are summarized by arithmetic mean/SD of raw degrees (the
    reporting convention for this dataset). Sample SD uses divisor n-1 and is
    reported as 0 for single-row groups. Datasets without a beach column get a
    single "all" group.
    """
    groups: dict[str, list[int]] = {}
    if dataset.beach is None:
        groups["all"] = list(range(len(dataset)))
    else:
        for i, b in enumerate(dataset.beach):
            groups.setdefault(b, []).append(i)

    numeric = dataset.schema.indices_of_kind(CONTINUOUS, CIRCULAR)
    out = []
    for beach in sorted(groups):
        idx = np.array(groups[beach], dtype=int)
        yb = dataset.y[idx]
        stats = {}
        for j in numeric:
            col = dataset.X[idx, j]
            sd = float(np.std(col, ddof=1)) if col.size > 1 else 0.0
            stats[dataset.schema.names[j]] = (float(col.mean()) if col.size else float("nan"), sd)
        out.append(
            BeachSummary(
                beach=beach,
                presence=int((yb == 1).sum()),
                absence=int((yb == 0).sum()),
                feature_stats=stats,
            )
        )
    return out
