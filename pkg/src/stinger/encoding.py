"""Feature encodings that turn mixed-type rows into model input matrices.

Two encodings are supported:

``raw`` (default)
    Continuous features standardized with train-set mean/SD, circular
    features as (sin, cos) pairs so the 0/360 seam disappears, month as 12
    indicators, categoricals one-hot.

``subgroups``
    Every feature becomes named indicator columns: quartile levels for
    continuous features, the 8 compass sectors for circular ones, months,
    and raw categories.
"""

from __future__ import annotations

import calendar

import numpy as np

from .errors import ContractError, ParameterError
from .ingest import COMPASS_SECTORS, DISCRETE_LEVELS, bin_direction, fit_discretization
from .schema import CIRCULAR, CONTINUOUS, MONTH, Dataset

ENCODINGS = ("raw", "subgroups")
MONTH_NAMES = tuple(calendar.month_name[m] for m in range(1, 13))


class FeatureEncoder:
    """Fit on a training dataset, then map any matching rows to model input.

    Attributes (after fit)
    ----------------------
    feature_names : list of encoded column names
    groups : list, same length, naming the source feature of each column
    """

    def __init__(self, mode: str = "raw"):
        if mode not in ENCODINGS:
            raise ParameterError(f"encoding must be one of {ENCODINGS}, got {mode!r}")
        self.mode = mode
        self.fitted = False

    def fit(self, dataset: Dataset) -> "FeatureEncoder":
        self.schema_names = list(dataset.schema.names)
        self.kinds = list(dataset.schema.kinds)
        self.categories = {k: list(v) for k, v in dataset.categories.items()}
        self.stats = {}
        self.rules = {}

        for j, (name, kind) in enumerate(zip(self.schema_names, self.kinds)):
            col = dataset.X[:, j]
            if kind == CONTINUOUS:
                if self.mode == "raw":
                    sd = float(col.std(ddof=0))
                    self.stats[name] = (float(col.mean()), sd if sd > 0 else 1.0)
                else:
                    self.rules[name] = fit_discretization(col, source=name)

        self._build_names()
        self.fitted = True
        return self

    def _build_names(self):
        self.feature_names, self.groups = [], []

        def block(name, levels):
            self.feature_names += [f"{name}={lev}" for lev in levels]
            self.groups += [name] * len(levels)

        for name, kind in zip(self.schema_names, self.kinds):
            if kind == CONTINUOUS and self.mode == "raw":
                self.feature_names.append(name)
                self.groups.append(name)
            elif kind == CONTINUOUS:
                block(name, DISCRETE_LEVELS)
            elif kind == CIRCULAR and self.mode == "raw":
                self.feature_names += [f"{name}_sin", f"{name}_cos"]
                self.groups += [name, name]
            elif kind == CIRCULAR:
                block(name, COMPASS_SECTORS)
            elif kind == MONTH:
                block(name, MONTH_NAMES)
            else:
                block(name, self.categories.get(name, []))

    @property
    def width(self) -> int:
        return len(self.feature_names)

    def transform(self, X: np.ndarray) -> np.ndarray:
        """Encode raw rows (columns in schema order) into the model matrix."""
        if not self.fitted:
            raise ContractError("encoder must be fitted before transform")
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != len(self.schema_names):
            raise ContractError(
                f"expected rows with {len(self.schema_names)} raw features, got shape {X.shape}"
            )
        blocks = []
        for j, (name, kind) in enumerate(zip(self.schema_names, self.kinds)):
            col = X[:, j]
            if kind == CONTINUOUS and self.mode == "raw":
                mean, sd = self.stats[name]
                blocks.append(((col - mean) / sd)[:, None])
            elif kind == CONTINUOUS:
                idx = self.rules[name].bin_index(col)
                blocks.append(_onehot(idx, len(DISCRETE_LEVELS)))
            elif kind == CIRCULAR and self.mode == "raw":
                th = np.deg2rad(col)
                blocks.append(np.column_stack([np.sin(th), np.cos(th)]))
            elif kind == CIRCULAR:
                idx = np.array([COMPASS_SECTORS.index(bin_direction(a)) for a in col])
                blocks.append(_onehot(idx, len(COMPASS_SECTORS)))
            elif kind == MONTH:
                blocks.append(_onehot(col.astype(int) - 1, 12))
            else:
                n_cat = len(self.categories.get(name, []))
                blocks.append(_onehot(col.astype(int), n_cat))
        return np.hstack(blocks) if blocks else np.empty((X.shape[0], 0))

    def transform_dataset(self, dataset: Dataset) -> np.ndarray:
        if list(dataset.schema.names) != self.schema_names:
            raise ContractError(
                f"dataset features {dataset.schema.names} do not match fit-time features {tuple(self.schema_names)}"
            )
        return self.transform(dataset.X)

    def aggregate_by_source(self, per_column: np.ndarray) -> dict:
        """Sum per-encoded-column scores back onto their source features."""
        out = {name: 0.0 for name in self.schema_names}
        for score, group in zip(per_column, self.groups):
            out[group] += float(score)
        return out

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "schema_names": self.schema_names,
            "kinds": self.kinds,
            "categories": self.categories,
            "stats": {k: list(v) for k, v in self.stats.items()},
            "rules": {k: {"edges": list(r.edges), "labels": list(r.labels)} for k, r in self.rules.items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FeatureEncoder":
        from .ingest import DiscretizationRule

        enc = cls(mode=data["mode"])
        enc.schema_names = list(data["schema_names"])
        enc.kinds = list(data["kinds"])
        enc.categories = {k: list(v) for k, v in data["categories"].items()}
        enc.stats = {k: tuple(v) for k, v in data["stats"].items()}
        enc.rules = {
            k: DiscretizationRule(source=k, edges=tuple(r["edges"]), labels=tuple(r["labels"]))
            for k, r in data["rules"].items()
        }
        enc._build_names()
        enc.fitted = True
        return enc


def _onehot(idx: np.ndarray, n_levels: int) -> np.ndarray:
    out = np.zeros((idx.shape[0], n_levels))
    if n_levels:
        out[np.arange(idx.shape[0]), np.clip(idx.astype(int), 0, n_levels - 1)] = 1.0
    return out
