"""Feature schemas and the immutable observation table they describe.

A :class:`FeatureSchema` declares the semantic kind of every model feature
(continuous, circular in degrees, categorical, or calendar month); a
:class:`Dataset` is a validated, read-only table of rows conforming to one
schema plus binary presence/absence labels.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import SchemaError

CONTINUOUS = "continuous"
CIRCULAR = "circular_degrees"
CATEGORICAL = "categorical"
MONTH = "month"

_KINDS = (CONTINUOUS, CIRCULAR, CATEGORICAL, MONTH)


@dataclass(frozen=True)
class FeatureSpec:
    """One column of the model input: a name, a semantic kind, and units."""

    name: str
    kind: str
    units: str = ""

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise SchemaError(f"unknown feature kind {self.kind!r} for {self.name!r}")


class FeatureSchema:
    """An ordered, name-unique collection of :class:`FeatureSpec`."""

    def __init__(self, features):
        features = tuple(features)
        names = [f.name for f in features]
        if len(set(names)) != len(names):
            raise SchemaError("feature names must be unique within a schema")
        self.features = features

    @property
    def names(self):
        return tuple(f.name for f in self.features)

    @property
    def kinds(self):
        return tuple(f.kind for f in self.features)

    def __len__(self):
        return len(self.features)

    def __iter__(self):
        return iter(self.features)

    def __eq__(self, other):
        return isinstance(other, FeatureSchema) and self.features == other.features

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise SchemaError(f"schema has no feature named {name!r}") from None

    def indices_of_kind(self, *kinds) -> list[int]:
        return [i for i, f in enumerate(self.features) if f.kind in kinds]

    @property
    def continuous_indices(self):
        return self.indices_of_kind(CONTINUOUS)

    @property
    def circular_indices(self):
        return self.indices_of_kind(CIRCULAR)

    @property
    def categorical_indices(self):
        """Indices treated categorically downstream (nominal and month kinds)."""
        return self.indices_of_kind(CATEGORICAL, MONTH)


#: The six model features used throughout: wind/current direction (circular),
#: wind/current speed and SST (continuous), and the observation month.
DEFAULT_SCHEMA = FeatureSchema(
    [
        FeatureSpec("sst_c", CONTINUOUS, "degC"),
        FeatureSpec("wind_dir_deg", CIRCULAR, "degrees"),
        FeatureSpec("wind_speed_ms", CONTINUOUS, "m/s"),
        FeatureSpec("curr_dir_deg", CIRCULAR, "degrees"),
        FeatureSpec("curr_speed_ms", CONTINUOUS, "m/s"),
        FeatureSpec("month", MONTH, "1-12"),
    ]
)


def _frozen(arr):
    arr = np.asarray(arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Dataset:
    """Immutable observation table: feature matrix, labels, optional metadata.

    Categorical cells are stored as float indices into ``categories[name]``;
    circular cells are degrees in [0, 360); month cells are 1..12.

    Attributes
    ----------
    schema : FeatureSchema
    X : np.ndarray of shape (n, len(schema)), float64, read-only
    y : np.ndarray of shape (n,), int, values in {0, 1}, read-only
    beach : tuple of str, optional per-row beach identifier
    dates : tuple of str, optional per-row ISO dates
    origin : tuple of str, optional per-row provenance ("real" / "synthetic")
    categories : mapping feature name -> tuple of category values
    """

    schema: FeatureSchema
    X: np.ndarray
    y: np.ndarray
    beach: tuple | None = None
    dates: tuple | None = None
    origin: tuple | None = None
    categories: dict = field(default_factory=dict)

    def __post_init__(self):
        X = _frozen(np.asarray(self.X, dtype=float).reshape(-1, len(self.schema)))
        y = _frozen(np.asarray(self.y, dtype=int).ravel())
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)
        if X.shape[0] != y.shape[0]:
            raise SchemaError(f"{X.shape[0]} rows but {y.shape[0]} labels")
        if y.size and not np.isin(y, (0, 1)).all():
            raise SchemaError("labels must all be 0 or 1")
        for attr in ("beach", "dates", "origin"):
            val = getattr(self, attr)
            if val is not None:
                val = tuple(val)
                if len(val) != X.shape[0]:
                    raise SchemaError(f"{attr} length {len(val)} != row count {X.shape[0]}")
                object.__setattr__(self, attr, val)

    def __len__(self):
        return self.X.shape[0]

    @property
    def n_presence(self) -> int:
        return int((self.y == 1).sum())

    @property
    def n_absence(self) -> int:
        return int((self.y == 0).sum())

    def subset(self, indices) -> "Dataset":
        """Row subset (copy) preserving schema, metadata, and order of `indices`."""
        indices = np.asarray(indices)
        pick = lambda t: tuple(t[i] for i in indices) if t is not None else None
        return Dataset(
            schema=self.schema,
            X=self.X[indices].copy(),
            y=self.y[indices].copy(),
            beach=pick(self.beach),
            dates=pick(self.dates),
            origin=pick(self.origin),
            categories=dict(self.categories),
        )

    def column(self, name: str) -> np.ndarray:
        return self.X[:, self.schema.index(name)]
