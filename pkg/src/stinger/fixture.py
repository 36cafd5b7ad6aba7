"""Seeded synthetic stand-in datasets with controllable class overlap.

Continuous features are class-conditional Gaussians whose means separate by
``(1 - overlap) * 2`` pooled SDs; directions come from class-conditional von
Mises mixtures (absence centered West/North, presence North/South); presence
months are summer-weighted. ``overlap = 1`` makes the class-conditional
distributions identical, ``overlap = 0`` fully distinct. Feature locations
and scales follow the observed study-area statistics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circular import sample_von_mises
from .errors import ParameterError
from .schema import DEFAULT_SCHEMA, Dataset

#: (mean, SD) per continuous feature, matching the reported per-beach numbers.
CONTINUOUS_TEMPLATE = {
    "sst_c": (21.0, 2.1),
    "wind_speed_ms": (5.4, 2.8),
    "curr_speed_ms": (0.215, 0.154),
}

#: circular features: (negative-class centers, positive-class centers, kappa)
CIRCULAR_TEMPLATE = {
    "wind_dir_deg": ((270.0, 0.0), (0.0, 180.0), 8.0),
    "curr_dir_deg": ((270.0, 0.0), (0.0, 180.0), 3.0),
}

#: presence month weights peak December-February and taper through the
#: shoulder seasons; absence months are uniform
SUMMER_WEIGHTS = np.array([0.20, 0.22, 0.10, 0.06, 0.01, 0.01, 0.01, 0.01, 0.04, 0.05, 0.08, 0.21])

BEACHES = ("Clovelly", "Coogee", "Maroubra")


@dataclass(frozen=True)
class FixtureSpec:
    n: int = 1000
    prevalence: float = 0.06
    overlap: float = 0.7
    seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.prevalence < 1.0:
            raise ParameterError("prevalence must be in (0, 1)")
        if not 0.0 <= self.overlap <= 1.0:
            raise ParameterError("overlap must be in [0, 1]")
        if self.n < 2:
            raise ParameterError("n must be >= 2")


def _sample_direction_mixture(centers, kappa, n, rng):
    pick = rng.integers(0, len(centers), size=n)
    out = np.empty(n)
    for c_idx, center in enumerate(centers):
        mask = pick == c_idx
        out[mask] = sample_von_mises(center, kappa, int(mask.sum()), rng)
    return out


def generate_fixture(spec: FixtureSpec) -> Dataset:
    """Deterministic synthetic dataset in the default six-feature schema."""
    rng = np.random.default_rng(spec.seed)
    n_pos = int(np.floor(spec.prevalence * spec.n + 0.5))
    y = np.zeros(spec.n, dtype=int)
    y[:n_pos] = 1
    separation = (1.0 - spec.overlap) * 2.0

    X = np.empty((spec.n, len(DEFAULT_SCHEMA)))
    for name, (mean, sd) in CONTINUOUS_TEMPLATE.items():
        j = DEFAULT_SCHEMA.index(name)
        col = rng.normal(mean, sd, spec.n)
        col[y == 1] += separation * sd
        if name.endswith("speed_ms"):
            col = np.maximum(col, 1e-3)
        X[:, j] = col

    # positives follow their own mixture with probability (1 - overlap),
    # else they behave like the negative class
    own = rng.random(spec.n) < (1.0 - spec.overlap)
    for name, (neg_centers, pos_centers, kappa) in CIRCULAR_TEMPLATE.items():
        j = DEFAULT_SCHEMA.index(name)
        col = _sample_direction_mixture(neg_centers, kappa, spec.n, rng)
        pos_draw = _sample_direction_mixture(pos_centers, kappa, spec.n, rng)
        use_own = (y == 1) & own
        col[use_own] = pos_draw[use_own]
        X[:, j] = col

    j_month = DEFAULT_SCHEMA.index("month")
    months = rng.integers(1, 13, size=spec.n).astype(float)
    summer_draw = rng.choice(np.arange(1, 13), size=spec.n, p=SUMMER_WEIGHTS / SUMMER_WEIGHTS.sum())
    use_own = (y == 1) & own
    months[use_own] = summer_draw[use_own]
    X[:, j_month] = months

    beach = tuple(BEACHES[i] for i in rng.integers(0, len(BEACHES), size=spec.n))
    years = rng.integers(2016, 2021, size=spec.n)
    days = rng.integers(1, 29, size=spec.n)
    dates = tuple(f"{yr}-{int(m):02d}-{d:02d}" for yr, m, d in zip(years, X[:, j_month], days))

    order = rng.permutation(spec.n)
    return Dataset(
        schema=DEFAULT_SCHEMA,
        X=X[order],
        y=y[order],
        beach=tuple(beach[i] for i in order),
        dates=tuple(dates[i] for i in order),
    )
