"""Training-set augmentation: SMOTE-NC, random undersampling, synthetic negatives.

All operations are pure functions of (input dataset, parameters, seed) and are
meant for the training split only; evaluation data is never resampled.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .circular import shorter_arc_interpolate
from .errors import DataError, ParameterError, StrategyError
from .schema import Dataset

STRATEGIES = ("none", "smote_nc", "undersample", "synthetic_negative")
BACKENDS = ("copula", "gan")


@dataclass(frozen=True)
class SmoteParams:
    """Minority oversampling to parity using k-nearest-neighbor interpolation."""

    k_neighbors: int = 5
    seed: int = 0

    def __post_init__(self):
        if self.k_neighbors < 1:
            raise ParameterError("k_neighbors must be >= 1")


@dataclass(frozen=True)
class SmoteProvenance:
    """Per-synthetic-row lineage: original-dataset indices of the base row and
    the interpolation neighbor, and the interpolation fraction."""

    base_rows: np.ndarray
    neighbor_rows: np.ndarray
    fractions: np.ndarray


def _class_split(dataset: Dataset):
    counts = [int((dataset.y == 0).sum()), int((dataset.y == 1).sum())]
    if min(counts) == 0:
        raise StrategyError("resampling requires both classes to be present")
    minority = int(np.argmin(counts))
    return minority, counts[minority], counts[1 - minority]


def _pairwise_sq_dist(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.maximum(
        (A * A).sum(axis=1)[:, None] + (B * B).sum(axis=1)[None, :] - 2.0 * (A @ B.T), 0.0
    )


def smote_nc(train: Dataset, params: SmoteParams, with_provenance: bool = False):
    """Oversample the minority class to parity with mixed-type synthesis.

    Neighbor distances are Euclidean over minority-standardized continuous
    cells and (sin, cos)-encoded circular cells, plus the classic
    nominal-mismatch penalty: the median of the continuous cells' standard
    deviations, squared, added once per differing categorical cell.

    Synthetic cells: continuous values interpolate linearly between the base
    row and a sampled neighbor, circular values interpolate along the shorter
    arc, and categorical cells take the most frequent value among the base
    row's k neighbors (ties to the lowest category index).

    ``with_provenance`` additionally returns a :class:`SmoteProvenance`
    recording each synthetic row's parents.
    """
    minority, n_min, n_maj = _class_split(train)
    if n_min <= params.k_neighbors:
        raise ParameterError(
            f"k_neighbors={params.k_neighbors} must be below the minority count {n_min}"
        )
    n_syn = n_maj - n_min
    if n_syn == 0:
        empty = SmoteProvenance(np.empty(0, int), np.empty(0, int), np.empty(0))
        return (train, empty) if with_provenance else train

    schema = train.schema
    cont = schema.continuous_indices
    circ = schema.circular_indices
    cats = schema.categorical_indices

    min_idx = np.flatnonzero(train.y == minority)
    M = train.X[min_idx]

    parts = []
    sds = []
    for j in cont:
        col = M[:, j]
        sd = col.std(ddof=0)
        sd = sd if sd > 0 else 1.0
        parts.append(((col - col.mean()) / sd)[:, None])
        sds.append(np.std((col - col.mean()) / sd, ddof=0))
    for j in circ:
        th = np.deg2rad(M[:, j])
        parts.append(np.column_stack([np.sin(th), np.cos(th)]))
    numeric = np.hstack(parts) if parts else np.zeros((len(M), 0))

    d2 = _pairwise_sq_dist(numeric, numeric)
    if cats:
        med = float(np.median(sds)) if sds else 1.0
        for j in cats:
            mismatch = M[:, j][:, None] != M[:, j][None, :]
            d2 += (med * med) * mismatch
    np.fill_diagonal(d2, np.inf)
    neighbors = np.argsort(d2, axis=1, kind="stable")[:, : params.k_neighbors]

    # Majority category among each row's k neighbors; bincount argmax breaks
    # ties toward the lowest code.
    cat_votes = {}
    for j in cats:
        vals = M[:, j].astype(int)[neighbors]
        cat_votes[j] = np.array([np.bincount(row).argmax() for row in vals], dtype=float)

    rng = np.random.default_rng(params.seed)
    base = rng.integers(0, n_min, size=n_syn)
    pick = neighbors[base, rng.integers(0, params.k_neighbors, size=n_syn)]
    lam = rng.random(n_syn)

    synth = np.empty((n_syn, len(schema)))
    for j in cont:
        synth[:, j] = M[base, j] + lam * (M[pick, j] - M[base, j])
    for j in circ:
        synth[:, j] = shorter_arc_interpolate(M[base, j], M[pick, j], lam)
    for j in cats:
        synth[:, j] = cat_votes[j][base]

    blank = lambda t: tuple(t) + ("",) * n_syn if t is not None else None
    origin = tuple(train.origin) if train.origin is not None else ("real",) * len(train)
    out = Dataset(
        schema=schema,
        X=np.vstack([train.X, synth]),
        y=np.concatenate([train.y, np.full(n_syn, minority, dtype=int)]),
        beach=blank(train.beach),
        dates=blank(train.dates),
        origin=origin + ("synthetic",) * n_syn,
        categories=dict(train.categories),
    )
    if with_provenance:
        return out, SmoteProvenance(min_idx[base], min_idx[pick], lam)
    return out


def random_undersample(train: Dataset, seed: int) -> Dataset:
    """Balance classes by a uniform without-replacement subsample of the majority.

    Every minority row is retained; output order is shuffled deterministically.
    """
    minority, n_min, _ = _class_split(train)
    rng = np.random.default_rng(seed)
    min_idx = np.flatnonzero(train.y == minority)
    maj_idx = np.flatnonzero(train.y != minority)
    keep_maj = rng.choice(maj_idx, size=n_min, replace=False)
    combined = np.concatenate([min_idx, keep_maj])
    out = train.subset(combined[rng.permutation(combined.size)])
    if out.origin is None:
        out = replace(out, origin=("real",) * len(out))
    return out


def build_synthetic_negative_dataset(positives: Dataset, model, seed: int) -> Dataset:
    """All real presence rows plus an equal count of generated absence rows.

    ``model`` is any fitted negative-class generator exposing
    ``sample(n, seed) -> raw feature rows`` (copula or GAN backend). Real
    negative rows never appear in the output. The combined table is shuffled
    deterministically by ``seed``.
    """
    pos_idx = np.flatnonzero(positives.y == 1)
    if pos_idx.size == 0:
        raise DataError("need at least one presence row to build a synthetic-negative dataset")
    pos = positives.subset(pos_idx)
    n = len(pos)
    synth = np.asarray(model.sample(n, seed), dtype=float)
    if synth.shape != (n, len(pos.schema)):
        raise DataError(f"generator returned shape {synth.shape}, expected {(n, len(pos.schema))}")

    blank = lambda t: tuple(t) + ("",) * n if t is not None else None
    combined = Dataset(
        schema=pos.schema,
        X=np.vstack([pos.X, synth]),
        y=np.concatenate([np.ones(n, dtype=int), np.zeros(n, dtype=int)]),
        beach=blank(pos.beach),
        dates=blank(pos.dates),
        origin=("real",) * n + ("synthetic",) * n,
        categories=dict(pos.categories),
    )
    rng = np.random.default_rng(seed)
    return combined.subset(rng.permutation(len(combined)))


@dataclass(frozen=True)
class ResamplePlan:
    """Which augmentation strategy to apply to a training split, and how."""

    strategy: str = "none"
    backend: str | None = None
    seed: int = 0
    k_neighbors: int = 5
    gan: "GanParams | None" = None  # noqa: F821 - forward ref to stinger.gan

    def __post_init__(self):
        if self.strategy not in STRATEGIES:
            raise ParameterError(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if self.strategy == "synthetic_negative":
            if self.backend not in BACKENDS:
                raise ParameterError(f"synthetic_negative requires backend in {BACKENDS}")
        elif self.backend is not None:
            raise ParameterError(f"backend is only valid for synthetic_negative, got {self.backend!r}")


def apply_resample_plan(train: Dataset, plan: ResamplePlan) -> Dataset:
    """Dispatch a :class:`ResamplePlan` onto a training split."""
    if plan.strategy == "none":
        return train
    if plan.strategy == "smote_nc":
        return smote_nc(train, SmoteParams(k_neighbors=plan.k_neighbors, seed=plan.seed))
    if plan.strategy == "undersample":
        return random_undersample(train, plan.seed)

    negatives = train.subset(np.flatnonzero(train.y == 0))
    if plan.backend == "copula":
        from .copula import fit_copula_negative_model

        model = fit_copula_negative_model(negatives, seed=plan.seed)
    else:
        from .gan import GanParams, train_tabular_gan

        params = plan.gan if plan.gan is not None else GanParams(seed=plan.seed)
        model = train_tabular_gan(negatives, params)
    return build_synthetic_negative_dataset(train, model, plan.seed)
