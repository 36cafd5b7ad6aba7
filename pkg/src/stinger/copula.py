"""Gaussian-copula generator preserving the negative-class distribution.

Continuous features keep their empirical marginals and their normal-score
correlation structure; circular features are modelled by a two-component von
Mises mixture; categorical and month features by empirical frequency tables.
This is the default (and deterministic) backend of the synthetic-negative
strategy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri
from scipy.stats import rankdata

from .circular import fit_von_mises_mixture
from .errors import DataError
from .schema import Dataset, FeatureSchema

MIN_ROWS = 30


@dataclass(frozen=True)
class CopulaNegativeModel:
    """Fitted negative-class model; immutable, safe for concurrent sampling."""

    schema: FeatureSchema
    marginals: dict  # continuous name -> sorted sample values
    circular: dict  # circular name -> VonMisesMixture
    frequencies: dict  # categorical/month name -> (values, probabilities)
    correlation: np.ndarray  # normal-score correlation of continuous features
    degenerate: frozenset  # continuous names with zero spread
    categories: dict

    def sample(self, n: int, seed) -> np.ndarray:
        """Draw ``n`` synthetic rows in raw feature order, deterministically."""
        if n < 1:
            raise DataError("need n >= 1 samples")
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        schema = self.schema
        cont = schema.continuous_indices
        out = np.empty((n, len(schema)))

        if cont:
            cov = self.correlation + 1e-10 * np.eye(len(cont))
            z = rng.standard_normal((n, len(cont))) @ np.linalg.cholesky(cov).T
            u = ndtr(z)
            for pos, j in enumerate(cont):
                name = schema.names[j]
                sorted_vals = self.marginals[name]
                if name in self.degenerate:
                    out[:, j] = sorted_vals[0]
                else:
                    # inverse empirical CDF with linear interpolation between
                    # order statistics at midpoint plotting positions
                    m = sorted_vals.size
                    grid = (np.arange(m) + 0.5) / m
                    out[:, j] = np.interp(u[:, pos], grid, sorted_vals)

        for j in schema.circular_indices:
            out[:, j] = self.circular[schema.names[j]].sample(n, rng)
        for j in schema.categorical_indices:
            values, probs = self.frequencies[schema.names[j]]
            out[:, j] = rng.choice(values, size=n, p=probs)
        return out


def normal_scores(column: np.ndarray) -> np.ndarray:
    """Rank-based transform to standard-normal scores (average ranks on ties)."""
    ranks = rankdata(column, method="average")
    return ndtri((ranks - 0.5) / column.size)


def fit_copula_negative_model(negatives: Dataset, n_mixture: int = 2, seed: int = 0) -> CopulaNegativeModel:
    """Fit the generator on real negative rows (requires >= 30 of them)."""
    if len(negatives) < MIN_ROWS:
        raise DataError(f"need at least {MIN_ROWS} negative rows to fit, got {len(negatives)}")

    schema = negatives.schema
    cont = schema.continuous_indices
    marginals, degenerate = {}, set()
    scores = []
    for j in cont:
        name = schema.names[j]
        col = negatives.X[:, j]
        marginals[name] = np.sort(col)
        if col.min() == col.max():
            degenerate.add(name)
            scores.append(np.zeros(col.size))
        else:
            scores.append(normal_scores(col))

    if cont:
        Z = np.column_stack(scores)
        with np.errstate(invalid="ignore"):
            corr = np.corrcoef(Z, rowvar=False).reshape(len(cont), len(cont))
        # a degenerate column has zero variance in scores; pin its row/col
        for pos, j in enumerate(cont):
            if schema.names[j] in degenerate:
                corr[pos, :] = corr[:, pos] = 0.0
                corr[pos, pos] = 1.0
        corr = np.nan_to_num(corr, nan=0.0)
        np.fill_diagonal(corr, 1.0)
    else:
        corr = np.zeros((0, 0))

    circular = {
        schema.names[j]: fit_von_mises_mixture(negatives.X[:, j], n_mixture, seed)
        for j in schema.circular_indices
    }

    frequencies = {}
    for j in schema.categorical_indices:
        values, counts = np.unique(negatives.X[:, j], return_counts=True)
        frequencies[schema.names[j]] = (values, counts / counts.sum())

    return CopulaNegativeModel(
        schema=schema,
        marginals=marginals,
        circular=circular,
        frequencies=frequencies,
        correlation=corr,
        degenerate=frozenset(degenerate),
        categories=dict(negatives.categories),
    )
