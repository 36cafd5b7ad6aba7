"""Exploratory and diagnostic computations: PCA, correlations, histograms,
seasonality counts, and delimited plot-data export.

Everything here is a pure function; exports are deterministic delimited text
with a one-line header so re-running on the same inputs is byte-identical.
"""

from __future__ import annotations

import csv
import datetime
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, DataError
from .schema import CIRCULAR, CONTINUOUS, Dataset


@dataclass(frozen=True)
class PcaModel:
    """Centered principal axes (orthonormal rows) with explained variances."""

    mean: np.ndarray
    axes: np.ndarray  # (k, d)
    explained_variance: np.ndarray  # (k,), non-increasing


def pca_fit(rows: np.ndarray, n_components: int = 2) -> PcaModel:
    """Top principal axes of the sample covariance via SVD of centered data.

    Sign convention: the largest-magnitude coordinate of every axis is made
    positive, so output is deterministic across runs and platforms.
    """
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2 or rows.shape[0] < 2:
        raise DataError("PCA needs at least 2 rows")
    n, d = rows.shape
    k = min(n_components, d)
    mean = rows.mean(axis=0)
    centered = rows - mean
    _, svals, vt = np.linalg.svd(centered, full_matrices=False)
    axes = vt[:k]
    flip = np.sign(axes[np.arange(k), np.abs(axes).argmax(axis=1)])
    axes = axes * flip[:, None]
    explained = (svals[:k] ** 2) / (n - 1)
    return PcaModel(mean=mean, axes=axes, explained_variance=explained)


def pca_transform(model: PcaModel, rows: np.ndarray) -> np.ndarray:
    rows = np.asarray(rows, dtype=float)
    if rows.ndim != 2 or rows.shape[1] != model.mean.shape[0]:
        raise ContractError(f"expected rows of width {model.mean.shape[0]}, got {rows.shape}")
    return (rows - model.mean) @ model.axes.T


def pearson(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    sx, sy = x.std(ddof=0), y.std(ddof=0)
    if sx == 0.0 or sy == 0.0:
        return float("nan")
    return float(((x - x.mean()) * (y - y.mean())).mean() / (sx * sy))


def pearson_matrix(columns: dict) -> tuple:
    """Symmetric Pearson matrix over named columns; zero-variance entries are NaN.

    Returns (names, matrix).
    """
    names = list(columns)
    if any(np.asarray(columns[n]).size < 2 for n in names):
        raise DataError("Pearson correlation needs at least 2 rows per column")
    k = len(names)
    mat = np.empty((k, k))
    for i in range(k):
        for j in range(i, k):
            r = pearson(columns[names[i]], columns[names[j]])
            if i == j and not np.isnan(r):
                r = 1.0
            mat[i, j] = mat[j, i] = r
    return names, mat


def point_biserial(binary, continuous) -> float:
    """Correlation of a 0/1 column with a continuous one; identical to Pearson
    under 0/1 coding. NaN when the binary column is single-valued."""
    binary = np.asarray(binary, dtype=float)
    if not np.isin(binary, (0.0, 1.0)).all():
        raise DataError("first column must be binary 0/1")
    if np.unique(binary).size < 2:
        return float("nan")
    return pearson(binary, continuous)


def linear_histogram(values, bins: int = 30):
    """Density histogram: (bin_centers, densities, counts). Densities integrate to 1."""
    values = np.asarray(values, dtype=float)
    counts, edges = np.histogram(values, bins=bins)
    widths = np.diff(edges)
    total = counts.sum()
    density = counts / (total * widths) if total else np.zeros_like(widths)
    centers = (edges[:-1] + edges[1:]) / 2.0
    return centers, density, counts


def circular_histogram(angles, bins: int = 16):
    """(bin_centers_deg, counts) over equal angular bins starting at 0 degrees."""
    angles = np.asarray(angles, dtype=float) % 360.0
    width = 360.0 / bins
    idx = np.minimum((angles // width).astype(int), bins - 1)
    counts = np.bincount(idx, minlength=bins)
    centers = (np.arange(bins) + 0.5) * width
    return centers, counts


def monthly_presence_counts(dataset: Dataset):
    """Presence counts per calendar month plus a per-(beach, year) table.

    The second element is a dict keyed by (beach, year) when dates and beach
    identifiers are available, else empty.
    """
    months = dataset.column("month").astype(int)
    pres = dataset.y == 1
    monthly = np.bincount(months[pres] - 1, minlength=12)

    by_beach_year = {}
    if dataset.dates is not None and dataset.beach is not None:
        for i in np.flatnonzero(pres):
            date = dataset.dates[i]
            try:
                year = datetime.date.fromisoformat(date).year
            except ValueError:
                continue
            key = (dataset.beach[i], year)
            by_beach_year[key] = by_beach_year.get(key, 0) + 1
    return monthly, by_beach_year


def _write_rows(path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def export_plot_data(kind: str, path, **inputs) -> None:
    """Write one delimited plot-data artifact.

    Kinds and their inputs:

    - ``density``: values, optional bins -> (bin_center, density, count)
    - ``circular``: angles, optional bins -> (bin_center_deg, count)
    - ``pca_scatter``: scores (n, 2), labels -> (pc1, pc2, presence)
    - ``pr_curve`` / ``roc_curve``: points -> two columns
    - ``importance``: scores mapping -> (feature, score)
    - ``pairs``: columns mapping + labels -> tidy per-row table
    """
    r = lambda v: repr(float(v))
    if kind == "density":
        centers, density, counts = linear_histogram(inputs["values"], inputs.get("bins", 30))
        _write_rows(path, ["bin_center", "density", "count"], zip(map(r, centers), map(r, density), counts))
    elif kind == "circular":
        centers, counts = circular_histogram(inputs["angles"], inputs.get("bins", 16))
        _write_rows(path, ["bin_center_deg", "count"], zip(map(r, centers), counts))
    elif kind == "pca_scatter":
        scores = np.asarray(inputs["scores"], dtype=float)
        labels = np.asarray(inputs["labels"], dtype=int)
        rows = [(r(a), r(b), int(l)) for (a, b), l in zip(scores, labels)]
        _write_rows(path, ["pc1", "pc2", "presence"], rows)
    elif kind == "pr_curve":
        _write_rows(path, ["recall", "precision"], [(r(a), r(b)) for a, b in inputs["points"]])
    elif kind == "roc_curve":
        _write_rows(path, ["fpr", "tpr"], [(r(a), r(b)) for a, b in inputs["points"]])
    elif kind == "importance":
        scores = inputs["scores"]
        _write_rows(path, ["feature", "score"], [(k, r(v)) for k, v in scores.items()])
    elif kind == "pairs":
        columns = inputs["columns"]
        labels = np.asarray(inputs["labels"], dtype=int)
        names = list(columns)
        cols = [np.asarray(columns[n], dtype=float) for n in names]
        rows = [[r(c[i]) for c in cols] + [int(labels[i])] for i in range(labels.size)]
        _write_rows(path, names + ["presence"], rows)
    else:
        raise DataError(f"unknown plot-data kind {kind!r}")


def dataset_numeric_columns(dataset: Dataset) -> dict:
    """Continuous and circular columns by name (the pair-plot inputs)."""
    out = {}
    for j in dataset.schema.indices_of_kind(CONTINUOUS, CIRCULAR):
        out[dataset.schema.names[j]] = dataset.X[:, j]
    return out
