"""Figure rendering for the report path.

Every figure is drawn from an already-exported delimited artifact and saved
as a PNG next to it, so the figures never carry information the CSVs do not.
PNG metadata is stripped to keep report trees byte-reproducible.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

_SAVE_KW = {"dpi": 120, "metadata": {"Software": None}}


def _read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = list(reader)
    return header, rows


def _save(fig, png_path):
    fig.tight_layout()
    fig.savefig(png_path, **_SAVE_KW)
    plt.close(fig)


def render_density(csv_path, png_path, title="") -> None:
    _, rows = _read_csv(csv_path)
    centers = np.array([float(r[0]) for r in rows])
    density = np.array([float(r[1]) for r in rows])
    fig, ax = plt.subplots(figsize=(5, 3.2))
    width = centers[1] - centers[0] if centers.size > 1 else 1.0
    ax.bar(centers, density, width=width * 0.95, color="#4878a8")
    ax.set_xlabel(title or "value")
    ax.set_ylabel("density")
    _save(fig, png_path)


def render_circular(csv_path, png_path, title="") -> None:
    _, rows = _read_csv(csv_path)
    centers = np.deg2rad([float(r[0]) for r in rows])
    counts = np.array([float(r[1]) for r in rows])
    fig = plt.figure(figsize=(4.2, 4.2))
    ax = fig.add_subplot(projection="polar")
    ax.set_theta_zero_location("N")
    ax.set_theta_direction(-1)
    width = 2 * np.pi / len(rows)
    ax.bar(centers, counts, width=width * 0.95, color="#4878a8", edgecolor="white")
    ax.set_title(title or Path(csv_path).stem)
    _save(fig, png_path)


def render_pca_scatter(csv_path, png_path, title="") -> None:
    _, rows = _read_csv(csv_path)
    pc1 = np.array([float(r[0]) for r in rows])
    pc2 = np.array([float(r[1]) for r in rows])
    labels = np.array([int(r[2]) for r in rows])
    fig, ax = plt.subplots(figsize=(5, 4))
    for value, color, name in ((0, "#4878a8", "absence"), (1, "#c0504d", "presence")):
        mask = labels == value
        ax.scatter(pc1[mask], pc2[mask], s=8, alpha=0.6, color=color, label=name)
    ax.set_xlabel("PC1")
    ax.set_ylabel("PC2")
    ax.legend(loc="best")
    ax.set_title(title or Path(csv_path).stem)
    _save(fig, png_path)


def render_curve(csv_path, png_path, title="") -> None:
    header, rows = _read_csv(csv_path)
    xs = np.array([float(r[0]) for r in rows])
    ys = np.array([float(r[1]) for r in rows])
    fig, ax = plt.subplots(figsize=(4.5, 3.5))
    ax.plot(xs, ys, marker=".", markersize=3, color="#4878a8")
    ax.set_xlabel(header[0])
    ax.set_ylabel(header[1])
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(-0.02, 1.02)
    ax.set_title(title or Path(csv_path).stem)
    _save(fig, png_path)


def render_importance(csv_path, png_path, title="") -> None:
    _, rows = _read_csv(csv_path)
    names = [r[0] for r in rows]
    scores = [float(r[1]) for r in rows]
    order = np.argsort(scores)
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.barh([names[i] for i in order], [scores[i] for i in order], color="#4878a8")
    ax.set_xlabel("importance")
    ax.set_title(title or Path(csv_path).stem)
    _save(fig, png_path)


def render_monthly(csv_path, png_path, title="") -> None:
    _, rows = _read_csv(csv_path)
    months = [r[0] for r in rows]
    counts = [float(r[1]) for r in rows]
    fig, ax = plt.subplots(figsize=(5.5, 3.2))
    ax.bar(months, counts, color="#4878a8")
    ax.set_ylabel("presence count")
    ax.tick_params(axis="x", rotation=45)
    _save(fig, png_path)


def render_pairs(csv_path, png_path) -> None:
    header, rows = _read_csv(csv_path)
    data = np.array([[float(v) for v in r] for r in rows])
    names = header[:-1]
    labels = data[:, -1].astype(int)
    k = len(names)
    fig, axes = plt.subplots(k, k, figsize=(2.0 * k, 2.0 * k))
    for i in range(k):
        for j in range(k):
            ax = axes[i, j] if k > 1 else axes
            if i == j:
                for value, color in ((0, "#4878a8"), (1, "#c0504d")):
                    ax.hist(data[labels == value, j], bins=20, alpha=0.6, color=color)
            else:
                for value, color in ((0, "#4878a8"), (1, "#c0504d")):
                    mask = labels == value
                    ax.scatter(data[mask, j], data[mask, i], s=4, alpha=0.5, color=color)
            if i == k - 1:
                ax.set_xlabel(names[j], fontsize=8)
            if j == 0:
                ax.set_ylabel(names[i], fontsize=8)
            ax.tick_params(labelsize=6)
    _save(fig, png_path)


_RENDERERS = {
    "density": render_density,
    "circular": render_circular,
    "pca_scatter": render_pca_scatter,
    "pr_curve": render_curve,
    "roc_curve": render_curve,
    "importance": render_importance,
    "monthly": render_monthly,
    "pairs": render_pairs,
}


def render_report_figures(directory) -> list:
    """Render a PNG beside every recognized delimited artifact in a directory.

    Artifact kind is taken from the file-name prefix up to the first ``__``
    (or the whole stem). Returns the list of written figure paths.
    """
    directory = Path(directory)
    written = []
    for csv_path in sorted(directory.glob("*.csv")):
        kind = csv_path.stem.split("__")[0]
        renderer = _RENDERERS.get(kind)
        if renderer is None:
            continue
        png_path = csv_path.with_suffix(".png")
        renderer(csv_path, png_path)
        written.append(png_path)
    return written
