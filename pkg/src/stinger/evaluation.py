"""Imbalance-aware scoring: confusion counts, per-class metrics, curves,
and multi-run aggregation.

Zero-denominator precision/recall/F1 return 0 by convention so that a model
predicting no positives reports 0.000 rather than blowing up; AUC alone is
``None`` (undefined) when the evaluated set contains a single class.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import DataError

CLASS_NAMES = {0: "Absence", 1: "Presence"}


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn

    def as_dict(self) -> dict:
        return {"tp": self.tp, "tn": self.tn, "fp": self.fp, "fn": self.fn}


def confusion_matrix(actual, predicted) -> ConfusionMatrix:
    actual = np.asarray(actual, dtype=int)
    predicted = np.asarray(predicted, dtype=int)
    if actual.shape != predicted.shape:
        raise DataError(f"length mismatch: {actual.shape} actual vs {predicted.shape} predicted")
    if actual.size and (not np.isin(actual, (0, 1)).all() or not np.isin(predicted, (0, 1)).all()):
        raise DataError("labels must be 0 or 1")
    return ConfusionMatrix(
        tp=int(((actual == 1) & (predicted == 1)).sum()),
        tn=int(((actual == 0) & (predicted == 0)).sum()),
        fp=int(((actual == 0) & (predicted == 1)).sum()),
        fn=int(((actual == 1) & (predicted == 0)).sum()),
    )


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def precision(cm: ConfusionMatrix) -> float:
    return _ratio(cm.tp, cm.tp + cm.fp)


def recall(cm: ConfusionMatrix) -> float:
    return _ratio(cm.tp, cm.tp + cm.fn)


def f1(cm: ConfusionMatrix) -> float:
    p, r = precision(cm), recall(cm)
    return _ratio2(2.0 * p * r, p + r)


def accuracy(cm: ConfusionMatrix) -> float:
    return _ratio(cm.tp + cm.tn, cm.total)


def _ratio2(num: float, den: float) -> float:
    return num / den if den else 0.0


def _flip(cm: ConfusionMatrix) -> ConfusionMatrix:
    """The same counts viewed with class 0 as the positive class."""
    return ConfusionMatrix(tp=cm.tn, tn=cm.tp, fp=cm.fn, fn=cm.fp)


@dataclass(frozen=True)
class ClassMetrics:
    """Per-class precision/recall/F1 with supports, plus overall accuracy."""

    per_class: dict  # class label -> {"precision","recall","f1","support"}
    accuracy: float
    confusion: ConfusionMatrix

    def as_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "confusion": self.confusion.as_dict(),
            "classes": {CLASS_NAMES[c]: dict(m) for c, m in self.per_class.items()},
        }


def class_metrics(actual, predicted) -> ClassMetrics:
    cm = confusion_matrix(actual, predicted)
    views = {1: cm, 0: _flip(cm)}
    per_class = {
        c: {
            "precision": precision(v),
            "recall": recall(v),
            "f1": f1(v),
            "support": v.tp + v.fn,
        }
        for c, v in views.items()
    }
    return ClassMetrics(per_class=per_class, accuracy=accuracy(cm), confusion=cm)


def roc_auc(actual, scores):
    """Rank-statistic AUC (ties get half credit); None when a class is absent."""
    actual = np.asarray(actual, dtype=int)
    scores = np.asarray(scores, dtype=float)
    if actual.shape != scores.shape:
        raise DataError("labels and scores must have equal length")
    if not np.isfinite(scores).all():
        raise DataError("scores must be finite")
    n_pos = int((actual == 1).sum())
    n_neg = int((actual == 0).sum())
    if n_pos == 0 or n_neg == 0:
        return None
    ranks = rankdata(scores, method="average")
    return float((ranks[actual == 1].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg))


def roc_curve(actual, scores):
    """(fpr, tpr) points over all distinct-score thresholds, endpoints included."""
    actual = np.asarray(actual, dtype=int)
    scores = np.asarray(scores, dtype=float)
    order = np.argsort(-scores, kind="stable")
    ys = actual[order]
    ss = scores[order]
    n_pos = max(int((actual == 1).sum()), 1)
    n_neg = max(int((actual == 0).sum()), 1)
    tp = np.cumsum(ys)
    fp = np.cumsum(1 - ys)
    last = np.r_[ss[1:] != ss[:-1], True]
    points = [(0.0, 0.0)] + [(fp[i] / n_neg, tp[i] / n_pos) for i in np.flatnonzero(last)]
    return points


def pr_curve(actual, scores):
    """(recall, precision) points at every distinct score threshold,
    sorted by recall ascending. Requires both classes present."""
    actual = np.asarray(actual, dtype=int)
    scores = np.asarray(scores, dtype=float)
    if (actual == 1).sum() == 0 or (actual == 0).sum() == 0:
        raise DataError("precision-recall curve requires both classes present")
    order = np.argsort(-scores, kind="stable")
    ys = actual[order]
    ss = scores[order]
    tp = np.cumsum(ys)
    predicted_pos = np.arange(1, ys.size + 1)
    n_pos = tp[-1]
    last = np.r_[ss[1:] != ss[:-1], True]  # last row of each score group
    idx = np.flatnonzero(last)
    points = [(tp[i] / n_pos, tp[i] / predicted_pos[i]) for i in idx]
    return sorted(points)


def average_precision(actual, scores) -> float:
    """Step integral of the precision-recall curve."""
    points = pr_curve(actual, scores)
    ap = 0.0
    prev_recall = 0.0
    for r, p in points:
        ap += (r - prev_recall) * p
        prev_recall = r
    return ap


@dataclass(frozen=True)
class RunAggregate:
    """Per-metric mean and sample SD (ddof=1, 0 for a single run) over runs."""

    means: dict
    sds: dict
    n_runs: int

    def formatted(self, key: str, digits: int = 3) -> str:
        mean, sd = self.means[key], self.sds[key]
        if mean is None:
            return "nan (nan)"
        return f"{mean:.{digits}f} ({sd:.{digits}f})"


def aggregate_runs(metric_dicts) -> RunAggregate:
    """Aggregate a sequence of flat {metric: value} mappings.

    ``None`` values (undefined AUC) propagate: a metric that is undefined in
    any run aggregates to mean/SD None, mirroring how a single-class
    evaluation is reported.
    """
    metric_dicts = list(metric_dicts)
    if not metric_dicts:
        raise DataError("need at least one run to aggregate")
    keys = metric_dicts[0].keys()
    means, sds = {}, {}
    for key in keys:
        values = [m[key] for m in metric_dicts]
        if any(v is None for v in values):
            means[key], sds[key] = None, None
            continue
        arr = np.asarray(values, dtype=float)
        means[key] = float(arr.mean())
        sds[key] = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return RunAggregate(means=means, sds=sds, n_runs=len(metric_dicts))
