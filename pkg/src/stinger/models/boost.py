"""Gradient boosting on log-odds with second-order leaf weights.

Each round fits a shallow regression tree to the gradient/hessian of the
weighted logistic loss (presence rows carry ``scale_pos_weight``), leaf
values are -G/(H + lambda), and the model advances by ``learning_rate``
times the tree output. The initial score is the weighted log-odds of the
training labels and the weighted training log-loss is recorded per round.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..encoding import FeatureEncoder
from ..errors import DataError, ParameterError
from ..schema import Dataset
from ._net import sigmoid
from .base import TrainedModel, register


@dataclass(frozen=True)
class BoostParams:
    learning_rate: float = 0.1
    n_rounds: int = 100
    max_depth: int = 2
    scale_pos_weight: float = 3.0
    reg_lambda: float = 1.0
    min_child_weight: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.n_rounds < 1 or self.max_depth < 1:
            raise ParameterError("n_rounds and max_depth must be >= 1")
        if self.scale_pos_weight <= 0:
            raise ParameterError("scale_pos_weight must be > 0")


class _BoostTree:
    """Depth-limited regression tree on (gradient, hessian) statistics."""

    __slots__ = ("feature", "threshold", "left", "right", "value")

    def __init__(self):
        self.feature = -1
        self.threshold = 0.0
        self.left = None
        self.right = None
        self.value = 0.0

    def predict(self, X: np.ndarray) -> np.ndarray:
        out = np.empty(X.shape[0])
        stack = [(self, np.arange(X.shape[0]))]
        while stack:
            node, idx = stack.pop()
            if node.feature < 0:
                out[idx] = node.value
                continue
            mask = X[idx, node.feature] <= node.threshold
            stack.append((node.left, idx[mask]))
            stack.append((node.right, idx[~mask]))
        return out

    def to_dict(self) -> dict:
        if self.feature < 0:
            return {"value": self.value}
        return {
            "feature": self.feature,
            "threshold": self.threshold,
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "_BoostTree":
        node = cls()
        if "feature" in d:
            node.feature = int(d["feature"])
            node.threshold = float(d["threshold"])
            node.left = cls.from_dict(d["left"])
            node.right = cls.from_dict(d["right"])
        else:
            node.value = float(d["value"])
        return node


def _best_split_gh(X, g, h, idx, reg_lambda, min_child_weight):
    """Highest-gain exact split; gain uses the usual second-order formula."""
    G, H = g[idx].sum(), h[idx].sum()
    parent = G * G / (H + reg_lambda)
    best_gain, best_feature, best_threshold = 0.0, -1, np.nan
    for f in range(X.shape[1]):
        x = X[idx, f]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        valid = xs[1:] > xs[:-1]
        if not valid.any():
            continue
        GL = np.cumsum(g[idx][order])[:-1]
        HL = np.cumsum(h[idx][order])[:-1]
        GR, HR = G - GL, H - HL
        gain = 0.5 * (GL * GL / (HL + reg_lambda) + GR * GR / (HR + reg_lambda) - parent)
        gain[~valid | (HL < min_child_weight) | (HR < min_child_weight)] = -np.inf
        i = int(gain.argmax())
        if gain[i] > best_gain + 1e-15:
            best_gain = float(gain[i])
            best_feature = int(f)
            best_threshold = float((xs[i] + xs[i + 1]) / 2.0)
    return best_gain, best_feature, best_threshold


def _grow_gh_tree(X, g, h, idx, depth, params: BoostParams, gain_accumulator: np.ndarray) -> _BoostTree:
    node = _BoostTree()
    G, H = g[idx].sum(), h[idx].sum()
    if depth < params.max_depth and idx.size >= 2:
        gain, f, thr = _best_split_gh(X, g, h, idx, params.reg_lambda, params.min_child_weight)
        if f >= 0:
            gain_accumulator[f] += gain
            node.feature, node.threshold = f, thr
            mask = X[idx, f] <= thr
            node.left = _grow_gh_tree(X, g, h, idx[mask], depth + 1, params, gain_accumulator)
            node.right = _grow_gh_tree(X, g, h, idx[~mask], depth + 1, params, gain_accumulator)
            return node
    node.value = -G / (H + params.reg_lambda)
    return node


@register
class BoostModel(TrainedModel):
    variant = "boost"

    def __init__(self, encoder, trees, base_score, params: BoostParams, loss_curve, gains):
        super().__init__(encoder)
        self.trees = list(trees)
        self.base_score = float(base_score)
        self.params = params
        self.loss_curve = list(loss_curve)
        self.gains = np.asarray(gains, dtype=float)

    def raw_margin(self, X_enc: np.ndarray) -> np.ndarray:
        F = np.full(X_enc.shape[0], self.base_score)
        for tree in self.trees:
            F += self.params.learning_rate * tree.predict(X_enc)
        return F

    def decision_scores(self, X_enc: np.ndarray) -> np.ndarray:
        return sigmoid(self.raw_margin(X_enc))

    def native_importance(self) -> np.ndarray:
        return self.gains

    def state_dict(self) -> dict:
        return {
            "trees": [t.to_dict() for t in self.trees],
            "base_score": self.base_score,
            "params": self.params.__dict__,
            "loss_curve": self.loss_curve,
            "gains": self.gains.tolist(),
        }

    @classmethod
    def from_state(cls, state: dict, encoder) -> "BoostModel":
        trees = [_BoostTree.from_dict(t) for t in state["trees"]]
        return cls(encoder, trees, state["base_score"], BoostParams(**state["params"]), state["loss_curve"], state["gains"])


def weighted_logloss(y, margins, weights) -> float:
    p = np.clip(sigmoid(margins), 1e-15, 1.0 - 1e-15)
    ce = -(y * np.log(p) + (1 - y) * np.log(1.0 - p))
    return float((weights * ce).sum() / weights.sum())


def train_boost(train: Dataset, params: BoostParams = BoostParams(), encoding: str = "raw") -> BoostModel:
    """Fit the boosted ensemble; both classes must be present."""
    if len(np.unique(train.y)) < 2:
        raise DataError("boosting needs both classes present")

    encoder = FeatureEncoder(encoding).fit(train)
    X = encoder.transform_dataset(train)
    y = train.y.astype(float)
    w = np.where(y == 1.0, params.scale_pos_weight, 1.0)

    base_score = float(np.log(w[y == 1.0].sum() / w[y == 0.0].sum()))
    F = np.full(len(y), base_score)
    idx_all = np.arange(len(y))

    trees, loss_curve = [], []
    gains = np.zeros(X.shape[1])
    for _ in range(params.n_rounds):
        p = sigmoid(F)
        g = w * (p - y)
        h = w * p * (1.0 - p)
        tree = _grow_gh_tree(X, g, h, idx_all, 0, params, gains)
        F = F + params.learning_rate * tree.predict(X)
        trees.append(tree)
        loss_curve.append(weighted_logloss(y, F, w))

    return BoostModel(encoder, trees, base_score, params, loss_curve, gains)
