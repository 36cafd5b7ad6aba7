"""Random forest of pruned CART trees.

Bootstrap sampling is disabled by default (every tree sees the full training
set); randomness enters only through per-split feature subsets, with each
tree's stream derived deterministically from (seed, tree index). Hard labels
come from the majority vote of the trees, probabilities from the mean of
per-tree leaf class frequencies; a tied vote maps to presence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..encoding import FeatureEncoder
from ..errors import DataError, ParameterError
from ..schema import Dataset
from .base import TrainedModel, register
from .tree import FlatTree, grow_tree, prune_ccp, tree_importance


@dataclass(frozen=True)
class ForestParams:
    n_trees: int = 150
    bootstrap: bool = False
    max_depth: int = 7
    min_samples_split: int = 10
    min_samples_leaf: int = 2
    max_leaf_nodes: int = 20
    max_features: str | int = "log2"
    ccp_alpha: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1 or self.max_depth < 1:
            raise ParameterError("n_trees and max_depth must be >= 1")
        if self.min_samples_leaf > self.min_samples_split:
            raise ParameterError("min_samples_leaf must not exceed min_samples_split")
        if self.max_leaf_nodes is not None and self.max_leaf_nodes < 2:
            raise ParameterError("max_leaf_nodes must be >= 2 (or None)")


def _resolve_max_features(spec, d: int) -> int:
    if spec is None or spec == "all":
        return d
    if spec == "log2":
        return min(d, max(1, int(np.ceil(np.log2(d)))))
    if spec == "sqrt":
        return min(d, max(1, int(np.ceil(np.sqrt(d)))))
    return min(d, max(1, int(spec)))


@register
class ForestModel(TrainedModel):
    variant = "forest"

    def __init__(self, encoder: FeatureEncoder, trees, params: ForestParams, importances: np.ndarray):
        super().__init__(encoder)
        self.trees = list(trees)
        self.params = params
        self.importances = np.asarray(importances, dtype=float)

    def decision_scores(self, X_enc: np.ndarray) -> np.ndarray:
        return np.mean([t.leaf_proba(X_enc)[:, 1] for t in self.trees], axis=0)

    def predict_encoded(self, X_enc: np.ndarray):
        """Hard labels by majority vote over trees (a tied vote is presence);
        scores remain the mean of per-tree leaf class frequencies."""
        per_tree = np.stack([t.leaf_proba(X_enc)[:, 1] for t in self.trees])
        votes = (per_tree >= 0.5).mean(axis=0)
        return (votes >= 0.5).astype(int), per_tree.mean(axis=0)

    def native_importance(self) -> np.ndarray:
        return self.importances

    def state_dict(self) -> dict:
        return {
            "trees": [t.to_dict() for t in self.trees],
            "params": self.params.__dict__,
            "importances": self.importances.tolist(),
        }

    @classmethod
    def from_state(cls, state: dict, encoder: FeatureEncoder) -> "ForestModel":
        trees = [FlatTree.from_dict(t) for t in state["trees"]]
        return cls(encoder, trees, ForestParams(**state["params"]), np.array(state["importances"]))


def train_forest(train: Dataset, params: ForestParams = ForestParams(), encoding: str = "raw") -> ForestModel:
    """Fit the forest; both classes must be present."""
    if len(np.unique(train.y)) < 2:
        raise DataError("forest training needs both classes present")

    encoder = FeatureEncoder(encoding).fit(train)
    X = encoder.transform_dataset(train)
    y = train.y
    d = X.shape[1]
    mf = _resolve_max_features(params.max_features, d)

    trees, importances = [], np.zeros(d)
    for t in range(params.n_trees):
        rng = np.random.default_rng((params.seed, t))
        if params.bootstrap:
            rows = rng.integers(0, len(y), size=len(y))
            Xt, yt = X[rows], y[rows]
        else:
            Xt, yt = X, y
        root = grow_tree(
            Xt,
            yt,
            max_depth=params.max_depth,
            min_samples_split=params.min_samples_split,
            min_samples_leaf=params.min_samples_leaf,
            max_leaf_nodes=params.max_leaf_nodes,
            max_features=mf,
            rng=rng,
        )
        root = prune_ccp(root, params.ccp_alpha, len(yt))
        importances += tree_importance(root, len(yt), d)
        trees.append(FlatTree.from_node(root))

    return ForestModel(encoder, trees, params, importances)
