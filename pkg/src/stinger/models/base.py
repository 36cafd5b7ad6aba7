"""Uniform train/predict contract shared by the four classifier variants.

Every trained model owns the feature encoder it was fitted with, scores rows
with a presence probability in [0, 1], and derives hard labels from those
scores (threshold 0.5 unless the variant defines its own vote rule). Models
serialize to a versioned self-describing JSON document.
"""

from __future__ import annotations

import json

import numpy as np

from ..encoding import FeatureEncoder
from ..errors import ContractError
from ..schema import Dataset

FORMAT_TAG = "stinger-model"
FORMAT_VERSION = 1

MODEL_REGISTRY: dict = {}


def register(cls):
    MODEL_REGISTRY[cls.variant] = cls
    return cls


class TrainedModel:
    """Base for fitted classifiers: scoring, labeling, (de)serialization."""

    variant = "?"

    def __init__(self, encoder: FeatureEncoder):
        self.encoder = encoder

    def decision_scores(self, X_enc: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def predict_encoded(self, X_enc: np.ndarray):
        """(labels, scores) for encoded rows; default thresholds scores at 0.5."""
        scores = self.decision_scores(X_enc)
        return (scores >= 0.5).astype(int), scores

    def encode(self, rows) -> np.ndarray:
        if isinstance(rows, Dataset):
            return self.encoder.transform_dataset(rows)
        return self.encoder.transform(np.asarray(rows, dtype=float))

    def state_dict(self) -> dict:
        raise NotImplementedError

    @classmethod
    def from_state(cls, state: dict, encoder: FeatureEncoder) -> "TrainedModel":
        raise NotImplementedError


def predict(model: TrainedModel, rows):
    """Presence scores in [0, 1] and hard labels for rows matching the
    fit-time encoding. Returns ``(labels, scores)``; empty input gives empty
    outputs."""
    X_enc = model.encode(rows)
    if X_enc.shape[0] == 0:
        return np.empty(0, dtype=int), np.empty(0)
    return model.predict_encoded(X_enc)


def save_model(model: TrainedModel, path) -> None:
    doc = {
        "format": FORMAT_TAG,
        "version": FORMAT_VERSION,
        "variant": model.variant,
        "encoder": model.encoder.to_dict(),
        "state": model.state_dict(),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True)
        fh.write("\n")


def load_model(path) -> TrainedModel:
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc.get("format") != FORMAT_TAG:
        raise ContractError(f"{path}: not a {FORMAT_TAG} document")
    if doc.get("version") != FORMAT_VERSION:
        raise ContractError(f"{path}: unsupported format version {doc.get('version')}")
    variant = doc.get("variant")
    if variant not in MODEL_REGISTRY:
        raise ContractError(f"{path}: unknown model variant {variant!r}")
    encoder = FeatureEncoder.from_dict(doc["encoder"])
    return MODEL_REGISTRY[variant].from_state(doc["state"], encoder)


def feature_importance(model: TrainedModel, validation: Dataset | None = None, n_repeats: int = 5, seed: int = 0) -> dict:
    """Per-source-feature importance scores, normalized to sum 1.

    Tree ensembles report their internal estimates (impurity decrease for the
    forest, total split gain for boosting), aggregated from encoded columns
    back to source features. Other variants fall back to permutation
    importance over ``validation``: the drop in ranking quality when one raw
    feature column is shuffled.
    """
    native = getattr(model, "native_importance", None)
    if native is not None:
        per_column = native()
        agg = model.encoder.aggregate_by_source(per_column)
        return _normalized(agg)

    if validation is None:
        raise ContractError(f"{model.variant} needs a validation set for permutation importance")

    rng = np.random.default_rng(seed)
    _, base_scores = predict(model, validation)
    baseline = _ranking_score(validation.y, base_scores)
    out = {}
    for j, name in enumerate(validation.schema.names):
        drops = []
        for _ in range(n_repeats):
            X_perm = validation.X.copy()
            X_perm[:, j] = X_perm[rng.permutation(len(validation)), j]
            _, s = predict(model, X_perm)
            drops.append(baseline - _ranking_score(validation.y, s))
        out[name] = max(float(np.mean(drops)), 0.0)
    return _normalized(out)


def _ranking_score(y, scores):
    from ..evaluation import accuracy, confusion_matrix, roc_auc

    auc = roc_auc(y, scores)
    if auc is not None:
        return auc
    return accuracy(confusion_matrix(y, (np.asarray(scores) >= 0.5).astype(int)))


def _normalized(agg: dict) -> dict:
    total = sum(agg.values())
    if total > 0:
        return {k: v / total for k, v in agg.items()}
    return dict(agg)
