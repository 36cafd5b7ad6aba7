"""Native classifier implementations behind a uniform train/predict contract."""

from .base import feature_importance, load_model, predict, save_model
from .boost import BoostModel, BoostParams, train_boost
from .forest import ForestModel, ForestParams, train_forest
from .mlp import MlpModel, MlpParams, train_mlp
from .ocsvm import OcsvmModel, OcsvmParams, train_ocsvm

TRAINERS = {
    "mlp": (train_mlp, MlpParams),
    "forest": (train_forest, ForestParams),
    "boost": (train_boost, BoostParams),
    "ocsvm": (train_ocsvm, OcsvmParams),
}

__all__ = [
    "BoostModel",
    "BoostParams",
    "ForestModel",
    "ForestParams",
    "MlpModel",
    "MlpParams",
    "OcsvmModel",
    "OcsvmParams",
    "TRAINERS",
    "feature_importance",
    "load_model",
    "predict",
    "save_model",
    "train_boost",
    "train_forest",
    "train_mlp",
    "train_ocsvm",
]
