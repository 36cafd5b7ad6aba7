"""Single-hidden-layer perceptron classifier trained with Adam.

Architecture: input -> 100 ReLU units -> 2-way softmax, cross-entropy loss
with an L2 weight penalty. The training loss is recorded per epoch and the
whole procedure is a deterministic function of (data, params, seed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..encoding import FeatureEncoder
from ..errors import DataError, ParameterError, TrainingDivergenceError
from ..schema import Dataset
from ._net import Adam, DenseNet, softmax
from .base import TrainedModel, register


@dataclass(frozen=True)
class MlpParams:
    hidden_units: int = 100
    max_epochs: int = 400
    learning_rate: float = 0.1
    l2_alpha: float = 1e-4
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self):
        if self.hidden_units < 1 or self.batch_size < 1 or self.max_epochs < 0:
            raise ParameterError("hidden_units/batch_size must be positive, max_epochs >= 0")
        if self.learning_rate <= 0:
            raise ParameterError("learning_rate must be > 0")


def batch_loss_and_grads(net: DenseNet, X: np.ndarray, Y: np.ndarray, l2_alpha: float):
    """Cross-entropy + L2 objective and its analytic gradients on one batch.

    objective = mean_i CE(softmax(f(x_i)), y_i) + (alpha/2) * sum ||W||^2
    (biases are not penalized). Returns (loss, grads) with grads ordered like
    ``net.params``.
    """
    n = X.shape[0]
    logits, acts = net.forward(X)
    probs = softmax(logits)
    ce = -np.log(np.clip((probs * Y).sum(axis=1), 1e-300, None)).mean()
    loss = ce + 0.5 * l2_alpha * sum(float((W * W).sum()) for W in net.weights)

    dlogits = (probs - Y) / n
    gW, gb, _ = net.backward(acts, dlogits)
    gW = [g + l2_alpha * W for g, W in zip(gW, net.weights)]
    return loss, gW + gb


@register
class MlpModel(TrainedModel):
    variant = "mlp"

    def __init__(self, encoder: FeatureEncoder, net: DenseNet, params: MlpParams, loss_curve):
        super().__init__(encoder)
        self.net = net
        self.params = params
        self.loss_curve = list(loss_curve)

    def probabilities(self, X_enc: np.ndarray) -> np.ndarray:
        logits, _ = self.net.forward(X_enc)
        return softmax(logits)

    def decision_scores(self, X_enc: np.ndarray) -> np.ndarray:
        return self.probabilities(X_enc)[:, 1]

    def state_dict(self) -> dict:
        return {
            "sizes": self.net.sizes,
            "weights": [W.tolist() for W in self.net.weights],
            "biases": [b.tolist() for b in self.net.biases],
            "params": self.params.__dict__,
            "loss_curve": self.loss_curve,
        }

    @classmethod
    def from_state(cls, state: dict, encoder: FeatureEncoder) -> "MlpModel":
        net = DenseNet.__new__(DenseNet)
        net.sizes = list(state["sizes"])
        net.weights = [np.array(W) for W in state["weights"]]
        net.biases = [np.array(b) for b in state["biases"]]
        return cls(encoder, net, MlpParams(**state["params"]), state["loss_curve"])


def train_mlp(train: Dataset, params: MlpParams = MlpParams(), encoding: str = "raw") -> MlpModel:
    """Fit the perceptron on a training split.

    Raises :class:`DataError` unless there are >= 2 rows with both classes
    present, and :class:`TrainingDivergenceError` (with the epoch index) if
    the loss goes non-finite.
    """
    if len(train) < 2 or len(np.unique(train.y)) < 2:
        raise DataError("MLP training needs >= 2 rows and both classes present")

    encoder = FeatureEncoder(encoding).fit(train)
    X = encoder.transform_dataset(train)
    Y = np.zeros((len(train), 2))
    Y[np.arange(len(train)), train.y] = 1.0

    rng = np.random.default_rng(params.seed)
    net = DenseNet([X.shape[1], params.hidden_units, 2], rng)
    optimizer = Adam(net.params, lr=params.learning_rate)

    loss_curve = []
    n = X.shape[0]
    for epoch in range(params.max_epochs):
        order = rng.permutation(n)
        batch_losses = []
        for start in range(0, n, params.batch_size):
            sel = order[start : start + params.batch_size]
            loss, grads = batch_loss_and_grads(net, X[sel], Y[sel], params.l2_alpha)
            if not np.isfinite(loss):
                raise TrainingDivergenceError(f"non-finite training loss at epoch {epoch}", epoch=epoch)
            optimizer.step(net.params, grads)
            batch_losses.append(loss)
        loss_curve.append(float(np.mean(batch_losses)))

    return MlpModel(encoder, net, params, loss_curve)
