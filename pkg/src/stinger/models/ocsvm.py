"""One-class SVM, hyperplane formulation with RBF kernel.

Solves  min 1/2 a' K a   s.t.  sum(a) = 1,  0 <= a_i <= 1/(nu n)
by pairwise (SMO-style) updates on the most violating pair until the KKT gap
falls below the tolerance. The decision value of a row is
f(x) = sum_i a_i K(x_i, x) - rho; f >= 0 marks an inlier, i.e. presence.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from ..encoding import FeatureEncoder
from ..errors import ConvergenceWarning, DataError, ParameterError
from ..schema import Dataset
from ._net import sigmoid
from .base import TrainedModel, register

_BOUND_EPS = 1e-12
# absolute slack on the inlier rule f >= 0, absorbing summation-order noise
# for rows sitting exactly on the separating surface
_DECISION_EPS = 1e-9


@dataclass(frozen=True)
class OcsvmParams:
    nu: float = 0.5
    gamma: float | str = "auto"  # "auto" = 1/d
    tolerance: float = 1e-4
    max_iterations: int = 10000

    def __post_init__(self):
        if not 0.0 < self.nu <= 1.0:
            raise ParameterError("nu must be in (0, 1]")
        if self.gamma != "auto" and self.gamma <= 0:
            raise ParameterError("gamma must be positive or 'auto'")


def rbf_kernel(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    d2 = np.maximum(
        (A * A).sum(axis=1)[:, None] + (B * B).sum(axis=1)[None, :] - 2.0 * (A @ B.T), 0.0
    )
    return np.exp(-gamma * d2)


@register
class OcsvmModel(TrainedModel):
    variant = "ocsvm"

    def __init__(self, encoder, support_vectors, alphas, rho, gamma, params: OcsvmParams, converged: bool):
        super().__init__(encoder)
        self.support_vectors = np.asarray(support_vectors, dtype=float)
        self.alphas = np.asarray(alphas, dtype=float)
        self.rho = float(rho)
        self.gamma = float(gamma)
        self.params = params
        self.converged = converged

    def decision_values(self, X_enc: np.ndarray) -> np.ndarray:
        K = rbf_kernel(X_enc, self.support_vectors, self.gamma)
        return K @ self.alphas - self.rho

    def decision_scores(self, X_enc: np.ndarray) -> np.ndarray:
        return sigmoid(self.decision_values(X_enc))

    def predict_encoded(self, X_enc: np.ndarray):
        f = self.decision_values(X_enc)
        return (f >= -_DECISION_EPS).astype(int), sigmoid(f)

    def state_dict(self) -> dict:
        return {
            "support_vectors": self.support_vectors.tolist(),
            "alphas": self.alphas.tolist(),
            "rho": self.rho,
            "gamma": self.gamma,
            "params": self.params.__dict__,
            "converged": self.converged,
        }

    @classmethod
    def from_state(cls, state: dict, encoder) -> "OcsvmModel":
        return cls(
            encoder,
            np.array(state["support_vectors"]),
            np.array(state["alphas"]),
            state["rho"],
            state["gamma"],
            OcsvmParams(**state["params"]),
            state["converged"],
        )


def train_ocsvm(positives: Dataset, params: OcsvmParams = OcsvmParams(), encoding: str = "raw") -> OcsvmModel:
    """Fit on presence rows only; absence rows in the input are ignored.

    Emits :class:`ConvergenceWarning` (and still returns the model) when the
    KKT gap is not closed within ``max_iterations`` pair updates.
    """
    keep = np.flatnonzero(positives.y == 1) if (positives.y == 0).any() else np.arange(len(positives))
    if keep.size < 2:
        raise DataError("one-class SVM needs at least 2 presence rows")
    pos = positives.subset(keep)

    encoder = FeatureEncoder(encoding).fit(pos)
    X = encoder.transform_dataset(pos)
    n, d = X.shape
    gamma = 1.0 / d if params.gamma == "auto" else float(params.gamma)
    C = 1.0 / (params.nu * n)

    K = rbf_kernel(X, X, gamma)
    alpha = np.zeros(n)
    n_full = int(np.floor(params.nu * n))
    alpha[:n_full] = C
    if n_full < n:
        alpha[n_full] = 1.0 - n_full * C
    O = K @ alpha  # gradient of the dual objective

    converged = False
    for _ in range(params.max_iterations):
        can_shrink = alpha > _BOUND_EPS
        can_grow = alpha < C - _BOUND_EPS
        i = int(np.flatnonzero(can_shrink)[O[can_shrink].argmax()])
        j = int(np.flatnonzero(can_grow)[O[can_grow].argmin()])
        gap = O[i] - O[j]
        if gap < params.tolerance:
            converged = True
            break
        eta = max(K[i, i] + K[j, j] - 2.0 * K[i, j], 1e-12)
        delta = min(gap / eta, alpha[i], C - alpha[j])
        alpha[i] -= delta
        alpha[j] += delta
        O += delta * (K[:, j] - K[:, i])

    if not converged:
        warnings.warn(
            f"one-class SVM stopped after {params.max_iterations} updates with KKT gap above {params.tolerance}",
            ConvergenceWarning,
        )

    # recompute the decision sums through the same support-vector kernel path
    # used at predict time, so boundary rows get float-identical values
    sv = alpha > _BOUND_EPS
    O_ref = rbf_kernel(X, X[sv], gamma) @ alpha[sv]
    free = sv & (alpha < C - _BOUND_EPS)
    if free.any():
        rho = float(O_ref[free].mean())
    else:
        upper = O_ref[~sv].min() if (~sv).any() else O_ref.max()
        lower = O_ref[alpha >= C - _BOUND_EPS].max() if (alpha >= C - _BOUND_EPS).any() else O_ref.min()
        rho = float((upper + lower) / 2.0)

    return OcsvmModel(encoder, X[sv], alpha[sv], rho, gamma, params, converged)
