"""Small fully connected tabular GAN for the synthetic-negative strategy.

Generator and discriminator are dense ReLU stacks trained adversarially with
the standard minimax cross-entropy objective (non-saturating generator loss).
Continuous features are standardized, circular ones ride as (sin, cos) pairs,
and categorical/month features are one-hot with an argmax decode at sampling
time. Training is a deterministic function of (data, params).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DataError, ParameterError, TrainingDivergenceError
from .models._net import Adam, DenseNet, sigmoid
from .schema import Dataset, FeatureSchema

RECOMMENDED_ROWS = 100


@dataclass(frozen=True)
class GanParams:
    latent_dim: int = 16
    hidden: tuple = (64, 64)
    epochs: int = 300
    batch_size: int = 64
    learning_rate: float = 2e-4
    seed: int = 0

    def __post_init__(self):
        if min(self.latent_dim, self.epochs, self.batch_size, *self.hidden) < 1:
            raise ParameterError("all GAN size/count parameters must be positive")
        if self.learning_rate <= 0:
            raise ParameterError("learning_rate must be > 0")


class _GanCodec:
    """Encode raw rows to the GAN's training space and back."""

    def __init__(self, dataset: Dataset):
        self.schema = dataset.schema
        self.cont = self.schema.continuous_indices
        self.circ = self.schema.circular_indices
        self.cats = self.schema.categorical_indices
        self.stats = {}
        for j in self.cont:
            col = dataset.X[:, j]
            sd = col.std(ddof=0)
            self.stats[j] = (float(col.mean()), float(sd) if sd > 0 else 1.0)
        self.levels = {}
        for j in self.cats:
            self.levels[j] = np.unique(dataset.X[:, j])
        self.width = len(self.cont) + 2 * len(self.circ) + sum(len(v) for v in self.levels.values())

    def encode(self, X: np.ndarray) -> np.ndarray:
        blocks = []
        for j in self.cont:
            mean, sd = self.stats[j]
            blocks.append(((X[:, j] - mean) / sd)[:, None])
        for j in self.circ:
            th = np.deg2rad(X[:, j])
            blocks.append(np.column_stack([np.sin(th), np.cos(th)]))
        for j in self.cats:
            levels = self.levels[j]
            onehot = (X[:, j][:, None] == levels[None, :]).astype(float)
            blocks.append(onehot)
        return np.hstack(blocks)

    def decode(self, Z: np.ndarray) -> np.ndarray:
        out = np.empty((Z.shape[0], len(self.schema)))
        pos = 0
        for j in self.cont:
            mean, sd = self.stats[j]
            out[:, j] = Z[:, pos] * sd + mean
            pos += 1
        for j in self.circ:
            out[:, j] = np.rad2deg(np.arctan2(Z[:, pos], Z[:, pos + 1])) % 360.0
            pos += 2
        for j in self.cats:
            levels = self.levels[j]
            out[:, j] = levels[Z[:, pos : pos + len(levels)].argmax(axis=1)]
            pos += len(levels)
        return out


class TabularGanGenerator:
    """Fitted generator exposing ``sample(n, seed) -> raw feature rows``."""

    def __init__(self, net: DenseNet, codec: _GanCodec, params: GanParams, loss_curve):
        self.net = net
        self.codec = codec
        self.params = params
        self.loss_curve = list(loss_curve)

    @property
    def schema(self) -> FeatureSchema:
        return self.codec.schema

    def sample(self, n: int, seed) -> np.ndarray:
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        z = rng.standard_normal((n, self.params.latent_dim))
        raw, _ = self.net.forward(z)
        return self.codec.decode(raw)


def train_tabular_gan(negatives: Dataset, params: GanParams = GanParams()) -> TabularGanGenerator:
    """Adversarially fit the generator on real negative rows.

    Warns below the recommended row count and raises
    :class:`TrainingDivergenceError` (with the epoch) on a non-finite loss.
    """
    if len(negatives) < 2:
        raise DataError("GAN training needs at least 2 rows")
    if len(negatives) < RECOMMENDED_ROWS:
        warnings.warn(f"training a GAN on only {len(negatives)} rows; {RECOMMENDED_ROWS}+ recommended")

    codec = _GanCodec(negatives)
    real = codec.encode(negatives.X)
    n = real.shape[0]

    rng = np.random.default_rng(params.seed)
    gen = DenseNet([params.latent_dim, *params.hidden, codec.width], rng)
    disc = DenseNet([codec.width, *params.hidden, 1], rng)
    opt_g = Adam(gen.params, lr=params.learning_rate)
    opt_d = Adam(disc.params, lr=params.learning_rate)

    loss_curve = []
    for epoch in range(params.epochs):
        order = rng.permutation(n)
        d_losses, g_losses = [], []
        for start in range(0, n, params.batch_size):
            x_real = real[order[start : start + params.batch_size]]
            b = x_real.shape[0]

            # discriminator step: real batch labelled 1, generated batch 0
            z = rng.standard_normal((b, params.latent_dim))
            x_fake, _ = gen.forward(z)
            logits_r, acts_r = disc.forward(x_real)
            logits_f, acts_f = disc.forward(x_fake)
            p_r, p_f = sigmoid(logits_r[:, 0]), sigmoid(logits_f[:, 0])
            d_loss = float(-np.log(np.clip(p_r, 1e-12, None)).mean() - np.log(np.clip(1.0 - p_f, 1e-12, None)).mean())
            gWr, gbr, _ = disc.backward(acts_r, ((p_r - 1.0) / b)[:, None])
            gWf, gbf, _ = disc.backward(acts_f, (p_f / b)[:, None])
            opt_d.step(disc.params, [a + c for a, c in zip(gWr + gbr, gWf + gbf)])

            # generator step: non-saturating loss on fresh noise
            z = rng.standard_normal((b, params.latent_dim))
            x_fake, acts_g = gen.forward(z)
            logits_f, acts_f = disc.forward(x_fake)
            p_f = sigmoid(logits_f[:, 0])
            g_loss = float(-np.log(np.clip(p_f, 1e-12, None)).mean())
            _, _, d_input = disc.backward(acts_f, ((p_f - 1.0) / b)[:, None])
            gWg, gbg, _ = gen.backward(acts_g, d_input)
            opt_g.step(gen.params, gWg + gbg)

            if not (np.isfinite(d_loss) and np.isfinite(g_loss)):
                raise TrainingDivergenceError(f"non-finite GAN loss at epoch {epoch}", epoch=epoch)
            d_losses.append(d_loss)
            g_losses.append(g_loss)
        loss_curve.append((float(np.mean(d_losses)), float(np.mean(g_losses))))

    return TabularGanGenerator(gen, codec, params, loss_curve)
