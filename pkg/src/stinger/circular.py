"""Circular (directional) statistics: resultants, interpolation, von Mises.

All public angles are degrees; radians stay internal. The von Mises sampler
uses the Best-Fisher wrapped-Cauchy envelope rejection scheme, and mixture
fitting is plain expectation-maximization with the concentration recovered
from the mean resultant length by inverting A(k) = I1(k)/I0(k).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq
from scipy.special import i0e, i1e

from .errors import DataError, ParameterError

KAPPA_MAX = 1e4
_TWO_PI = 2.0 * np.pi


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def circular_mean_resultant(angles_deg):
    """Mean direction (degrees in [0, 360)) and mean resultant length of a sample."""
    th = np.deg2rad(np.asarray(angles_deg, dtype=float))
    if th.size == 0:
        raise DataError("cannot summarize an empty angle sample")
    c, s = np.cos(th).mean(), np.sin(th).mean()
    return float(np.rad2deg(np.arctan2(s, c)) % 360.0), float(np.hypot(c, s))


def shorter_arc_interpolate(a_deg, b_deg, lam):
    """Point a fraction ``lam`` along the shorter arc from ``a_deg`` to ``b_deg``.

    Exactly antipodal endpoints take the decreasing arc (a fixed, documented
    tie-break). Result is reduced to [0, 360).
    """
    a = np.asarray(a_deg, dtype=float)
    diff = (np.asarray(b_deg, dtype=float) - a + 180.0) % 360.0 - 180.0
    return (a + np.asarray(lam) * diff) % 360.0


def bessel_ratio(kappa: float) -> float:
    """A(kappa) = I1(kappa) / I0(kappa), stable for large kappa."""
    if kappa < 0:
        raise ParameterError("kappa must be non-negative")
    if kappa == 0.0:
        return 0.0
    return float(i1e(kappa) / i0e(kappa))


def kappa_from_resultant(rbar: float, tol: float = 1e-8) -> float:
    """Invert A(kappa) = rbar by bracketed root-finding, capped at KAPPA_MAX."""
    if rbar <= 0.0:
        return 0.0
    if rbar >= bessel_ratio(KAPPA_MAX):
        return KAPPA_MAX
    return float(brentq(lambda k: bessel_ratio(k) - rbar, 1e-12, KAPPA_MAX, xtol=tol))


def log_von_mises_pdf(angles_deg, mu_deg: float, kappa: float):
    """Log-density of the von Mises distribution at the given angles."""
    delta = np.deg2rad(np.asarray(angles_deg, dtype=float) - mu_deg)
    # ln I0(k) = ln i0e(k) + k keeps large concentrations finite
    return kappa * np.cos(delta) - (np.log(_TWO_PI) + np.log(i0e(kappa)) + kappa)


def sample_von_mises(mu_deg: float, kappa: float, n: int, seed) -> np.ndarray:
    """Draw ``n`` angles (degrees in [0, 360)) from von Mises(mu, kappa).

    kappa = 0 degenerates to the uniform distribution on the circle.
    """
    if kappa < 0:
        raise ParameterError("kappa must be non-negative")
    rng = _as_rng(seed)
    if n == 0:
        return np.empty(0)
    if kappa < 1e-8:
        return rng.uniform(0.0, 360.0, size=n)

    tau = 1.0 + np.sqrt(1.0 + 4.0 * kappa * kappa)
    rho = (tau - np.sqrt(2.0 * tau)) / (2.0 * kappa)
    r = (1.0 + rho * rho) / (2.0 * rho)

    out = np.empty(0)
    while out.size < n:
        m = max(n - out.size, 16)
        u1, u2, u3 = rng.random((3, 2 * m))
        z = np.cos(np.pi * u1)
        f = (1.0 + r * z) / (r + z)
        c = kappa * (r - f)
        accept = (c * (2.0 - c) - u2 > 0.0) | (np.log(c / u2) + 1.0 - c >= 0.0)
        theta = np.sign(u3[accept] - 0.5) * np.arccos(np.clip(f[accept], -1.0, 1.0))
        out = np.concatenate([out, theta])
    return (np.rad2deg(out[:n]) + mu_deg) % 360.0


@dataclass(frozen=True)
class VonMisesComponent:
    mu_deg: float
    kappa: float
    weight: float

    def __post_init__(self):
        if self.kappa < 0 or not 0.0 <= self.weight <= 1.0:
            raise ParameterError("require kappa >= 0 and weight in [0, 1]")


@dataclass(frozen=True)
class VonMisesMixture:
    """Finite mixture of von Mises components; weights sum to 1."""

    components: tuple
    loglik_trace: tuple = ()

    def __post_init__(self):
        total = sum(c.weight for c in self.components)
        if abs(total - 1.0) > 1e-9:
            raise ParameterError(f"component weights sum to {total}, expected 1")

    def log_pdf(self, angles_deg) -> np.ndarray:
        angles_deg = np.asarray(angles_deg, dtype=float)
        comp = np.stack(
            [np.log(c.weight + 1e-300) + log_von_mises_pdf(angles_deg, c.mu_deg, c.kappa) for c in self.components]
        )
        peak = comp.max(axis=0)
        return peak + np.log(np.exp(comp - peak).sum(axis=0))

    def sample(self, n: int, seed) -> np.ndarray:
        rng = _as_rng(seed)
        weights = np.array([c.weight for c in self.components])
        counts = rng.multinomial(n, weights / weights.sum())
        draws = [sample_von_mises(c.mu_deg, c.kappa, int(k), rng) for c, k in zip(self.components, counts)]
        out = np.concatenate(draws) if draws else np.empty(0)
        return out[rng.permutation(n)]


def _kmeans_on_circle(theta: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    """Seeded Lloyd iterations on (cos, sin) embeddings; returns cluster labels."""
    pts = np.column_stack([np.cos(theta), np.sin(theta)])
    centers = pts[rng.choice(len(pts), size=k, replace=False)]
    labels = np.full(len(pts), -1, dtype=int)
    for _ in range(50):
        d2 = ((pts[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        new_labels = d2.argmin(axis=1)
        if (new_labels == labels).all():
            break
        labels = new_labels
        for j in range(k):
            mask = labels == j
            if mask.any():
                centers[j] = pts[mask].mean(axis=0)
            else:
                centers[j] = pts[rng.integers(len(pts))]
    return labels


def fit_von_mises_mixture(
    angles_deg,
    n_components: int,
    seed,
    max_iter: int = 200,
    tol: float = 1e-6,
) -> VonMisesMixture:
    """Fit a von Mises mixture by EM.

    Initialization is seeded k-means on the unit-circle embedding. The
    returned mixture carries its per-iteration log-likelihood trace, which is
    non-decreasing by construction of the EM updates.

    Raises
    ------
    DataError
        If fewer than 10 angles are supplied.
    """
    angles_deg = np.asarray(angles_deg, dtype=float) % 360.0
    if angles_deg.size < 10:
        raise DataError(f"need at least 10 angles to fit a mixture, got {angles_deg.size}")
    if n_components < 1:
        raise ParameterError("n_components must be >= 1")

    rng = _as_rng(seed)
    theta = np.deg2rad(angles_deg)
    n, k = angles_deg.size, n_components

    labels = _kmeans_on_circle(theta, k, rng)
    weights = np.full(k, 1.0 / k)
    mus = np.zeros(k)
    kappas = np.ones(k)
    for j in range(k):
        grp = angles_deg[labels == j] if (labels == j).any() else angles_deg
        mu, rbar = circular_mean_resultant(grp)
        mus[j], kappas[j] = mu, min(kappa_from_resultant(rbar), KAPPA_MAX)
        weights[j] = max((labels == j).mean(), 1.0 / n)
    weights /= weights.sum()

    trace = []
    prev = -np.inf
    for _ in range(max_iter):
        log_pj = np.stack(
            [np.log(weights[j] + 1e-300) + log_von_mises_pdf(angles_deg, mus[j], kappas[j]) for j in range(k)],
            axis=1,
        )
        peak = log_pj.max(axis=1, keepdims=True)
        log_norm = peak[:, 0] + np.log(np.exp(log_pj - peak).sum(axis=1))
        loglik = float(log_norm.sum())
        trace.append(loglik)

        resp = np.exp(log_pj - log_norm[:, None])
        totals = resp.sum(axis=0) + 1e-300
        weights = totals / n
        for j in range(k):
            s = float(resp[:, j] @ np.sin(theta))
            c = float(resp[:, j] @ np.cos(theta))
            mus[j] = np.rad2deg(np.arctan2(s, c)) % 360.0
            rbar = min(np.hypot(s, c) / totals[j], 1.0)
            kappas[j] = min(kappa_from_resultant(rbar), KAPPA_MAX)

        if loglik - prev < tol and np.isfinite(prev):
            break
        prev = loglik

    comps = tuple(
        VonMisesComponent(mu_deg=float(mus[j]), kappa=float(kappas[j]), weight=float(weights[j] / weights.sum()))
        for j in range(k)
    )
    return VonMisesMixture(components=comps, loglik_trace=tuple(trace))
