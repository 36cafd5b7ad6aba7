import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from stinger.circular import (
    KAPPA_MAX,
    VonMisesComponent,
    VonMisesMixture,
    bessel_ratio,
    circular_mean_resultant,
    fit_von_mises_mixture,
    kappa_from_resultant,
    sample_von_mises,
    shorter_arc_interpolate,
)
from stinger.errors import DataError, ParameterError


def bessel_i_series(nu, x, terms=80):
    """Independent modified-Bessel oracle by direct series summation."""
    return sum((x / 2.0) ** (2 * k + nu) / (math.factorial(k) * math.gamma(k + nu + 1)) for k in range(terms))


def complex_arc_midpoint(a, b):
    """Midpoint of two angles by unit-vector averaging (undefined when antipodal)."""
    z = np.exp(1j * np.deg2rad(a)) + np.exp(1j * np.deg2rad(b))
    return np.rad2deg(np.angle(z)) % 360.0


class TestBesselMachinery:
    def test_ratio_matches_series_oracle(self):
        for kappa in (0.5, 1.0, 2.0, 5.0):
            oracle = bessel_i_series(1, kappa) / bessel_i_series(0, kappa)
            assert bessel_ratio(kappa) == pytest.approx(oracle, abs=1e-10)

    def test_kappa_inversion_round_trip(self):
        for kappa in (0.1, 1.0, 2.0, 10.0, 100.0):
            assert kappa_from_resultant(bessel_ratio(kappa)) == pytest.approx(kappa, rel=1e-5)

    def test_extremes(self):
        assert kappa_from_resultant(0.0) == 0.0
        assert kappa_from_resultant(-0.2) == 0.0
        assert kappa_from_resultant(1.0) == KAPPA_MAX


class TestSampling:
    def test_uniform_limit(self):
        angles = sample_von_mises(0.0, 0.0, 10000, seed=11)
        _, rbar = circular_mean_resultant(angles)
        assert rbar < 0.03

    def test_kappa_two_resultant_matches_bessel_oracle(self):
        angles = sample_von_mises(90.0, 2.0, 10000, seed=5)
        mu, rbar = circular_mean_resultant(angles)
        oracle = bessel_i_series(1, 2.0) / bessel_i_series(0, 2.0)
        assert rbar == pytest.approx(oracle, abs=0.02)
        assert abs((mu - 90.0 + 180) % 360 - 180) < 2.0

    def test_high_concentration(self):
        angles = sample_von_mises(123.0, 1e4, 5000, seed=2)
        delta = (angles - 123.0 + 180.0) % 360.0 - 180.0
        assert np.abs(delta).max() < 3.0

    def test_range_and_determinism(self):
        a = sample_von_mises(10.0, 3.0, 500, seed=9)
        b = sample_von_mises(10.0, 3.0, 500, seed=9)
        assert ((a >= 0) & (a < 360)).all()
        np.testing.assert_array_equal(a, b)

    def test_negative_kappa_rejected(self):
        with pytest.raises(ParameterError):
            sample_von_mises(0.0, -1.0, 10, seed=0)


class TestShorterArc:
    def test_seam_midpoint(self):
        got = shorter_arc_interpolate(350.0, 10.0, 0.5)
        assert got == pytest.approx(0.0)
        gap = (got - complex_arc_midpoint(350.0, 10.0) + 180.0) % 360.0 - 180.0
        assert abs(gap) < 1e-9

    @given(st.floats(0, 360), st.floats(0, 360), st.floats(0, 1))
    def test_stays_on_shorter_arc(self, a, b, lam):
        out = shorter_arc_interpolate(a, b, lam)
        gap = abs((b - a + 180.0) % 360.0 - 180.0)
        da = abs((out - a + 180.0) % 360.0 - 180.0)
        db = abs((out - b + 180.0) % 360.0 - 180.0)
        assert da + db <= gap + 1e-6

    def test_endpoints(self):
        assert shorter_arc_interpolate(40.0, 80.0, 0.0) == pytest.approx(40.0)
        assert shorter_arc_interpolate(40.0, 80.0, 1.0) == pytest.approx(80.0)


class TestMixtureFit:
    def test_degenerate_single_direction(self):
        mix = fit_von_mises_mixture([90.0] * 50, 1, seed=0)
        (comp,) = mix.components
        assert comp.mu_deg == pytest.approx(90.0)
        assert comp.kappa == KAPPA_MAX
        assert comp.weight == pytest.approx(1.0)

    def test_uniform_gives_small_kappa(self):
        rng = np.random.default_rng(3)
        mix = fit_von_mises_mixture(rng.uniform(0, 360, 10000), 1, seed=0)
        assert mix.components[0].kappa < 0.1

    def test_two_cluster_recovery(self):
        a = sample_von_mises(0.0, 20.0, 400, seed=1)
        b = sample_von_mises(180.0, 20.0, 400, seed=2)
        mix = fit_von_mises_mixture(np.concatenate([a, b]), 2, seed=0)
        near_zero = min(abs((c.mu_deg + 180) % 360 - 180) for c in mix.components)
        near_180 = min(abs(c.mu_deg - 180.0) for c in mix.components)
        assert near_zero < 5.0 and near_180 < 5.0
        for c in mix.components:
            assert c.weight == pytest.approx(0.5, abs=0.05)

    def test_loglik_trace_monotone(self):
        rng = np.random.default_rng(8)
        angles = np.concatenate([sample_von_mises(30.0, 4.0, 200, seed=4), rng.uniform(0, 360, 100)])
        mix = fit_von_mises_mixture(angles, 2, seed=1)
        diffs = np.diff(mix.loglik_trace)
        assert (diffs >= -1e-7).all()

    def test_too_few_angles(self):
        with pytest.raises(DataError):
            fit_von_mises_mixture([1.0] * 9, 1, seed=0)

    def test_mixture_sampling_follows_weights(self):
        mix = VonMisesMixture(
            components=(
                VonMisesComponent(0.0, 50.0, 0.8),
                VonMisesComponent(180.0, 50.0, 0.2),
            )
        )
        angles = mix.sample(4000, seed=6)
        near_zero = (np.abs((angles + 180) % 360 - 180) < 60).mean()
        assert near_zero == pytest.approx(0.8, abs=0.03)
