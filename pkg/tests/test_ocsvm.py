import numpy as np
import pytest

from stinger.errors import ConvergenceWarning, DataError
from stinger.models import OcsvmParams, predict, train_ocsvm

from conftest import make_dataset


def gaussian_positives(n=500, d=2, seed=0):
    rng = np.random.default_rng(seed)
    return make_dataset(rng.standard_normal((n, d)), np.ones(n, dtype=int))


class TestNuProperty:
    @pytest.mark.parametrize("nu", [0.1, 0.3, 0.5])
    def test_outlier_and_sv_fractions(self, nu):
        ds = gaussian_positives()
        model = train_ocsvm(ds, OcsvmParams(nu=nu))
        X_enc = model.encoder.transform_dataset(ds)
        f = model.decision_values(X_enc)
        outlier_fraction = (f < 0).mean()
        sv_fraction = model.alphas.size / len(ds)
        assert outlier_fraction <= nu + 0.05
        assert sv_fraction >= nu - 0.05

    def test_half_inside_at_default_nu(self):
        ds = gaussian_positives(seed=3)
        model = train_ocsvm(ds, OcsvmParams())
        labels, _ = predict(model, ds)
        assert labels.mean() == pytest.approx(0.5, abs=0.05)


class TestEdgeCases:
    def test_duplicate_point_is_inlier(self):
        ds = make_dataset(np.full((30, 2), 1.5), np.ones(30, dtype=int))
        model = train_ocsvm(ds, OcsvmParams(nu=0.5))
        labels, _ = predict(model, np.full((1, 2), 1.5))
        assert labels[0] == 1

    def test_needs_two_rows(self):
        with pytest.raises(DataError):
            train_ocsvm(make_dataset([[0.0, 0.0]], [1]), OcsvmParams())

    def test_ignores_absence_rows(self):
        rng = np.random.default_rng(1)
        X = rng.standard_normal((60, 2))
        y = np.array([1] * 40 + [0] * 20)
        model = train_ocsvm(make_dataset(X, y), OcsvmParams(nu=0.5))
        assert model.support_vectors.shape[0] <= 40

    def test_convergence_warning_on_tiny_budget(self):
        ds = gaussian_positives(n=200, seed=5)
        with pytest.warns(ConvergenceWarning):
            model = train_ocsvm(ds, OcsvmParams(nu=0.5, max_iterations=3))
        assert model is not None and not model.converged


class TestPredictContract:
    def test_scores_in_unit_interval(self):
        ds = gaussian_positives(n=120, seed=2)
        model = train_ocsvm(ds, OcsvmParams(nu=0.3))
        rng = np.random.default_rng(0)
        labels, scores = predict(model, rng.standard_normal((50, 2)) * 3)
        assert ((scores >= 0) & (scores <= 1)).all()
        assert np.isin(labels, (0, 1)).all()

    def test_label_matches_decision_sign(self):
        ds = gaussian_positives(n=150, seed=4)
        model = train_ocsvm(ds, OcsvmParams(nu=0.4))
        X_enc = model.encoder.transform(np.random.default_rng(1).standard_normal((40, 2)))
        f = model.decision_values(X_enc)
        labels, _ = model.predict_encoded(X_enc)
        off_boundary = np.abs(f) > 1e-6
        np.testing.assert_array_equal(labels[off_boundary], (f[off_boundary] >= 0).astype(int))

    def test_deterministic(self):
        ds = gaussian_positives(n=100, seed=6)
        m1 = train_ocsvm(ds, OcsvmParams(nu=0.2))
        m2 = train_ocsvm(ds, OcsvmParams(nu=0.2))
        np.testing.assert_array_equal(m1.alphas, m2.alphas)
        assert m1.rho == m2.rho
