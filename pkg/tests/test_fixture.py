import numpy as np
import pytest

from stinger.errors import ParameterError
from stinger.evaluation import class_metrics, roc_auc
from stinger.fixture import FixtureSpec, generate_fixture
from stinger.ingest import SplitSpec, split_train_test
from stinger.models import ForestParams, predict, train_forest

SEPARABLE_FOREST = ForestParams(
    seed=3, ccp_alpha=0.0, max_leaf_nodes=None, max_depth=12, min_samples_split=2, min_samples_leaf=1
)


class TestSpec:
    def test_invalid_parameters(self):
        with pytest.raises(ParameterError):
            FixtureSpec(prevalence=0.0)
        with pytest.raises(ParameterError):
            FixtureSpec(overlap=1.5)

    def test_exact_positive_count(self):
        ds = generate_fixture(FixtureSpec(n=1000, prevalence=0.06, seed=1))
        assert ds.n_presence == 60

    def test_deterministic(self):
        a = generate_fixture(FixtureSpec(n=300, seed=5))
        b = generate_fixture(FixtureSpec(n=300, seed=5))
        np.testing.assert_array_equal(a.X, b.X)
        np.testing.assert_array_equal(a.y, b.y)
        assert a.beach == b.beach and a.dates == b.dates

    def test_schema_and_ranges(self):
        ds = generate_fixture(FixtureSpec(n=500, seed=2))
        wind = ds.column("wind_dir_deg")
        month = ds.column("month")
        assert ((wind >= 0) & (wind < 360)).all()
        assert np.isin(month, np.arange(1, 13)).all()
        assert (ds.column("curr_speed_ms") > 0).all()


class TestOverlapSemantics:
    def test_identical_distributions_give_chance_auc(self):
        aucs = []
        for seed in range(8):
            ds = generate_fixture(FixtureSpec(n=2000, prevalence=0.06, overlap=1.0, seed=seed))
            train, test = split_train_test(ds, SplitSpec(0.6, seed=seed + 100))
            model = train_forest(train, ForestParams(n_trees=40, seed=seed))
            _, scores = predict(model, test)
            auc = roc_auc(test.y, scores)
            if auc is not None:
                aucs.append(auc)
        assert np.mean(aucs) == pytest.approx(0.5, abs=0.05)

    def test_zero_overlap_is_separable(self):
        ds = generate_fixture(FixtureSpec(n=2000, prevalence=0.06, overlap=0.0, seed=2))
        train, test = split_train_test(ds, SplitSpec(0.6, seed=3))
        model = train_forest(train, SEPARABLE_FOREST)
        labels, _ = predict(model, test)
        assert class_metrics(test.y, labels).per_class[1]["f1"] >= 0.9

    def test_continuous_mean_separation_tracks_overlap(self):
        for overlap in (0.0, 0.5, 1.0):
            ds = generate_fixture(FixtureSpec(n=6000, prevalence=0.5, overlap=overlap, seed=4))
            sst = ds.column("sst_c")
            gap = sst[ds.y == 1].mean() - sst[ds.y == 0].mean()
            assert gap == pytest.approx((1 - overlap) * 2 * 2.1, abs=0.15)

    def test_presence_months_summer_weighted(self):
        ds = generate_fixture(FixtureSpec(n=8000, prevalence=0.25, overlap=0.0, seed=6))
        months = ds.column("month").astype(int)
        summer = np.isin(months, (12, 1, 2))
        assert summer[ds.y == 1].mean() > 0.5
        assert abs(summer[ds.y == 0].mean() - 0.25) < 0.05
