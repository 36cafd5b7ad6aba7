import numpy as np
import pytest

from stinger.encoding import FeatureEncoder
from stinger.errors import ContractError, ParameterError
from conftest import random_default_rows


class TestRawEncoding:
    def test_width_and_names(self, default_dataset):
        enc = FeatureEncoder("raw").fit(default_dataset)
        # 3 continuous + 2 circular pairs + 12 month indicators
        assert enc.width == 3 + 4 + 12
        assert "wind_dir_deg_sin" in enc.feature_names
        assert "month=February" in enc.feature_names

    def test_standardization_uses_fit_stats(self, default_dataset):
        enc = FeatureEncoder("raw").fit(default_dataset)
        X = enc.transform_dataset(default_dataset)
        j = enc.feature_names.index("sst_c")
        assert X[:, j].mean() == pytest.approx(0.0, abs=1e-9)
        assert X[:, j].std() == pytest.approx(1.0, abs=1e-9)

    def test_circular_pair_is_unit(self, default_dataset):
        enc = FeatureEncoder("raw").fit(default_dataset)
        X = enc.transform_dataset(default_dataset)
        s = X[:, enc.feature_names.index("wind_dir_deg_sin")]
        c = X[:, enc.feature_names.index("wind_dir_deg_cos")]
        np.testing.assert_allclose(s * s + c * c, 1.0, atol=1e-12)

    def test_month_indicators_partition(self, default_dataset):
        enc = FeatureEncoder("raw").fit(default_dataset)
        X = enc.transform_dataset(default_dataset)
        month_cols = [i for i, g in enumerate(enc.groups) if g == "month"]
        np.testing.assert_allclose(X[:, month_cols].sum(axis=1), 1.0)

    def test_width_mismatch_rejected(self, default_dataset):
        enc = FeatureEncoder("raw").fit(default_dataset)
        with pytest.raises(ContractError):
            enc.transform(np.zeros((3, 4)))

    def test_unknown_mode_rejected(self):
        with pytest.raises(ParameterError):
            FeatureEncoder("fancy")


class TestSubgroupEncoding:
    def test_all_indicator_blocks(self, default_dataset):
        enc = FeatureEncoder("subgroups").fit(default_dataset)
        # 3 continuous x 4 levels + 2 circular x 8 sectors + 12 months
        assert enc.width == 12 + 16 + 12
        X = enc.transform_dataset(default_dataset)
        assert set(np.unique(X)) <= {0.0, 1.0}
        # each block one-hot
        for name in default_dataset.schema.names:
            cols = [i for i, g in enumerate(enc.groups) if g == name]
            np.testing.assert_allclose(X[:, cols].sum(axis=1), 1.0)

    def test_compass_column_names(self, default_dataset):
        enc = FeatureEncoder("subgroups").fit(default_dataset)
        assert "wind_dir_deg=North" in enc.feature_names
        assert "sst_c=Very High" in enc.feature_names


class TestRoundTrip:
    def test_to_from_dict(self, default_dataset):
        for mode in ("raw", "subgroups"):
            enc = FeatureEncoder(mode).fit(default_dataset)
            back = FeatureEncoder.from_dict(enc.to_dict())
            np.testing.assert_allclose(
                back.transform_dataset(default_dataset), enc.transform_dataset(default_dataset)
            )
            assert back.feature_names == enc.feature_names
            assert back.groups == enc.groups

    def test_aggregate_by_source(self, default_dataset):
        enc = FeatureEncoder("raw").fit(default_dataset)
        per_col = np.ones(enc.width)
        agg = enc.aggregate_by_source(per_col)
        assert agg["month"] == 12.0
        assert agg["wind_dir_deg"] == 2.0
        assert agg["sst_c"] == 1.0
