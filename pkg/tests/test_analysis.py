import numpy as np
import pytest

from stinger.analysis import (
    circular_histogram,
    dataset_numeric_columns,
    export_plot_data,
    linear_histogram,
    monthly_presence_counts,
    pca_fit,
    pca_transform,
    pearson,
    pearson_matrix,
    point_biserial,
)
from stinger.errors import ContractError, DataError

from conftest import make_dataset, random_default_rows


class TestPca:
    def test_collinear_line(self):
        t = np.linspace(-3, 3, 50)
        model = pca_fit(np.column_stack([t, t]))
        np.testing.assert_allclose(np.abs(model.axes[0]), [1 / np.sqrt(2)] * 2, atol=1e-12)
        share = model.explained_variance[0] / model.explained_variance.sum()
        assert share == pytest.approx(1.0, abs=1e-12)

    def test_isotropic_shares_roughly_equal(self):
        rng = np.random.default_rng(0)
        model = pca_fit(rng.standard_normal((5000, 2)))
        shares = model.explained_variance / model.explained_variance.sum()
        np.testing.assert_allclose(shares, 0.5, atol=0.05)

    def test_rank_two_reconstruction(self):
        rng = np.random.default_rng(1)
        basis = rng.standard_normal((2, 6))
        coeffs = rng.standard_normal((40, 2))
        rows = coeffs @ basis + 3.0
        model = pca_fit(rows, 2)
        scores = pca_transform(model, rows)
        recon = scores @ model.axes + model.mean
        assert np.abs(recon - rows).max() < 1e-6

    def test_axes_orthonormal_and_variances_sorted(self):
        rng = np.random.default_rng(2)
        rows = rng.standard_normal((300, 5)) * np.array([3.0, 2.0, 1.0, 0.5, 0.1])
        model = pca_fit(rows, 4)
        gram = model.axes @ model.axes.T
        np.testing.assert_allclose(gram, np.eye(4), atol=1e-8)
        assert (np.diff(model.explained_variance) <= 1e-12).all()
        total_data_variance = rows.var(axis=0, ddof=1).sum()
        assert model.explained_variance.sum() <= total_data_variance + 1e-8

    def test_transform_contract(self):
        rows = np.random.default_rng(3).standard_normal((30, 4))
        model = pca_fit(rows)
        np.testing.assert_allclose(pca_transform(model, model.mean[None, :]), 0.0, atol=1e-12)
        scores = pca_transform(model, rows)
        np.testing.assert_allclose(scores.mean(axis=0), 0.0, atol=1e-9)
        np.testing.assert_allclose(scores.var(axis=0, ddof=1), model.explained_variance, atol=1e-6)
        cov = np.cov(scores, rowvar=False)
        assert abs(cov[0, 1]) < 1e-6
        with pytest.raises(ContractError):
            pca_transform(model, np.zeros((2, 7)))

    def test_needs_two_rows(self):
        with pytest.raises(DataError):
            pca_fit(np.zeros((1, 3)))

    def test_sign_convention_deterministic(self):
        rng = np.random.default_rng(4)
        rows = rng.standard_normal((100, 3))
        m1, m2 = pca_fit(rows), pca_fit(rows.copy())
        np.testing.assert_array_equal(m1.axes, m2.axes)
        k = np.abs(m1.axes).argmax(axis=1)
        assert (m1.axes[np.arange(2), k] > 0).all()


class TestCorrelation:
    def test_self_and_negation(self):
        x = np.random.default_rng(5).standard_normal(200)
        names, mat = pearson_matrix({"a": x, "b": -x})
        assert mat[0, 0] == 1.0
        assert mat[0, 1] == pytest.approx(-1.0, abs=1e-12)

    def test_independent_noise_small(self):
        rng = np.random.default_rng(6)
        names, mat = pearson_matrix({"a": rng.standard_normal(5000), "b": rng.standard_normal(5000)})
        assert abs(mat[0, 1]) < 0.05

    def test_zero_variance_undefined(self):
        names, mat = pearson_matrix({"a": np.ones(10), "b": np.arange(10.0)})
        assert np.isnan(mat[0, 0]) and np.isnan(mat[0, 1])
        assert mat[1, 1] == 1.0

    def test_point_biserial_equals_pearson(self):
        rng = np.random.default_rng(7)
        binary = (rng.random(500) < 0.3).astype(float)
        cont = rng.standard_normal(500) + binary
        assert point_biserial(binary, cont) == pytest.approx(pearson(binary, cont), abs=1e-12)

    def test_point_biserial_extremes(self):
        binary = np.array([0.0, 0.0, 1.0, 1.0])
        assert point_biserial(binary, np.array([5.0, 5.0, 5.0, 5.0])) != point_biserial(binary, binary)
        assert point_biserial(binary, np.array([0.0, 0.0, 1.0, 1.0])) == pytest.approx(1.0)
        assert np.isnan(point_biserial(np.zeros(4), np.arange(4.0)))

    def test_equal_group_means_zero(self):
        binary = np.array([0.0, 0.0, 1.0, 1.0])
        cont = np.array([1.0, 3.0, 3.0, 1.0])
        assert point_biserial(binary, cont) == pytest.approx(0.0, abs=1e-12)


class TestHistograms:
    def test_circular_all_same(self):
        centers, counts = circular_histogram(np.zeros(17))
        assert counts[0] == 17 and counts.sum() == 17

    def test_circular_uniform_grid(self):
        centers, counts = circular_histogram(np.arange(360.0), bins=16)
        assert counts.sum() == 360
        assert set(counts) <= {22, 23}

    def test_linear_density_integrates_to_one(self):
        values = np.random.default_rng(8).normal(size=400)
        centers, density, counts = linear_histogram(values, bins=30)
        widths = np.diff(np.histogram(values, bins=30)[1])
        assert float((density * widths).sum()) == pytest.approx(1.0, abs=1e-6)
        assert counts.sum() == 400


class TestMonthlyCounts:
    def test_counts_only_in_presence_months(self):
        ds = random_default_rows(100, seed=9)
        X = ds.X.copy()
        X[:, ds.schema.index("month")] = 2.0
        ds2 = make_dataset(X, ds.y, schema=ds.schema)
        monthly, _ = monthly_presence_counts(ds2)
        assert monthly[1] == ds2.n_presence
        assert monthly.sum() == ds2.n_presence

    def test_beach_year_table(self):
        ds = random_default_rows(6, seed=10)
        ds2 = make_dataset(
            ds.X,
            [1, 1, 0, 1, 0, 1],
            schema=ds.schema,
            beach=("A", "A", "A", "B", "B", "B"),
            dates=("2017-01-02", "2018-02-03", "2018-02-04", "2018-03-04", "2018-03-05", "2018-12-31"),
        )
        monthly, table = monthly_presence_counts(ds2)
        assert table[("A", 2017)] == 1
        assert table[("A", 2018)] == 1
        assert table[("B", 2018)] == 2
        assert monthly.sum() == 4


class TestExport:
    def test_density_export_integrates(self, tmp_path):
        values = np.random.default_rng(11).normal(size=300)
        path = tmp_path / "density.csv"
        export_plot_data("density", path, values=values, bins=25)
        rows = np.loadtxt(path, delimiter=",", skiprows=1)
        widths = np.diff(np.histogram(values, bins=25)[1])
        assert (rows[:, 1] * widths).sum() == pytest.approx(1.0, abs=1e-6)

    def test_pca_scatter_row_count(self, tmp_path):
        ds = random_default_rows(80, seed=12)
        scores = np.random.default_rng(0).standard_normal((80, 2))
        path = tmp_path / "pca.csv"
        export_plot_data("pca_scatter", path, scores=scores, labels=ds.y)
        assert len(path.read_text().splitlines()) == 81

    def test_reexport_byte_identical(self, tmp_path):
        ds = random_default_rows(60, seed=13)
        cols = dataset_numeric_columns(ds)
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        export_plot_data("pairs", p1, columns=cols, labels=ds.y)
        export_plot_data("pairs", p2, columns=cols, labels=ds.y)
        assert p1.read_bytes() == p2.read_bytes()

    def test_unknown_kind(self, tmp_path):
        with pytest.raises(DataError):
            export_plot_data("sparkline", tmp_path / "x.csv")
