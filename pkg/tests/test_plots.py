import numpy as np

from stinger.analysis import export_plot_data
from stinger.plots import render_report_figures


def test_renders_png_beside_each_artifact(tmp_path):
    rng = np.random.default_rng(0)
    export_plot_data("density", tmp_path / "density__sst.csv", values=rng.normal(size=200))
    export_plot_data("circular", tmp_path / "circular__wind.csv", angles=rng.uniform(0, 360, 200))
    export_plot_data(
        "pca_scatter", tmp_path / "pca_scatter__x.csv",
        scores=rng.normal(size=(50, 2)), labels=rng.integers(0, 2, 50),
    )
    export_plot_data("pr_curve", tmp_path / "pr_curve__a__b.csv", points=[(0.1, 0.9), (0.5, 0.6), (1.0, 0.2)])
    export_plot_data("importance", tmp_path / "importance__a__b.csv", scores={"wind": 0.7, "sst": 0.3})
    (tmp_path / "unrelated.csv").write_text("a,b\n1,2\n")

    written = render_report_figures(tmp_path)
    names = {p.name for p in written}
    assert names == {
        "density__sst.png",
        "circular__wind.png",
        "pca_scatter__x.png",
        "pr_curve__a__b.png",
        "importance__a__b.png",
    }
    for p in written:
        assert p.stat().st_size > 500


def test_rendering_is_byte_deterministic(tmp_path):
    rng = np.random.default_rng(1)
    export_plot_data("density", tmp_path / "density__v.csv", values=rng.normal(size=100))
    render_report_figures(tmp_path)
    first = (tmp_path / "density__v.png").read_bytes()
    render_report_figures(tmp_path)
    assert (tmp_path / "density__v.png").read_bytes() == first
