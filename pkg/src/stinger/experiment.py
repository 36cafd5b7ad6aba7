"""Configuration-driven experiment protocol: repeated seeded runs over
(strategy x model), per-run reports, and mean(sd) aggregation.

For run r the working seed is ``master_seed + r``; the dataset is split,
the training half augmented per strategy, every model fitted and evaluated
on both halves, and a JSON report written. Test splits are never augmented.
The report tree is a pure function of the configuration, so re-running with
the same config and master seed reproduces it byte for byte.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .augment import ResamplePlan, apply_resample_plan
from .errors import ParameterError
from .evaluation import aggregate_runs, class_metrics, pr_curve, roc_auc, roc_curve
from .fixture import FixtureSpec, generate_fixture
from .gan import GanParams
from .ingest import SplitSpec, load_observations, split_train_test
from .models import TRAINERS, feature_importance, predict
from .schema import Dataset

#: CLI strategy names -> ResamplePlan (strategy, backend)
STRATEGY_NAMES = {
    "none": ("none", None),
    "smote": ("smote_nc", None),
    "undersample": ("undersample", None),
    "synthneg-copula": ("synthetic_negative", "copula"),
    "synthneg-gan": ("synthetic_negative", "gan"),
}

SEED_ENV_VAR = "STINGER_SEED"
NO_AUGMENT_TABLE = "table4.csv"
AUGMENTED_TABLE = "table6.csv"


@dataclass(frozen=True)
class ExperimentConfig:
    out_dir: str
    data: str | None = None
    fixture: FixtureSpec | None = None
    encoding: str = "raw"
    train_fraction: float = 0.6
    runs: int = 30
    strategies: tuple = ("none",)
    models: tuple = ("forest",)
    model_params: dict = field(default_factory=dict)
    smote_k: int = 5
    gan: dict = field(default_factory=dict)
    master_seed: int = 0
    figures: bool = True

    def __post_init__(self):
        if self.runs < 1:
            raise ParameterError("runs must be >= 1")
        if not self.strategies or not self.models:
            raise ParameterError("strategies and models must be non-empty")
        for s in self.strategies:
            if s not in STRATEGY_NAMES:
                raise ParameterError(f"unknown strategy {s!r}; choose from {sorted(STRATEGY_NAMES)}")
        for m in self.models:
            if m not in TRAINERS:
                raise ParameterError(f"unknown model {m!r}; choose from {sorted(TRAINERS)}")
        for key in self.model_params:
            if key not in TRAINERS:
                raise ParameterError(f"model_params key {key!r} is not a model; GAN settings go under 'gan'")
        if (self.data is None) == (self.fixture is None):
            raise ParameterError("exactly one of data/fixture must be given")
        if self.data is not None and not Path(self.data).exists():
            raise ParameterError(f"data file not found: {self.data}")

    @classmethod
    def from_json(cls, path, out_dir=None, master_seed=None) -> "ExperimentConfig":
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
        fixture = FixtureSpec(**raw["fixture"]) if raw.get("fixture") else None
        env_seed = os.environ.get(SEED_ENV_VAR)
        if master_seed is not None:
            seed = master_seed
        elif env_seed is not None:
            try:
                seed = int(env_seed)
            except ValueError:
                raise ParameterError(f"{SEED_ENV_VAR} must be an integer, got {env_seed!r}") from None
        else:
            seed = raw.get("master_seed", 0)
        return cls(
            out_dir=out_dir or raw["out_dir"],
            data=raw.get("data"),
            fixture=fixture,
            encoding=raw.get("encoding", "raw"),
            train_fraction=raw.get("train_fraction", 0.6),
            runs=raw.get("runs", 30),
            strategies=tuple(raw.get("strategies", ("none",))),
            models=tuple(raw.get("models", ("forest",))),
            model_params=raw.get("model_params", {}),
            smote_k=raw.get("smote_k", 5),
            gan=raw.get("gan", {}),
            master_seed=seed,
            figures=raw.get("figures", True),
        )


def load_experiment_dataset(config: ExperimentConfig) -> Dataset:
    if config.data is not None:
        return load_observations(config.data)
    return generate_fixture(config.fixture)


def _resample_plan(config: ExperimentConfig, strategy: str, seed: int) -> ResamplePlan:
    name, backend = STRATEGY_NAMES[strategy]
    gan = GanParams(**{**config.gan, "seed": seed}) if backend == "gan" else None
    return ResamplePlan(strategy=name, backend=backend, seed=seed, k_neighbors=config.smote_k, gan=gan)


def _build_model(config: ExperimentConfig, model_name: str, train: Dataset, seed: int):
    trainer, params_cls = TRAINERS[model_name]
    overrides = dict(config.model_params.get(model_name, {}))
    if "seed" in params_cls.__dataclass_fields__:
        overrides.setdefault("seed", seed)
    return trainer(train, params_cls(**overrides), encoding=config.encoding)


def _block(actual, scores, labels) -> dict:
    metrics = class_metrics(actual, labels)
    auc = roc_auc(actual, scores)
    doc = metrics.as_dict()
    doc["auc"] = auc
    doc["f1_presence"] = metrics.per_class[1]["f1"]
    return doc


def _curves(actual, scores) -> dict | None:
    if len(np.unique(actual)) < 2:
        return None
    return {
        "pr": [[float(a), float(b)] for a, b in pr_curve(actual, scores)],
        "roc": [[float(a), float(b)] for a, b in roc_curve(actual, scores)],
    }


def execute_run(config: ExperimentConfig, strategy: str, model_name: str, run_idx: int) -> dict:
    """One (strategy, model, run) cell: split, augment, fit, score both splits."""
    seed = config.master_seed + run_idx
    dataset = load_experiment_dataset(config)
    train, test = split_train_test(dataset, SplitSpec(config.train_fraction, seed=seed))
    train_aug = apply_resample_plan(train, _resample_plan(config, strategy, seed))
    model = _build_model(config, model_name, train_aug, seed)

    # the one-class model never sees absence rows, so its train block is
    # scored on exactly what it saw (mirrors the undefined train AUC)
    train_eval = train_aug.subset(np.flatnonzero(train_aug.y == 1)) if model_name == "ocsvm" else train_aug

    doc = {"run": run_idx, "seed": seed, "strategy": strategy, "model": model_name}
    for split_name, part in (("train", train_eval), ("test", test)):
        labels, scores = predict(model, part)
        doc[split_name] = _block(part.y, scores, labels)
        curves = _curves(part.y, scores)
        if curves is not None:
            doc[split_name]["curves"] = curves

    if hasattr(model, "native_importance"):
        doc["importance"] = feature_importance(model)
    else:
        doc["importance"] = feature_importance(model, validation=test, seed=seed)
    return doc


def _run_task(args):
    config_state, strategy, model_name, run_idx = args
    config = ExperimentConfig(**config_state)
    try:
        return strategy, model_name, run_idx, execute_run(config, strategy, model_name, run_idx), None
    except Exception as exc:  # record the failure, keep the campaign going
        return strategy, model_name, run_idx, None, f"{type(exc).__name__}: {exc}"


def _config_state(config: ExperimentConfig) -> dict:
    state = dict(config.__dict__)
    return state


def _json_dump(doc, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, sort_keys=True, indent=1)
        fh.write("\n")


def _summary_metrics(doc: dict) -> dict:
    out = {}
    for split in ("train", "test"):
        block = doc[split]
        out[f"{split}_accuracy"] = block["accuracy"]
        out[f"{split}_f1"] = block["f1_presence"]
        out[f"{split}_auc"] = block["auc"]
    return out


def run_experiment(config: ExperimentConfig, jobs: int = 1) -> int:
    """Execute the full campaign; returns the number of failed runs.

    Report tree: ``<out>/<strategy>/<model>/run_<r>.json`` and
    ``aggregate.json``, roll-up tables under ``<out>/tables/``, plot data
    (and figures unless disabled) under ``<out>/plots/``.
    """
    out = Path(config.out_dir)
    out.mkdir(parents=True, exist_ok=True)

    tasks = [
        (_config_state(config), strategy, model, run_idx)
        for strategy in config.strategies
        for model in config.models
        for run_idx in range(1, config.runs + 1)
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(t) for t in tasks]

    cells: dict = {}
    failures = 0
    for strategy, model_name, run_idx, doc, error in results:
        cell_dir = out / strategy / model_name
        cell_dir.mkdir(parents=True, exist_ok=True)
        if error is not None:
            failures += 1
            _json_dump({"run": run_idx, "error": error}, cell_dir / f"run_{run_idx}.json")
            continue
        _json_dump(doc, cell_dir / f"run_{run_idx}.json")
        cells.setdefault((strategy, model_name), []).append(doc)

    aggregates = {}
    for (strategy, model_name), docs in sorted(cells.items()):
        agg = aggregate_runs([_summary_metrics(d) for d in docs])
        best = max(docs, key=lambda d: (d["test"]["f1_presence"], -d["run"]))
        agg_doc = {
            "strategy": strategy,
            "model": model_name,
            "n_runs": agg.n_runs,
            "metrics": {k: {"mean": agg.means[k], "sd": agg.sds[k]} for k in agg.means},
            "best_run": {
                "run": best["run"],
                "test": {k: v for k, v in best["test"].items() if k != "curves"},
                "train": {k: v for k, v in best["train"].items() if k != "curves"},
            },
        }
        _json_dump(agg_doc, out / strategy / model_name / "aggregate.json")
        aggregates[(strategy, model_name)] = (agg, best)

    _write_tables(out, config, aggregates)
    _write_plot_artifacts(out, config, aggregates)
    return failures


def _format_row(agg) -> list:
    keys = ("train_accuracy", "train_f1", "train_auc", "test_accuracy", "test_f1", "test_auc")
    return [agg.formatted(k) for k in keys]


def _write_tables(out: Path, config: ExperimentConfig, aggregates: dict) -> None:
    import csv

    tables = out / "tables"
    tables.mkdir(exist_ok=True)
    header = ["model", "train_accuracy", "train_f1", "train_auc", "test_accuracy", "test_f1", "test_auc"]

    none_rows = [
        [model] + _format_row(agg)
        for (strategy, model), (agg, _) in sorted(aggregates.items())
        if strategy == "none"
    ]
    if none_rows:
        with open(tables / NO_AUGMENT_TABLE, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            writer.writerows(none_rows)

    aug_rows = [
        [strategy, model] + _format_row(agg)
        for (strategy, model), (agg, _) in sorted(aggregates.items())
        if strategy != "none"
    ]
    if aug_rows:
        with open(tables / AUGMENTED_TABLE, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["strategy"] + header)
            writer.writerows(aug_rows)


def _write_plot_artifacts(out: Path, config: ExperimentConfig, aggregates: dict) -> None:
    """Best-run curve/importance exports plus augmented-train PCA scatters."""
    from .analysis import export_plot_data, pca_fit, pca_transform
    from .encoding import FeatureEncoder

    plots = out / "plots"
    plots.mkdir(exist_ok=True)
    figures = config.figures and _figures_available()

    for (strategy, model_name), (agg, best) in sorted(aggregates.items()):
        for curve_kind in ("pr", "roc"):
            points = best["test"].get("curves", {}).get(curve_kind)
            if points is None:
                continue
            path = plots / f"{curve_kind}_curve__{strategy}__{model_name}.csv"
            export_plot_data(f"{curve_kind}_curve", path, points=points)
        export_plot_data(
            "importance",
            plots / f"importance__{strategy}__{model_name}.csv",
            scores=best["importance"],
        )

    completed = {strategy for strategy, _ in aggregates}
    dataset = load_experiment_dataset(config) if completed else None
    for strategy in sorted(completed):
        seed = config.master_seed + 1
        train, _ = split_train_test(dataset, SplitSpec(config.train_fraction, seed=seed))
        try:
            augmented = apply_resample_plan(train, _resample_plan(config, strategy, seed))
        except Exception:  # this seed's augmentation failed; run docs hold the error
            continue
        encoder = FeatureEncoder(config.encoding).fit(augmented)
        X_enc = encoder.transform_dataset(augmented)
        model = pca_fit(X_enc, 2)
        scores = pca_transform(model, X_enc)
        export_plot_data(
            "pca_scatter", plots / f"pca_scatter__{strategy}__all.csv", scores=scores, labels=augmented.y
        )

    if figures:
        from .plots import render_report_figures

        render_report_figures(plots)


def _figures_available() -> bool:
    try:
        import matplotlib  # noqa: F401
    except ImportError:
        return False
    return True
