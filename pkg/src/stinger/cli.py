"""Command-line interface.

Subcommands: ingest, summarize, augment, train, evaluate, experiment,
analyze, fixture. Exit status: 0 on success, 1 on validation/usage errors,
2 on runtime failure (including any failed experiment run).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .errors import StingerError

STRATEGY_CHOICES = ("smote", "undersample", "synthneg-copula", "synthneg-gan")
MODEL_CHOICES = ("mlp", "forest", "boost", "ocsvm")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="stinger", description=__doc__)
    parser.add_argument("--version", action="version", version=f"stinger {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="validate a raw observation table and write it back normalized")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--drop-incomplete-rows", action="store_true")

    p = sub.add_parser("summarize", help="per-beach counts and feature statistics")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", help="also write a JSON report here")

    p = sub.add_parser("augment", help="apply a resampling strategy to a training table")
    p.add_argument("--strategy", required=True, choices=STRATEGY_CHOICES)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k-neighbors", type=int, default=5, help="SMOTE neighbor count")
    p.add_argument("--gan-epochs", type=int, default=300)

    p = sub.add_parser("train", help="fit one model and save it")
    p.add_argument("--model", required=True, choices=MODEL_CHOICES)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--encoding", choices=("raw", "subgroups"), default="raw")
    p.add_argument("--params", default="{}", help="JSON object of parameter overrides")

    p = sub.add_parser("evaluate", help="score a prediction file against ground truth")
    p.add_argument("--pred", required=True, help="CSV with a label column and optional score column")
    p.add_argument("--truth", required=True, help="CSV with a presence (or label) column")
    p.add_argument("--out", dest="output", help="write the metrics document here instead of stdout")

    p = sub.add_parser("experiment", help="run the full multi-run protocol from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--out", dest="output", help="override the configured output directory")
    p.add_argument("--seed", type=int, help="override the master seed")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-figures", action="store_true")

    p = sub.add_parser("analyze", help="export diagnostics (histograms, PCA, correlations) for a table")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--out", dest="output", required=True, help="output directory")
    p.add_argument("--bins", type=int, default=30)
    p.add_argument("--circular-bins", type=int, default=16)
    p.add_argument("--no-figures", action="store_true")

    p = sub.add_parser("fixture", help="generate a synthetic dataset with controlled overlap")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--prevalence", type=float, default=0.06)
    p.add_argument("--overlap", type=float, default=0.7)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", dest="output", required=True)

    return parser


def _cmd_ingest(args) -> int:
    from .ingest import load_observations, save_observations

    ds = load_observations(args.input, drop_incomplete_rows=args.drop_incomplete_rows)
    save_observations(ds, args.output)
    print(f"wrote {len(ds)} rows ({ds.n_presence} presence / {ds.n_absence} absence) to {args.output}")
    return 0


def _cmd_summarize(args) -> int:
    from .ingest import load_observations, summarize

    ds = load_observations(args.input)
    summaries = summarize(ds)
    feature_names = list(summaries[0].feature_stats) if summaries else []
    widths = [12, 9, 8] + [18] * len(feature_names)
    header = ["beach", "presence", "absence"] + feature_names
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for s in summaries:
        cells = [s.beach[:12].ljust(widths[0]), str(s.presence).ljust(widths[1]), str(s.absence).ljust(widths[2])]
        for name, w in zip(feature_names, widths[3:]):
            mean, sd = s.feature_stats[name]
            cells.append(f"{mean:.3f} ({sd:.3f})".ljust(w))
        print("  ".join(cells))

    if args.output:
        doc = {
            s.beach: {
                "presence": s.presence,
                "absence": s.absence,
                "features": {k: {"mean": v[0], "sd": v[1]} for k, v in s.feature_stats.items()},
            }
            for s in summaries
        }
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, sort_keys=True, indent=1)
            fh.write("\n")
    return 0


def _cmd_augment(args) -> int:
    from .augment import ResamplePlan, apply_resample_plan
    from .experiment import STRATEGY_NAMES
    from .gan import GanParams
    from .ingest import load_observations, save_observations

    ds = load_observations(args.input)
    name, backend = STRATEGY_NAMES[args.strategy]
    plan = ResamplePlan(
        strategy=name,
        backend=backend,
        seed=args.seed,
        k_neighbors=args.k_neighbors,
        gan=GanParams(epochs=args.gan_epochs, seed=args.seed) if backend == "gan" else None,
    )
    out = apply_resample_plan(ds, plan)
    save_observations(out, args.output, include_origin=True)
    print(f"{args.strategy}: {len(ds)} rows -> {len(out)} rows ({out.n_presence} presence / {out.n_absence} absence)")
    return 0


def _cmd_train(args) -> int:
    from .errors import ParameterError
    from .ingest import load_observations
    from .models import TRAINERS, save_model

    ds = load_observations(args.input)
    trainer, params_cls = TRAINERS[args.model]
    try:
        overrides = json.loads(args.params)
        if "seed" in params_cls.__dataclass_fields__:
            overrides.setdefault("seed", args.seed)
        params = params_cls(**overrides)
    except (json.JSONDecodeError, TypeError, AttributeError) as exc:
        raise ParameterError(f"bad --params for {args.model}: {exc}") from None
    model = trainer(ds, params, encoding=args.encoding)
    save_model(model, args.output)
    print(f"trained {args.model} on {len(ds)} rows; saved to {args.output}")
    return 0


def _read_label_column(path, candidates=("label", "presence", "prediction")):
    import csv as _csv

    with open(path, newline="", encoding="utf-8") as fh:
        reader = _csv.DictReader(fh)
        rows = list(reader)
    if not rows:
        raise StingerError(f"{path}: no data rows")
    fields = rows[0].keys()
    label_col = next((c for c in candidates if c in fields), None)
    if label_col is None:
        raise StingerError(f"{path}: need one of {candidates} columns")
    try:
        labels = np.array([int(float(r[label_col])) for r in rows])
        scores = np.array([float(r["score"]) for r in rows]) if "score" in fields else None
    except (TypeError, ValueError) as exc:
        raise StingerError(f"{path}: unparseable cell ({exc})") from None
    return labels, scores


def _cmd_evaluate(args) -> int:
    from .evaluation import class_metrics, roc_auc

    predicted, scores = _read_label_column(args.pred)
    actual, _ = _read_label_column(args.truth)
    if predicted.size != actual.size:
        raise StingerError(f"{predicted.size} predictions vs {actual.size} truth rows")
    metrics = class_metrics(actual, predicted)
    doc = metrics.as_dict()
    doc["auc"] = roc_auc(actual, scores) if scores is not None else None
    text = json.dumps(doc, sort_keys=True, indent=1)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


def _cmd_experiment(args) -> int:
    from .experiment import ExperimentConfig, run_experiment

    config = ExperimentConfig.from_json(args.config, out_dir=args.output, master_seed=args.seed)
    if args.no_figures:
        config = replace(config, figures=False)
    failures = run_experiment(config, jobs=args.jobs)
    if failures:
        print(f"{failures} run(s) failed; see per-run reports in {config.out_dir}", file=sys.stderr)
        return 2
    print(f"report tree written to {config.out_dir}")
    return 0


def _cmd_analyze(args) -> int:
    from .analysis import (
        dataset_numeric_columns,
        export_plot_data,
        monthly_presence_counts,
        pca_fit,
        pca_transform,
        pearson_matrix,
        point_biserial,
    )
    from .encoding import MONTH_NAMES, FeatureEncoder
    from .ingest import load_observations
    from .schema import CIRCULAR, CONTINUOUS

    ds = load_observations(args.input)
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)

    for j in ds.schema.indices_of_kind(CONTINUOUS):
        name = ds.schema.names[j]
        export_plot_data("density", out / f"density__{name}.csv", values=ds.X[:, j], bins=args.bins)
    for j in ds.schema.indices_of_kind(CIRCULAR):
        name = ds.schema.names[j]
        export_plot_data("circular", out / f"circular__{name}.csv", angles=ds.X[:, j], bins=args.circular_bins)

    encoder = FeatureEncoder("raw").fit(ds)
    scores = pca_transform(pca_fit(encoder.transform_dataset(ds), 2), encoder.transform_dataset(ds))
    export_plot_data("pca_scatter", out / "pca_scatter__data.csv", scores=scores, labels=ds.y)

    columns = dataset_numeric_columns(ds)
    export_plot_data("pairs", out / "pairs__numeric.csv", columns=columns, labels=ds.y)

    # equal-width level ranges fit on the full table (diagnostic view)
    from .ingest import fit_discretization

    with open(out / "discretization__levels.csv", "w", encoding="utf-8") as fh:
        fh.write("feature,level,low,high\n")
        for j in ds.schema.indices_of_kind(CONTINUOUS):
            name = ds.schema.names[j]
            rule = fit_discretization(ds.X[:, j], source=name)
            for level, lo, hi in zip(rule.labels, rule.edges, rule.edges[1:]):
                fh.write(f"{name},{level},{lo!r},{hi!r}\n")

    names, corr = pearson_matrix(columns)
    with open(out / "correlation__numeric.csv", "w", encoding="utf-8") as fh:
        fh.write("," + ",".join(names) + "\n")
        for i, row_name in enumerate(names):
            fh.write(row_name + "," + ",".join(f"{corr[i, j]:.6f}" for j in range(len(names))) + "\n")

    months = ds.column("month").astype(int)
    pb_rows = []
    for name, col in columns.items():
        if name == "month":
            continue
        row = [name]
        for m in range(1, 13):
            row.append(f"{point_biserial((months == m).astype(float), col):.6f}")
        pb_rows.append(row)
    with open(out / "point_biserial__month.csv", "w", encoding="utf-8") as fh:
        fh.write("feature," + ",".join(MONTH_NAMES) + "\n")
        for row in pb_rows:
            fh.write(",".join(row) + "\n")

    monthly, _ = monthly_presence_counts(ds)
    with open(out / "monthly__presence.csv", "w", encoding="utf-8") as fh:
        fh.write("month,presence_count\n")
        for name, count in zip(MONTH_NAMES, monthly):
            fh.write(f"{name},{int(count)}\n")

    if not args.no_figures:
        from .plots import render_report_figures

        render_report_figures(out)
    print(f"diagnostics written to {out}")
    return 0


def _cmd_fixture(args) -> int:
    from .fixture import FixtureSpec, generate_fixture
    from .ingest import save_observations

    ds = generate_fixture(FixtureSpec(n=args.n, prevalence=args.prevalence, overlap=args.overlap, seed=args.seed))
    save_observations(ds, args.output)
    print(f"wrote {len(ds)} rows ({ds.n_presence} presence / {ds.n_absence} absence) to {args.output}")
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "summarize": _cmd_summarize,
    "augment": _cmd_augment,
    "train": _cmd_train,
    "evaluate": _cmd_evaluate,
    "experiment": _cmd_experiment,
    "analyze": _cmd_analyze,
    "fixture": _cmd_fixture,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed usage/help
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except StingerError as exc:
        print(f"stinger {args.command}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"stinger {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
