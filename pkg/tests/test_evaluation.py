import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from stinger.errors import DataError
from stinger.evaluation import (
    ConfusionMatrix,
    accuracy,
    aggregate_runs,
    average_precision,
    class_metrics,
    confusion_matrix,
    f1,
    pr_curve,
    precision,
    recall,
    roc_auc,
)


def counting_oracle(actual, predicted):
    """Brute-force metric recount, loop by loop."""
    tp = sum(1 for a, p in zip(actual, predicted) if a == 1 and p == 1)
    tn = sum(1 for a, p in zip(actual, predicted) if a == 0 and p == 0)
    fp = sum(1 for a, p in zip(actual, predicted) if a == 0 and p == 1)
    fn = sum(1 for a, p in zip(actual, predicted) if a == 1 and p == 0)
    prec = tp / (tp + fp) if tp + fp else 0.0
    rec = tp / (tp + fn) if tp + fn else 0.0
    f = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
    acc = (tp + tn) / len(actual) if len(actual) else 0.0
    return (tp, tn, fp, fn), prec, rec, f, acc


def pairwise_auc_oracle(actual, scores):
    """Concordant-pair fraction with half credit for ties."""
    pos = [s for a, s in zip(actual, scores) if a == 1]
    neg = [s for a, s in zip(actual, scores) if a == 0]
    if not pos or not neg:
        return None
    wins = sum(1.0 if p > n else 0.5 if p == n else 0.0 for p in pos for n in neg)
    return wins / (len(pos) * len(neg))


class TestConfusionMatrix:
    def test_forest_baseline_counts(self):
        # frozen counts from the no-augmentation forest run
        actual = [0] * 1268 + [1] * 39 + [0] * 89 + [1] * 8
        predicted = [0] * 1268 + [0] * 39 + [1] * 89 + [1] * 8
        cm = confusion_matrix(actual, predicted)
        assert (cm.tn, cm.fn, cm.fp, cm.tp) == (1268, 39, 89, 8)
        assert accuracy(cm) == pytest.approx(0.9088, abs=1e-4)
        assert recall(cm) == pytest.approx(0.1702, abs=1e-4)
        assert precision(cm) == pytest.approx(0.0825, abs=1e-4)

    def test_all_correct(self):
        cm = confusion_matrix([1, 0, 1, 0, 1, 1, 0, 0, 0, 1], [1, 0, 1, 0, 1, 1, 0, 0, 0, 1])
        assert cm.fp == 0 and cm.fn == 0 and cm.tp + cm.tn == 10

    def test_mlp_synthetic_negative_counts(self):
        cm = ConfusionMatrix(tp=82, tn=44, fp=14, fn=40)
        assert cm.total == 180
        assert recall(cm) == pytest.approx(82 / 122)
        assert precision(cm) == pytest.approx(82 / 96)

    def test_length_mismatch(self):
        with pytest.raises(DataError):
            confusion_matrix([1, 0], [1])


class TestMetrics:
    def test_zero_denominator_convention(self):
        cm = ConfusionMatrix(tp=0, tn=5, fp=0, fn=3)
        assert precision(cm) == 0.0
        assert f1(cm) == 0.0

    def test_f1_fixed_point(self):
        cm = ConfusionMatrix(tp=3, tn=0, fp=1, fn=1)  # precision = recall = 0.75
        assert precision(cm) == recall(cm) == 0.75
        assert f1(cm) == pytest.approx(0.75)

    def test_per_class_report(self):
        m = class_metrics([1, 1, 0, 0], [1, 0, 0, 1])
        assert m.per_class[1]["support"] ==2
        assert m.per_class[0]["precision"] == 0.5
        assert m.accuracy == 0.5

    @given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), min_size=1, max_size=60))
    def test_matches_counting_oracle(self, pairs):
        actual = [a for a, _ in pairs]
        predicted = [p for _, p in pairs]
        (tp, tn, fp, fn), prec, rec, f, acc = counting_oracle(actual, predicted)
        cm = confusion_matrix(actual, predicted)
        assert (cm.tp, cm.tn, cm.fp, cm.fn) == (tp, tn, fp, fn)
        assert precision(cm) == prec and recall(cm) == rec
        assert f1(cm) == f and accuracy(cm) == acc

    @given(st.lists(st.tuples(st.integers(0, 1), st.integers(0, 1)), min_size=1, max_size=60))
    def test_f1_bounded_by_precision_and_recall(self, pairs):
        cm = confusion_matrix([a for a, _ in pairs], [p for _, p in pairs])
        p, r, f = precision(cm), recall(cm), f1(cm)
        if p > 0 and r > 0:
            assert f <= min(2 * p, 2 * r) + 1e-12
            assert min(p, r) - 1e-12 <= f <= max(p, r) + 1e-12


class TestAuc:
    def test_small_example(self):
        assert roc_auc([1, 0, 1, 0], [0.9, 0.8, 0.7, 0.1]) == pytest.approx(0.75)

    def test_perfect_separation(self):
        assert roc_auc([0, 0, 1, 1], [0.1, 0.2, 0.8, 0.9]) == 1.0

    def test_ties_half_credit(self):
        assert roc_auc([1, 0], [0.5, 0.5]) == pytest.approx(0.5)

    def test_single_class_undefined(self):
        assert roc_auc([1, 1, 1], [0.3, 0.5, 0.9]) is None

    @settings(max_examples=60)
    @given(st.lists(st.tuples(st.integers(0, 1), st.floats(0, 1, width=32)), min_size=2, max_size=40))
    def test_matches_pairwise_oracle(self, pairs):
        actual = [a for a, _ in pairs]
        scores = [s for _, s in pairs]
        oracle = pairwise_auc_oracle(actual, scores)
        got = roc_auc(actual, scores)
        if oracle is None:
            assert got is None
        else:
            assert got == pytest.approx(oracle, abs=1e-9)


class TestPrCurve:
    def test_perfect_scores_pin_precision(self):
        points = pr_curve([0, 0, 1, 1], [0.1, 0.2, 0.9, 0.8])
        for r, p in points:
            if r <= 1.0 and p != 1.0:
                assert r == 1.0  # only the all-positives threshold may drop
        assert (1.0, 1.0) in points or points[-1][0] == 1.0

    def test_constant_scores_single_point(self):
        points = pr_curve([1, 0, 0, 0], [0.4, 0.4, 0.4, 0.4])
        assert points == [(1.0, 0.25)]

    def test_recall_sorted_ascending(self):
        rng = np.random.default_rng(0)
        actual = rng.integers(0, 2, 50)
        actual[0], actual[1] = 0, 1
        points = pr_curve(actual, rng.random(50))
        recalls = [r for r, _ in points]
        assert recalls == sorted(recalls)
        assert recalls[-1] == 1.0

    def test_random_scores_ap_near_prevalence(self):
        rng = np.random.default_rng(123)
        actual = (rng.random(1000) < 0.06).astype(int)
        ap = np.mean([average_precision(actual, np.random.default_rng(s).random(1000)) for s in range(10)])
        assert ap == pytest.approx(actual.mean(), abs=0.03)

    def test_single_class_error(self):
        with pytest.raises(DataError):
            pr_curve([1, 1], [0.1, 0.2])


class TestAggregate:
    def test_identical_runs_sd_zero(self):
        agg = aggregate_runs([{"accuracy": 0.8}] * 5)
        assert agg.means["accuracy"] == 0.8
        assert agg.sds["accuracy"] == 0.0

    def test_two_runs(self):
        agg = aggregate_runs([{"accuracy": 0.7}, {"accuracy": 0.9}])
        assert agg.means["accuracy"] == pytest.approx(0.8)
        assert agg.sds["accuracy"] == pytest.approx(np.std([0.7, 0.9], ddof=1))
        assert agg.sds["accuracy"] == pytest.approx(0.1414, abs=1e-4)

    def test_formatting_mirrors_mean_sd_style(self):
        agg = aggregate_runs([{"f1": 0.7754}, {"f1": 0.7748}])
        assert agg.formatted("f1") == "0.775 (0.000)"

    def test_undefined_auc_propagates(self):
        agg = aggregate_runs([{"auc": 0.8}, {"auc": None}])
        assert agg.means["auc"] is None
        assert agg.formatted("auc") == "nan (nan)"

    def test_single_run(self):
        agg = aggregate_runs([{"f1": 0.5}])
        assert agg.n_runs == 1 and agg.sds["f1"] == 0.0
