"""
Tests for AUC, confusion metrics, ROC points and seed aggregation.
"""
import numpy as np
import pytest

from core.errors import DataError
from core.models import AnomalyScore, MetricSet, ModelKind, SignalLabel, Threshold
from evaluation.metrics import aggregate_runs, auc, confusion_metrics, metric_set, roc_curve


def _scores(values, labels):
    return [
        AnomalyScore(graph_id=f"g{i}", node_index=0, xi=v, true_label=SignalLabel.ABNORMAL if y else SignalLabel.NORMAL)
        for i, (v, y) in enumerate(zip(values, labels))
    ]


def _run(auc_value, acc, f1, seed):
    return MetricSet(auc=auc_value, acc=acc, f1=f1, threshold_used=1.0, tp=1, fp=0, tn=1, fn=0, seed=seed)


class TestAuc:
    def test_known_value(self):
        assert auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]) == pytest.approx(0.75)

    def test_perfect_and_reversed(self):
        assert auc([1, 2, 3, 4], [0, 0, 1, 1]) == 1.0
        assert auc([4, 3, 2, 1], [0, 0, 1, 1]) == 0.0

    def test_ties_count_half(self):
        assert auc([1.0, 1.0, 1.0, 1.0], [0, 1, 0, 1]) == 0.5
        assert auc([0.0, 1.0, 1.0], [0, 0, 1]) == pytest.approx(0.75)

    def test_accepts_signal_labels(self):
        labels = [SignalLabel.NORMAL, SignalLabel.ABNORMAL]
        assert auc([0.2, 0.9], labels) == 1.0

    def test_needs_both_classes(self):
        with pytest.raises(DataError, match="both classes"):
            auc([0.1, 0.2], [1, 1])

    def test_length_mismatch(self):
        with pytest.raises(DataError):
            auc([0.1, 0.2, 0.3], [0, 1])

    def test_matches_pairwise_count(self, rng):
        for _ in range(200):
            n = int(rng.integers(2, 51))
            x = rng.integers(0, 10, size=n) / 4.0
            y = rng.integers(0, 2, size=n)
            y[:2] = [0, 1]
            pos, neg = x[y == 1], x[y == 0]
            wins = 0.0
            for p in pos:
                for q in neg:
                    wins += 1.0 if p > q else 0.5 if p == q else 0.0
            assert abs(auc(x, y) - wins / (pos.size * neg.size)) <= 1e-12

    def test_invariant_under_increasing_maps(self, rng):
        x = rng.normal(size=40)
        y = np.r_[np.zeros(20), np.ones(20)]
        base = auc(x, y)
        assert auc(np.exp(x), y) == pytest.approx(base, abs=1e-12)
        assert auc(3.0 * x + 7.0, y) == pytest.approx(base, abs=1e-12)
        assert auc(x, 1 - y) == pytest.approx(1.0 - base, abs=1e-12)


class TestConfusion:
    def test_counts(self):
        cm = confusion_metrics([1, 1, 0, 0, 1], [1, 0, 0, 1, 1])
        assert (cm.tp, cm.fp, cm.tn, cm.fn) == (2, 1, 1, 1)
        assert cm.acc == pytest.approx(3 / 5)
        assert cm.f1 == pytest.approx(4 / 6)

    def test_no_positives_anywhere(self):
        cm = confusion_metrics([0, 0], [0, 0])
        assert cm.f1 == 1.0
        assert cm.acc == 1.0

    def test_empty(self):
        with pytest.raises(DataError):
            confusion_metrics([], [])

    def test_metric_set_uses_inclusive_threshold(self):
        scores = _scores([0.1, 0.5, 0.5, 0.9], [0, 0, 1, 1])
        metrics = metric_set(scores, Threshold(xi_delta=0.5, delta=0.1, bandwidth=1.0), seed=3, n_scales=2)
        assert (metrics.tp, metrics.fp, metrics.tn, metrics.fn) == (2, 1, 1, 0)
        assert metrics.auc == pytest.approx(0.875)
        assert metrics.threshold_used == 0.5
        assert (metrics.seed, metrics.n_scales) == (3, 2)


class TestRoc:
    def test_area_matches_auc(self, rng):
        x = rng.normal(size=80).round(1)
        y = rng.integers(0, 2, size=80)
        y[:2] = [0, 1]
        fpr, tpr, thresholds = roc_curve(x, y)
        area = np.sum(np.diff(fpr) * (tpr[1:] + tpr[:-1]) / 2)
        assert area == pytest.approx(auc(x, y))
        assert (fpr[0], tpr[0], thresholds[0]) == (0.0, 0.0, np.inf)
        assert fpr[-1] == tpr[-1] == 1.0
        assert np.all(np.diff(fpr) >= 0) and np.all(np.diff(tpr) >= 0)

    def test_one_point_per_distinct_score(self):
        fpr, tpr, thresholds = roc_curve([0.3, 0.3, 0.7], [0, 1, 1])
        np.testing.assert_array_equal(thresholds, [np.inf, 0.7, 0.3])
        np.testing.assert_allclose(tpr, [0.0, 0.5, 1.0])


class TestAggregate:
    def test_mean_and_sample_std(self):
        report = aggregate_runs([_run(0.9, 0.8, 0.7, 0), _run(0.7, 0.6, 0.5, 1)], "abc", ModelKind.GWAE)
        assert report.mean["auc"] == pytest.approx(0.8)
        assert report.std["auc"] == pytest.approx(np.std([0.9, 0.7], ddof=1))
        assert report.seeds == [0, 1]
        assert not report.single_run
        assert report.formatted()["auc"] == "80.00±14.14"

    def test_single_run_flagged(self, caplog):
        report = aggregate_runs([_run(0.9, 0.8, 0.7, 0)])
        assert report.single_run
        assert report.std == {"auc": 0.0, "acc": 0.0, "f1": 0.0, "threshold_used": 0.0}
        assert "single run" in caplog.text

    def test_no_runs(self):
        with pytest.raises(DataError):
            aggregate_runs([])
