"""
Detection metrics with abnormal as the positive class: rank AUC,
thresholded Acc / F1, ROC points and multi-seed aggregation.
"""
import logging
from typing import Optional, Sequence

import numpy as np
from pydantic import BaseModel
from scipy.stats import rankdata

from core.errors import DataError
from core.models import AnomalyScore, MetricSet, ModelKind, RunReport, SignalLabel, Threshold

logger = logging.getLogger(__name__)

METRIC_KEYS = ("auc", "acc", "f1", "threshold_used")


def _as_binary(labels) -> np.ndarray:
    out = []
    for label in labels:
        if isinstance(label, SignalLabel):
            out.append(int(label == SignalLabel.ABNORMAL))
        else:
            out.append(int(bool(label)))
    return np.asarray(out, dtype=np.int64)


def auc(scores: Sequence[float], labels) -> float:
    """
    Mann-Whitney AUC: U / (n_pos * n_neg) from average ranks, ties credited 0.5.

    Args:
        scores: Higher means more anomalous
        labels: 1 / True / SignalLabel.ABNORMAL for positives

    Returns:
        AUC in [0, 1]
    """
    x = np.asarray(scores, dtype=np.float64)
    y = _as_binary(labels)
    if x.shape != y.shape:
        raise DataError(f"{x.size} scores but {y.size} labels")
    n_pos = int(y.sum())
    n_neg = int(y.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise DataError(f"AUC needs both classes, got {n_pos} abnormal / {n_neg} normal")
    ranks = rankdata(x, method="average")
    u = ranks[y == 1].sum() - n_pos * (n_pos + 1) / 2.0
    return float(u / (n_pos * n_neg))


class ConfusionMetrics(BaseModel):
    tp: int
    fp: int
    tn: int
    fn: int
    acc: float
    f1: float


def confusion_metrics(predicted, true) -> ConfusionMetrics:
    """Counts plus Acc and F1; F1 is 1 when there are no positives and none were predicted."""
    p = _as_binary(predicted)
    t = _as_binary(true)
    if p.size == 0:
        raise DataError("confusion metrics need at least one prediction")
    if p.shape != t.shape:
        raise DataError(f"{p.size} predictions but {t.size} labels")
    tp = int(np.sum((p == 1) & (t == 1)))
    fp = int(np.sum((p == 1) & (t == 0)))
    tn = int(np.sum((p == 0) & (t == 0)))
    fn = int(np.sum((p == 0) & (t == 1)))
    denom = 2 * tp + fp + fn
    return ConfusionMetrics(
        tp=tp, fp=fp, tn=tn, fn=fn,
        acc=(tp + tn) / p.size,
        f1=1.0 if denom == 0 else 2 * tp / denom,
    )


def roc_curve(scores: Sequence[float], labels) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    ROC points sweeping the threshold down through every distinct score.

    Returns:
        (fpr, tpr, thresholds), starting at (0, 0) with threshold +inf
    """
    x = np.asarray(scores, dtype=np.float64)
    y = _as_binary(labels)
    n_pos = int(y.sum())
    n_neg = int(y.size - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise DataError("ROC curve needs both classes")
    order = np.argsort(-x, kind="mergesort")
    x, y = x[order], y[order]
    # last index of each run of equal scores
    cut = np.r_[np.nonzero(np.diff(x))[0], x.size - 1]
    tps = np.cumsum(y)[cut]
    fps = (cut + 1) - tps
    fpr = np.r_[0.0, fps / n_neg]
    tpr = np.r_[0.0, tps / n_pos]
    thresholds = np.r_[np.inf, x[cut]]
    return fpr, tpr, thresholds


def metric_set(
    scores: list[AnomalyScore],
    threshold: Threshold,
    seed: Optional[int] = None,
    n_scales: Optional[int] = None,
) -> MetricSet:
    """AUC over the raw scores plus confusion metrics at the stored threshold."""
    if not scores:
        raise DataError("no test scores to evaluate")
    xi = [s.xi for s in scores]
    labels = [s.true_label for s in scores]
    predicted = [v >= threshold.xi_delta for v in xi]
    cm = confusion_metrics(predicted, labels)
    return MetricSet(
        auc=auc(xi, labels),
        acc=cm.acc,
        f1=cm.f1,
        threshold_used=threshold.xi_delta,
        tp=cm.tp, fp=cm.fp, tn=cm.tn, fn=cm.fn,
        seed=seed,
        n_scales=n_scales,
    )


def aggregate_runs(
    runs: list[MetricSet],
    config_hash: str = "",
    model_kind: Optional[ModelKind] = None,
) -> RunReport:
    """Mean and sample (n - 1) standard deviation per metric; one run gives std 0 and is flagged."""
    if not runs:
        raise DataError("no runs to aggregate")
    single = len(runs) == 1
    mean, std = {}, {}
    for key in METRIC_KEYS:
        values = np.array([getattr(r, key) for r in runs], dtype=np.float64)
        mean[key] = float(values.mean())
        std[key] = 0.0 if single else float(values.std(ddof=1))
    if single:
        logger.warning("[EVAL] single run: standard deviation reported as 0")
    return RunReport(
        runs=runs,
        mean=mean,
        std=std,
        seeds=[r.seed for r in runs],
        config_hash=config_hash,
        model_kind=model_kind,
        single_run=single,
    )
