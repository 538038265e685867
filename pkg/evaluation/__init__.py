# Evaluation module
from .metrics import (
    METRIC_KEYS,
    ConfusionMetrics,
    aggregate_runs,
    auc,
    confusion_metrics,
    metric_set,
    roc_curve,
)

__all__ = [
    "METRIC_KEYS",
    "ConfusionMetrics",
    "aggregate_runs",
    "auc",
    "confusion_metrics",
    "metric_set",
    "roc_curve",
]
