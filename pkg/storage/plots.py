"""
SVG line charts for training history, ROC curves, score densities and scale sweeps.
"""
import math
from pathlib import Path
from typing import Optional

import matplotlib

matplotlib.use("Agg")
# fixed salt keeps SVG element ids stable between runs
matplotlib.rcParams["svg.hashsalt"] = "gwspectra"

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from core.models import MetricSet  # noqa: E402


def _figure(width: float = 6.0, height: Optional[float] = None):
    """Figure with golden-ratio height and font sizes scaled to the width."""
    golden_ratio = (math.sqrt(5) - 1.0) / 2.0
    fig, ax = plt.subplots(figsize=(width, height or width * golden_ratio))
    ax.tick_params(labelsize=width * 1.6)
    return fig, ax


def _save(fig, ax, path: Path, title: str, xlabel: str, ylabel: str, width: float = 6.0) -> Path:
    ax.set_title(title, fontsize=width * 2.2)
    ax.set_xlabel(xlabel, fontsize=width * 2)
    ax.set_ylabel(ylabel, fontsize=width * 2)
    if ax.get_legend_handles_labels()[0]:
        ax.legend(fontsize=width * 1.6)
    fig.tight_layout()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def plot_history(history, path: Path) -> Path:
    fig, ax = _figure()
    epochs = [r.epoch for r in history]
    ax.plot(epochs, [r.train_loss for r in history], label="train loss")
    val = [r.val_recon for r in history]
    if any(v is not None for v in val):
        ax.plot(epochs, [np.nan if v is None else v for v in val], label="val reconstruction")
    ax.set_yscale("log")
    return _save(fig, ax, path, "Training history", "epoch", "loss")


def plot_roc(fpr: np.ndarray, tpr: np.ndarray, path: Path, auc_value: Optional[float] = None) -> Path:
    fig, ax = _figure()
    label = "ROC" if auc_value is None else f"ROC (AUC = {auc_value:.4f})"
    ax.plot(fpr, tpr, label=label)
    ax.plot([0, 1], [0, 1], linestyle="--", color="grey", linewidth=0.8)
    ax.set_xlim(0, 1)
    ax.set_ylim(0, 1.02)
    return _save(fig, ax, path, "ROC curve", "false positive rate", "true positive rate")


def plot_densities(
    curves: dict[str, tuple[np.ndarray, np.ndarray]],
    path: Path,
    threshold: Optional[float] = None,
) -> Path:
    fig, ax = _figure()
    for name, (grid, density) in curves.items():
        ax.plot(grid, density, label=name)
    if threshold is not None:
        ax.axvline(threshold, color="black", linestyle=":", label="threshold")
    return _save(fig, ax, path, "Anomaly score densities", "anomaly score", "density")


def plot_sweep(rows: list[MetricSet], path: Path) -> Path:
    fig, ax = _figure()
    scales = [r.n_scales for r in rows]
    for key in ("auc", "acc", "f1"):
        ax.plot(scales, [getattr(r, key) for r in rows], marker="o", label=key.upper())
    ax.set_ylim(0, 1.02)
    return _save(fig, ax, path, "Decomposition scale sweep", "J", "score")
