"""
Dataset manifests and plot-ready result files (CSV / JSON).
"""
import hashlib
import json
import logging
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from config.experiment import SyntheticSpec
from core.errors import DataError
from core.models import AnomalyScore, MetricSet, PathGraph, RawSignal, RunReport, SignalLabel
from signals.ingest import load_csv, load_wav

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
SIGNALS_DIR = "signals"


# ============================================
# SIGNALS + MANIFEST
# ============================================

def write_signal_csv(signal: RawSignal, path: Path) -> Path:
    """One amplitude per row under a ``sample`` header."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame({"sample": signal.samples}).to_csv(path, index=False)
    return path


def _manifest_hash(payload: dict, files: Sequence[Path]) -> str:
    digest = hashlib.sha256(json.dumps(payload, sort_keys=True).encode("utf-8"))
    for f in files:
        digest.update(f.read_bytes())
    return digest.hexdigest()


def write_manifest(
    signals: list[RawSignal],
    out_dir: Path,
    spec: Optional[SyntheticSpec] = None,
    seed: Optional[int] = None,
) -> Path:
    """
    Write every signal as CSV plus a manifest describing them.

    Args:
        signals: Labeled signals
        out_dir: Dataset directory
        spec: Generator spec recorded for provenance
        seed: Generator seed recorded for provenance

    Returns:
        Path to ``manifest.json``
    """
    out_dir = Path(out_dir)
    entries, files = [], []
    for s in signals:
        rel = Path(SIGNALS_DIR) / f"{s.source_id}.csv"
        files.append(write_signal_csv(s, out_dir / rel))
        entries.append({
            "file": rel.as_posix(),
            "source_id": s.source_id,
            "label": s.label.value,
            "fault_kind": s.fault_kind,
            "sample_rate": s.sample_rate,
        })
    payload = {
        "signals": entries,
        "counts": {
            "normal": sum(1 for s in signals if not s.is_abnormal),
            "abnormal": sum(1 for s in signals if s.is_abnormal),
        },
        "spec": spec.model_dump(mode="json") if spec is not None else None,
        "seed": seed,
    }
    payload["content_hash"] = _manifest_hash(payload, files)
    path = out_dir / MANIFEST_NAME
    path.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n", encoding="utf-8")
    logger.info("[INGEST] wrote manifest of %d signals to %s", len(signals), path)
    return path


def read_manifest(path: Path, channel: Optional[int] = None) -> list[RawSignal]:
    """
    Load every signal a manifest lists; ``.wav`` files go through the WAV
    decoder, anything else through the CSV loader.
    """
    path = Path(path)
    if path.is_dir():
        path = path / MANIFEST_NAME
    try:
        payload = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise DataError(f"cannot read manifest {path}: {e}") from e
    entries = payload.get("signals") if isinstance(payload, dict) else None
    if not entries:
        raise DataError(f"manifest {path} lists no signals")

    signals = []
    for entry in entries:
        try:
            file = path.parent / entry["file"]
            label = SignalLabel(entry.get("label", SignalLabel.NORMAL.value))
        except (KeyError, ValueError) as e:
            raise DataError(f"bad manifest entry {entry!r} in {path}: {e}") from e
        kwargs = {"label": label, "fault_kind": entry.get("fault_kind"), "source_id": entry.get("source_id")}
        if file.suffix.lower() == ".wav":
            signals.append(load_wav(file, channel=channel, **kwargs))
        else:
            signals.append(load_csv(file, sample_rate=float(entry.get("sample_rate", 1.0)), **kwargs))
    logger.info("[INGEST] loaded %d signals from %s", len(signals), path)
    return signals


# ============================================
# RESULT TABLES
# ============================================

def _write_frame(frame: pd.DataFrame, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False)
    return path


def write_scores_csv(scores: list[AnomalyScore], predicted: list[SignalLabel], path: Path) -> Path:
    """Columns graph_id,node,xi,true,predicted."""
    if len(scores) != len(predicted):
        raise DataError(f"{len(scores)} scores but {len(predicted)} predictions")
    frame = pd.DataFrame({
        "graph_id": [s.graph_id for s in scores],
        "node": [s.node_index for s in scores],
        "xi": [s.xi for s in scores],
        "true": [s.true_label.value for s in scores],
        "predicted": [p.value for p in predicted],
    })
    return _write_frame(frame, path)


def write_history_csv(history, path: Path) -> Path:
    """Columns epoch,train_loss,val_recon,lr from EpochRecords."""
    frame = pd.DataFrame(
        [r.model_dump() for r in history],
        columns=["epoch", "train_loss", "val_recon", "lr"],
    )
    return _write_frame(frame, path)


def write_roc_csv(fpr: np.ndarray, tpr: np.ndarray, thresholds: np.ndarray, path: Path) -> Path:
    return _write_frame(pd.DataFrame({"fpr": fpr, "tpr": tpr, "threshold": thresholds}), path)


def write_density_csv(curves: dict[str, tuple[np.ndarray, np.ndarray]], path: Path) -> Path:
    """Long-format population,xi,density rows for each named KDE curve."""
    frames = [
        pd.DataFrame({"population": name, "xi": grid, "density": density})
        for name, (grid, density) in curves.items()
    ]
    return _write_frame(pd.concat(frames, ignore_index=True), path)


def write_sweep_csv(rows: list[MetricSet], path: Path) -> Path:
    """Columns J,auc,acc,f1,threshold."""
    frame = pd.DataFrame({
        "J": [r.n_scales for r in rows],
        "auc": [r.auc for r in rows],
        "acc": [r.acc for r in rows],
        "f1": [r.f1 for r in rows],
        "threshold": [r.threshold_used for r in rows],
    })
    return _write_frame(frame, path)


def write_report(report: RunReport, out_dir: Path, stem: str = "report") -> tuple[Path, Path]:
    """RunReport as JSON (full dump plus mean±std strings) and one CSV row per run."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    json_path = out_dir / f"{stem}.json"
    payload = {**report.model_dump(mode="json"), "formatted": report.formatted()}
    json_path.write_text(json.dumps(payload, sort_keys=True, indent=1) + "\n", encoding="utf-8")
    csv_path = _write_frame(pd.DataFrame([r.model_dump() for r in report.runs]), out_dir / f"{stem}.csv")
    return json_path, csv_path


def dump_graph(graph: PathGraph, out_dir: Path) -> tuple[Path, Path]:
    """Adjacency and node features as two dense header-less CSVs."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = graph.graph_id.replace("#", "_")
    a_path, x_path = out_dir / f"{stem}_A.csv", out_dir / f"{stem}_X.csv"
    pd.DataFrame(graph.A).to_csv(a_path, index=False, header=False)
    pd.DataFrame(graph.X).to_csv(x_path, index=False, header=False)
    return a_path, x_path


def write_labels_csv(scores: list[AnomalyScore], predicted: list[SignalLabel], path: Path) -> Path:
    """Columns graph_id,node,predicted."""
    frame = pd.DataFrame({
        "graph_id": [s.graph_id for s in scores],
        "node": [s.node_index for s in scores],
        "predicted": [p.value for p in predicted],
    })
    return _write_frame(frame, path)
