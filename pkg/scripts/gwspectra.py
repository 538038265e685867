"""
gwspectra command line.

    python -m scripts.gwspectra synth --out data/
    python -m scripts.gwspectra train --model gwvae --out runs/gwvae
    python -m scripts.gwspectra detect --checkpoint runs/gwvae --data data/
    python -m scripts.gwspectra eval --retrain --config exp.json
    python -m scripts.gwspectra sweep-scales --j-min 2 --j-max 10

Human-readable messages go to stderr; stdout only lists written files.
"""
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Optional

import typer
from rich.progress import BarColumn, MofNCompleteColumn, Progress, TextColumn, TimeElapsedColumn

from config.experiment import DataSource, ExperimentConfig, load_experiment_config
from config.logging_setup import console, setup_logging
from config.settings import get_settings
from core.errors import ConfigError, GwSpectraError
from core.models import ModelKind, ScoreLevel
from detection.kde import density_curve, fit_kde
from evaluation.metrics import aggregate_runs, roc_curve
from pipeline.experiment import (
    RunOutcome,
    detect_with_checkpoint,
    evaluate_checkpoint,
    load_signals,
    run_experiment,
    run_seeds,
    sweep_scales,
)
from signals.ingest import load_csv, load_wav
from storage.checkpoint import CheckpointStore
from storage.exports import (
    read_manifest,
    write_density_csv,
    write_history_csv,
    write_labels_csv,
    write_manifest,
    write_report,
    write_roc_csv,
    write_scores_csv,
    write_sweep_csv,
)
from storage.plots import plot_densities, plot_history, plot_roc, plot_sweep

logger = logging.getLogger("gwspectra")

app = typer.Typer(
    name="gwspectra",
    help="Graph wavelet autoencoders for unsupervised fault detection.",
    no_args_is_help=True,
    add_completion=False,
)


# ============================================
# HELPERS
# ============================================

@contextmanager
def _guarded():
    """Map library errors to exit codes (config 2, data 3, numeric 4, other 1)."""
    try:
        yield
    except GwSpectraError as e:
        _say(f"[{e.category}] {e}", style="bold red")
        raise typer.Exit(code=e.exit_code)
    except typer.Exit:
        raise
    except Exception:
        console.print_exception(show_locals=False)
        raise typer.Exit(code=1)


def _say(message: str, style: Optional[str] = None) -> None:
    console.print(message, style=style, markup=False, highlight=False)


def _emit(*paths: Path) -> None:
    for p in paths:
        typer.echo(str(p))


def _out_dir(out: Optional[Path]) -> Path:
    return get_settings().ensure_directories(out)


def _load_config(
    config: Optional[Path],
    model: Optional[ModelKind] = None,
    epochs: Optional[int] = None,
    data: Optional[Path] = None,
    channel: Optional[int] = None,
    graph_level: bool = False,
) -> ExperimentConfig:
    cfg = load_experiment_config(config or get_settings().config_path)
    overrides = {}
    if model is not None:
        overrides["model.kind"] = model
    if epochs is not None:
        overrides["train.epochs"] = epochs
    if data is not None:
        overrides["data.source"] = DataSource.MANIFEST
        overrides["data.manifest_path"] = str(data)
    if channel is not None:
        overrides["data.channel"] = channel
    if graph_level:
        overrides["detection.level"] = ScoreLevel.GRAPH
    return cfg.with_overrides(**overrides) if overrides else cfg


def _parse_seeds(text: str) -> list[int]:
    try:
        seeds = [int(s) for s in text.split(",") if s.strip()]
    except ValueError as e:
        raise ConfigError(f"--seeds must be comma-separated integers, got {text!r}") from e
    if not seeds or any(s < 0 for s in seeds):
        raise ConfigError(f"--seeds needs at least one non-negative seed, got {text!r}")
    return seeds


def _read_data(path: Path, channel: Optional[int]):
    """A manifest (file or directory) or a single CSV / WAV recording."""
    path = Path(path)
    if path.suffix.lower() == ".wav":
        return [load_wav(path, channel=channel)]
    if path.suffix.lower() == ".csv":
        return [load_csv(path)]
    return read_manifest(path, channel=channel)


def _progress() -> Progress:
    return Progress(
        TextColumn("[TRAIN]", markup=False),
        BarColumn(),
        MofNCompleteColumn(),
        TextColumn("loss {task.fields[loss]}"),
        TimeElapsedColumn(),
        console=console,
        transient=True,
    )


def _train_with_progress(cfg: ExperimentConfig, seed: int, signals=None) -> RunOutcome:
    with _progress() as progress:
        task = progress.add_task("train", total=cfg.train.epochs, loss="-")
        return run_experiment(
            cfg,
            seed,
            signals=signals,
            on_epoch=lambda r: progress.update(task, advance=1, loss=f"{r.train_loss:.4g}"),
        )


def _write_run(outcome: RunOutcome, out_dir: Path) -> list[Path]:
    """Checkpoint, history, scores, densities and ROC of one run."""
    written = [CheckpointStore.save(outcome.checkpoint(), out_dir)]
    history = outcome.result.history
    written.append(write_history_csv(history, out_dir / "history.csv"))
    if history:
        written.append(plot_history(history, out_dir / "history.svg"))
    written.append(write_scores_csv(outcome.test_scores, outcome.predicted(), out_dir / "scores.csv"))

    mode = outcome.config.detection.bandwidth_mode
    curves = {"normal (train)": density_curve(fit_kde(outcome.train_scores, mode))} if len(outcome.train_scores) > 1 else {}
    for name, pick in (("normal (test)", False), ("abnormal (test)", True)):
        subset = [s for s in outcome.test_scores if s.is_abnormal == pick]
        if len(subset) > 1:
            curves[name] = density_curve(fit_kde(subset, mode))
    if curves:
        written.append(write_density_csv(curves, out_dir / "densities.csv"))
        written.append(plot_densities(curves, out_dir / "densities.svg", outcome.threshold.xi_delta))

    if outcome.metrics is not None:
        xi = [s.xi for s in outcome.test_scores]
        labels = [s.true_label for s in outcome.test_scores]
        fpr, tpr, thr = roc_curve(xi, labels)
        written.append(write_roc_csv(fpr, tpr, thr, out_dir / "roc.csv"))
        written.append(plot_roc(fpr, tpr, out_dir / "roc.svg", outcome.metrics.auc))
    return written


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Override GWSPECTRA_LOG_LEVEL"),
) -> None:
    settings = get_settings()
    setup_logging(log_level or settings.log_level, settings.rich_tracebacks)


# ============================================
# COMMANDS
# ============================================

@app.command()
def synth(
    config: Optional[Path] = typer.Option(None, "--config", help="Experiment JSON"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Generator seed (default: first config seed)"),
    out: Optional[Path] = typer.Option(None, "--out", help="Dataset directory"),
) -> None:
    """Generate the labeled synthetic dataset and its manifest."""
    with _guarded():
        cfg = _load_config(config)
        seed = cfg.seeds[0] if seed is None else seed
        out_dir = _out_dir(out)
        signals = load_signals(cfg.with_overrides(**{"data.source": DataSource.SYNTHETIC}), seed)
        manifest = write_manifest(signals, out_dir, spec=cfg.data.synthetic, seed=seed)
        _say(
            f"[CLI] {cfg.data.synthetic.n_normal} normal / {cfg.data.synthetic.n_abnormal} abnormal signals"
        )
        _emit(manifest)


@app.command("train")
def train_cmd(
    config: Optional[Path] = typer.Option(None, "--config", help="Experiment JSON"),
    model: Optional[ModelKind] = typer.Option(None, "--model", help="gwae or gwvae"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Root seed (default: first config seed)"),
    out: Optional[Path] = typer.Option(None, "--out", help="Run directory"),
    epochs: Optional[int] = typer.Option(None, "--epochs", min=0, help="Override train.epochs"),
    data: Optional[Path] = typer.Option(None, "--data", help="Dataset manifest instead of synthesizing"),
    channel: Optional[int] = typer.Option(None, "--channel", min=0, help="WAV channel"),
) -> None:
    """Train on the normal split, fit the KDE threshold and write the checkpoint."""
    with _guarded():
        cfg = _load_config(config, model, epochs, data, channel)
        seed = cfg.seeds[0] if seed is None else seed
        out_dir = _out_dir(out)
        outcome = _train_with_progress(cfg, seed)
        _emit(*_write_run(outcome, out_dir))


@app.command()
def detect(
    checkpoint: Path = typer.Option(..., "--checkpoint", help="Checkpoint file or run directory"),
    data: Path = typer.Option(..., "--data", help="Manifest, CSV or WAV to score"),
    out: Optional[Path] = typer.Option(None, "--out", help="Output directory"),
    channel: Optional[int] = typer.Option(None, "--channel", min=0, help="WAV channel"),
) -> None:
    """Score recordings with a trained checkpoint and its stored threshold."""
    with _guarded():
        ckpt = CheckpointStore.load(checkpoint)
        out_dir = _out_dir(out)
        scores, predicted = detect_with_checkpoint(ckpt, _read_data(data, channel))
        scores_path = write_scores_csv(scores, predicted, out_dir / "scores.csv")
        labels_path = write_labels_csv(scores, predicted, out_dir / "labels.csv")
        flagged = sum(p.value == "abnormal" for p in predicted)
        _say(f"[DETECT] {flagged} / {len(predicted)} flagged abnormal")
        _emit(scores_path, labels_path)


@app.command("eval")
def eval_cmd(
    checkpoint: Optional[Path] = typer.Option(None, "--checkpoint", help="Checkpoint for score-only evaluation"),
    data: Optional[Path] = typer.Option(None, "--data", help="Labeled test manifest / recording"),
    config: Optional[Path] = typer.Option(None, "--config", help="Experiment JSON (retrain mode)"),
    model: Optional[ModelKind] = typer.Option(None, "--model", help="gwae or gwvae (retrain mode)"),
    seeds: Optional[str] = typer.Option(None, "--seeds", help="Comma-separated seeds (retrain mode)"),
    epochs: Optional[int] = typer.Option(None, "--epochs", min=0),
    retrain: bool = typer.Option(False, "--retrain", help="Train a fresh model per seed"),
    graph_level: bool = typer.Option(False, "--graph-level", help="Average node scores per graph"),
    out: Optional[Path] = typer.Option(None, "--out", help="Report directory"),
    channel: Optional[int] = typer.Option(None, "--channel", min=0),
) -> None:
    """AUC / Acc / F1 report, per seed when retraining, with mean and std."""
    with _guarded():
        out_dir = _out_dir(out)
        if retrain:
            cfg = _load_config(config, model, epochs, data, channel, graph_level)
            seed_list = _parse_seeds(seeds) if seeds else cfg.seeds
            report = run_seeds(cfg, seed_list)
        else:
            if checkpoint is None:
                raise ConfigError("score-only evaluation needs --checkpoint (or pass --retrain)")
            ckpt = CheckpointStore.load(checkpoint)
            signals = _read_data(data, channel) if data is not None else None
            level = ScoreLevel.GRAPH if graph_level else None
            metrics, _, _ = evaluate_checkpoint(ckpt, signals, level)
            report = aggregate_runs([metrics], config_hash=ckpt.config_hash, model_kind=ckpt.model_kind)
        for key, value in report.formatted().items():
            _say(f"[EVAL] {key.upper()} {value}")
        _emit(*write_report(report, out_dir))


@app.command("sweep-scales")
def sweep_scales_cmd(
    config: Optional[Path] = typer.Option(None, "--config", help="Experiment JSON"),
    j_min: int = typer.Option(2, "--j-min", min=1),
    j_max: int = typer.Option(10, "--j-max", min=1),
    model: Optional[ModelKind] = typer.Option(None, "--model"),
    seed: Optional[int] = typer.Option(None, "--seed"),
    epochs: Optional[int] = typer.Option(None, "--epochs", min=0),
    out: Optional[Path] = typer.Option(None, "--out"),
) -> None:
    """Train / evaluate once per decomposition scale J in [j_min, j_max]."""
    with _guarded():
        if j_max < j_min:
            raise ConfigError(f"--j-max {j_max} is below --j-min {j_min}")
        cfg = _load_config(config, model, epochs)
        seed = cfg.seeds[0] if seed is None else seed
        out_dir = _out_dir(out)
        rows = sweep_scales(cfg, list(range(j_min, j_max + 1)), seed)
        for r in rows:
            _say(f"[EVAL] J={r.n_scales} AUC={r.auc:.4f} Acc={r.acc:.4f} F1={r.f1:.4f}")
        _emit(write_sweep_csv(rows, out_dir / "sweep.csv"), plot_sweep(rows, out_dir / "sweep.svg"))


if __name__ == "__main__":
    app()
