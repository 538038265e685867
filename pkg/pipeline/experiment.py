"""
End-to-end detection runs: signals -> graphs -> split -> normalize ->
wavelet operators -> train -> validation threshold -> test metrics.

Every CLI command is a thin wrapper around the functions here.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Optional

from config.experiment import (
    DataSource,
    DetectionConfig,
    ExperimentConfig,
    WindowConfig,
    build_experiment_config,
    config_hash,
)
from core.errors import DataError
from core.models import (
    AnomalyScore,
    DatasetSplit,
    KdeModel,
    MetricSet,
    NormalizationStats,
    PathGraph,
    RawSignal,
    RunReport,
    ScoreLevel,
    SignalLabel,
    Threshold,
)
from core.rng import RngStreams
from detection.kde import classify, fit_kde, solve_threshold
from detection.scoring import anomaly_scores, at_level
from evaluation.metrics import aggregate_runs, metric_set
from graphs.path_graph import graphs_from_signal, normalize_graph
from graphs.wavelets import PreparedGraph, prepare_graphs
from gwae.params import ModelParams
from signals.ingest import split_dataset
from signals.synthetic import generate_synthetic
from storage.checkpoint import Checkpoint, TrainingMeta
from storage.exports import read_manifest
from training.trainer import EpochRecord, TrainResult, train

logger = logging.getLogger(__name__)


# ============================================
# DATA PREPARATION
# ============================================

def load_signals(config: ExperimentConfig, seed: int) -> list[RawSignal]:
    """Synthesize with ``seed`` or read the configured manifest."""
    if config.data.source == DataSource.SYNTHETIC:
        return generate_synthetic(config.data.synthetic, seed)
    return read_manifest(config.data.manifest_path, channel=config.data.channel)


def build_graphs(signals: list[RawSignal], window_cfg: WindowConfig) -> tuple[list[PathGraph], list[PathGraph]]:
    """Raw (un-normalized) PathGraphs split into normal and abnormal lists."""
    normal, abnormal = [], []
    for s in signals:
        (abnormal if s.is_abnormal else normal).extend(graphs_from_signal(s, window_cfg))
    logger.info("[GRAPH] built %d normal / %d abnormal graphs", len(normal), len(abnormal))
    return normal, abnormal


@dataclass
class PreparedData:
    """A split with normalized graphs and their wavelet operators."""
    split: DatasetSplit
    stats: NormalizationStats
    train: list[PreparedGraph]
    val: list[PreparedGraph]
    test: list[PreparedGraph]


def prepare_data(config: ExperimentConfig, signals: list[RawSignal], seed: int) -> PreparedData:
    """
    Split on raw graphs, fit max-min stats on the training graphs only,
    normalize every split with them and precompute the operators.
    """
    normal, abnormal = build_graphs(signals, config.window)
    raw = split_dataset(normal, abnormal, config.data.train_frac, config.data.val_frac, seed)
    if not raw.train:
        raise DataError("training split is empty; add normal signals or raise train_frac")
    stats = NormalizationStats.from_arrays([g.X for g in raw.train])

    def _norm(graphs: list[PathGraph]) -> list[PathGraph]:
        return [normalize_graph(g, stats) for g in graphs]

    split = DatasetSplit(train=_norm(raw.train), val=_norm(raw.val), test=_norm(raw.test), seed=seed)
    return PreparedData(
        split=split,
        stats=stats,
        train=prepare_graphs(split.train, config.kernel),
        val=prepare_graphs(split.val, config.kernel),
        test=prepare_graphs(split.test, config.kernel),
    )


# ============================================
# THRESHOLD + SCORING
# ============================================

def score_graphs(
    params: ModelParams,
    graphs: list[PreparedGraph],
    detection: DetectionConfig,
    seed: int = 0,
) -> list[AnomalyScore]:
    """Scores at the configured level (node, or mean per graph)."""
    rng = RngStreams(seed).stream("score") if detection.stochastic_scoring else None
    return at_level(anomaly_scores(params, graphs, detection.stochastic_scoring, rng), detection.level)


def fit_threshold(
    params: ModelParams,
    val_graphs: list[PreparedGraph],
    detection: DetectionConfig,
    seed: int = 0,
) -> tuple[KdeModel, Threshold, list[AnomalyScore]]:
    """KDE over validation scores and the threshold at ``detection.delta``."""
    if not val_graphs:
        raise DataError("validation split is empty; the threshold is fitted on validation scores")
    val_scores = score_graphs(params, val_graphs, detection, seed)
    kde = fit_kde(val_scores, detection.bandwidth_mode)
    return kde, solve_threshold(kde, detection.delta, detection.level), val_scores


# ============================================
# RUNS
# ============================================

@dataclass
class RunOutcome:
    config: ExperimentConfig
    seed: int
    data: PreparedData
    result: TrainResult
    kde: KdeModel
    threshold: Threshold
    val_scores: list[AnomalyScore]
    test_scores: list[AnomalyScore]
    metrics: Optional[MetricSet] = None
    train_scores: list[AnomalyScore] = field(default_factory=list)

    @property
    def params(self) -> ModelParams:
        return self.result.params

    def predicted(self) -> list[SignalLabel]:
        return classify(self.test_scores, self.threshold)

    def checkpoint(self) -> Checkpoint:
        return Checkpoint.from_params(
            self.params,
            kernel=self.config.kernel,
            window=self.config.window,
            normalization=self.data.stats,
            training=TrainingMeta(
                epochs_completed=self.result.epochs_completed,
                final_lr=self.result.final_lr,
                seed=self.seed,
                split_seed=self.data.split.seed,
            ),
            threshold=self.threshold,
            config_hash=config_hash(self.config),
            experiment=self.config.model_dump(mode="json"),
        )


def run_experiment(
    config: ExperimentConfig,
    seed: int,
    signals: Optional[list[RawSignal]] = None,
    on_epoch: Optional[Callable[[EpochRecord], None]] = None,
) -> RunOutcome:
    """
    One complete run rooted at ``seed``.

    Args:
        config: Experiment settings
        seed: Root seed for data synthesis, split, init, batching and epsilon
        signals: Pre-loaded signals (skips load_signals)
        on_epoch: Per-epoch progress hook

    Returns:
        RunOutcome; ``metrics`` is None when the test split lacks a class
    """
    signals = signals if signals is not None else load_signals(config, seed)
    data = prepare_data(config, signals, seed)
    train_cfg = config.train.model_copy(update={"seed": seed})
    result = train(config.model.kind, data.train, data.val, train_cfg, config.model, on_epoch=on_epoch)

    kde, threshold, val_scores = fit_threshold(result.params, data.val, config.detection, seed)
    test_scores = score_graphs(result.params, data.test, config.detection, seed)
    train_scores = score_graphs(result.params, data.train, config.detection, seed)

    metrics = None
    labels = {s.true_label for s in test_scores}
    if len(labels) == 2:
        metrics = metric_set(test_scores, threshold, seed=seed, n_scales=config.kernel.n_scales)
        logger.info(
            "[EVAL] seed %d J=%d: AUC=%.4f Acc=%.4f F1=%.4f",
            seed, config.kernel.n_scales, metrics.auc, metrics.acc, metrics.f1,
        )
    else:
        logger.warning("[EVAL] seed %d: test split holds a single class, metrics skipped", seed)

    return RunOutcome(
        config=config,
        seed=seed,
        data=data,
        result=result,
        kde=kde,
        threshold=threshold,
        val_scores=val_scores,
        test_scores=test_scores,
        metrics=metrics,
        train_scores=train_scores,
    )


def run_seeds(
    config: ExperimentConfig,
    seeds: Optional[list[int]] = None,
    on_run: Optional[Callable[[RunOutcome], None]] = None,
) -> RunReport:
    """Repeat run_experiment per seed and aggregate the metric sets."""
    seeds = list(seeds if seeds is not None else config.seeds)
    runs = []
    for seed in seeds:
        outcome = run_experiment(config, seed)
        if outcome.metrics is None:
            raise DataError(f"seed {seed}: test split needs both normal and abnormal graphs")
        runs.append(outcome.metrics)
        if on_run is not None:
            on_run(outcome)
    return aggregate_runs(runs, config_hash=config_hash(config), model_kind=config.model.kind)


def sweep_scales(
    config: ExperimentConfig,
    scales: list[int],
    seed: int,
    on_run: Optional[Callable[[RunOutcome], None]] = None,
) -> list[MetricSet]:
    """Train and evaluate once per decomposition scale J at a fixed seed."""
    if not scales or any(j < 1 for j in scales):
        raise DataError(f"invalid scale range {scales}")
    signals = load_signals(config, seed)
    rows = []
    for j in scales:
        outcome = run_experiment(config.with_overrides(**{"kernel.n_scales": j}), seed, signals=signals)
        if outcome.metrics is None:
            raise DataError(f"J={j}: test split needs both normal and abnormal graphs")
        rows.append(outcome.metrics)
        if on_run is not None:
            on_run(outcome)
    return rows


# ============================================
# CHECKPOINT SCORING
# ============================================

def prepare_for_checkpoint(checkpoint: Checkpoint, signals: list[RawSignal]) -> list[PreparedGraph]:
    """Graphs of new data windowed with the stored settings and normalized with the stored stats."""
    if not signals:
        raise DataError("no signals to score")
    graphs = []
    for s in signals:
        graphs.extend(graphs_from_signal(s, checkpoint.window))
    normalized = [normalize_graph(g, checkpoint.normalization) for g in graphs]
    return prepare_graphs(normalized, checkpoint.kernel)


def detect_with_checkpoint(
    checkpoint: Checkpoint,
    signals: list[RawSignal],
    detection: Optional[DetectionConfig] = None,
) -> tuple[list[AnomalyScore], list[SignalLabel]]:
    """Score new signals and label them with the stored threshold."""
    if checkpoint.threshold is None:
        raise DataError("checkpoint carries no threshold")
    detection = detection or DetectionConfig(level=checkpoint.threshold.level)
    if detection.level != checkpoint.threshold.level:
        raise DataError(
            f"threshold was fitted on {checkpoint.threshold.level.value}-level scores, "
            f"asked for {detection.level.value}"
        )
    graphs = prepare_for_checkpoint(checkpoint, signals)
    scores = score_graphs(checkpoint.to_params(), graphs, detection, checkpoint.training.seed)
    predicted = classify(scores, checkpoint.threshold)
    flagged = sum(p == SignalLabel.ABNORMAL for p in predicted)
    logger.info("[DETECT] %d of %d scores flagged abnormal (%.1f%%)", flagged, len(scores), 100.0 * flagged / len(scores))
    return scores, predicted


def evaluate_checkpoint(
    checkpoint: Checkpoint,
    signals: Optional[list[RawSignal]] = None,
    level: Optional[ScoreLevel] = None,
) -> tuple[MetricSet, list[AnomalyScore], Threshold]:
    """
    Score-only evaluation of a trained model.

    With ``signals`` every graph they yield is treated as labeled test
    data and scored against the stored threshold. Without them the run
    that produced the checkpoint is rebuilt from its recorded experiment
    and seed, and its test split is scored; switching the score level
    then refits the threshold on that run's validation split.
    """
    if checkpoint.threshold is None:
        raise DataError("checkpoint carries no threshold")
    level = level or checkpoint.threshold.level
    params = checkpoint.to_params()
    seed = checkpoint.training.seed

    if signals is not None:
        scores, _ = detect_with_checkpoint(checkpoint, signals, DetectionConfig(level=level))
        threshold = checkpoint.threshold
    else:
        if not checkpoint.experiment:
            raise DataError("checkpoint records no experiment; pass labeled data to score")
        config = build_experiment_config(checkpoint.experiment)
        config = config.with_overrides(**{"detection.level": level})
        data = prepare_data(config, load_signals(config, checkpoint.training.split_seed), checkpoint.training.split_seed)
        if not data.test:
            raise DataError("rebuilt test split is empty")
        threshold = checkpoint.threshold
        if level != threshold.level:
            _, threshold, _ = fit_threshold(params, data.val, config.detection, seed)
        scores = score_graphs(params, data.test, config.detection, seed)

    return metric_set(scores, threshold, seed=seed, n_scales=checkpoint.n_scales), scores, threshold
