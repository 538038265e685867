# Pipeline module
from .experiment import (
    PreparedData,
    RunOutcome,
    build_graphs,
    detect_with_checkpoint,
    evaluate_checkpoint,
    fit_threshold,
    load_signals,
    prepare_data,
    prepare_for_checkpoint,
    run_experiment,
    run_seeds,
    score_graphs,
    sweep_scales,
)

__all__ = [
    "PreparedData",
    "RunOutcome",
    "build_graphs",
    "detect_with_checkpoint",
    "evaluate_checkpoint",
    "fit_threshold",
    "load_signals",
    "prepare_data",
    "prepare_for_checkpoint",
    "run_experiment",
    "run_seeds",
    "score_graphs",
    "sweep_scales",
]
