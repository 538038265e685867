# Core module
from .errors import GwSpectraError, ConfigError, DataError, NumericError
from .rng import RngStreams
from .models import (
    SignalLabel,
    FaultKind,
    ModelKind,
    Activation,
    ScoreLevel,
    RawSignal,
    NormalizationStats,
    PathGraph,
    EigenSystem,
    WaveletOperator,
    DatasetSplit,
    AnomalyScore,
    KdeModel,
    Threshold,
    LossBreakdown,
    MetricSet,
    RunReport,
)

__all__ = [
    "GwSpectraError",
    "ConfigError",
    "DataError",
    "NumericError",
    "RngStreams",
    "SignalLabel",
    "FaultKind",
    "ModelKind",
    "Activation",
    "ScoreLevel",
    "RawSignal",
    "NormalizationStats",
    "PathGraph",
    "EigenSystem",
    "WaveletOperator",
    "DatasetSplit",
    "AnomalyScore",
    "KdeModel",
    "Threshold",
    "LossBreakdown",
    "MetricSet",
    "RunReport",
]
