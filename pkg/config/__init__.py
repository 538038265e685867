# Config module
from .settings import Settings, get_settings, reset_settings
from .logging_setup import console, setup_logging
from .experiment import (
    BandwidthMode,
    DataConfig,
    DataSource,
    DecayMode,
    DetectionConfig,
    ExperimentConfig,
    FaultSpec,
    KernelConfig,
    ModelConfig,
    SyntheticSpec,
    ToneSpec,
    TrainConfig,
    WindowConfig,
    build_experiment_config,
    config_hash,
    load_experiment_config,
)

__all__ = [
    "Settings",
    "get_settings",
    "reset_settings",
    "console",
    "setup_logging",
    "BandwidthMode",
    "DataConfig",
    "DataSource",
    "DecayMode",
    "DetectionConfig",
    "ExperimentConfig",
    "FaultSpec",
    "KernelConfig",
    "ModelConfig",
    "SyntheticSpec",
    "ToneSpec",
    "TrainConfig",
    "WindowConfig",
    "build_experiment_config",
    "config_hash",
    "load_experiment_config",
]
