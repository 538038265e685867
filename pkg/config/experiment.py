"""
Experiment configuration: one nested document covering data, graphs,
kernels, model, training, detection and seeds.

An empty JSON object reproduces the published settings; any section or
field given in the file overrides the default.
"""
import hashlib
import json
from enum import Enum
from pathlib import Path
from typing import Literal, Optional

from pydantic import BaseModel, Field, ValidationError, model_validator

from core.errors import ConfigError
from core.models import Activation, FaultKind, ModelKind, ScoreLevel

from . import defaults


# ============================================
# ENUMS
# ============================================

class DataSource(str, Enum):
    SYNTHETIC = "synthetic"
    MANIFEST = "manifest"


class DecayMode(str, Enum):
    STEP_LR = "step_lr"
    L2 = "l2"


class BandwidthMode(str, Enum):
    """KDE bandwidth: ``scaled`` multiplies the (3M/4)^-0.4 rule by the score std."""
    ABSOLUTE = "absolute"
    SCALED = "scaled"


# ============================================
# SYNTHETIC DATA
# ============================================

class ToneSpec(BaseModel):
    """One sinusoidal component of the healthy base waveform."""
    frequency_hz: float = Field(gt=0)
    amplitude: float = Field(ge=0)


class FaultSpec(BaseModel):
    """
    One abnormal state of the synthetic machine.

    ``magnitude`` is in units of the base noise sigma for impulse and
    harmonic faults, and is the noise multiplier for noise shifts.
    """
    kind: FaultKind
    count: int = Field(default=20, ge=0)
    magnitude: float = Field(default=5.0, gt=0)
    period: int = Field(default=16, ge=1)
    frequency_hz: Optional[float] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def _harmonic_frequency(self):
        if self.kind == FaultKind.HARMONIC and self.frequency_hz is None:
            raise ValueError("harmonic faults need frequency_hz")
        return self


def _default_tones() -> list[ToneSpec]:
    return [ToneSpec(frequency_hz=160.0, amplitude=1.0), ToneSpec(frequency_hz=400.0, amplitude=0.5)]


def _default_faults() -> list[FaultSpec]:
    # 8 abnormal states x 20 graphs, against 100 normal graphs
    return [
        FaultSpec(kind=FaultKind.IMPULSE, magnitude=5.0, period=16),
        FaultSpec(kind=FaultKind.IMPULSE, magnitude=5.0, period=32),
        FaultSpec(kind=FaultKind.IMPULSE, magnitude=8.0, period=64),
        FaultSpec(kind=FaultKind.HARMONIC, magnitude=3.0, frequency_hz=912.0),
        FaultSpec(kind=FaultKind.HARMONIC, magnitude=4.0, frequency_hz=1488.0),
        FaultSpec(kind=FaultKind.HARMONIC, magnitude=3.0, frequency_hz=2096.0),
        FaultSpec(kind=FaultKind.NOISE_SHIFT, magnitude=3.0),
        FaultSpec(kind=FaultKind.NOISE_SHIFT, magnitude=4.0),
    ]


class SyntheticSpec(BaseModel):
    """Desk-scale stand-in for a test-bench recording campaign."""
    sample_rate: float = Field(default=16384.0, gt=0)
    window_len: int = Field(default=defaults.WINDOW_LEN, ge=1)
    windows_per_signal: int = Field(default=defaults.GRAPH_SIZE, ge=1)
    n_normal: int = Field(default=100, ge=0)
    tones: list[ToneSpec] = Field(default_factory=_default_tones)
    noise_sigma: float = Field(default=0.1, gt=0)
    random_phase: bool = False
    snr_db: Optional[float] = None
    faults: list[FaultSpec] = Field(default_factory=_default_faults)

    @property
    def signal_length(self) -> int:
        return self.window_len * self.windows_per_signal

    @property
    def n_abnormal(self) -> int:
        return sum(f.count for f in self.faults)


# ============================================
# EXPERIMENT SECTIONS
# ============================================

class DataConfig(BaseModel):
    source: DataSource = DataSource.SYNTHETIC
    manifest_path: Optional[Path] = None
    channel: Optional[int] = Field(default=None, ge=0)
    synthetic: SyntheticSpec = Field(default_factory=SyntheticSpec)
    train_frac: float = Field(default=defaults.TRAIN_FRAC, ge=0, le=1)
    val_frac: float = Field(default=defaults.VAL_FRAC, ge=0, le=1)

    @model_validator(mode="after")
    def _fractions(self):
        if self.train_frac + self.val_frac > 1:
            raise ValueError(f"train_frac + val_frac = {self.train_frac + self.val_frac} exceeds 1")
        if self.source == DataSource.MANIFEST and self.manifest_path is None:
            raise ValueError("data.source = manifest needs data.manifest_path")
        return self


class WindowConfig(BaseModel):
    window_len: int = Field(default=defaults.WINDOW_LEN, ge=1)
    graph_size: int = Field(default=defaults.GRAPH_SIZE, ge=2)


class KernelConfig(BaseModel):
    q: float = Field(default=defaults.KERNEL_Q, gt=0)
    gamma: float = Field(default=defaults.KERNEL_GAMMA, gt=0)
    n_scales: int = Field(default=defaults.N_SCALES, ge=1)
    scale_rule: Literal["dyadic"] = defaults.SCALE_RULE


class ModelConfig(BaseModel):
    kind: ModelKind = ModelKind.GWAE
    latent_dim: int = Field(default=defaults.LATENT_DIM, ge=1)
    use_bias: bool = True
    latent_activation: Activation = Activation.RELU


class TrainConfig(BaseModel):
    epochs: int = Field(default=defaults.EPOCHS, ge=0)
    batch_size: int = Field(default=defaults.BATCH_SIZE, ge=1)
    lr: float = Field(default=defaults.LEARNING_RATE, gt=0)
    lr_decay_factor: float = Field(default=defaults.LR_DECAY_FACTOR, gt=0, le=1)
    lr_decay_every: int = Field(default=defaults.LR_DECAY_EVERY, ge=1)
    decay_mode: DecayMode = DecayMode.STEP_LR
    weight_decay: float = Field(default=0.0, ge=0)
    kl_weight: float = Field(default=defaults.KL_WEIGHT, ge=0)
    beta1: float = Field(default=defaults.ADAM_BETA1, ge=0, lt=1)
    beta2: float = Field(default=defaults.ADAM_BETA2, ge=0, lt=1)
    eps_adam: float = Field(default=defaults.ADAM_EPS, gt=0)
    latent_noise_scale: float = Field(default=1.0, ge=0)
    seed: int = Field(default=0, ge=0)


class DetectionConfig(BaseModel):
    delta: float = Field(default=defaults.DELTA, gt=0, lt=1)
    level: ScoreLevel = ScoreLevel.NODE
    stochastic_scoring: bool = False
    bandwidth_mode: BandwidthMode = BandwidthMode.SCALED


class ExperimentConfig(BaseModel):
    """Everything a run needs; validated before any work starts."""
    data: DataConfig = Field(default_factory=DataConfig)
    window: WindowConfig = Field(default_factory=WindowConfig)
    kernel: KernelConfig = Field(default_factory=KernelConfig)
    model: ModelConfig = Field(default_factory=ModelConfig)
    train: TrainConfig = Field(default_factory=TrainConfig)
    detection: DetectionConfig = Field(default_factory=DetectionConfig)
    seeds: list[int] = Field(default_factory=lambda: list(defaults.SEEDS), min_length=1)

    @model_validator(mode="after")
    def _dimension_chain(self):
        if self.data.source == DataSource.SYNTHETIC:
            synth = self.data.synthetic
            if synth.window_len != self.window.window_len:
                raise ValueError(
                    f"synthetic.window_len {synth.window_len} != window.window_len {self.window.window_len}"
                )
            if synth.windows_per_signal < self.window.graph_size:
                raise ValueError(
                    f"synthetic signals hold {synth.windows_per_signal} windows, "
                    f"fewer than graph_size {self.window.graph_size}"
                )
        if any(s < 0 for s in self.seeds):
            raise ValueError(f"seeds must be non-negative: {self.seeds}")
        return self

    @property
    def input_dim(self) -> int:
        return self.window.window_len

    def with_overrides(self, **sections) -> "ExperimentConfig":
        """Copy with dotted overrides, e.g. ``{"train.epochs": 0}``; re-validated."""
        payload = self.model_dump(mode="json")
        for dotted, value in sections.items():
            node = payload
            *parents, leaf = dotted.split(".")
            for key in parents:
                node = node[key]
            node[leaf] = value.value if isinstance(value, Enum) else value
        return build_experiment_config(payload)


def build_experiment_config(payload: dict) -> ExperimentConfig:
    """Validate a raw mapping, turning pydantic errors into ConfigError."""
    try:
        return ExperimentConfig.model_validate(payload)
    except ValidationError as e:
        raise ConfigError(f"invalid experiment config: {e}") from e


def load_experiment_config(path: Optional[Path]) -> ExperimentConfig:
    """
    Load an experiment config from a JSON file.

    Args:
        path: JSON file; None yields the published defaults.

    Returns:
        Validated ExperimentConfig
    """
    if path is None:
        return ExperimentConfig()
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        payload = json.loads(path.read_text(encoding="utf-8") or "{}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"config file {path} is not valid JSON: {e}") from e
    if not isinstance(payload, dict):
        raise ConfigError(f"config file {path} must hold a JSON object")
    return build_experiment_config(payload)


def config_hash(config: BaseModel) -> str:
    """SHA-256 of the canonical sorted-key JSON dump."""
    canonical = json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
