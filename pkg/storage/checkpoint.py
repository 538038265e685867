"""
Versioned JSON checkpoints.

Tensors are stored as ``{"shape": [...], "data": [...]}`` with row-major
floats written by Python's shortest round-trip repr, so save -> load ->
save reproduces the file byte for byte.
"""
import json
import logging
from pathlib import Path
from typing import Optional

import numpy as np
from pydantic import BaseModel, Field, ValidationError, model_validator

from config.experiment import KernelConfig, WindowConfig
from core.errors import DataError
from core.models import Activation, ModelKind, NormalizationStats, Threshold
from gwae.params import ModelParams, parameter_shapes

logger = logging.getLogger(__name__)

FORMAT_VERSION = 1


class TensorRecord(BaseModel):
    shape: list[int]
    data: list[float]

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "TensorRecord":
        return cls(shape=list(arr.shape), data=np.asarray(arr, dtype=np.float64).ravel().tolist())

    def to_array(self, name: str) -> np.ndarray:
        expected = int(np.prod(self.shape)) if self.shape else 1
        if len(self.data) != expected:
            raise DataError(f"tensor '{name}' holds {len(self.data)} values, shape {self.shape} needs {expected}")
        return np.array(self.data, dtype=np.float64).reshape(self.shape)


class TrainingMeta(BaseModel):
    epochs_completed: int = Field(ge=0)
    final_lr: float
    seed: int
    split_seed: int


class Checkpoint(BaseModel):
    """Everything needed to score new data with a trained model."""
    format_version: int = FORMAT_VERSION
    model_kind: ModelKind
    input_dim: int
    latent_dim: int
    n_nodes: int
    n_scales: int
    use_bias: bool
    latent_activation: Activation
    tensors: dict[str, TensorRecord]
    kernel: KernelConfig
    window: WindowConfig
    normalization: NormalizationStats
    threshold: Optional[Threshold] = None
    training: TrainingMeta
    config_hash: str = ""
    experiment: dict = Field(default_factory=dict)

    @model_validator(mode="after")
    def _settings_match_model(self):
        if (self.window.window_len, self.window.graph_size) != (self.input_dim, self.n_nodes):
            raise ValueError(
                f"window settings give {self.window.graph_size}x{self.window.window_len} graphs, "
                f"model expects {self.n_nodes}x{self.input_dim}"
            )
        if self.kernel.n_scales != self.n_scales:
            raise ValueError(f"kernel has J={self.kernel.n_scales}, model expects J={self.n_scales}")
        return self

    @classmethod
    def from_params(
        cls,
        params: ModelParams,
        kernel: KernelConfig,
        window: WindowConfig,
        normalization: NormalizationStats,
        training: TrainingMeta,
        threshold: Optional[Threshold] = None,
        config_hash: str = "",
        experiment: Optional[dict] = None,
    ) -> "Checkpoint":
        return cls(
            model_kind=params.kind,
            input_dim=params.input_dim,
            latent_dim=params.latent_dim,
            n_nodes=params.n_nodes,
            n_scales=params.n_scales,
            use_bias=params.use_bias,
            latent_activation=params.latent_activation,
            tensors={name: TensorRecord.from_array(t) for name, t in params.tensors.items()},
            kernel=kernel,
            window=window,
            normalization=normalization,
            threshold=threshold,
            training=training,
            config_hash=config_hash,
            experiment=experiment or {},
        )

    def to_params(self) -> ModelParams:
        """Rebuild ModelParams, checking every tensor against the recorded dimensions."""
        shapes = parameter_shapes(
            self.model_kind,
            self.input_dim,
            self.latent_dim,
            (self.n_scales + 1) * self.n_nodes,
            self.use_bias,
        )
        if set(shapes) != set(self.tensors):
            missing = sorted(set(shapes) - set(self.tensors))
            extra = sorted(set(self.tensors) - set(shapes))
            raise DataError(f"checkpoint tensors do not match a {self.model_kind.value}: missing {missing}, extra {extra}")
        tensors = {}
        for name, shape in shapes.items():
            arr = self.tensors[name].to_array(name)
            if arr.shape != shape:
                raise DataError(f"tensor '{name}' has shape {arr.shape}, expected {shape}")
            tensors[name] = arr
        return ModelParams(
            kind=self.model_kind,
            input_dim=self.input_dim,
            latent_dim=self.latent_dim,
            n_nodes=self.n_nodes,
            n_scales=self.n_scales,
            use_bias=self.use_bias,
            latent_activation=self.latent_activation,
            tensors=tensors,
        )


class CheckpointStore:
    """Read / write checkpoints on the local filesystem."""

    FILENAME = "checkpoint.json"

    @classmethod
    def dumps(cls, checkpoint: Checkpoint) -> str:
        return json.dumps(checkpoint.model_dump(mode="json"), sort_keys=True, indent=1) + "\n"

    @classmethod
    def save(cls, checkpoint: Checkpoint, path: Path) -> Path:
        """
        Write a checkpoint file.

        Args:
            checkpoint: Checkpoint to persist
            path: Target file, or a directory to hold ``checkpoint.json``

        Returns:
            Path of the written file
        """
        path = Path(path)
        if path.is_dir():
            path = path / cls.FILENAME
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(cls.dumps(checkpoint), encoding="utf-8")
        logger.info("[CKPT] saved %s checkpoint to %s", checkpoint.model_kind.value, path)
        return path

    @classmethod
    def load(cls, path: Path) -> Checkpoint:
        path = Path(path)
        if path.is_dir():
            path = path / cls.FILENAME
        try:
            payload = json.loads(path.read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as e:
            raise DataError(f"cannot read checkpoint {path}: {e}") from e
        version = payload.get("format_version") if isinstance(payload, dict) else None
        if version != FORMAT_VERSION:
            raise DataError(f"unsupported checkpoint format_version {version!r} in {path}")
        try:
            checkpoint = Checkpoint.model_validate(payload)
        except ValidationError as e:
            raise DataError(f"invalid checkpoint {path}: {e}") from e
        logger.info("[CKPT] loaded %s checkpoint from %s", checkpoint.model_kind.value, path)
        return checkpoint
