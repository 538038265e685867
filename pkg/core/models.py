"""
Pydantic models for the domain entities passed between packages.

Array-valued fields hold float64 numpy arrays that are copied on
construction and marked read-only, so a built model can be shared
across threads.
"""
from enum import Enum
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


def frozen_array(value, ndim: int, name: str) -> np.ndarray:
    """Copy ``value`` into a read-only float64 array of the given rank."""
    arr = np.array(value, dtype=np.float64)
    if arr.ndim != ndim:
        raise ValueError(f"{name} must be {ndim}-D, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


# ============================================
# ENUMS
# ============================================

class SignalLabel(str, Enum):
    NORMAL = "normal"
    ABNORMAL = "abnormal"


class FaultKind(str, Enum):
    IMPULSE = "impulse"
    HARMONIC = "harmonic"
    NOISE_SHIFT = "noise_shift"


class ModelKind(str, Enum):
    GWAE = "gwae"
    GWVAE = "gwvae"


class Activation(str, Enum):
    RELU = "relu"
    IDENTITY = "identity"


class ScoreLevel(str, Enum):
    NODE = "node"
    GRAPH = "graph"


class _ArrayModel(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)


# ============================================
# SIGNAL MODELS
# ============================================

class RawSignal(_ArrayModel):
    """A 1-D condition-monitoring recording with its health label."""
    samples: np.ndarray
    sample_rate: float = Field(gt=0)
    source_id: str
    label: SignalLabel = SignalLabel.NORMAL
    fault_kind: Optional[str] = None
    metadata: dict = Field(default_factory=dict)

    @field_validator("samples", mode="before")
    @classmethod
    def _samples(cls, value):
        arr = frozen_array(value, 1, "samples")
        if arr.size == 0:
            raise ValueError("samples must be non-empty")
        return arr

    @property
    def length(self) -> int:
        return int(self.samples.shape[0])

    @property
    def is_abnormal(self) -> bool:
        return self.label == SignalLabel.ABNORMAL


class NormalizationStats(BaseModel):
    """Min/max of the training samples used by the max-min normalization."""
    min_val: float
    max_val: float

    @model_validator(mode="after")
    def _ordered(self):
        if self.max_val < self.min_val:
            raise ValueError(f"max_val {self.max_val} < min_val {self.min_val}")
        return self

    @classmethod
    def from_arrays(cls, arrays) -> "NormalizationStats":
        """Fit the stats over every value of the given training arrays."""
        arrays = [np.asarray(a, dtype=np.float64) for a in arrays]
        if not arrays or all(a.size == 0 for a in arrays):
            raise ValueError("cannot fit normalization stats on empty training data")
        return cls(
            min_val=float(min(a.min() for a in arrays if a.size)),
            max_val=float(max(a.max() for a in arrays if a.size)),
        )

    @property
    def is_degenerate(self) -> bool:
        return self.max_val == self.min_val


# ============================================
# GRAPH MODELS
# ============================================

class PathGraph(_ArrayModel):
    """Consecutive signal windows as nodes, joined only to temporal neighbours."""
    graph_id: str
    X: np.ndarray
    A: np.ndarray
    bandwidth: float = Field(ge=0)
    label: SignalLabel = SignalLabel.NORMAL
    fault_kind: Optional[str] = None
    source_id: str = ""
    degenerate: bool = False

    @field_validator("X", "A", mode="before")
    @classmethod
    def _matrices(cls, value, info):
        return frozen_array(value, 2, info.field_name)

    @model_validator(mode="after")
    def _path_topology(self):
        n = self.X.shape[0]
        if self.A.shape != (n, n):
            raise ValueError(f"A has shape {self.A.shape}, expected ({n}, {n})")
        if not np.allclose(self.A, self.A.T, rtol=0.0, atol=1e-15):
            raise ValueError(f"adjacency of graph {self.graph_id} is not symmetric")
        if np.any(np.diag(self.A) != 0.0):
            raise ValueError(f"adjacency of graph {self.graph_id} has self-loops")
        return self

    @property
    def n_nodes(self) -> int:
        return int(self.X.shape[0])

    @property
    def window_len(self) -> int:
        return int(self.X.shape[1])

    @property
    def is_abnormal(self) -> bool:
        return self.label == SignalLabel.ABNORMAL


class EigenSystem(_ArrayModel):
    """Eigenpairs of a symmetric matrix, eigenvalues ascending."""
    U: np.ndarray
    eigenvalues: np.ndarray

    @field_validator("U", mode="before")
    @classmethod
    def _basis(cls, value):
        return frozen_array(value, 2, "U")

    @field_validator("eigenvalues", mode="before")
    @classmethod
    def _values(cls, value):
        return frozen_array(value, 1, "eigenvalues")

    @model_validator(mode="after")
    def _ascending(self):
        if self.U.shape != (self.eigenvalues.size, self.eigenvalues.size):
            raise ValueError(f"U shape {self.U.shape} does not match {self.eigenvalues.size} eigenvalues")
        if np.any(np.diff(self.eigenvalues) < 0):
            raise ValueError("eigenvalues must be ascending")
        return self

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1]) if self.eigenvalues.size else 0.0

    def reconstruct(self) -> np.ndarray:
        return (self.U * self.eigenvalues) @ self.U.T


class WaveletOperator(_ArrayModel):
    """Stacked low-pass and band-pass filter matrices of one graph."""
    P: np.ndarray
    scales: tuple[float, ...]
    lambda_max: float
    n_scales: int = Field(ge=1)

    @field_validator("P", mode="before")
    @classmethod
    def _stack(cls, value):
        return frozen_array(value, 2, "P")

    @model_validator(mode="after")
    def _block_shape(self):
        n = self.P.shape[1]
        if self.P.shape[0] != (self.n_scales + 1) * n:
            raise ValueError(
                f"P has shape {self.P.shape}, expected ({(self.n_scales + 1) * n}, {n}) for J={self.n_scales}"
            )
        return self

    @property
    def n_nodes(self) -> int:
        return int(self.P.shape[1])

    @property
    def n_rows(self) -> int:
        return int(self.P.shape[0])

    def blocks(self) -> list[np.ndarray]:
        """The J+1 N×N filter blocks, low-pass first."""
        n = self.n_nodes
        return [self.P[b * n:(b + 1) * n] for b in range(self.n_scales + 1)]


class DatasetSplit(BaseModel):
    """Train/val hold normal graphs only; test gets the rest."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    train: list[PathGraph]
    val: list[PathGraph]
    test: list[PathGraph]
    seed: int = 0

    @model_validator(mode="after")
    def _normal_only(self):
        for name in ("train", "val"):
            bad = [g.graph_id for g in getattr(self, name) if g.is_abnormal]
            if bad:
                raise ValueError(f"{name} split contains abnormal graphs: {bad[:3]}")
        return self


# ============================================
# DETECTION MODELS
# ============================================

class AnomalyScore(BaseModel):
    """Reconstruction-error score of one node (or one graph at graph level)."""
    graph_id: str
    node_index: int
    xi: float = Field(ge=0)
    true_label: SignalLabel

    @property
    def is_abnormal(self) -> bool:
        return self.true_label == SignalLabel.ABNORMAL


class KdeModel(_ArrayModel):
    """Gaussian kernel density over validation scores."""
    centers: np.ndarray
    bandwidth: float = Field(gt=0)

    @field_validator("centers", mode="before")
    @classmethod
    def _centers(cls, value):
        arr = frozen_array(value, 1, "centers")
        if arr.size < 2:
            raise ValueError(f"KDE needs at least 2 scores, got {arr.size}")
        return arr

    @property
    def n_centers(self) -> int:
        return int(self.centers.size)


class Threshold(BaseModel):
    """Decision threshold solved from the KDE's cumulative distribution."""
    xi_delta: float
    delta: float = Field(gt=0, lt=1)
    bandwidth: float = Field(gt=0)
    level: ScoreLevel = ScoreLevel.NODE


class LossBreakdown(BaseModel):
    """Loss terms of one graph or one batch; l_kl is already weighted."""
    l_rc: float
    l_kl: float = 0.0
    total: float

    @model_validator(mode="after")
    def _finite(self):
        if not all(np.isfinite(v) for v in (self.l_rc, self.l_kl, self.total)):
            raise ValueError(f"non-finite loss: rc={self.l_rc} kl={self.l_kl}")
        return self


# ============================================
# METRIC MODELS
# ============================================

class MetricSet(BaseModel):
    """Threshold-free AUC plus thresholded Acc/F1 of one run."""
    auc: float = Field(ge=0, le=1)
    acc: float = Field(ge=0, le=1)
    f1: float = Field(ge=0, le=1)
    threshold_used: float
    tp: int = Field(ge=0)
    fp: int = Field(ge=0)
    tn: int = Field(ge=0)
    fn: int = Field(ge=0)
    seed: Optional[int] = None
    n_scales: Optional[int] = None


class RunReport(BaseModel):
    """Per-seed metric sets with mean and sample standard deviation."""
    runs: list[MetricSet]
    mean: dict[str, float]
    std: dict[str, float]
    seeds: list[Optional[int]]
    config_hash: str = ""
    model_kind: Optional[ModelKind] = None
    single_run: bool = False

    def formatted(self) -> dict[str, str]:
        """Metric name -> 'mean±std' in percent, as results tables print them."""
        return {
            key: f"{100 * self.mean[key]:.2f}±{100 * self.std[key]:.2f}"
            for key in ("auc", "acc", "f1")
        }
