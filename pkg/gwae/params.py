"""
Parameter tensors of the graph wavelet autoencoders.

Tensors live in one flat, ordered name -> array mapping
(``enc1.theta``, ``enc1.weight``, ``enc1.bias``, ...) so the optimizer,
the gradient code and the checkpoint format all walk the same names.
"""
import math
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from core.errors import ConfigError
from core.models import Activation, ModelKind

ENCODER_LAYERS = {
    ModelKind.GWAE: ("enc1", "enc2"),
    ModelKind.GWVAE: ("enc1", "head_mu", "head_logsigma"),
}
DECODER_LAYERS = ("dec_fc1", "dec_fc2")


class SGWConvLayer(BaseModel):
    """One spectral graph wavelet convolution: diagonal wavelet filter + feature weight."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    theta: np.ndarray
    weight: np.ndarray
    bias: Optional[np.ndarray] = None

    @property
    def d_in(self) -> int:
        return int(self.weight.shape[0])

    @property
    def d_out(self) -> int:
        return int(self.weight.shape[1])


class AffineLayer(BaseModel):
    """Fully connected decoder layer."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    weight: np.ndarray
    bias: np.ndarray


class ModelParams(BaseModel):
    """All trainable tensors of a GWAE or GWVAE plus the dimensions they were built for."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    kind: ModelKind
    input_dim: int = Field(ge=1)
    latent_dim: int = Field(ge=1)
    n_nodes: int = Field(ge=2)
    n_scales: int = Field(ge=1)
    use_bias: bool = True
    latent_activation: Activation = Activation.RELU
    tensors: dict[str, np.ndarray]

    @property
    def n_rows(self) -> int:
        """Wavelet coefficient count (J+1)*N, the length of every theta."""
        return (self.n_scales + 1) * self.n_nodes

    def names(self) -> list[str]:
        return list(self.tensors)

    def conv(self, name: str) -> SGWConvLayer:
        return SGWConvLayer(
            theta=self.tensors[f"{name}.theta"],
            weight=self.tensors[f"{name}.weight"],
            bias=self.tensors.get(f"{name}.bias"),
        )

    def affine(self, name: str) -> AffineLayer:
        return AffineLayer(weight=self.tensors[f"{name}.weight"], bias=self.tensors[f"{name}.bias"])

    def count(self) -> int:
        return int(sum(t.size for t in self.tensors.values()))

    def copy(self) -> "ModelParams":
        return self.model_copy(update={"tensors": {k: v.copy() for k, v in self.tensors.items()}})

    def zeros_like(self) -> dict[str, np.ndarray]:
        return {k: np.zeros_like(v) for k, v in self.tensors.items()}


def parameter_shapes(
    kind: ModelKind,
    input_dim: int,
    latent_dim: int,
    n_rows: int,
    use_bias: bool = True,
) -> dict[str, tuple[int, ...]]:
    """Ordered tensor name -> shape for a model of the given kind."""
    d, h = input_dim, latent_dim
    conv_dims = {"enc1": (d, d), "enc2": (d, h), "head_mu": (d, h), "head_logsigma": (d, h)}
    shapes: dict[str, tuple[int, ...]] = {}
    for name in ENCODER_LAYERS[kind]:
        d_in, d_out = conv_dims[name]
        shapes[f"{name}.theta"] = (n_rows,)
        shapes[f"{name}.weight"] = (d_in, d_out)
        if use_bias:
            shapes[f"{name}.bias"] = (d_out,)
    shapes["dec_fc1.weight"] = (h, d)
    shapes["dec_fc1.bias"] = (d,)
    shapes["dec_fc2.weight"] = (d, d)
    shapes["dec_fc2.bias"] = (d,)
    return shapes


def init_params(
    kind: ModelKind,
    input_dim: int,
    latent_dim: int,
    n_nodes: int,
    n_scales: int,
    rng: np.random.Generator,
    use_bias: bool = True,
    latent_activation: Activation = Activation.RELU,
) -> ModelParams:
    """
    Fresh parameters: theta = 1 (identity wavelet filter), weights
    U(-1/sqrt(d_in), 1/sqrt(d_in)), biases 0. Draws follow tensor order.
    """
    if n_nodes < 2 or n_scales < 1:
        raise ConfigError(f"invalid operator size N={n_nodes}, J={n_scales}")
    n_rows = (n_scales + 1) * n_nodes
    tensors: dict[str, np.ndarray] = {}
    for name, shape in parameter_shapes(kind, input_dim, latent_dim, n_rows, use_bias).items():
        if name.endswith(".theta"):
            tensors[name] = np.ones(shape)
        elif name.endswith(".weight"):
            bound = 1.0 / math.sqrt(shape[0])
            tensors[name] = rng.uniform(-bound, bound, size=shape)
        else:
            tensors[name] = np.zeros(shape)
    return ModelParams(
        kind=kind,
        input_dim=input_dim,
        latent_dim=latent_dim,
        n_nodes=n_nodes,
        n_scales=n_scales,
        use_bias=use_bias,
        latent_activation=latent_activation,
        tensors=tensors,
    )
