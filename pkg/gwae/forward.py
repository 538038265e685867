"""
Forward pass of GWAE / GWVAE.

SGWConv maps node features X (N x d_in) to
act(P^T diag(theta) P X W + b): analysis by the wavelet operator,
a learnable diagonal filter on the (J+1)N coefficients, synthesis by P^T,
then a per-layer feature weight.
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
from pydantic import BaseModel, ConfigDict

from config.defaults import LOGSIGMA_CLAMP
from core.errors import DataError
from core.models import Activation, ModelKind, WaveletOperator

from .params import ModelParams, SGWConvLayer


class LatentState(BaseModel):
    """Latent codes of one graph: Z for GWAE, (mu, logsigma, z_sample, epsilon) for GWVAE."""
    model_config = ConfigDict(arbitrary_types_allowed=True)

    Z: Optional[np.ndarray] = None
    mu: Optional[np.ndarray] = None
    logsigma: Optional[np.ndarray] = None
    z_sample: Optional[np.ndarray] = None
    epsilon: Optional[np.ndarray] = None

    @property
    def code(self) -> np.ndarray:
        """What the decoder consumes."""
        return self.Z if self.Z is not None else self.z_sample


def _activate(x: np.ndarray, activation: Activation) -> np.ndarray:
    return np.maximum(x, 0.0) if activation == Activation.RELU else x


def filter_matrix(theta: np.ndarray, op: WaveletOperator) -> np.ndarray:
    """N x N matrix P^T diag(theta) P (symmetric)."""
    if theta.shape != (op.n_rows,):
        raise DataError(f"theta has length {theta.shape[0]}, wavelet operator has {op.n_rows} rows")
    return op.P.T @ (theta[:, None] * op.P)


def sgwconv_forward(
    layer: SGWConvLayer,
    X: np.ndarray,
    op: WaveletOperator,
    activation: Activation = Activation.RELU,
) -> np.ndarray:
    """One SGWConv layer; returns the activated N x d_out output."""
    _, pre = _sgwconv_pre(layer, X, op)
    return _activate(pre, activation)


def _sgwconv_pre(layer: SGWConvLayer, X: np.ndarray, op: WaveletOperator) -> tuple[np.ndarray, np.ndarray]:
    if X.ndim != 2 or X.shape[0] != op.n_nodes:
        raise DataError(f"input has shape {X.shape}, operator expects {op.n_nodes} nodes")
    if X.shape[1] != layer.d_in:
        raise DataError(f"input has {X.shape[1]} features, layer expects d_in={layer.d_in}")
    filtered = filter_matrix(layer.theta, op) @ X
    pre = filtered @ layer.weight
    if layer.bias is not None:
        pre = pre + layer.bias
    return filtered, pre


def encode_gwae(params: ModelParams, X: np.ndarray, op: WaveletOperator) -> LatentState:
    """Two stacked SGWConv layers, ReLU after each (the second is switchable)."""
    H1 = sgwconv_forward(params.conv("enc1"), X, op, Activation.RELU)
    Z = sgwconv_forward(params.conv("enc2"), H1, op, params.latent_activation)
    return LatentState(Z=Z)


def encode_gwvae(params: ModelParams, X: np.ndarray, op: WaveletOperator) -> tuple[np.ndarray, np.ndarray]:
    """Shared ReLU layer feeding two linear heads: (mu, logsigma)."""
    H1 = sgwconv_forward(params.conv("enc1"), X, op, Activation.RELU)
    mu = sgwconv_forward(params.conv("head_mu"), H1, op, Activation.IDENTITY)
    logsigma = sgwconv_forward(params.conv("head_logsigma"), H1, op, Activation.IDENTITY)
    return mu, logsigma


def clamp_logsigma(logsigma: np.ndarray) -> np.ndarray:
    return np.clip(logsigma, -LOGSIGMA_CLAMP, LOGSIGMA_CLAMP)


def reparameterize(mu: np.ndarray, logsigma: np.ndarray, epsilon: np.ndarray) -> np.ndarray:
    """z = mu + exp(logsigma) * epsilon, logsigma clamped to [-10, 10]."""
    if not (mu.shape == logsigma.shape == epsilon.shape):
        raise DataError(f"shape mismatch mu {mu.shape}, logsigma {logsigma.shape}, epsilon {epsilon.shape}")
    return mu + np.exp(clamp_logsigma(logsigma)) * epsilon


def decode(params: ModelParams, Z: np.ndarray) -> np.ndarray:
    """Per-node two-layer perceptron: fc2(relu(fc1(Z))), linear output."""
    if Z.ndim != 2 or Z.shape[1] != params.latent_dim:
        raise DataError(f"latent has shape {Z.shape}, decoder expects {params.latent_dim} features")
    fc1, fc2 = params.affine("dec_fc1"), params.affine("dec_fc2")
    return np.maximum(Z @ fc1.weight + fc1.bias, 0.0) @ fc2.weight + fc2.bias


# ============================================
# CACHED FORWARD (used by backprop)
# ============================================

@dataclass
class ForwardCache:
    """Every intermediate the backward pass needs for one graph."""
    X: np.ndarray
    op: WaveletOperator
    filt1: np.ndarray
    pre1: np.ndarray
    H1: np.ndarray
    filt2: Optional[np.ndarray] = None
    pre2: Optional[np.ndarray] = None
    filt_mu: Optional[np.ndarray] = None
    mu: Optional[np.ndarray] = None
    filt_ls: Optional[np.ndarray] = None
    logsigma: Optional[np.ndarray] = None
    epsilon: Optional[np.ndarray] = None
    Z: Optional[np.ndarray] = None
    dec_pre: Optional[np.ndarray] = None
    D1: Optional[np.ndarray] = None
    X_hat: Optional[np.ndarray] = None


def forward(
    params: ModelParams,
    X: np.ndarray,
    op: WaveletOperator,
    epsilon: Optional[np.ndarray] = None,
) -> ForwardCache:
    """
    Full forward pass keeping intermediates.

    For GWVAE, ``epsilon`` is the recorded standard-normal draw; None means
    the deterministic mean latent (epsilon = 0).
    """
    X = np.asarray(X, dtype=np.float64)
    filt1, pre1 = _sgwconv_pre(params.conv("enc1"), X, op)
    cache = ForwardCache(X=X, op=op, filt1=filt1, pre1=pre1, H1=np.maximum(pre1, 0.0))

    if params.kind == ModelKind.GWAE:
        cache.filt2, cache.pre2 = _sgwconv_pre(params.conv("enc2"), cache.H1, op)
        cache.Z = _activate(cache.pre2, params.latent_activation)
    else:
        cache.filt_mu, cache.mu = _sgwconv_pre(params.conv("head_mu"), cache.H1, op)
        cache.filt_ls, cache.logsigma = _sgwconv_pre(params.conv("head_logsigma"), cache.H1, op)
        cache.epsilon = np.zeros_like(cache.mu) if epsilon is None else np.asarray(epsilon, dtype=np.float64)
        cache.Z = reparameterize(cache.mu, cache.logsigma, cache.epsilon)

    fc1, fc2 = params.affine("dec_fc1"), params.affine("dec_fc2")
    cache.dec_pre = cache.Z @ fc1.weight + fc1.bias
    cache.D1 = np.maximum(cache.dec_pre, 0.0)
    cache.X_hat = cache.D1 @ fc2.weight + fc2.bias
    return cache


def reconstruct(
    params: ModelParams,
    X: np.ndarray,
    op: WaveletOperator,
    epsilon: Optional[np.ndarray] = None,
) -> np.ndarray:
    """X_hat for one graph (GWVAE uses the mean latent unless epsilon is given)."""
    return forward(params, X, op, epsilon).X_hat
