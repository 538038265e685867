"""
Reverse-mode gradients of the GWAE / GWVAE losses.

The computation graph is fixed (SGWConv stack, optional reparameterization,
two-layer decoder), so each layer type gets a hand-written backward rule.
The GWVAE path treats the recorded epsilon as a constant (pathwise
estimator).
"""
from typing import Optional, Sequence

import numpy as np

from config.defaults import LOGSIGMA_CLAMP
from core.errors import NumericError
from core.models import Activation, LossBreakdown, ModelKind
from graphs.wavelets import PreparedGraph
from gwae.forward import ForwardCache, clamp_logsigma, filter_matrix, forward
from gwae.params import ModelParams

from .losses import loss_gwae, loss_gwvae


def _check_finite(name: str, value: np.ndarray, graph_id: str) -> None:
    if not np.all(np.isfinite(value)):
        raise NumericError(f"non-finite values in {name} (graph {graph_id})")


def _sgwconv_backward(
    params: ModelParams,
    name: str,
    g_pre: np.ndarray,
    H_in: np.ndarray,
    filtered: np.ndarray,
    cache: ForwardCache,
    grads: dict[str, np.ndarray],
) -> np.ndarray:
    """Accumulate theta / weight / bias gradients of one layer; return dLoss/dH_in."""
    layer = params.conv(name)
    P = cache.op.P
    grads[f"{name}.weight"] += filtered.T @ g_pre
    if layer.bias is not None:
        grads[f"{name}.bias"] += g_pre.sum(axis=0)
    g_filtered = g_pre @ layer.weight.T
    g_M = g_filtered @ H_in.T
    grads[f"{name}.theta"] += np.einsum("ki,ij,kj->k", P, g_M, P)
    return filter_matrix(layer.theta, cache.op).T @ g_filtered


def graph_gradients(
    params: ModelParams,
    cache: ForwardCache,
    kl_weight: float,
    grads: dict[str, np.ndarray],
) -> LossBreakdown:
    """Backward pass of one graph, accumulating into ``grads``; returns its loss."""
    if params.kind == ModelKind.GWAE:
        loss = loss_gwae(cache.X, cache.X_hat)
    else:
        loss = loss_gwvae(cache.X, cache.X_hat, cache.mu, cache.logsigma, kl_weight)

    g_xhat = 2.0 * (cache.X_hat - cache.X)

    fc2 = params.affine("dec_fc2")
    grads["dec_fc2.weight"] += cache.D1.T @ g_xhat
    grads["dec_fc2.bias"] += g_xhat.sum(axis=0)
    g_dec = (g_xhat @ fc2.weight.T) * (cache.dec_pre > 0.0)

    fc1 = params.affine("dec_fc1")
    grads["dec_fc1.weight"] += cache.Z.T @ g_dec
    grads["dec_fc1.bias"] += g_dec.sum(axis=0)
    g_z = g_dec @ fc1.weight.T

    if params.kind == ModelKind.GWAE:
        g_pre2 = g_z * (cache.pre2 > 0.0) if params.latent_activation == Activation.RELU else g_z
        g_h1 = _sgwconv_backward(params, "enc2", g_pre2, cache.H1, cache.filt2, cache, grads)
    else:
        sigma = np.exp(clamp_logsigma(cache.logsigma))
        inside = np.abs(cache.logsigma) <= LOGSIGMA_CLAMP
        g_mu = g_z + kl_weight * cache.mu
        g_ls = (g_z * cache.epsilon * sigma + kl_weight * (sigma * sigma - 1.0)) * inside
        g_h1 = _sgwconv_backward(params, "head_mu", g_mu, cache.H1, cache.filt_mu, cache, grads)
        g_h1 = g_h1 + _sgwconv_backward(params, "head_logsigma", g_ls, cache.H1, cache.filt_ls, cache, grads)

    g_pre1 = g_h1 * (cache.pre1 > 0.0)
    _sgwconv_backward(params, "enc1", g_pre1, cache.X, cache.filt1, cache, grads)
    return loss


def gradients(
    params: ModelParams,
    batch: Sequence[PreparedGraph],
    kl_weight: float = 0.0,
    epsilons: Optional[Sequence[Optional[np.ndarray]]] = None,
) -> tuple[LossBreakdown, dict[str, np.ndarray]]:
    """
    Batch-mean loss and its exact gradient with respect to every tensor.

    Args:
        params: Current parameters
        batch: Graphs with their wavelet operators
        kl_weight: lambda_KL (ignored for GWAE)
        epsilons: Recorded standard-normal draws per graph (GWVAE);
            None means epsilon = 0

    Returns:
        (mean LossBreakdown, name -> gradient array)
    """
    if not batch:
        raise ValueError("gradients needs a non-empty batch")
    grads = params.zeros_like()
    l_rc = l_kl = 0.0
    for i, item in enumerate(batch):
        eps = epsilons[i] if epsilons is not None else None
        cache = forward(params, item.X, item.op, eps)
        for name in ("H1", "Z", "X_hat"):
            _check_finite(name, getattr(cache, name), item.graph_id)
        loss = graph_gradients(params, cache, kl_weight, grads)
        l_rc += loss.l_rc
        l_kl += loss.l_kl

    n = len(batch)
    for name, g in grads.items():
        g /= n
        _check_finite(f"grad[{name}]", g, "batch")
    return LossBreakdown(l_rc=l_rc / n, l_kl=l_kl / n, total=(l_rc + l_kl) / n), grads
