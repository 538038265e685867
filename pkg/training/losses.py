"""
Reconstruction and KL losses.

Both terms are sums over all nodes and feature / latent dimensions, so the
KL term stays commensurate with the squared-Frobenius reconstruction error.
"""
import numpy as np

from core.models import LossBreakdown
from gwae.forward import clamp_logsigma


def reconstruction_error(X: np.ndarray, X_hat: np.ndarray) -> float:
    """Squared Frobenius norm ||X - X_hat||_F^2."""
    if X.shape != X_hat.shape:
        raise ValueError(f"shape mismatch X {X.shape} vs X_hat {X_hat.shape}")
    return float(np.sum((X - X_hat) ** 2))


def kl_divergence(mu: np.ndarray, logsigma: np.ndarray) -> float:
    """KL(N(mu, sigma^2) || N(0, 1)) summed over entries (unweighted)."""
    ls = clamp_logsigma(logsigma)
    return float(0.5 * np.sum(mu ** 2 + np.exp(2.0 * ls) - 2.0 * ls - 1.0))


def loss_gwae(X: np.ndarray, X_hat: np.ndarray) -> LossBreakdown:
    l_rc = reconstruction_error(X, X_hat)
    return LossBreakdown(l_rc=l_rc, l_kl=0.0, total=l_rc)


def loss_gwvae(
    X: np.ndarray,
    X_hat: np.ndarray,
    mu: np.ndarray,
    logsigma: np.ndarray,
    kl_weight: float,
) -> LossBreakdown:
    """total = L_RC + kl_weight * KL; the stored l_kl is the weighted term."""
    l_rc = reconstruction_error(X, X_hat)
    l_kl = kl_weight * kl_divergence(mu, logsigma)
    return LossBreakdown(l_rc=l_rc, l_kl=l_kl, total=l_rc + l_kl)
