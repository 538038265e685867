"""
Spectral graph wavelet operator.

P stacks one low-pass block u(L) and J band-pass blocks v(s_j L), each an
N x N matrix function of the Laplacian evaluated in its eigenbasis.
"""
from dataclasses import dataclass

import numpy as np

from config.experiment import KernelConfig
from core.errors import NumericError
from core.models import EigenSystem, PathGraph, WaveletOperator

from .eigen import eigendecompose
from .path_graph import laplacian


def scaling_kernel(lam, lambda_max: float, cfg: KernelConfig):
    """Low-pass kernel u(lambda) = gamma * exp(-Q * lambda / (0.6 * lambda_max))."""
    if lambda_max <= 0.0:
        raise NumericError("null spectrum: lambda_max must be positive for the scaling kernel")
    return cfg.gamma * np.exp(-cfg.q * np.asarray(lam, dtype=np.float64) / (0.6 * lambda_max))


def wavelet_kernel(s: float, lam):
    """Band-pass kernel v(s * lambda) = s * lambda * exp(-s * lambda); peaks at e^-1 when s * lambda = 1."""
    x = s * np.asarray(lam, dtype=np.float64)
    return x * np.exp(-x)


def select_scales(lambda_max: float, n_scales: int) -> tuple[float, ...]:
    """Dyadic scales s_j = 2^j / lambda_max, so band j peaks at lambda_max / 2^j."""
    if lambda_max <= 0.0:
        raise NumericError("null spectrum: cannot place wavelet scales when lambda_max = 0")
    if n_scales < 1:
        raise ValueError(f"need at least one band-pass scale, got J={n_scales}")
    return tuple(2.0 ** j / lambda_max for j in range(1, n_scales + 1))


def _matrix_function(eigs: EigenSystem, values: np.ndarray) -> np.ndarray:
    block = (eigs.U * values) @ eigs.U.T
    return 0.5 * (block + block.T)


def build_wavelet_operator(eigs: EigenSystem, cfg: KernelConfig) -> WaveletOperator:
    """
    Stack [u(L); v(s_1 L); ...; v(s_J L)] into a ((J+1)N) x N matrix.

    For a null spectrum (L = 0) every eigenvalue is 0, where the kernels no
    longer depend on lambda_max: the low-pass block is gamma * I and the
    band-pass blocks vanish.
    """
    lam = eigs.eigenvalues
    lambda_max = eigs.lambda_max
    if lambda_max > 0.0:
        scales = select_scales(lambda_max, cfg.n_scales)
        kernels = [scaling_kernel(lam, lambda_max, cfg)] + [wavelet_kernel(s, lam) for s in scales]
    else:
        scales = ()
        kernels = [np.full(lam.shape, cfg.gamma)] + [np.zeros(lam.shape) for _ in range(cfg.n_scales)]

    P = np.vstack([_matrix_function(eigs, k) for k in kernels])
    return WaveletOperator(P=P, scales=scales, lambda_max=lambda_max, n_scales=cfg.n_scales)


def operator_for_graph(graph: PathGraph, cfg: KernelConfig) -> WaveletOperator:
    """Laplacian -> eigensystem -> wavelet operator for one graph."""
    return build_wavelet_operator(eigendecompose(laplacian(graph.A)), cfg)


@dataclass(frozen=True)
class PreparedGraph:
    """A graph paired with its wavelet operator, built once and reused every epoch."""
    graph: PathGraph
    op: WaveletOperator

    @property
    def X(self) -> np.ndarray:
        return self.graph.X

    @property
    def graph_id(self) -> str:
        return self.graph.graph_id


def prepare_graphs(graphs: list[PathGraph], cfg: KernelConfig) -> list[PreparedGraph]:
    return [PreparedGraph(graph=g, op=operator_for_graph(g, cfg)) for g in graphs]
