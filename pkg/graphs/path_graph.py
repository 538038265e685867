"""
PathGraph construction from consecutive signal windows.
"""
import logging

import numpy as np

from config.experiment import WindowConfig
from core.errors import DataError
from core.models import NormalizationStats, PathGraph, RawSignal, SignalLabel
from signals.ingest import normalize_array, window

logger = logging.getLogger(__name__)


def build_path_graph(
    windows: np.ndarray,
    graph_id: str = "graph",
    label: SignalLabel = SignalLabel.NORMAL,
    fault_kind: str | None = None,
    source_id: str = "",
) -> PathGraph:
    """
    Connect n consecutive windows as a path with Gaussian-kernel weights.

    The bandwidth B is the mean Euclidean distance between neighbouring
    windows and A[i, i+1] = exp(-||x_i - x_{i+1}|| / (2B)). When every
    neighbour pair is identical (B = 0) all edge weights are set to 1 and
    the graph is flagged degenerate.
    """
    X = np.asarray(windows, dtype=np.float64)
    if X.ndim != 2:
        raise DataError(f"graph '{graph_id}': windows must form an n x d matrix, got shape {X.shape}")
    n = X.shape[0]
    if n < 2:
        raise DataError(f"graph '{graph_id}' needs at least 2 windows, got {n}")

    distances = np.linalg.norm(np.diff(X, axis=0), axis=1)
    bandwidth = float(distances.mean())
    degenerate = bandwidth == 0.0
    if degenerate:
        weights = np.ones(n - 1)
        logger.warning("[GRAPH] %s: all neighbouring windows identical, unit edge weights", graph_id)
    else:
        weights = np.exp(-distances / (2.0 * bandwidth))

    A = np.zeros((n, n))
    idx = np.arange(n - 1)
    A[idx, idx + 1] = weights
    A[idx + 1, idx] = weights

    return PathGraph(
        graph_id=graph_id,
        X=X,
        A=A,
        bandwidth=bandwidth,
        label=label,
        fault_kind=fault_kind,
        source_id=source_id,
        degenerate=degenerate,
    )


def laplacian(A: np.ndarray) -> np.ndarray:
    """Combinatorial Laplacian L = D - A with D_ii = sum_j A_ij."""
    A = np.asarray(A, dtype=np.float64)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DataError(f"adjacency must be square, got shape {A.shape}")
    return np.diag(A.sum(axis=1)) - A


def graphs_from_signal(signal: RawSignal, cfg: WindowConfig) -> list[PathGraph]:
    """
    Window a signal and group every ``graph_size`` consecutive windows into
    one PathGraph; leftover windows are dropped.
    """
    windows = window(signal, cfg)
    n = cfg.graph_size
    count = windows.shape[0] // n
    if count == 0:
        raise DataError(
            f"'{signal.source_id}' yields {windows.shape[0]} windows, fewer than graph_size {n}"
        )
    return [
        build_path_graph(
            windows[g * n:(g + 1) * n],
            graph_id=f"{signal.source_id}#{g}",
            label=signal.label,
            fault_kind=signal.fault_kind,
            source_id=signal.source_id,
        )
        for g in range(count)
    ]


def normalize_graph(graph: PathGraph, stats: NormalizationStats) -> PathGraph:
    """Rebuild a graph on max-min normalized node features."""
    return build_path_graph(
        normalize_array(graph.X, stats, graph.graph_id),
        graph_id=graph.graph_id,
        label=graph.label,
        fault_kind=graph.fault_kind,
        source_id=graph.source_id,
    )
