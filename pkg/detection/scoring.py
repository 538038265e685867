"""
Node-level anomaly scores: squared norm of each node's reconstruction residual.
"""
import logging
from typing import Optional

import numpy as np

from core.models import AnomalyScore, ModelKind, ScoreLevel, SignalLabel
from graphs.wavelets import PreparedGraph
from gwae.forward import reconstruct
from gwae.params import ModelParams

logger = logging.getLogger(__name__)

# node_index recorded for graph-level scores
GRAPH_NODE_INDEX = -1


def node_residuals(params: ModelParams, graph: PreparedGraph, epsilon: Optional[np.ndarray] = None) -> np.ndarray:
    """xi_i = ||x_i - x_hat_i||^2 for every node of one graph."""
    X_hat = reconstruct(params, graph.X, graph.op, epsilon)
    return np.sum((graph.X - X_hat) ** 2, axis=1)


def anomaly_scores(
    params: ModelParams,
    graphs: list[PreparedGraph],
    stochastic: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> list[AnomalyScore]:
    """
    Score every node of every graph.

    GWVAE uses the mean latent (epsilon = 0) unless ``stochastic`` is set,
    in which case epsilon is drawn from ``rng``.

    Args:
        params: Trained parameters
        graphs: Graphs with their wavelet operators
        stochastic: Sample the GWVAE latent instead of using its mean
        rng: Generator for stochastic scoring (required then)

    Returns:
        One AnomalyScore per node, graphs in input order
    """
    if stochastic and params.kind == ModelKind.GWVAE and rng is None:
        raise ValueError("stochastic scoring needs a random generator")
    scores: list[AnomalyScore] = []
    for g in graphs:
        eps = None
        if stochastic and params.kind == ModelKind.GWVAE:
            eps = rng.standard_normal((g.graph.n_nodes, params.latent_dim))
        xi = node_residuals(params, g, eps)
        scores.extend(
            AnomalyScore(graph_id=g.graph_id, node_index=i, xi=float(v), true_label=g.graph.label)
            for i, v in enumerate(xi)
        )
    logger.debug("[DETECT] scored %d nodes over %d graphs", len(scores), len(graphs))
    return scores


def graph_level_scores(scores: list[AnomalyScore]) -> list[AnomalyScore]:
    """Collapse node scores to one score per graph (mean of its nodes), first-seen order."""
    grouped: dict[str, list[AnomalyScore]] = {}
    for s in scores:
        grouped.setdefault(s.graph_id, []).append(s)
    return [
        AnomalyScore(
            graph_id=graph_id,
            node_index=GRAPH_NODE_INDEX,
            xi=float(np.mean([s.xi for s in members])),
            true_label=members[0].true_label,
        )
        for graph_id, members in grouped.items()
    ]


def at_level(scores: list[AnomalyScore], level: ScoreLevel) -> list[AnomalyScore]:
    return graph_level_scores(scores) if level == ScoreLevel.GRAPH else scores


def score_values(scores: list[AnomalyScore]) -> np.ndarray:
    return np.array([s.xi for s in scores], dtype=np.float64)


def true_labels(scores: list[AnomalyScore]) -> np.ndarray:
    """1 for abnormal, 0 for normal."""
    return np.array([int(s.true_label == SignalLabel.ABNORMAL) for s in scores], dtype=np.int64)
