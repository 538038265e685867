# Detection module
from .scoring import (
    GRAPH_NODE_INDEX,
    anomaly_scores,
    at_level,
    graph_level_scores,
    node_residuals,
    score_values,
    true_labels,
)
from .kde import (
    bandwidth_for,
    classify,
    density_curve,
    fit_kde,
    kde_cdf,
    kde_pdf,
    solve_threshold,
    support,
)

__all__ = [
    "GRAPH_NODE_INDEX",
    "anomaly_scores",
    "at_level",
    "graph_level_scores",
    "node_residuals",
    "score_values",
    "true_labels",
    "bandwidth_for",
    "classify",
    "density_curve",
    "fit_kde",
    "kde_cdf",
    "kde_pdf",
    "solve_threshold",
    "support",
]
