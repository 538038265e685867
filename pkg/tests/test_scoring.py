"""
Tests for node and graph level anomaly scores.
"""
import numpy as np
import pytest

from core.models import AnomalyScore, ModelKind, ScoreLevel, SignalLabel
from detection.scoring import (
    GRAPH_NODE_INDEX,
    anomaly_scores,
    at_level,
    graph_level_scores,
    node_residuals,
    score_values,
    true_labels,
)
from gwae.forward import reconstruct

from .helpers import make_params, make_prepared


def test_residual_per_node(rng):
    item = make_prepared(rng)
    params = make_params(ModelKind.GWAE, rng)
    X_hat = reconstruct(params, item.X, item.op)
    xi = node_residuals(params, item)
    np.testing.assert_allclose(xi, [np.sum((item.X[i] - X_hat[i]) ** 2) for i in range(3)])
    assert np.sum(xi) == pytest.approx(np.sum((item.X - X_hat) ** 2))


def test_one_score_per_node(rng):
    graphs = [
        make_prepared(rng, graph_id="a"),
        make_prepared(rng, graph_id="b", label=SignalLabel.ABNORMAL),
    ]
    scores = anomaly_scores(make_params(ModelKind.GWAE, rng), graphs)
    assert [(s.graph_id, s.node_index) for s in scores] == [
        ("a", 0), ("a", 1), ("a", 2), ("b", 0), ("b", 1), ("b", 2),
    ]
    assert all(s.xi >= 0 for s in scores)
    np.testing.assert_array_equal(true_labels(scores), [0, 0, 0, 1, 1, 1])
    assert score_values(scores).shape == (6,)


def test_gwvae_scores_use_mean_latent(rng):
    graphs = [make_prepared(rng)]
    params = make_params(ModelKind.GWVAE, rng)
    a = score_values(anomaly_scores(params, graphs))
    b = score_values(anomaly_scores(params, graphs))
    np.testing.assert_array_equal(a, b)


def test_stochastic_scoring(rng):
    graphs = [make_prepared(rng)]
    params = make_params(ModelKind.GWVAE, rng)
    mean = score_values(anomaly_scores(params, graphs))
    sampled = score_values(anomaly_scores(params, graphs, stochastic=True, rng=np.random.default_rng(0)))
    again = score_values(anomaly_scores(params, graphs, stochastic=True, rng=np.random.default_rng(0)))
    np.testing.assert_array_equal(sampled, again)
    assert not np.array_equal(mean, sampled)


def test_stochastic_needs_rng(rng):
    params = make_params(ModelKind.GWVAE, rng)
    with pytest.raises(ValueError, match="random generator"):
        anomaly_scores(params, [make_prepared(rng)], stochastic=True)


def test_stochastic_flag_ignored_for_gwae(rng):
    graphs = [make_prepared(rng)]
    params = make_params(ModelKind.GWAE, rng)
    np.testing.assert_array_equal(
        score_values(anomaly_scores(params, graphs, stochastic=True)),
        score_values(anomaly_scores(params, graphs)),
    )


def test_graph_level_mean():
    scores = [
        AnomalyScore(graph_id="b", node_index=0, xi=1.0, true_label=SignalLabel.ABNORMAL),
        AnomalyScore(graph_id="b", node_index=1, xi=3.0, true_label=SignalLabel.ABNORMAL),
        AnomalyScore(graph_id="a", node_index=0, xi=0.5, true_label=SignalLabel.NORMAL),
    ]
    collapsed = graph_level_scores(scores)
    assert [(s.graph_id, s.xi, s.node_index) for s in collapsed] == [
        ("b", 2.0, GRAPH_NODE_INDEX),
        ("a", 0.5, GRAPH_NODE_INDEX),
    ]
    assert collapsed[0].is_abnormal
    assert at_level(scores, ScoreLevel.NODE) is scores
    assert len(at_level(scores, ScoreLevel.GRAPH)) == 2
