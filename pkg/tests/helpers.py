"""
Builders shared by the test modules.
"""
import numpy as np

from config.experiment import KernelConfig
from core.models import Activation, SignalLabel
from graphs.path_graph import build_path_graph
from graphs.wavelets import PreparedGraph, operator_for_graph
from gwae.params import ModelParams, init_params


def small_config_payload() -> dict:
    """Windows of 32 samples holding whole tone cycles, 30 normal + 24 faulty signals."""
    return {
        "data": {
            "synthetic": {
                "sample_rate": 16384.0,
                "window_len": 32,
                "windows_per_signal": 10,
                "n_normal": 30,
                "tones": [
                    {"frequency_hz": 512.0, "amplitude": 1.0},
                    {"frequency_hz": 1024.0, "amplitude": 0.5},
                ],
                "noise_sigma": 0.1,
                "faults": [
                    {"kind": "impulse", "count": 8, "magnitude": 10.0, "period": 16},
                    {"kind": "harmonic", "count": 8, "magnitude": 5.0, "frequency_hz": 2560.0},
                    {"kind": "noise_shift", "count": 8, "magnitude": 4.0},
                ],
            }
        },
        "window": {"window_len": 32, "graph_size": 10},
        "model": {"latent_dim": 16},
        "train": {"epochs": 60, "lr": 0.01, "batch_size": 4},
        "seeds": [0, 1],
    }


def make_graph(rng, n_nodes=3, dim=4, graph_id="g", label=SignalLabel.NORMAL):
    return build_path_graph(rng.normal(size=(n_nodes, dim)), graph_id=graph_id, label=label)


def make_prepared(rng, n_nodes=3, dim=4, n_scales=2, graph_id="g", label=SignalLabel.NORMAL) -> PreparedGraph:
    graph = make_graph(rng, n_nodes, dim, graph_id, label)
    return PreparedGraph(graph=graph, op=operator_for_graph(graph, KernelConfig(n_scales=n_scales)))


def make_params(
    kind,
    rng,
    n_nodes=3,
    dim=4,
    latent=2,
    n_scales=2,
    activation=Activation.RELU,
    jitter=True,
) -> ModelParams:
    """Random parameters; thetas and biases are perturbed so every tensor matters."""
    params = init_params(kind, dim, latent, n_nodes, n_scales, rng, latent_activation=activation)
    if jitter:
        for name, t in params.tensors.items():
            if name.endswith(".theta") or name.endswith(".bias"):
                t += 0.1 * rng.normal(size=t.shape)
    return params


def prepared_from_rows(rows, n_scales=2, graph_id="g", label=SignalLabel.NORMAL) -> PreparedGraph:
    graph = build_path_graph(np.asarray(rows, dtype=np.float64), graph_id=graph_id, label=label)
    return PreparedGraph(graph=graph, op=operator_for_graph(graph, KernelConfig(n_scales=n_scales)))
