# Graphs module
from .path_graph import build_path_graph, graphs_from_signal, laplacian, normalize_graph
from .eigen import eigendecompose
from .wavelets import (
    PreparedGraph,
    prepare_graphs,
    build_wavelet_operator,
    operator_for_graph,
    scaling_kernel,
    select_scales,
    wavelet_kernel,
)

__all__ = [
    "PreparedGraph",
    "prepare_graphs",
    "build_path_graph",
    "graphs_from_signal",
    "laplacian",
    "normalize_graph",
    "eigendecompose",
    "build_wavelet_operator",
    "operator_for_graph",
    "scaling_kernel",
    "select_scales",
    "wavelet_kernel",
]
