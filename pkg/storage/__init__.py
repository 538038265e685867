# Storage module
from .checkpoint import FORMAT_VERSION, Checkpoint, CheckpointStore, TensorRecord, TrainingMeta
from .exports import (
    MANIFEST_NAME,
    dump_graph,
    read_manifest,
    write_density_csv,
    write_history_csv,
    write_labels_csv,
    write_manifest,
    write_report,
    write_roc_csv,
    write_scores_csv,
    write_signal_csv,
    write_sweep_csv,
)
from .plots import plot_densities, plot_history, plot_roc, plot_sweep

__all__ = [
    "FORMAT_VERSION",
    "Checkpoint",
    "CheckpointStore",
    "TensorRecord",
    "TrainingMeta",
    "MANIFEST_NAME",
    "dump_graph",
    "read_manifest",
    "write_density_csv",
    "write_history_csv",
    "write_labels_csv",
    "write_manifest",
    "write_report",
    "write_roc_csv",
    "write_scores_csv",
    "write_signal_csv",
    "write_sweep_csv",
    "plot_densities",
    "plot_history",
    "plot_roc",
    "plot_sweep",
]
