# Signals module
from .ingest import (
    add_noise_snr,
    fit_normalization,
    load_csv,
    load_wav,
    normalize,
    normalize_array,
    split_dataset,
    window,
    with_samples,
)
from .synthetic import fault_name, generate_synthetic

__all__ = [
    "add_noise_snr",
    "fit_normalization",
    "load_csv",
    "load_wav",
    "normalize",
    "normalize_array",
    "split_dataset",
    "window",
    "with_samples",
    "fault_name",
    "generate_synthetic",
]
