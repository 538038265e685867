"""
Named random streams derived from one root seed.

Every consumer of randomness asks for its own stream so that, for example,
changing the batching order never perturbs the parameter initialization.
"""
import numpy as np


STREAM_IDS: dict[str, int] = {
    "init": 0,
    "batching": 1,
    "epsilon": 2,
    "synth": 3,
    "split": 4,
    "score": 5,
    "noise": 6,
}


class RngStreams:
    """Splits a root seed into independent, reproducible generators."""

    def __init__(self, root_seed: int):
        if root_seed < 0:
            raise ValueError(f"seed must be non-negative, got {root_seed}")
        self.root_seed = int(root_seed)

    def stream(self, name: str) -> np.random.Generator:
        """Return a fresh generator for a named stream (same name, same draws)."""
        if name not in STREAM_IDS:
            raise KeyError(f"unknown random stream '{name}'")
        seq = np.random.SeedSequence([self.root_seed, STREAM_IDS[name]])
        return np.random.default_rng(seq)

    def __repr__(self) -> str:
        return f"RngStreams(root_seed={self.root_seed})"
