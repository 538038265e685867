"""
Signal ingestion: max-min normalization, non-overlapping windowing,
dataset splitting and CSV / WAV loaders.
"""
import logging
import math
import wave
from pathlib import Path
from typing import Optional

import numpy as np

from config.experiment import WindowConfig
from core.errors import DataError
from core.models import DatasetSplit, NormalizationStats, PathGraph, RawSignal, SignalLabel
from core.rng import RngStreams

logger = logging.getLogger(__name__)

WAV_SCALE = 32768.0

# Floors counts like 0.57 * 100 = 56.999... correctly.
_COUNT_SLACK = 1e-9


# ============================================
# NORMALIZATION
# ============================================

def normalize_array(x: np.ndarray, stats: NormalizationStats, source_id: str = "<array>") -> np.ndarray:
    """Affine map (x - min) / (max - min); values outside the fit range are kept."""
    if stats.is_degenerate:
        raise DataError(
            f"degenerate normalization stats (min == max == {stats.min_val}) for '{source_id}'"
        )
    return (np.asarray(x, dtype=np.float64) - stats.min_val) / (stats.max_val - stats.min_val)


def with_samples(signal: RawSignal, samples: np.ndarray, **updates) -> RawSignal:
    """Rebuild ``signal`` around new samples (validated and frozen again)."""
    return RawSignal(**{**dict(signal), "samples": samples, **updates})


def normalize(signal: RawSignal, stats: NormalizationStats) -> RawSignal:
    """Return a normalized copy of ``signal``; no clipping is applied."""
    return with_samples(signal, normalize_array(signal.samples, stats, signal.source_id))


def fit_normalization(signals: list[RawSignal]) -> NormalizationStats:
    """Min/max over training signals only."""
    if not signals:
        raise DataError("cannot fit normalization on an empty training set")
    return NormalizationStats.from_arrays([s.samples for s in signals])


# ============================================
# WINDOWING
# ============================================

def window(signal: RawSignal, cfg: WindowConfig) -> np.ndarray:
    """
    Split a signal into floor(L/d) consecutive, non-overlapping windows.

    Args:
        signal: Input recording
        cfg: Window settings; only ``window_len`` is used here

    Returns:
        Array of shape (floor(L/d), d), temporal order preserved,
        trailing remainder dropped
    """
    d = cfg.window_len
    if signal.length < d:
        raise DataError(
            f"signal shorter than one window: '{signal.source_id}' has {signal.length} samples, d={d}"
        )
    count = signal.length // d
    return signal.samples[:count * d].reshape(count, d)


# ============================================
# SPLITTING
# ============================================

def split_dataset(
    normal: list[PathGraph],
    abnormal: list[PathGraph],
    train_frac: float,
    val_frac: float,
    seed: int,
) -> DatasetSplit:
    """
    Shuffle the normal graphs by seed and cut them into train / val / rest.

    The rest of the normal graphs and every abnormal graph form the test set.
    Counts are rounded down, so any remainder lands in test.
    """
    if not normal:
        raise DataError("split_dataset needs at least one normal graph")
    if train_frac < 0 or val_frac < 0 or train_frac + val_frac > 1 + _COUNT_SLACK:
        raise DataError(f"invalid split fractions train={train_frac} val={val_frac}")

    order = RngStreams(seed).stream("split").permutation(len(normal))
    shuffled = [normal[i] for i in order]
    n_train = math.floor(train_frac * len(normal) + _COUNT_SLACK)
    n_val = math.floor(val_frac * len(normal) + _COUNT_SLACK)

    split = DatasetSplit(
        train=shuffled[:n_train],
        val=shuffled[n_train:n_train + n_val],
        test=shuffled[n_train + n_val:] + list(abnormal),
        seed=seed,
    )
    logger.info(
        "[INGEST] split %d normal / %d abnormal -> %d train, %d val, %d test (seed %d)",
        len(normal), len(abnormal), len(split.train), len(split.val), len(split.test), seed,
    )
    return split


# ============================================
# LOADERS
# ============================================

def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def load_csv(
    path: Path,
    sample_rate: float = 1.0,
    label: SignalLabel = SignalLabel.NORMAL,
    fault_kind: Optional[str] = None,
    source_id: Optional[str] = None,
) -> RawSignal:
    """
    Load a single-column CSV (one amplitude per row, optional header line).
    """
    path = Path(path)
    try:
        lines = [ln.strip() for ln in path.read_text(encoding="utf-8").splitlines()]
    except (OSError, UnicodeDecodeError) as e:
        raise DataError(f"cannot read CSV {path}: {e}") from e
    lines = [ln for ln in lines if ln]
    if lines and not _is_number(lines[0].split(",")[0]):
        lines = lines[1:]
    if not lines:
        raise DataError(f"CSV {path} holds no samples")
    try:
        samples = np.loadtxt(lines, dtype=np.float64, delimiter=",", ndmin=1)
    except ValueError as e:
        raise DataError(f"malformed CSV {path}: {e}") from e
    if samples.ndim != 1:
        raise DataError(f"CSV {path} must have one value per row, got shape {samples.shape}")
    return RawSignal(
        samples=samples,
        sample_rate=sample_rate,
        source_id=source_id or path.stem,
        label=label,
        fault_kind=fault_kind,
        metadata={"path": str(path), "format": "csv"},
    )


def load_wav(
    path: Path,
    channel: Optional[int] = None,
    label: SignalLabel = SignalLabel.NORMAL,
    fault_kind: Optional[str] = None,
    source_id: Optional[str] = None,
) -> RawSignal:
    """
    Decode a 16-bit PCM WAV file to reals in [-1, 1) using sample / 32768.

    Multi-channel files need an explicit ``channel``.
    """
    path = Path(path)
    try:
        with wave.open(str(path), "rb") as f:
            params = f.getparams()
            raw = f.readframes(params.nframes)
    except (wave.Error, EOFError, OSError) as e:
        raise DataError(f"malformed WAV {path}: {e}") from e

    if params.sampwidth != 2:
        raise DataError(f"unsupported bit depth in {path}: {8 * params.sampwidth}-bit (need 16-bit PCM)")
    if params.nchannels > 1 and channel is None:
        raise DataError(f"{path} has {params.nchannels} channels; select one with --channel")
    ch = 0 if channel is None else channel
    if ch >= params.nchannels:
        raise DataError(f"channel {ch} out of range for {path} ({params.nchannels} channels)")

    frames = np.frombuffer(raw, dtype="<i2")
    if frames.size == 0:
        raise DataError(f"WAV {path} holds no frames")
    frames = frames[: (frames.size // params.nchannels) * params.nchannels]
    samples = frames.reshape(-1, params.nchannels)[:, ch].astype(np.float64) / WAV_SCALE

    return RawSignal(
        samples=samples,
        sample_rate=float(params.framerate),
        source_id=source_id or path.stem,
        label=label,
        fault_kind=fault_kind,
        metadata={"path": str(path), "format": "wav", "channel": ch, "n_channels": params.nchannels},
    )


# ============================================
# NOISE INJECTION
# ============================================

def add_noise_snr(signal: RawSignal, snr_db: float, rng: np.random.Generator) -> RawSignal:
    """Add white Gaussian noise so that 10*log10(P_signal / P_noise) = snr_db."""
    power = float(np.mean(signal.samples ** 2))
    if power == 0.0:
        raise DataError(f"cannot set an SNR on silent signal '{signal.source_id}'")
    noise_sigma = math.sqrt(power / (10.0 ** (snr_db / 10.0)))
    noisy = signal.samples + rng.normal(0.0, noise_sigma, size=signal.length)
    meta = {**signal.metadata, "snr_db": snr_db}
    return with_samples(signal, noisy, metadata=meta)
