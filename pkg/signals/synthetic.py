"""
Synthetic condition-monitoring recordings.

Healthy signals are a sum of sinusoids plus white noise; each abnormal
state injects one fault (impulse train, extra harmonic or raised noise
floor). Waveforms come from the seed's ``synth`` stream and SNR noise from
its ``noise`` stream, so the same (spec, seed) pair always yields
bit-identical samples.
"""
import logging

import numpy as np

from config.experiment import FaultSpec, SyntheticSpec
from core.models import FaultKind, RawSignal, SignalLabel
from core.rng import RngStreams

from .ingest import add_noise_snr

logger = logging.getLogger(__name__)


def fault_name(index: int, fault: FaultSpec) -> str:
    """Stable identifier of an abnormal state, e.g. ``f2-impulse-8x-p64``."""
    if fault.kind == FaultKind.IMPULSE:
        detail = f"p{fault.period}"
    elif fault.kind == FaultKind.HARMONIC:
        detail = f"{fault.frequency_hz:g}hz"
    else:
        detail = "noise"
    return f"f{index}-{fault.kind.value}-{fault.magnitude:g}x-{detail}"


def _base_waveform(spec: SyntheticSpec, rng: np.random.Generator, t: np.ndarray) -> np.ndarray:
    signal = np.zeros_like(t)
    for tone in spec.tones:
        phase = rng.uniform(0.0, 2.0 * np.pi) if spec.random_phase else 0.0
        signal += tone.amplitude * np.sin(2.0 * np.pi * tone.frequency_hz * t + phase)
    return signal


def _inject(fault: FaultSpec, spec: SyntheticSpec, rng: np.random.Generator, t: np.ndarray) -> tuple[np.ndarray, float]:
    """Additive fault component and the noise sigma to use for this signal."""
    sigma = spec.noise_sigma
    extra = np.zeros_like(t)
    if fault.kind == FaultKind.IMPULSE:
        offset = int(rng.integers(fault.period))
        extra[offset::fault.period] = fault.magnitude * sigma
    elif fault.kind == FaultKind.HARMONIC:
        phase = rng.uniform(0.0, 2.0 * np.pi)
        extra = fault.magnitude * sigma * np.sin(2.0 * np.pi * fault.frequency_hz * t + phase)
    elif fault.kind == FaultKind.NOISE_SHIFT:
        sigma = sigma * fault.magnitude
    return extra, sigma


def generate_synthetic(spec: SyntheticSpec, seed: int) -> list[RawSignal]:
    """
    Generate labeled recordings: ``n_normal`` healthy signals, then
    ``count`` signals per configured fault, in spec order.

    Args:
        spec: Waveform, noise and fault description
        seed: Root seed for the ``synth`` and ``noise`` streams

    Returns:
        Signals whose lengths are ``window_len * windows_per_signal``
    """
    streams = RngStreams(seed)
    rng = streams.stream("synth")
    length = spec.signal_length
    t = np.arange(length, dtype=np.float64) / spec.sample_rate
    signals: list[RawSignal] = []

    for i in range(spec.n_normal):
        samples = _base_waveform(spec, rng, t) + rng.normal(0.0, spec.noise_sigma, size=length)
        signals.append(RawSignal(
            samples=samples,
            sample_rate=spec.sample_rate,
            source_id=f"normal-{i:04d}",
            label=SignalLabel.NORMAL,
            metadata={"synthetic": True},
        ))

    for j, fault in enumerate(spec.faults):
        name = fault_name(j, fault)
        for i in range(fault.count):
            base = _base_waveform(spec, rng, t)
            extra, sigma = _inject(fault, spec, rng, t)
            samples = base + extra + rng.normal(0.0, sigma, size=length)
            signals.append(RawSignal(
                samples=samples,
                sample_rate=spec.sample_rate,
                source_id=f"{name}-{i:03d}",
                label=SignalLabel.ABNORMAL,
                fault_kind=name,
                metadata={"synthetic": True, "kind": fault.kind.value, "magnitude": fault.magnitude},
            ))

    if spec.snr_db is not None:
        noise_rng = streams.stream("noise")
        signals = [add_noise_snr(s, spec.snr_db, noise_rng) for s in signals]

    logger.info(
        "[INGEST] synthesized %d normal + %d abnormal signals of %d samples (seed %d)",
        spec.n_normal, spec.n_abnormal, length, seed,
    )
    return signals
