"""
Gaussian kernel density over validation scores and the decision threshold
solved from its cumulative distribution.
"""
import logging
from typing import Sequence, Union

import numpy as np
from scipy import optimize, special, stats

from config.experiment import BandwidthMode
from core.errors import ConfigError, DataError, NumericError
from core.models import AnomalyScore, KdeModel, ScoreLevel, SignalLabel, Threshold

logger = logging.getLogger(__name__)

CDF_TOLERANCE = 1e-9
_SUPPORT_WIDTHS = 10.0

ScoreInput = Union[Sequence[float], np.ndarray, Sequence[AnomalyScore]]


def _as_values(scores: ScoreInput) -> np.ndarray:
    items = list(scores) if not isinstance(scores, np.ndarray) else scores
    if len(items) and isinstance(items[0], AnomalyScore):
        return np.array([s.xi for s in items], dtype=np.float64)
    return np.asarray(items, dtype=np.float64).ravel()


def bandwidth_for(n_scores: int) -> float:
    """H = (M (d + 2) / 4)^(-2 / (d + 4)) with d = 1, i.e. (3M/4)^(-2/5)."""
    return float((3.0 * n_scores / 4.0) ** (-0.4))


def fit_kde(scores: ScoreInput, bandwidth_mode: BandwidthMode = BandwidthMode.ABSOLUTE) -> KdeModel:
    """
    Fit the score density.

    Args:
        scores: Validation scores (floats or AnomalyScore objects)
        bandwidth_mode: ``absolute`` uses H as is; ``scaled`` multiplies it
            by the sample standard deviation of the scores

    Returns:
        KdeModel holding the scores as centers
    """
    values = _as_values(scores)
    if values.size < 2:
        raise DataError(f"KDE needs at least 2 scores, got {values.size}")
    if not np.all(np.isfinite(values)):
        raise NumericError("non-finite anomaly scores passed to the KDE fit")
    H = bandwidth_for(values.size)
    if bandwidth_mode == BandwidthMode.SCALED:
        spread = float(np.std(values, ddof=1))
        if spread > 0.0:
            H *= spread
        else:
            logger.warning("[DETECT] all scores identical; keeping the unscaled bandwidth %.4g", H)
    return KdeModel(centers=values, bandwidth=H)


def kde_pdf(model: KdeModel, xi):
    """Density K(xi): mean of Gaussian kernels of width H at each center."""
    x = np.asarray(xi, dtype=np.float64)
    z = (x[..., None] - model.centers) / model.bandwidth
    out = stats.norm.pdf(z).mean(axis=-1) / model.bandwidth
    return float(out) if out.ndim == 0 else out


def kde_cdf(model: KdeModel, xi):
    """CF(xi) in closed form: mean of Gaussian CDFs centred at each score."""
    x = np.asarray(xi, dtype=np.float64)
    z = (x[..., None] - model.centers) / model.bandwidth
    out = special.ndtr(z).mean(axis=-1)
    return float(out) if out.ndim == 0 else out


def support(model: KdeModel) -> tuple[float, float]:
    """Interval where the density is numerically non-zero."""
    pad = _SUPPORT_WIDTHS * model.bandwidth
    return float(model.centers.min() - pad), float(model.centers.max() + pad)


def solve_threshold(model: KdeModel, delta: float, level: ScoreLevel = ScoreLevel.NODE) -> Threshold:
    """
    Bisect for xi_delta with CF(xi_delta) = 1 - delta.

    Args:
        model: Fitted KDE
        delta: Significance level in (0, 1)
        level: Score level the KDE was fitted at (recorded on the result)

    Returns:
        Threshold
    """
    if not 0.0 < delta < 1.0:
        raise ConfigError(f"delta must lie in (0, 1), got {delta}")
    target = 1.0 - delta
    lo, hi = support(model)
    xi_delta = optimize.bisect(lambda x: kde_cdf(model, x) - target, lo, hi, xtol=1e-14, maxiter=500)
    residual = abs(kde_cdf(model, xi_delta) - target)
    if residual > CDF_TOLERANCE:
        raise NumericError(f"threshold bisection stalled: |CF - (1 - delta)| = {residual:.3g}")
    logger.info("[DETECT] threshold xi_delta=%.6g (delta=%.3g, H=%.4g, M=%d)", xi_delta, delta, model.bandwidth, model.n_centers)
    return Threshold(xi_delta=float(xi_delta), delta=delta, bandwidth=model.bandwidth, level=level)


def classify(scores: ScoreInput, threshold: Threshold) -> list[SignalLabel]:
    """Abnormal iff xi >= xi_delta (boundary inclusive)."""
    values = _as_values(scores)
    return [SignalLabel.ABNORMAL if v >= threshold.xi_delta else SignalLabel.NORMAL for v in values]


def density_curve(model: KdeModel, n_points: int = 256) -> tuple[np.ndarray, np.ndarray]:
    """Evenly spaced grid over the support and the density on it."""
    lo, hi = support(model)
    grid = np.linspace(lo, hi, n_points)
    return grid, kde_pdf(model, grid)
