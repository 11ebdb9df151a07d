"""
Bootstrap module
Residual bootstrap interval for the decay base p
"""
from dataclasses import asdict, dataclass
from typing import Optional, Union

import numpy as np

from backend import config
from backend.analysis.aggregation import AggregatedDecay, FitMode
from backend.analysis.decay_fitter import FitResult, fit_decay
from backend.exceptions import BootstrapError, DomainError, FitError
from backend.utils.logger import logger
from backend.utils.rng import bootstrap_generator


@dataclass(frozen=True)
class BootstrapInterval:
    lower: float
    upper: float
    n_resamples: int
    n_failed: int
    degenerate: bool = False

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def to_dict(self) -> dict:
        return asdict(self)


def bootstrap_ci(agg: AggregatedDecay, mode: Union[str, FitMode, None] = None,
                 n_resamples: int = config.DEFAULT_BOOTSTRAP_RESAMPLES, seed: int = 0,
                 fit: Optional[FitResult] = None,
                 confidence: float = config.CONFIDENCE_LEVEL) -> BootstrapInterval:
    """
    Percentile interval of p from refits on resampled residuals

    Weighted residuals of the primary fit are drawn with replacement,
    rescaled to each point's weight and added back to the fitted curve.

    Args:
        agg: Aggregated decay curve
        mode: Fit mode (defaults to the curve's mode)
        n_resamples: Number of refits
        seed: Experiment seed; resample i uses its own stream
        fit: Primary fit, computed when omitted
        confidence: Interval coverage

    Returns:
        BootstrapInterval (flagged degenerate for a single resample)

    Raises:
        FitError: if the primary fit fails
        BootstrapError: if more than 10% of the resamples fail to refit
    """
    if n_resamples < 1:
        raise DomainError(f"n_resamples must be >= 1, got {n_resamples}")
    fit = fit or fit_decay(agg, mode)
    mode = FitMode.parse(mode) if mode is not None else agg.mode

    fitted = fit.predict(agg.lengths)
    sqrt_w = np.sqrt(agg.weights())
    weighted_residuals = sqrt_w * (agg.means - fitted)
    initial = [fit.p0, fit.p] if not mode.offset_is_free else [fit.p0, fit.p, fit.p_inf]

    samples = []
    failed = 0
    for i in range(n_resamples):
        rng = bootstrap_generator(seed, i)
        picks = rng.integers(0, len(agg), size=len(agg))
        resampled = agg.with_means(fitted + weighted_residuals[picks] / sqrt_w)
        try:
            samples.append(fit_decay(resampled, mode, initial=initial).p)
        except FitError as e:
            failed += 1
            logger.debug(f"Bootstrap resample {i} failed: {e}")

    if failed > config.BOOTSTRAP_MAX_FAILURE_FRACTION * n_resamples:
        raise BootstrapError(f"{failed}/{n_resamples} bootstrap refits failed")
    if failed:
        logger.warning(f"{failed}/{n_resamples} bootstrap refits failed and were skipped")

    tail = (1.0 - confidence) / 2.0 * 100.0
    lower, upper = np.percentile(samples, [tail, 100.0 - tail])
    degenerate = len(samples) < 2
    if degenerate:
        logger.warning("Bootstrap interval from a single resample is degenerate")
    return BootstrapInterval(float(lower), float(upper), n_resamples, failed, degenerate)
