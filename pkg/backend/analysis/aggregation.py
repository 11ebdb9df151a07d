"""
Aggregation module
Per-length success statistics over the K sequence means of a dataset
"""
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from backend.clifford_engine.clifford_group import TargetState
from backend.exceptions import ConfigError, InsufficientDataError
from backend.rb_engine.dataset import RbDataset
from backend.utils.logger import logger

# Pinned offset of the combined success probability
COMBINED_OFFSET = 0.5


class DecayMode(str, Enum):
    FREE = "free"
    FIXED = "fixed"
    COMBINED = "combined"


@dataclass(frozen=True)
class FitMode:
    """
    Decay model variant

    free: P_up of target-down records, offset fitted
    fixed: same records, offset pinned (to ``fixed_value`` or estimated from N_min)
    combined: success of all records, offset pinned to 0.5
    """

    kind: DecayMode
    fixed_value: Optional[float] = None

    @classmethod
    def parse(cls, value: Union[str, "FitMode", None]) -> "FitMode":
        """Accepts 'free', 'fixed', 'fixed=<v>' and 'combined'"""
        if isinstance(value, FitMode):
            return value
        if value is None:
            return cls(DecayMode.COMBINED)
        text = str(value).strip().lower()
        name, _, number = text.partition("=")
        try:
            kind = DecayMode(name)
        except ValueError:
            raise ConfigError("mode", f"unknown fit mode '{value}' (free, fixed[=<v>], combined)")
        if not number:
            return cls(kind)
        if kind is not DecayMode.FIXED:
            raise ConfigError("mode", f"only the fixed mode takes a value, got '{value}'")
        try:
            fixed = float(number)
        except ValueError:
            raise ConfigError("mode", f"fixed offset is not a number: '{number}'")
        if not 0.0 <= fixed <= 1.0:
            raise ConfigError("mode", f"fixed offset must lie in [0, 1], got {fixed}")
        return cls(kind, fixed)

    @property
    def label(self) -> str:
        if self.kind is DecayMode.FIXED and self.fixed_value is not None:
            return f"fixed={self.fixed_value!r}"
        return self.kind.value

    @property
    def offset_is_free(self) -> bool:
        return self.kind is DecayMode.FREE

    @property
    def n_params(self) -> int:
        return 3 if self.offset_is_free else 2

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True)
class AggregatedDecay:
    """
    Decay curve ready for fitting

    Attributes:
        lengths: Sequence lengths N (increasing)
        means: Mean over the K sequence values at each N
        variances: Unbiased sample variance of those K values (nan when K < 2)
        counts: K at each N
        mode: Fit mode the curve was built for
        offset: Pinned asymptote (None when it is fitted)
        uniform_weights: True when some N has K < 2 and weighting fell back to uniform
        target_curves: Per-target P_up means and SEMs on the same N grid
    """

    lengths: np.ndarray
    means: np.ndarray
    variances: np.ndarray
    counts: np.ndarray
    mode: FitMode
    offset: Optional[float] = None
    uniform_weights: bool = False
    target_curves: Dict[TargetState, Tuple[np.ndarray, np.ndarray]] = field(default_factory=dict)

    def __len__(self) -> int:
        return int(self.lengths.size)

    @property
    def sem(self) -> np.ndarray:
        """Standard error of the mean over sequences"""
        with np.errstate(invalid="ignore", divide="ignore"):
            return np.sqrt(self.variances / self.counts)

    def weights(self) -> np.ndarray:
        """
        Inverse-variance weights

        Zero variances take the largest finite weight; all-zero variances
        (or the K < 2 fallback) give uniform weights.
        """
        n = len(self)
        if self.uniform_weights or not np.all(np.isfinite(self.variances)):
            return np.ones(n)
        positive = self.variances > 0
        if not np.any(positive):
            return np.ones(n)
        w = np.empty(n)
        w[positive] = 1.0 / self.variances[positive]
        w[~positive] = np.max(w[positive])
        return w

    def with_means(self, means: np.ndarray) -> "AggregatedDecay":
        return replace(self, means=np.asarray(means, dtype=float))


def estimate_offset(dataset: RbDataset) -> float:
    """
    Asymptote estimate (P_up[target up] + P_up[target down]) / 2 at the shortest length

    Raises:
        InsufficientDataError: if either target class is missing at N_min
    """
    if not dataset.records:
        raise InsufficientDataError("dataset is empty")
    n_min = dataset.lengths[0]
    up = dataset.records_for(n_min, TargetState.UP)
    down = dataset.records_for(n_min, TargetState.DOWN)
    if not up or not down:
        raise InsufficientDataError(
            f"estimating the offset needs both target states at N={n_min}"
        )
    value = (np.mean([r.p_up for r in up]) + np.mean([r.p_up for r in down])) / 2.0
    logger.info(f"Estimated offset from N={n_min}: {value:.6f}")
    return float(value)


def _target_curves(dataset: RbDataset, lengths: List[int]) -> Dict[TargetState, Tuple[np.ndarray, np.ndarray]]:
    curves = {}
    for target in TargetState:
        means, sems = [], []
        for n in lengths:
            values = np.array([r.p_up for r in dataset.records_for(n, target)])
            means.append(values.mean() if values.size else np.nan)
            sems.append(values.std(ddof=1) / np.sqrt(values.size) if values.size > 1 else np.nan)
        curves[target] = (np.array(means), np.array(sems))
    return curves


def aggregate(dataset: RbDataset, mode: Union[str, FitMode, None] = None) -> AggregatedDecay:
    """
    Reduce a dataset to per-length means and unbiased variances

    Args:
        dataset: Shot-level dataset
        mode: Fit mode (default combined)

    Returns:
        AggregatedDecay

    Raises:
        InsufficientDataError: if no record qualifies for the mode
    """
    mode = FitMode.parse(mode)
    if not dataset.records:
        raise InsufficientDataError("dataset is empty")

    if mode.kind is DecayMode.COMBINED:
        def value(record):
            return record.success
        selected = dataset.records
    else:
        def value(record):
            return record.p_up
        selected = [r for r in dataset.records if r.target is TargetState.DOWN]
    if not selected:
        raise InsufficientDataError(f"no records usable for mode '{mode.label}' (needs target-down records)")

    lengths, means, variances, counts = [], [], [], []
    for n in dataset.lengths:
        values = np.array([value(r) for r in selected if r.length == n])
        if values.size == 0:
            logger.warning(f"N={n} has no records for mode '{mode.label}'; dropped")
            continue
        lengths.append(n)
        means.append(values.mean())
        variances.append(values.var(ddof=1) if values.size > 1 else np.nan)
        counts.append(values.size)

    counts_arr = np.array(counts)
    uniform = bool(np.any(counts_arr < 2))
    if uniform:
        short = [n for n, c in zip(lengths, counts) if c < 2]
        logger.warning(f"Fewer than 2 sequences at N={short}; falling back to uniform weights")

    if mode.kind is DecayMode.COMBINED:
        offset = COMBINED_OFFSET
    elif mode.kind is DecayMode.FIXED:
        offset = mode.fixed_value if mode.fixed_value is not None else estimate_offset(dataset)
    else:
        offset = None

    return AggregatedDecay(
        lengths=np.array(lengths, dtype=int),
        means=np.array(means, dtype=float),
        variances=np.array(variances, dtype=float),
        counts=counts_arr,
        mode=mode,
        offset=offset,
        uniform_weights=uniform,
        target_curves=_target_curves(dataset, lengths),
    )
