"""
Decay fitter module
Weighted Levenberg-Marquardt fit of P(N) = P0 * p**N + P_inf
"""
from dataclasses import asdict, dataclass, field, fields
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import least_squares
from scipy.stats import t as student_t

from backend import config
from backend.analysis.aggregation import AggregatedDecay, FitMode
from backend.analysis.fidelity import clifford_fidelity, single_gate_fidelity
from backend.clifford_engine.clifford_group import AVERAGE_GATES_PER_CLIFFORD
from backend.exceptions import (
    DegenerateDataError, FitConvergenceError, InsufficientDataError,
)
from backend.utils.logger import logger

Interval = Tuple[float, float]

# p may overshoot 1 by round-off on noise-free data
P_ROUNDOFF = 1e-9
_CONSTANT_TOLERANCE = 1e-12


@dataclass
class FitResult:
    """
    Outcome of one decay fit

    Confidence intervals are None when the fit has no residual degrees of freedom.
    """

    mode: str
    p: float
    p_ci: Optional[Interval]
    p0: float
    p0_ci: Optional[Interval]
    p_inf: float
    p_inf_ci: Optional[Interval]
    clifford_fidelity: float
    clifford_fidelity_ci: Optional[Interval]
    single_gate_fidelity: float
    single_gate_fidelity_ci: Optional[Interval]
    weighted_residual_sum: float
    iterations: int
    converged: bool
    dof: int
    n_points: int
    uniform_weights: bool = False
    bootstrap: Optional[dict] = None
    curve: Optional[AggregatedDecay] = field(default=None, repr=False, compare=False)

    @property
    def p_half_width(self) -> Optional[float]:
        if self.p_ci is None:
            return None
        return (self.p_ci[1] - self.p_ci[0]) / 2.0

    def predict(self, lengths: Sequence[float]) -> np.ndarray:
        return decay_model(np.asarray(lengths, dtype=float), self.p0, self.p, self.p_inf)

    def to_dict(self) -> dict:
        data = asdict(self)
        data.pop("curve")
        for key, value in data.items():
            if isinstance(value, tuple):
                data[key] = list(value)
        return data

    @classmethod
    def from_dict(cls, data: dict) -> "FitResult":
        known = {f.name for f in fields(cls)} - {"curve"}
        values = {k: v for k, v in data.items() if k in known}
        for key in ("p_ci", "p0_ci", "p_inf_ci", "clifford_fidelity_ci", "single_gate_fidelity_ci"):
            if values.get(key) is not None:
                values[key] = tuple(float(v) for v in values[key])
        return cls(**values)


def decay_model(lengths: np.ndarray, p0: float, p: float, p_inf: float) -> np.ndarray:
    return p0 * np.power(p, lengths) + p_inf


def _initial_guess(n: np.ndarray, y: np.ndarray, offset: Optional[float]) -> np.ndarray:
    if offset is None:
        tail = max(1, n.size // 3)
        p_inf = float(np.mean(y[-tail:]))
    else:
        p_inf = offset
    p0 = float(y[0] - p_inf)
    gap = np.abs(y - p_inf)
    usable = gap > 1e-12
    p = 0.99
    if np.count_nonzero(usable) >= 2:
        slope = np.polyfit(n[usable], np.log(gap[usable]), 1)[0]
        p = float(np.clip(np.exp(slope), 0.05, 1.0))
    if offset is None and p < 1.0:
        # P0 and P_inf are linear once p is fixed
        design = np.column_stack([np.power(p, n), np.ones_like(n)])
        (p0, p_inf), *_ = np.linalg.lstsq(design, y, rcond=None)
        p0, p_inf = float(p0), float(p_inf)
    if abs(p0) < 1e-12:
        p0 = 1e-3
    params = [p0, p] if offset is not None else [p0, p, p_inf]
    return np.array(params, dtype=float)


class DecayFitter:
    """Weighted exponential-decay fit for one aggregated curve"""

    def __init__(self, agg: AggregatedDecay, mode: Union[str, FitMode, None] = None,
                 confidence: float = config.CONFIDENCE_LEVEL):
        self.agg = agg
        self.mode = FitMode.parse(mode) if mode is not None else agg.mode
        self.confidence = confidence
        self.offset = None if self.mode.offset_is_free else self._pinned_offset()
        self.n = agg.lengths.astype(float)
        self.y = agg.means
        self.sqrt_w = np.sqrt(agg.weights())

    def _pinned_offset(self) -> float:
        if self.mode.fixed_value is not None:
            return self.mode.fixed_value
        if self.agg.offset is None:
            raise InsufficientDataError(f"mode '{self.mode.label}' needs a pinned offset")
        return self.agg.offset

    def _unpack(self, x: np.ndarray) -> Tuple[float, float, float]:
        if self.offset is None:
            return x[0], x[1], x[2]
        return x[0], x[1], self.offset

    def residuals(self, x: np.ndarray) -> np.ndarray:
        p0, p, p_inf = self._unpack(x)
        return self.sqrt_w * (decay_model(self.n, p0, p, p_inf) - self.y)

    def jacobian(self, x: np.ndarray) -> np.ndarray:
        p0, p, _ = self._unpack(x)
        power = np.power(p, self.n)
        columns = [power, p0 * self.n * np.power(p, self.n - 1)]
        if self.offset is None:
            columns.append(np.ones_like(self.n))
        return self.sqrt_w[:, None] * np.column_stack(columns)

    def check_data(self) -> None:
        """
        Raises:
            InsufficientDataError: too few lengths for the free parameters
            DegenerateDataError: constant data leaves p unidentifiable
        """
        needed = self.mode.n_params if self.offset is None else 2
        if self.n.size < needed:
            raise InsufficientDataError(
                f"mode '{self.mode.label}' needs at least {needed} lengths, got {self.n.size}"
            )
        if np.ptp(self.y) < _CONSTANT_TOLERANCE:
            if self.offset is None or abs(self.y[0] - self.offset) < _CONSTANT_TOLERANCE:
                raise DegenerateDataError(
                    f"all success probabilities equal {self.y[0]:.6f}; decay is unidentifiable"
                )

    def fit(self, initial: Optional[Sequence[float]] = None) -> FitResult:
        """
        Run the weighted least-squares fit

        Args:
            initial: Starting parameters (P0, p[, P_inf]); data-driven when None

        Returns:
            FitResult

        Raises:
            FitConvergenceError: if the iteration fails or p leaves (0, 1]
        """
        self.check_data()
        x0 = _initial_guess(self.n, self.y, self.offset) if initial is None else np.asarray(initial, float)
        try:
            result = least_squares(
                self.residuals, x0, jac=self.jacobian, method="lm",
                xtol=config.FIT_XTOL, ftol=1e-12, gtol=1e-12,
                max_nfev=config.FIT_MAX_ITERATIONS,
            )
        except ValueError as e:
            raise FitConvergenceError(f"least-squares fit failed: {e}") from e
        if result.status <= 0 or not np.all(np.isfinite(result.x)):
            raise FitConvergenceError(f"fit did not converge: {result.message}")

        x = result.x.copy()
        if 1.0 < x[1] <= 1.0 + P_ROUNDOFF:
            x[1] = 1.0
        p0, p, p_inf = self._unpack(x)
        if not 0.0 < p <= 1.0:
            raise FitConvergenceError(f"fitted decay base p = {p:.6g} outside (0, 1]")

        ci = self._confidence_intervals(x, float(result.cost))
        p_ci = ci[1]
        f_c = clifford_fidelity(p)
        f_single = single_gate_fidelity(f_c)
        fc_ci = f_single_ci = None
        if p_ci is not None:
            # bounds may leave (0, 1]; map them without the domain check
            fc_ci = tuple((1.0 + v) / 2.0 for v in p_ci)
            f_single_ci = tuple(1.0 - (1.0 - v) / AVERAGE_GATES_PER_CLIFFORD for v in fc_ci)

        fit = FitResult(
            mode=self.mode.label,
            p=float(p),
            p_ci=p_ci,
            p0=float(p0),
            p0_ci=ci[0],
            p_inf=float(p_inf),
            p_inf_ci=ci[2] if self.offset is None else None,
            clifford_fidelity=f_c,
            clifford_fidelity_ci=fc_ci,
            single_gate_fidelity=f_single,
            single_gate_fidelity_ci=f_single_ci,
            weighted_residual_sum=float(2.0 * result.cost),
            iterations=int(result.nfev),
            converged=True,
            dof=int(self.n.size - x.size),
            n_points=int(self.n.size),
            uniform_weights=self.agg.uniform_weights,
            curve=self.agg,
        )
        logger.debug(f"Fit [{fit.mode}] p={fit.p:.8f} F_c={fit.clifford_fidelity:.6f} "
                     f"nfev={fit.iterations}")
        return fit

    def _confidence_intervals(self, x: np.ndarray, cost: float):
        """Covariance-based intervals (t-quantile) for every fitted parameter"""
        dof = self.n.size - x.size
        if dof <= 0:
            return [None] * 3
        jac = self.jacobian(x)
        cov = np.linalg.pinv(jac.T @ jac) * (2.0 * cost / dof)
        quantile = float(student_t.ppf(0.5 + self.confidence / 2.0, dof))
        half = quantile * np.sqrt(np.clip(np.diag(cov), 0.0, None))
        intervals = [(float(v - h), float(v + h)) for v, h in zip(x, half)]
        while len(intervals) < 3:
            intervals.append(None)
        return intervals


def fit_decay(agg: AggregatedDecay, mode: Union[str, FitMode, None] = None,
              initial: Optional[Sequence[float]] = None) -> FitResult:
    """
    Fit an aggregated decay curve

    Args:
        agg: Aggregated curve
        mode: Fit mode (defaults to the mode the curve was aggregated for)
        initial: Optional starting parameters

    Returns:
        FitResult
    """
    return DecayFitter(agg, mode).fit(initial)
