"""
Sweep runner module
Runs a full RB experiment and combined fit for every pulse-duration point
"""
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from backend import config
from backend.analysis.aggregation import aggregate
from backend.analysis.decay_fitter import FitResult, fit_decay
from backend.exceptions import SpinBenchError
from backend.experiment.experiment_config import ExperimentConfig, SweepPoint
from backend.rb_engine.experiment_runner import run_experiment
from backend.utils.logger import logger


@dataclass
class SweepRow:
    """Fit summary of one sweep point; ``error`` holds the failure tag if it failed"""

    pi_pulse_duration: float
    pulse_shape: str
    p: Optional[float] = None
    p_ci: Optional[Tuple[float, float]] = None
    clifford_fidelity: Optional[float] = None
    clifford_fidelity_ci: Optional[Tuple[float, float]] = None
    error: Optional[str] = None

    @property
    def ok(self) -> bool:
        return self.error is None

    @classmethod
    def from_fit(cls, point: SweepPoint, fit: FitResult) -> "SweepRow":
        return cls(point.pi_pulse_duration, point.pulse_shape.value, fit.p, fit.p_ci,
                   fit.clifford_fidelity, fit.clifford_fidelity_ci)

    def to_dict(self) -> dict:
        return {
            "pi_pulse_duration": self.pi_pulse_duration,
            "pulse_shape": self.pulse_shape,
            "p": self.p,
            "p_ci": list(self.p_ci) if self.p_ci else None,
            "clifford_fidelity": self.clifford_fidelity,
            "clifford_fidelity_ci": list(self.clifford_fidelity_ci) if self.clifford_fidelity_ci else None,
            "error": self.error,
        }


@dataclass
class SweepResult:
    fit_mode: str
    rows: List[SweepRow] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def failed(self) -> List[SweepRow]:
        return [row for row in self.rows if not row.ok]


def run_sweep(exp_config: ExperimentConfig, workers: int = config.WORKERS) -> SweepResult:
    """
    RB experiment + fit at every sweep point, all with the config's seed

    Point failures are recorded in their row instead of aborting the sweep.

    Args:
        exp_config: Config with a sweep axis
        workers: Worker processes per experiment

    Returns:
        SweepResult with one row per configured point, in order
    """
    result = SweepResult(fit_mode=exp_config.fit_mode)
    total = len(exp_config.sweep)
    if not total:
        logger.warning("Sweep has no points; nothing to run")
    for i, point in enumerate(exp_config.sweep, 1):
        logger.info(f"[{i}/{total}] {point.pulse_shape.value} pulse, "
                    f"pi = {point.pi_pulse_duration * 1e6:.3f} us")
        rb_config = exp_config.with_rb(pi_pulse_duration=point.pi_pulse_duration,
                                       pulse_shape=point.pulse_shape).rb
        try:
            dataset = run_experiment(rb_config, workers)
            fit = fit_decay(aggregate(dataset, exp_config.fit_mode))
        except SpinBenchError as e:
            tag = f"{type(e).__name__}: {e}"
            logger.warning(f"  ✗ point failed: {tag}")
            result.rows.append(SweepRow(point.pi_pulse_duration, point.pulse_shape.value, error=tag))
            continue
        logger.info(f"  ✓ F_c = {fit.clifford_fidelity:.6f}")
        result.rows.append(SweepRow.from_fit(point, fit))
    return result
