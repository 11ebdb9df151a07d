"""
Fidelity module
Maps decay constants to Clifford, single-gate and interleaved gate fidelities
"""
import math
import numbers
from dataclasses import dataclass
from typing import TYPE_CHECKING, Optional, Tuple

from backend.clifford_engine.clifford_group import AVERAGE_GATES_PER_CLIFFORD
from backend.exceptions import DomainError, MissingConfidenceIntervalError
from backend.utils.logger import logger

if TYPE_CHECKING:
    from backend.analysis.decay_fitter import FitResult


def _check_decay(name: str, p: float) -> None:
    if isinstance(p, bool) or not (isinstance(p, numbers.Real) and 0.0 < p <= 1.0):
        raise DomainError(f"{name} must lie in (0, 1], got {p}")


def clifford_fidelity(p_c: float) -> float:
    """F_c = (1 + p_c) / 2"""
    _check_decay("p_c", p_c)
    return (1.0 + p_c) / 2.0


def single_gate_fidelity(f_c: float,
                         gates_per_clifford: float = AVERAGE_GATES_PER_CLIFFORD) -> float:
    """
    Average physical-gate fidelity from the Clifford fidelity

    Args:
        f_c: Average Clifford fidelity, in (0.5, 1]
        gates_per_clifford: Mean physical gates per Clifford

    Returns:
        1 - (1 - F_c) / gates_per_clifford
    """
    if not 0.5 < f_c <= 1.0:
        raise DomainError(f"F_c must lie in (0.5, 1], got {f_c}")
    return 1.0 - (1.0 - f_c) / gates_per_clifford


def interleaved_fidelity(p_gate: float, p_c: float) -> float:
    """
    F_gate = (1 + p_gate / p_c) / 2

    Values above one (p_gate > p_c) are returned as-is; callers flag them.
    """
    _check_decay("p_c", p_c)
    _check_decay("p_gate", p_gate)
    return (1.0 + p_gate / p_c) / 2.0


def interleaved_ci(fit_ref: "FitResult", fit_gate: "FitResult") -> Tuple[float, float]:
    """
    Confidence interval of F_gate

    Relative half-widths of p_gate and p_c add in quadrature and carry
    through to the ratio p_gate / p_c.

    Raises:
        MissingConfidenceIntervalError: if either fit has no interval for p
    """
    for label, fit in (("reference", fit_ref), ("interleaved", fit_gate)):
        if fit.p_ci is None:
            raise MissingConfidenceIntervalError(f"{label} fit has no confidence interval for p")
    rel_ref = (fit_ref.p_ci[1] - fit_ref.p_ci[0]) / 2.0 / fit_ref.p
    rel_gate = (fit_gate.p_ci[1] - fit_gate.p_ci[0]) / 2.0 / fit_gate.p
    ratio = fit_gate.p / fit_ref.p
    f_gate = interleaved_fidelity(fit_gate.p, fit_ref.p)
    half = ratio * math.hypot(rel_ref, rel_gate) / 2.0
    return f_gate - half, f_gate + half


@dataclass
class InterleavedResult:
    """One row of the interleaved-gate table"""

    gate: str
    p_gate: float
    p_c: float
    gate_fidelity: float
    gate_fidelity_ci: Optional[Tuple[float, float]]
    above_one: bool

    def to_dict(self) -> dict:
        return {
            "gate": self.gate,
            "p_gate": self.p_gate,
            "p_c": self.p_c,
            "gate_fidelity": self.gate_fidelity,
            "gate_fidelity_ci": list(self.gate_fidelity_ci) if self.gate_fidelity_ci else None,
            "above_one": self.above_one,
        }


def compare_interleaved(gate: str, fit_ref: "FitResult", fit_gate: "FitResult") -> InterleavedResult:
    """Interleaved gate fidelity with its interval, flagged when above one"""
    f_gate = interleaved_fidelity(fit_gate.p, fit_ref.p)
    above_one = f_gate > 1.0
    if above_one:
        logger.warning(f"F_gate for {gate} is {f_gate:.6f} > 1 (reported unclipped)")
    return InterleavedResult(
        gate=gate,
        p_gate=fit_gate.p,
        p_c=fit_ref.p,
        gate_fidelity=f_gate,
        gate_fidelity_ci=interleaved_ci(fit_ref, fit_gate),
        above_one=above_one,
    )
