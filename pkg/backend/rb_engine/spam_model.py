"""
SPAM model module
State-preparation and readout errors of the single-shot measurement
"""
from dataclasses import asdict, dataclass

import numpy as np

from backend.exceptions import DomainError


@dataclass(frozen=True)
class SpamModel:
    """
    Attributes:
        init_error: Probability the spin is prepared |up> instead of |down>
        readout_fidelity_up: P(report up | spin up)
        readout_fidelity_down: P(report down | spin down)
    """

    init_error: float = 0.0
    readout_fidelity_up: float = 1.0
    readout_fidelity_down: float = 1.0

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not 0.0 <= value <= 1.0:
                raise DomainError(f"spam.{name} must lie in [0, 1], got {value}")

    @classmethod
    def perfect(cls) -> "SpamModel":
        return cls()

    def prepared_up(self, u: np.ndarray) -> np.ndarray:
        """Initialization flips for uniform draws u"""
        return np.asarray(u) < self.init_error

    def report(self, spin_up: np.ndarray, u: np.ndarray) -> np.ndarray:
        """
        Pass projective outcomes through the readout confusion matrix

        Args:
            spin_up: True where the measured spin was up
            u: Uniform draws, one per shot

        Returns:
            True where 'up' is reported
        """
        spin_up = np.asarray(spin_up, dtype=bool)
        u = np.asarray(u)
        return np.where(spin_up, u < self.readout_fidelity_up, u >= self.readout_fidelity_down)

    def to_dict(self) -> dict:
        return asdict(self)
