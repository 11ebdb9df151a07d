"""
Noise model module
Physical error knobs of the simulated qubit and their per-shot realizations
"""
import math
from dataclasses import asdict, dataclass

import numpy as np

from backend import config
from backend.exceptions import DomainError


@dataclass(frozen=True)
class NoiseModel:
    """
    Error sources applied during a shot

    Attributes:
        detuning_sigma: Hz, quasi-static Gaussian detuning drawn once per shot
        amplitude_error_sigma: Relative Rabi amplitude error drawn once per shot
        time_quantum: s, pulse durations rounded to this grid (0 disables)
        depolarizing_per_clifford: Depolarizing probability after each Clifford
        t2_star: s, coherence decay during idle time (inf disables)
        idle_time: s, free evolution after each Clifford (0 disables)
        interleaved_depolarizing: Depolarizing probability after each interleaved gate
    """

    detuning_sigma: float = 0.0
    amplitude_error_sigma: float = 0.0
    time_quantum: float = 0.0
    depolarizing_per_clifford: float = 0.0
    t2_star: float = math.inf
    idle_time: float = 0.0
    interleaved_depolarizing: float = 0.0

    def __post_init__(self):
        for name, value in asdict(self).items():
            if not value >= 0:
                raise DomainError(f"noise.{name} must be non-negative, got {value}")
        for name in ("depolarizing_per_clifford", "interleaved_depolarizing"):
            if getattr(self, name) >= 1:
                raise DomainError(f"noise.{name} must be below 1")
        if self.t2_star == 0:
            raise DomainError("noise.t2_star must be positive")

    @classmethod
    def noiseless(cls) -> "NoiseModel":
        return cls()

    @classmethod
    def from_linewidth(cls, fwhm: float = config.RESONANCE_LINEWIDTH, **kwargs) -> "NoiseModel":
        """Quasi-static detuning spread from a resonance linewidth (FWHM, Hz)"""
        return cls(detuning_sigma=fwhm / config.FWHM_TO_SIGMA, **kwargs)

    @property
    def is_stochastic(self) -> bool:
        """True when shots draw their own detuning or amplitude error"""
        return self.detuning_sigma > 0 or self.amplitude_error_sigma > 0

    def to_dict(self) -> dict:
        data = asdict(self)
        data["t2_star"] = None if math.isinf(self.t2_star) else self.t2_star
        return data


@dataclass(frozen=True)
class NoiseRealization:
    """Quasi-static noise values of one shot (or arrays over a batch of shots)"""

    detuning: np.ndarray
    amplitude_error: np.ndarray

    @classmethod
    def zero(cls, count: int = 1) -> "NoiseRealization":
        return cls(np.zeros(count), np.zeros(count))

    @classmethod
    def from_normals(cls, noise: NoiseModel, z_detuning: np.ndarray,
                     z_amplitude: np.ndarray) -> "NoiseRealization":
        return cls(noise.detuning_sigma * np.asarray(z_detuning, dtype=float),
                   noise.amplitude_error_sigma * np.asarray(z_amplitude, dtype=float))

    def __len__(self) -> int:
        return int(np.size(self.detuning))
