"""
Pulse shape module
Envelopes, rotation calibration and pulse specifications for gate pulses
"""
from dataclasses import dataclass, replace
from enum import Enum
from typing import Union

import numpy as np
from scipy.special import sici

from backend.clifford_engine.physical_gates import PhysicalGate
from backend.exceptions import DomainError

SINC_HALF_WIDTH = 3 * np.pi


class PulseShape(str, Enum):
    SQUARE = "square"
    SINC3 = "sinc3"

    @classmethod
    def parse(cls, value: Union[str, "PulseShape"]) -> "PulseShape":
        if isinstance(value, PulseShape):
            return value
        key = str(value).strip().lower().replace("-", "").replace("_", "")
        for shape in cls:
            if shape.value == key:
                return shape
        raise DomainError(f"unknown pulse shape '{value}' (expected square or sinc3)")


def envelope(shape: PulseShape, tau: np.ndarray) -> np.ndarray:
    """
    Normalized envelope on the unit interval

    Args:
        shape: Pulse shape
        tau: Fraction of the pulse elapsed, in [0, 1]

    Returns:
        Envelope values (peak 1)
    """
    tau = np.asarray(tau, dtype=float)
    if shape is PulseShape.SQUARE:
        return np.ones_like(tau)
    u = 2 * SINC_HALF_WIDTH * (tau - 0.5)
    # np.sinc(x) = sin(pi x)/(pi x)
    return np.sinc(u / np.pi)


def area_fraction(shape: PulseShape) -> float:
    """Envelope area divided by (peak x duration): 1 for square, Si(3pi)/(3pi) for sinc-3"""
    if shape is PulseShape.SQUARE:
        return 1.0
    si, _ = sici(SINC_HALF_WIDTH)
    return float(si / SINC_HALF_WIDTH)


def equal_peak_duration_ratio() -> float:
    """pi-pulse length ratio sinc-3 / square at equal peak drive (= 3pi/Si(3pi))"""
    return 1.0 / area_fraction(PulseShape.SINC3)


@dataclass(frozen=True)
class PulseSpec:
    """
    One resonant drive pulse

    ``pi_pulse_duration`` is the time a pi rotation takes with this shape and
    drive power; other rotation angles scale the duration at fixed peak Rabi
    frequency. ``detuning`` is drive minus qubit frequency in Hz.
    """

    shape: PulseShape
    phase: float
    rotation_angle: float
    pi_pulse_duration: float
    detuning: float = 0.0

    def __post_init__(self):
        if not self.pi_pulse_duration > 0:
            raise DomainError(f"pi_pulse_duration must be positive, got {self.pi_pulse_duration}")
        if self.rotation_angle < 0:
            raise DomainError("rotation_angle must be non-negative")

    @classmethod
    def for_gate(cls, gate: PhysicalGate, shape: Union[str, PulseShape], pi_pulse_duration: float,
                 detuning: float = 0.0) -> "PulseSpec":
        return cls(
            shape=PulseShape.parse(shape),
            phase=gate.phase,
            rotation_angle=gate.rotation_angle,
            pi_pulse_duration=pi_pulse_duration,
            detuning=detuning,
        )

    @property
    def is_identity(self) -> bool:
        return self.rotation_angle == 0.0

    @property
    def duration(self) -> float:
        """Nominal duration before timing quantization"""
        return self.pi_pulse_duration * self.rotation_angle / np.pi

    @property
    def peak_rabi(self) -> float:
        """Peak Rabi frequency in Hz calibrated so the nominal pi pulse rotates by pi"""
        return 1.0 / (2.0 * self.pi_pulse_duration * area_fraction(self.shape))

    def with_rotation(self, rotation_angle: float) -> "PulseSpec":
        return replace(self, rotation_angle=rotation_angle)

    def with_detuning(self, detuning: float) -> "PulseSpec":
        return replace(self, detuning=detuning)
