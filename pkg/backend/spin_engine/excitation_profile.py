"""
Excitation profile module
Spin-up probability after a pi pulse on |down> as a function of drive detuning
"""
from dataclasses import replace
from typing import Sequence

import numpy as np

from backend import config
from backend.exceptions import DomainError
from backend.spin_engine.noise_model import NoiseModel, NoiseRealization
from backend.spin_engine.pulse_evolution import pulse_propagator
from backend.spin_engine.pulse_shapes import PulseSpec
from backend.utils.logger import logger


def excitation_profile(pulse: PulseSpec, detunings: Sequence[float],
                       max_slice_rotation: float = config.DEFAULT_MAX_SLICE_ROTATION,
                       time_quantum: float = 0.0) -> np.ndarray:
    """
    Deterministic detuning scan of a pi pulse

    Args:
        pulse: Pulse specification (rotation forced to pi; its detuning offsets the scan)
        detunings: Drive detunings in Hz
        max_slice_rotation: Slice rotation bound (rad)
        time_quantum: Optional timing grid applied to the pulse

    Returns:
        P(up) for each detuning
    """
    detunings = pulse.detuning + np.asarray(detunings, dtype=float)
    if detunings.size == 0:
        return np.zeros(0)
    pi_pulse = replace(pulse, rotation_angle=np.pi, detuning=0.0)
    realization = NoiseRealization(detunings, np.zeros_like(detunings))
    u = pulse_propagator(
        pi_pulse,
        NoiseModel(time_quantum=time_quantum),
        realization,
        max_slice_rotation,
        detuning_allowance=float(np.max(np.abs(detunings))),
    )
    # |<up|U|down>|^2
    return np.abs(u[:, 0, 1]) ** 2


def full_width_half_maximum(detunings: Sequence[float], profile: Sequence[float]) -> float:
    """
    Width of the central lobe at half of its peak, by linear interpolation

    Args:
        detunings: Increasing detuning grid (Hz)
        profile: Values on the grid

    Returns:
        FWHM in Hz

    Raises:
        DomainError: if the profile does not fall below half maximum on both sides
    """
    x = np.asarray(detunings, dtype=float)
    y = np.asarray(profile, dtype=float)
    if x.size < 3 or x.size != y.size:
        raise DomainError("profile needs at least three matching points")
    peak = int(np.argmax(y))
    half = y[peak] / 2.0

    left = peak
    while left > 0 and y[left - 1] >= half:
        left -= 1
    right = peak
    while right < x.size - 1 and y[right + 1] >= half:
        right += 1
    if left == 0 or right == x.size - 1:
        raise DomainError("profile does not drop to half maximum inside the scan")

    def crossing(i_out: int, i_in: int) -> float:
        x0, x1, y0, y1 = x[i_out], x[i_in], y[i_out], y[i_in]
        return float(x0 + (half - y0) * (x1 - x0) / (y1 - y0))

    width = crossing(right + 1, right) - crossing(left - 1, left)
    logger.debug(f"FWHM = {width:.3f} Hz (peak {y[peak]:.6f})")
    return width
