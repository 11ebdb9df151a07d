"""
Pulse evolution module
Rotating-frame propagators for shaped pulses and the noise channels applied between them

Hamiltonian (Hz units): H(t) = 2*pi*[D*sz/2 + W(t)*(cos(phi)*sx + sin(phi)*sy)/2]
with W(t) = W_peak*(1 + eps)*envelope(t) and D = pulse detuning + shot detuning.
Square pulses are a single exact SU(2) exponential. Shaped pulses are cut
into slices; each slice is propagated with the fourth-order commutator-free
Magnus step (two exponentials sampled at the Gauss nodes of the slice).
"""
import math
from typing import Optional

import numpy as np

from backend import config
from backend.exceptions import DomainError, InvalidPulseError
from backend.spin_engine.noise_model import NoiseModel, NoiseRealization
from backend.spin_engine.pulse_shapes import PulseShape, PulseSpec, envelope
from backend.spin_engine.qubit_state import QubitState, StateLike, as_state

TWO_PI = 2.0 * np.pi

# Gauss-Legendre nodes and commutator-free Magnus weights
_GAUSS_OFFSET = math.sqrt(3.0) / 6.0
_CF4_SMALL = 0.25 - math.sqrt(3.0) / 6.0
_CF4_LARGE = 0.25 + math.sqrt(3.0) / 6.0

# Noise draws beyond this many sigma are ignored when sizing slices
_SLICE_SIGMA_MARGIN = 5.0


def quantize_duration(duration: float, quantum: float) -> float:
    """
    Round a duration to the timing grid (round half up)

    Args:
        duration: Nominal duration in seconds
        quantum: Grid step in seconds (0 disables rounding)

    Returns:
        Quantized duration
    """
    if quantum <= 0:
        return duration
    # relative slack keeps exact half-steps from rounding down on float noise
    steps = math.floor(duration / quantum + 0.5 + 1e-9)
    return steps * quantum


def su2_exponential(vx: np.ndarray, vy: np.ndarray, vz: np.ndarray) -> np.ndarray:
    """
    exp(-i (v . sigma) / 2) for broadcastable rotation vectors

    Returns:
        Array of shape broadcast(vx, vy, vz) + (2, 2)
    """
    vx, vy, vz = np.broadcast_arrays(np.asarray(vx, float), np.asarray(vy, float), np.asarray(vz, float))
    norm = np.sqrt(vx * vx + vy * vy + vz * vz)
    half = norm / 2.0
    c = np.cos(half)
    # sin(|v|/2)/|v|, finite at zero
    k = 0.5 * np.sinc(half / np.pi)
    u = np.empty(vx.shape + (2, 2), dtype=complex)
    u[..., 0, 0] = c - 1j * k * vz
    u[..., 0, 1] = -1j * k * vx - k * vy
    u[..., 1, 0] = -1j * k * vx + k * vy
    u[..., 1, 1] = c + 1j * k * vz
    return u


def z_rotation(angle: float) -> np.ndarray:
    """exp(-i * angle * sz / 2)"""
    return np.array([[np.exp(-0.5j * angle), 0], [0, np.exp(0.5j * angle)]], dtype=complex)


def rephase(propagators: np.ndarray, phase: float) -> np.ndarray:
    """Turn a phase-0 drive propagator into the same pulse driven at ``phase``"""
    if phase == 0.0:
        return propagators
    rz = z_rotation(phase)
    return rz @ propagators @ rz.conj().T


def _ordered_product(slices: np.ndarray) -> np.ndarray:
    """slices[n-1] @ ... @ slices[0] by pairwise reduction over the first axis"""
    mats = slices
    while mats.shape[0] > 1:
        if mats.shape[0] % 2:
            eye = np.broadcast_to(np.eye(2, dtype=complex), (1,) + mats.shape[1:])
            mats = np.concatenate([mats, eye], axis=0)
        mats = mats[1::2] @ mats[0::2]
    return mats[0]


def slice_count(pulse: PulseSpec, noise: NoiseModel, duration: float,
                max_slice_rotation: float = config.DEFAULT_MAX_SLICE_ROTATION,
                detuning_allowance: float = 0.0) -> int:
    """
    Number of slices keeping every slice rotation below the bound

    Sized from the nominal pulse plus a 5-sigma noise margin (and an explicit
    allowance for scanned detunings) so the count does not depend on which
    shots share a batch.
    """
    if pulse.shape is PulseShape.SQUARE:
        return 1
    rabi_max = pulse.peak_rabi * (1.0 + _SLICE_SIGMA_MARGIN * noise.amplitude_error_sigma)
    det_max = (abs(pulse.detuning) + abs(detuning_allowance)
               + _SLICE_SIGMA_MARGIN * noise.detuning_sigma)
    rate = TWO_PI * math.hypot(rabi_max, det_max)
    return max(1, int(math.ceil(rate * duration / max_slice_rotation)))


def _shaped_propagators(pulse: PulseSpec, duration: float, rabi: np.ndarray, det: np.ndarray,
                        n_slices: int) -> np.ndarray:
    dt = duration / n_slices
    centers = (np.arange(n_slices) + 0.5) / n_slices
    e1 = envelope(pulse.shape, centers - _GAUSS_OFFSET / n_slices)
    e2 = envelope(pulse.shape, centers + _GAUSS_OFFSET / n_slices)
    cos_phi, sin_phi = math.cos(pulse.phase), math.sin(pulse.phase)
    z_step = TWO_PI * dt * det[None, :] / 2.0

    first = (_CF4_LARGE * e1 + _CF4_SMALL * e2)[:, None] * rabi[None, :] * TWO_PI * dt
    second = (_CF4_SMALL * e1 + _CF4_LARGE * e2)[:, None] * rabi[None, :] * TWO_PI * dt
    u_first = su2_exponential(first * cos_phi, first * sin_phi, z_step)
    u_second = su2_exponential(second * cos_phi, second * sin_phi, z_step)
    return _ordered_product(u_second @ u_first)


def pulse_propagator(pulse: PulseSpec, noise: Optional[NoiseModel] = None,
                     realization: Optional[NoiseRealization] = None,
                     max_slice_rotation: float = config.DEFAULT_MAX_SLICE_ROTATION,
                     chunk_size: int = config.SHOT_CHUNK_SIZE,
                     detuning_allowance: float = 0.0) -> np.ndarray:
    """
    Propagators of one pulse for a batch of noise realizations

    Args:
        pulse: Pulse specification
        noise: Noise model (timing grid, slice sizing); noiseless if None
        realization: Per-shot detuning/amplitude errors; a single zero draw if None
        max_slice_rotation: Upper bound on the rotation within one slice (rad)
        chunk_size: Realizations propagated together for shaped pulses
        detuning_allowance: Largest realization detuning beyond the noise model (Hz)

    Returns:
        Array of shape (len(realization), 2, 2)

    Raises:
        InvalidPulseError: if quantization rounds a non-identity pulse to zero length
    """
    noise = noise or NoiseModel()
    realization = realization if realization is not None else NoiseRealization.zero()
    count = len(realization)
    if pulse.is_identity:
        return np.broadcast_to(np.eye(2, dtype=complex), (count, 2, 2)).copy()

    duration = quantize_duration(pulse.duration, noise.time_quantum)
    if duration <= 0:
        raise InvalidPulseError(
            f"pulse of {pulse.duration:.3e} s rounds to zero on a {noise.time_quantum:.3e} s grid"
        )
    det = pulse.detuning + np.atleast_1d(np.asarray(realization.detuning, dtype=float))
    rabi = pulse.peak_rabi * (1.0 + np.atleast_1d(np.asarray(realization.amplitude_error, dtype=float)))

    if pulse.shape is PulseShape.SQUARE:
        amp = TWO_PI * duration * rabi
        return su2_exponential(amp * math.cos(pulse.phase), amp * math.sin(pulse.phase),
                               TWO_PI * duration * det)

    n_slices = slice_count(pulse, noise, duration, max_slice_rotation, detuning_allowance)
    chunk = max(1, min(chunk_size, config.SLICE_BATCH_ELEMENTS // n_slices))
    out = np.empty((count, 2, 2), dtype=complex)
    for start in range(0, count, chunk):
        stop = min(count, start + chunk)
        out[start:stop] = _shaped_propagators(pulse, duration, rabi[start:stop], det[start:stop], n_slices)
    return out


# -- channels on single states --------------------------------------------------

def apply_unitary(state: StateLike, unitary: np.ndarray) -> QubitState:
    rho = as_state(state).rho
    return QubitState(unitary @ rho @ unitary.conj().T, validate=False)


def apply_pulse(state: StateLike, pulse: PulseSpec, noise: Optional[NoiseModel] = None,
                shot_noise_draw: Optional[NoiseRealization] = None,
                max_slice_rotation: float = config.DEFAULT_MAX_SLICE_ROTATION) -> QubitState:
    """
    Evolve a state through one pulse

    Args:
        state: Input state
        pulse: Pulse specification
        noise: Noise model (timing quantization, slice sizing)
        shot_noise_draw: This shot's detuning and amplitude error
        max_slice_rotation: Slice rotation bound (rad)

    Returns:
        Output state

    Raises:
        InvalidStateError: if the input is not a valid density matrix
    """
    state = as_state(state)
    if shot_noise_draw is not None and len(shot_noise_draw) != 1:
        raise DomainError("apply_pulse takes a single-shot noise draw")
    u = pulse_propagator(pulse, noise, shot_noise_draw, max_slice_rotation)[0]
    return apply_unitary(state, u)


def apply_depolarizing(state: StateLike, p: float) -> QubitState:
    """
    Depolarizing channel rho -> (1 - p) rho + p I/2

    Raises:
        DomainError: if p is outside [0, 1]
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"depolarizing probability must lie in [0, 1], got {p}")
    rho = as_state(state).rho
    return QubitState((1.0 - p) * rho + p * np.eye(2) / 2.0, validate=False)


def apply_idle(state: StateLike, duration: float, detuning: float = 0.0,
               t2_star: float = math.inf) -> QubitState:
    """Free precession at the detuning with exponential coherence decay"""
    rho = as_state(state).rho.copy()
    factor = np.exp(-1j * TWO_PI * detuning * duration)
    if math.isfinite(t2_star):
        factor *= math.exp(-duration / t2_star)
    rho[0, 1] *= factor
    rho[1, 0] *= np.conj(factor)
    return QubitState(rho, validate=False)


# -- batched channels used by the shot simulator ---------------------------------

def evolve_batch(rhos: np.ndarray, unitaries: np.ndarray) -> np.ndarray:
    """U rho U^dagger for stacks of states and unitaries"""
    return unitaries @ rhos @ np.conj(np.swapaxes(unitaries, -1, -2))


def depolarize_batch(rhos: np.ndarray, p: float) -> np.ndarray:
    if p == 0.0:
        return rhos
    return (1.0 - p) * rhos + p * np.eye(2) / 2.0


def idle_batch(rhos: np.ndarray, duration: float, detunings: np.ndarray,
               t2_star: float) -> np.ndarray:
    if duration <= 0:
        return rhos
    factor = np.exp(-1j * TWO_PI * np.asarray(detunings, dtype=float) * duration)
    if math.isfinite(t2_star):
        factor = factor * math.exp(-duration / t2_star)
    out = rhos.copy()
    out[..., 0, 1] *= factor
    out[..., 1, 0] *= np.conj(factor)
    return out
