"""
Qubit state module
Density matrix wrapper plus the state fidelity measure
"""
from typing import Union

import numpy as np

from backend.exceptions import InvalidStateError

STATE_TOLERANCE = 1e-10


class QubitState:
    """2x2 density matrix of the simulated spin (|up> is the first basis vector)"""

    def __init__(self, rho: np.ndarray, validate: bool = True):
        self.rho = np.array(rho, dtype=complex)
        if validate:
            self.validate()

    @classmethod
    def from_vector(cls, psi: np.ndarray) -> "QubitState":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def up(cls) -> "QubitState":
        return cls(np.array([[1, 0], [0, 0]], dtype=complex))

    @classmethod
    def down(cls) -> "QubitState":
        return cls(np.array([[0, 0], [0, 1]], dtype=complex))

    @classmethod
    def maximally_mixed(cls) -> "QubitState":
        return cls(np.eye(2, dtype=complex) / 2)

    def validate(self) -> "QubitState":
        """
        Check Hermiticity, unit trace and positivity within 1e-10

        Raises:
            InvalidStateError: if any invariant fails
        """
        rho = self.rho
        if rho.shape != (2, 2):
            raise InvalidStateError(f"density matrix must be 2x2, got {rho.shape}")
        if not np.all(np.isfinite(rho)):
            raise InvalidStateError("density matrix has non-finite entries")
        if np.max(np.abs(rho - rho.conj().T)) >= STATE_TOLERANCE:
            raise InvalidStateError("density matrix is not Hermitian")
        if abs(np.trace(rho) - 1.0) > STATE_TOLERANCE:
            raise InvalidStateError(f"density matrix trace is {np.trace(rho).real:.12f}")
        if np.min(np.linalg.eigvalsh((rho + rho.conj().T) / 2)) < -STATE_TOLERANCE:
            raise InvalidStateError("density matrix is not positive semidefinite")
        return self

    @property
    def p_up(self) -> float:
        return float(np.clip(self.rho[0, 0].real, 0.0, 1.0))

    @property
    def purity(self) -> float:
        return float(np.real(np.trace(self.rho @ self.rho)))

    def copy(self) -> "QubitState":
        return QubitState(self.rho.copy(), validate=False)

    def __repr__(self) -> str:
        return f"QubitState(p_up={self.p_up:.6f}, purity={self.purity:.6f})"


StateLike = Union[QubitState, np.ndarray]


def as_state(value: StateLike) -> QubitState:
    """Accept a QubitState, a density matrix or a state vector"""
    if isinstance(value, QubitState):
        return value.validate()
    arr = np.asarray(value, dtype=complex)
    if arr.shape == (2,):
        return QubitState.from_vector(arr)
    return QubitState(arr)


def _psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    herm = (matrix + matrix.conj().T) / 2
    w, v = np.linalg.eigh(herm)
    return (v * np.sqrt(np.clip(w, 0.0, None))) @ v.conj().T


def state_fidelity(actual: StateLike, ideal: StateLike) -> float:
    """
    Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2

    Reduces to <psi|rho|psi> when the ideal state is pure.

    Args:
        actual: Simulated state
        ideal: Ideal output state

    Returns:
        Fidelity in [0, 1]
    """
    rho = as_state(actual).rho
    sigma = as_state(ideal).rho
    if abs(np.real(np.trace(sigma @ sigma)) - 1.0) < STATE_TOLERANCE:
        return float(np.clip(np.real(np.trace(rho @ sigma)), 0.0, 1.0))
    root = _psd_sqrt(rho)
    inner = root @ sigma @ root
    eigenvalues = np.linalg.eigvalsh((inner + inner.conj().T) / 2)
    fidelity = float(np.sum(np.sqrt(np.clip(eigenvalues, 0.0, None))) ** 2)
    return float(np.clip(fidelity, 0.0, 1.0))
