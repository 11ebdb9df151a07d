"""
Physical gate alphabet
Pauli matrices and the seven pulses (I, X, Y, +-X/2, +-Y/2) every Clifford is built from
"""
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from backend.exceptions import UnknownGateError

PAULI_I = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

PAULIS = {"I": PAULI_I, "X": SIGMA_X, "Y": SIGMA_Y, "Z": SIGMA_Z}

# Drive phase of the positive rotation about each axis
AXIS_PHASE = {"X": 0.0, "Y": np.pi / 2}

ALLOWED_ANGLES = (1.0, 0.5, -0.5)


@dataclass(frozen=True)
class PhysicalGate:
    """
    One resonant pulse: rotation by ``angle``*pi about ``axis``

    The identity gate has no axis and zero angle.
    """

    axis: Optional[str]
    angle: float

    def __post_init__(self):
        if self.axis is None:
            if self.angle != 0.0:
                raise UnknownGateError("identity gate must have zero angle")
            return
        if self.axis not in AXIS_PHASE:
            raise UnknownGateError(f"unsupported rotation axis: {self.axis}")
        if self.angle not in ALLOWED_ANGLES:
            raise UnknownGateError(f"unsupported rotation angle {self.angle} (units of pi)")

    @property
    def is_identity(self) -> bool:
        return self.axis is None

    @property
    def name(self) -> str:
        if self.is_identity:
            return "I"
        if self.angle == 1.0:
            return self.axis
        sign = "-" if self.angle < 0 else ""
        return f"{sign}{self.axis}/2"

    @property
    def rotation_angle(self) -> float:
        """Unsigned rotation in radians (pi or pi/2, zero for identity)"""
        return abs(self.angle) * np.pi

    @property
    def phase(self) -> float:
        """Drive phase in radians: 0 (X), pi/2 (Y), pi (-X), 3pi/2 (-Y)"""
        if self.is_identity:
            return 0.0
        phase = AXIS_PHASE[self.axis]
        if self.angle < 0:
            phase += np.pi
        return phase

    def unitary(self) -> np.ndarray:
        """exp(-i * theta * sigma_axis / 2) with signed theta"""
        if self.is_identity:
            return PAULI_I.copy()
        theta = self.angle * np.pi
        return np.cos(theta / 2) * PAULI_I - 1j * np.sin(theta / 2) * PAULIS[self.axis]

    def __str__(self) -> str:
        return self.name


IDENTITY = PhysicalGate(None, 0.0)

PHYSICAL_GATES: Dict[str, PhysicalGate] = {
    gate.name: gate
    for gate in (
        IDENTITY,
        PhysicalGate("X", 1.0),
        PhysicalGate("Y", 1.0),
        PhysicalGate("X", 0.5),
        PhysicalGate("Y", 0.5),
        PhysicalGate("X", -0.5),
        PhysicalGate("Y", -0.5),
    )
}


def parse_gate(name: str) -> PhysicalGate:
    """
    Look up a physical gate by name

    Args:
        name: Gate name such as "X", "Y/2", "-X/2" (Unicode minus accepted)

    Returns:
        The matching PhysicalGate

    Raises:
        UnknownGateError: if the name is not in the alphabet
    """
    if isinstance(name, PhysicalGate):
        return name
    key = str(name).strip().replace("−", "-").replace(" ", "").upper()
    if key in PHYSICAL_GATES:
        return PHYSICAL_GATES[key]
    raise UnknownGateError(
        f"unknown physical gate '{name}'; expected one of {', '.join(PHYSICAL_GATES)}"
    )
