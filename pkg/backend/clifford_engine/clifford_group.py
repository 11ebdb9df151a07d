"""
Single-qubit Clifford group module
Builds the 24 Cliffords from their physical-gate decompositions and solves recovery gates
"""
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, Iterator, List, Sequence, Tuple, Union

import numpy as np

from backend.clifford_engine.physical_gates import PhysicalGate, parse_gate
from backend.exceptions import CliffordTableError, UnknownGateError
from backend.utils.logger import logger

# Decompositions in application order: the first gate listed acts first.
CLIFFORD_TABLE: Tuple[Tuple[str, ...], ...] = (
    ("I",),
    ("Y/2", "X/2"),
    ("-X/2", "-Y/2"),
    ("X",),
    ("-Y/2", "-X/2"),
    ("X/2", "-Y/2"),
    ("Y",),
    ("-Y/2", "X/2"),
    ("X/2", "Y/2"),
    ("X", "Y"),
    ("Y/2", "-X/2"),
    ("-X/2", "Y/2"),
    ("Y/2", "X"),
    ("-X/2",),
    ("X/2", "-Y/2", "-X/2"),
    ("-Y/2",),
    ("X/2",),
    ("X/2", "Y/2", "X/2"),
    ("-Y/2", "X"),
    ("X/2", "Y"),
    ("X/2", "-Y/2", "X/2"),
    ("Y/2",),
    ("-X/2", "Y"),
    ("X/2", "Y/2", "-X/2"),
)

GROUP_ORDER = 24
AVERAGE_GATES_PER_CLIFFORD = 1.875

ZERO_THRESHOLD = 1e-12
UNITARY_TOLERANCE = 1e-9
STATE_TOLERANCE = 1e-9

SPIN_UP = np.array([1.0, 0.0], dtype=complex)
SPIN_DOWN = np.array([0.0, 1.0], dtype=complex)


class TargetState(str, Enum):
    """Sigma-z eigenstate a sequence is designed to end in"""

    UP = "up"
    DOWN = "down"

    @property
    def vector(self) -> np.ndarray:
        return SPIN_UP if self is TargetState.UP else SPIN_DOWN

    @classmethod
    def parse(cls, value: Union[str, "TargetState"]) -> "TargetState":
        if isinstance(value, TargetState):
            return value
        return cls(str(value).strip().lower())


def canonicalize(unitary: np.ndarray) -> np.ndarray:
    """
    Fix the global phase of a 2x2 matrix

    The first entry (row-major) with magnitude above 1e-12 is rotated onto
    the positive real axis and stored as exactly real.

    Args:
        unitary: 2x2 complex matrix

    Returns:
        Canonical-phase copy
    """
    u = np.array(unitary, dtype=complex)
    flat = u.reshape(-1)
    for i, entry in enumerate(flat):
        magnitude = abs(entry)
        if magnitude > ZERO_THRESHOLD:
            if entry.imag == 0.0 and entry.real > 0.0:
                return u
            u = u * (np.conj(entry) / magnitude)
            u.reshape(-1)[i] = magnitude
            return u
    return u


def unitaries_equal(a: np.ndarray, b: np.ndarray, tol: float = UNITARY_TOLERANCE) -> bool:
    """Entrywise equality of two matrices after phase canonicalization"""
    return float(np.max(np.abs(canonicalize(a) - canonicalize(b)))) < tol


@dataclass(frozen=True, eq=False)
class CliffordElement:
    """One group element: table index, physical-gate decomposition, canonical unitary"""

    index: int
    decomposition: Tuple[PhysicalGate, ...]
    unitary: np.ndarray = field(repr=False)

    @property
    def gate_count(self) -> int:
        """Physical gates in the decomposition (the identity counts as one)"""
        return len(self.decomposition)

    @property
    def label(self) -> str:
        return " & ".join(g.name for g in self.decomposition)

    def __eq__(self, other) -> bool:
        return isinstance(other, CliffordElement) and other.index == self.index

    def __hash__(self) -> int:
        return hash(self.index)

    def __int__(self) -> int:
        return self.index


@dataclass
class GroupVerification:
    """Outcome of the exhaustive table checks"""

    distinct: bool
    closed: bool
    inverses: bool
    average_gate_count: float
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.distinct and self.closed and self.inverses
                and abs(self.average_gate_count - AVERAGE_GATES_PER_CLIFFORD) < 1e-12)


ElementLike = Union[CliffordElement, int]


class CliffordGroup:
    """The 24-element group with precomputed composition and recovery tables"""

    def __init__(self, elements: Sequence[CliffordElement]):
        self.elements: Tuple[CliffordElement, ...] = tuple(elements)
        self._stack = np.array([e.unitary for e in self.elements])
        self._check_distinct()
        self._product = self._build_product_table()
        self._maps_down_to = self._build_state_map()
        self._recovery = self._build_recovery_table()

    # -- container protocol -------------------------------------------------

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[CliffordElement]:
        return iter(self.elements)

    def __getitem__(self, index: int) -> CliffordElement:
        """1-based lookup by table index"""
        if not 1 <= index <= len(self.elements):
            raise IndexError(f"Clifford index out of range: {index}")
        return self.elements[index - 1]

    @property
    def identity(self) -> CliffordElement:
        return self.elements[0]

    @property
    def average_gate_count(self) -> float:
        return sum(e.gate_count for e in self.elements) / len(self.elements)

    # -- table construction -------------------------------------------------

    def _check_distinct(self) -> None:
        if len(self.elements) != GROUP_ORDER:
            raise CliffordTableError(f"expected {GROUP_ORDER} elements, got {len(self.elements)}")
        for i in range(len(self.elements)):
            for j in range(i + 1, len(self.elements)):
                if unitaries_equal(self._stack[i], self._stack[j]):
                    raise CliffordTableError(
                        f"Clifford elements {i + 1} and {j + 1} have the same unitary"
                    )

    def _build_product_table(self) -> np.ndarray:
        table = np.zeros((GROUP_ORDER, GROUP_ORDER), dtype=np.int64)
        for a in self.elements:
            for b in self.elements:
                table[a.index - 1, b.index - 1] = self.find_element(b.unitary @ a.unitary).index
        return table

    def _build_state_map(self) -> Dict[int, TargetState]:
        mapping = {}
        for e in self.elements:
            out = e.unitary @ SPIN_DOWN
            if abs(out[0]) ** 2 > 1 - STATE_TOLERANCE:
                mapping[e.index] = TargetState.UP
            elif abs(out[1]) ** 2 > 1 - STATE_TOLERANCE:
                mapping[e.index] = TargetState.DOWN
        return mapping

    def _build_recovery_table(self) -> Dict[Tuple[int, TargetState], int]:
        recovery = {}
        for total in self.elements:
            for target in TargetState:
                for candidate in self.elements:
                    combined = self._product[total.index - 1, candidate.index - 1]
                    if self._maps_down_to.get(int(combined)) is target:
                        recovery[(total.index, target)] = candidate.index
                        break
                else:
                    raise CliffordTableError(
                        f"no recovery Clifford for element {total.index} -> {target.value}"
                    )
        return recovery

    # -- operations ----------------------------------------------------------

    def _element(self, value: ElementLike) -> CliffordElement:
        if isinstance(value, CliffordElement):
            return value
        return self[int(value)]

    def find_element(self, unitary: np.ndarray) -> CliffordElement:
        """
        Group element equal to a unitary up to global phase

        Raises:
            CliffordTableError: if nothing matches within 1e-9
        """
        canonical = canonicalize(unitary)
        distances = np.max(np.abs(self._stack - canonical), axis=(1, 2))
        best = int(np.argmin(distances))
        if distances[best] >= UNITARY_TOLERANCE:
            raise CliffordTableError(
                f"unitary matches no Clifford element (closest {best + 1}, distance {distances[best]:.3e})"
            )
        return self.elements[best]

    def compose(self, a: ElementLike, b: ElementLike) -> CliffordElement:
        """Element equal to 'apply a, then b' (unitary U_b U_a)"""
        a, b = self._element(a), self._element(b)
        return self.elements[int(self._product[a.index - 1, b.index - 1]) - 1]

    def inverse(self, a: ElementLike) -> CliffordElement:
        a = self._element(a)
        row = self._product[a.index - 1]
        return self.elements[int(np.flatnonzero(row == 1)[0])]

    def sequence_product(self, sequence: Sequence[ElementLike]) -> CliffordElement:
        """Single element equal to the whole sequence applied in order"""
        total = 1
        for item in sequence:
            index = item.index if isinstance(item, CliffordElement) else int(item)
            total = int(self._product[total - 1, index - 1])
        return self.elements[total - 1]

    def sequence_unitary(self, sequence: Sequence[ElementLike]) -> np.ndarray:
        """Matrix product of the sequence's unitaries (first element acts first)"""
        u = np.eye(2, dtype=complex)
        for item in sequence:
            u = self._element(item).unitary @ u
        return u

    def maps_down_to(self, a: ElementLike):
        """Sigma-z eigenstate |down> is sent to, or None for equatorial images"""
        return self._maps_down_to.get(self._element(a).index)

    def recovery_gate(self, sequence: Sequence[ElementLike],
                      target: Union[str, TargetState]) -> CliffordElement:
        """
        Lowest-index Clifford that sends |down> to the target after the sequence

        Args:
            sequence: Cliffords in application order
            target: Up or Down

        Returns:
            The recovery Clifford
        """
        target = TargetState.parse(target)
        total = self.sequence_product(sequence)
        return self.elements[self._recovery[(total.index, target)] - 1]

    def single_gate_element(self, gate: Union[str, PhysicalGate]) -> CliffordElement:
        """
        Clifford whose decomposition is exactly one physical gate

        Raises:
            UnknownGateError: for names outside I, X, Y, +-X/2, +-Y/2
        """
        gate = parse_gate(gate)
        for element in self.elements:
            if element.decomposition == (gate,):
                return element
        raise UnknownGateError(f"no single-gate Clifford for {gate.name}")

    def verify(self) -> GroupVerification:
        """Exhaustive 24x24 closure, inverse and average-length checks"""
        failures = []
        closed = True
        for a in self.elements:
            for b in self.elements:
                product = b.unitary @ a.unitary
                expected = self.compose(a, b)
                if not unitaries_equal(product, expected.unitary):
                    closed = False
                    failures.append(f"compose({a.index}, {b.index}) mismatch")
        inverses = all(
            self.compose(a, self.inverse(a)).index == 1 for a in self.elements
        )
        if not inverses:
            failures.append("missing inverse")
        distinct = len({e.index for e in self.elements}) == GROUP_ORDER
        return GroupVerification(
            distinct=distinct,
            closed=closed,
            inverses=inverses,
            average_gate_count=self.average_gate_count,
            failures=failures,
        )


def _element_from_row(index: int, names: Sequence[str]) -> CliffordElement:
    gates = tuple(parse_gate(name) for name in names)
    u = np.eye(2, dtype=complex)
    for gate in gates:
        u = gate.unitary() @ u
    return CliffordElement(index=index, decomposition=gates, unitary=canonicalize(u))


@lru_cache(maxsize=1)
def build_clifford_group() -> CliffordGroup:
    """
    Build the 24-element group from the decomposition table

    Returns:
        Immutable CliffordGroup (cached; safe to share)

    Raises:
        CliffordTableError: if the table is not 24 distinct, closed elements
    """
    elements = [_element_from_row(i + 1, row) for i, row in enumerate(CLIFFORD_TABLE)]
    group = CliffordGroup(elements)
    logger.debug(f"Built Clifford group: {len(group)} elements, "
                 f"{group.average_gate_count:.4f} physical gates per Clifford")
    return group


def compose(a: CliffordElement, b: CliffordElement) -> CliffordElement:
    """Apply a, then b"""
    return build_clifford_group().compose(a, b)


def recovery_gate(sequence: Sequence[ElementLike], target: Union[str, TargetState]) -> CliffordElement:
    """Recovery Clifford for a sequence and target state"""
    return build_clifford_group().recovery_gate(sequence, target)
