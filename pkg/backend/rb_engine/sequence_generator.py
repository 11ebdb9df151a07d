"""
Sequence generator module
Random Clifford sequences with recovery gates, plain or interleaved
"""
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Tuple, Union

import numpy as np

from backend.clifford_engine.clifford_group import (
    CliffordGroup, GROUP_ORDER, TargetState, build_clifford_group,
)
from backend.clifford_engine.physical_gates import PhysicalGate, parse_gate
from backend.exceptions import DomainError


class TargetPolicy(str, Enum):
    RANDOM_PER_SEQUENCE = "random"
    ALWAYS_DOWN = "down"

    @classmethod
    def parse(cls, value: Union[str, "TargetPolicy"]) -> "TargetPolicy":
        if isinstance(value, TargetPolicy):
            return value
        key = str(value).strip().lower()
        aliases = {"random": cls.RANDOM_PER_SEQUENCE, "random_per_sequence": cls.RANDOM_PER_SEQUENCE,
                   "down": cls.ALWAYS_DOWN, "always_down": cls.ALWAYS_DOWN}
        if key not in aliases:
            raise DomainError(f"unknown target policy '{value}' (expected random or down)")
        return aliases[key]


@dataclass(frozen=True)
class RbSequence:
    """
    One benchmarking sequence

    Attributes:
        length: Number of random Cliffords N
        clifford_indices: Full gate stream in application order, recovery last
        target: Sigma-z eigenstate the noiseless stream ends in
        interleaved_gate: Name of the interleaved physical gate, if any
        interleaved_mask: True at positions holding the interleaved gate
    """

    length: int
    clifford_indices: Tuple[int, ...]
    target: TargetState
    interleaved_gate: Optional[str] = None
    interleaved_mask: Tuple[bool, ...] = ()

    @property
    def interleaved(self) -> bool:
        return self.interleaved_gate is not None

    @property
    def random_indices(self) -> List[int]:
        mask = self.interleaved_mask or (False,) * len(self.clifford_indices)
        return [c for c, m in zip(self.clifford_indices[:-1], mask[:-1]) if not m]


class SequenceGenerator:
    """Draws random sequences from the Clifford group"""

    def __init__(self, group: Optional[CliffordGroup] = None):
        self.group = group or build_clifford_group()

    def generate(self, length: int, rng: np.random.Generator,
                 target_policy: Union[str, TargetPolicy] = TargetPolicy.RANDOM_PER_SEQUENCE,
                 interleaved_gate: Optional[Union[str, PhysicalGate]] = None) -> RbSequence:
        """
        Draw N uniform Cliffords, pick the target and append the recovery gate

        Draw order: N Clifford indices, then (random policy only) the target.

        Args:
            length: Number of random Cliffords N (>= 1)
            rng: Sequence random stream
            target_policy: random per sequence or always down
            interleaved_gate: Physical gate inserted after each random Clifford

        Returns:
            RbSequence

        Raises:
            UnknownGateError: if the interleaved gate has no single-gate Clifford
        """
        if length < 1:
            raise DomainError(f"sequence length must be >= 1, got {length}")
        policy = TargetPolicy.parse(target_policy)
        interleaved_element = None
        gate_name = None
        if interleaved_gate is not None:
            gate = parse_gate(interleaved_gate)
            interleaved_element = self.group.single_gate_element(gate)
            gate_name = gate.name

        randoms = rng.integers(1, GROUP_ORDER + 1, size=length)
        if policy is TargetPolicy.RANDOM_PER_SEQUENCE:
            target = TargetState.UP if rng.integers(0, 2) == 1 else TargetState.DOWN
        else:
            target = TargetState.DOWN

        stream: List[int] = []
        mask: List[bool] = []
        for index in randoms:
            stream.append(int(index))
            mask.append(False)
            if interleaved_element is not None:
                stream.append(interleaved_element.index)
                mask.append(True)

        recovery = self.group.recovery_gate(stream, target)
        stream.append(recovery.index)
        mask.append(False)
        return RbSequence(
            length=length,
            clifford_indices=tuple(stream),
            target=target,
            interleaved_gate=gate_name,
            interleaved_mask=tuple(mask),
        )


def generate_sequence(length: int, rng: np.random.Generator,
                      target_policy: Union[str, TargetPolicy] = TargetPolicy.RANDOM_PER_SEQUENCE,
                      interleaved_gate: Optional[Union[str, PhysicalGate]] = None) -> RbSequence:
    """Module-level shortcut over the shared Clifford group"""
    return SequenceGenerator().generate(length, rng, target_policy, interleaved_gate)
