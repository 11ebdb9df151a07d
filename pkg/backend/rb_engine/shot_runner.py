"""
Shot runner module
Executes benchmarking sequences as physical pulses and samples single-shot readout
"""
from dataclasses import dataclass, field
from typing import ClassVar, Dict, Optional, Union

import numpy as np

from backend import config
from backend.clifford_engine.clifford_group import CliffordGroup, build_clifford_group
from backend.clifford_engine.physical_gates import PHYSICAL_GATES
from backend.rb_engine.sequence_generator import RbSequence
from backend.rb_engine.spam_model import SpamModel
from backend.spin_engine.noise_model import NoiseModel, NoiseRealization
from backend.spin_engine.pulse_evolution import (
    depolarize_batch, evolve_batch, idle_batch, pulse_propagator, rephase,
)
from backend.spin_engine.pulse_shapes import PulseShape, PulseSpec
from backend.spin_engine.qubit_state import QubitState
from backend.utils.rng import shot_uniforms, uniforms_to_normals

_RHO_DOWN = QubitState.down().rho
_RHO_UP = QubitState.up().rho


@dataclass(frozen=True)
class ShotDraw:
    """
    Random numbers consumed by a block of shots

    Per shot, in draw order: initialization flip, detuning normal,
    amplitude normal, projective measurement, readout confusion.
    """

    N_DRAWS: ClassVar[int] = 5

    u_init: np.ndarray
    z_detuning: np.ndarray
    z_amplitude: np.ndarray
    u_measure: np.ndarray
    u_readout: np.ndarray

    @classmethod
    def from_uniforms(cls, u: np.ndarray) -> "ShotDraw":
        """Split an (m, 5) block of open-interval uniforms"""
        u = np.asarray(u, dtype=float)
        return cls(
            u_init=u[:, 0],
            z_detuning=uniforms_to_normals(u[:, 1]),
            z_amplitude=uniforms_to_normals(u[:, 2]),
            u_measure=u[:, 3],
            u_readout=u[:, 4],
        )

    @classmethod
    def from_counter(cls, seed: int, keys, shots: int) -> "ShotDraw":
        return cls.from_uniforms(shot_uniforms(seed, keys, shots, cls.N_DRAWS))

    @classmethod
    def from_generator(cls, rng: np.random.Generator, count: int = 1) -> "ShotDraw":
        draws = rng.random((count, cls.N_DRAWS))
        # keep the normal transform finite
        draws = np.clip(draws, np.finfo(float).tiny, 1.0 - np.finfo(float).eps)
        return cls.from_uniforms(draws)

    def __len__(self) -> int:
        return int(np.size(self.u_init))


@dataclass
class ShotRunner:
    """
    Pulse-level executor of RB sequences

    Only the phase-0 pi and pi/2 propagators are computed per noise
    realization; every other physical gate is a phase rotation of those.
    """

    pulse_shape: PulseShape = PulseShape.SQUARE
    pi_pulse_duration: float = config.DEFAULT_PI_PULSE_DURATION
    noise: NoiseModel = field(default_factory=NoiseModel)
    spam: SpamModel = field(default_factory=SpamModel)
    group: CliffordGroup = field(default_factory=build_clifford_group)
    max_slice_rotation: float = config.DEFAULT_MAX_SLICE_ROTATION
    _static_cliffords: Optional[np.ndarray] = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.pulse_shape = PulseShape.parse(self.pulse_shape)

    # -- propagators --------------------------------------------------------------

    def gate_propagators(self, realization: NoiseRealization) -> Dict[str, np.ndarray]:
        """Propagator stacks (m, 2, 2) for every physical gate name"""
        count = len(realization)
        pi_spec = PulseSpec(self.pulse_shape, 0.0, np.pi, self.pi_pulse_duration)
        base = {
            1.0: pulse_propagator(pi_spec, self.noise, realization, self.max_slice_rotation),
            0.5: pulse_propagator(pi_spec.with_rotation(np.pi / 2), self.noise, realization,
                                  self.max_slice_rotation),
        }
        props = {}
        for name, gate in PHYSICAL_GATES.items():
            if gate.is_identity:
                props[name] = np.broadcast_to(np.eye(2, dtype=complex), (count, 2, 2))
            else:
                props[name] = rephase(base[abs(gate.angle)], gate.phase)
        return props

    def clifford_propagators(self, realization: NoiseRealization) -> np.ndarray:
        """Stack (24, m, 2, 2) of each Clifford's pulse sequence"""
        gates = self.gate_propagators(realization)
        out = np.empty((len(self.group), len(realization), 2, 2), dtype=complex)
        for element in self.group:
            u = gates[element.decomposition[0].name]
            for gate in element.decomposition[1:]:
                u = gates[gate.name] @ u
            out[element.index - 1] = u
        return out

    def _static_propagators(self) -> np.ndarray:
        if self._static_cliffords is None:
            self._static_cliffords = self.clifford_propagators(NoiseRealization.zero())
        return self._static_cliffords

    # -- evolution ----------------------------------------------------------------

    def evolve(self, sequence: RbSequence, rhos: np.ndarray, cliffords: np.ndarray,
               detunings: np.ndarray) -> np.ndarray:
        """
        Push a stack of density matrices through the sequence

        Args:
            sequence: Gate stream to apply
            rhos: Initial states (m, 2, 2)
            cliffords: Clifford propagators (24, m or 1, 2, 2)
            detunings: Per-shot quasi-static detuning for idle periods

        Returns:
            Final states (m, 2, 2)
        """
        noise = self.noise
        mask = sequence.interleaved_mask or (False,) * len(sequence.clifford_indices)
        for index, interleaved in zip(sequence.clifford_indices, mask):
            rhos = evolve_batch(rhos, cliffords[index - 1])
            p = noise.interleaved_depolarizing if interleaved else noise.depolarizing_per_clifford
            rhos = depolarize_batch(rhos, p)
            rhos = idle_batch(rhos, noise.idle_time, detunings, noise.t2_star)
        return rhos

    def final_state(self, sequence: RbSequence,
                    initial: Optional[QubitState] = None) -> QubitState:
        """Final state of one noise-free realization (depolarizing still applied)"""
        rho0 = (initial or QubitState.down()).rho[None]
        rho = self.evolve(sequence, rho0, self._static_propagators(), np.zeros(1))
        return QubitState(rho[0], validate=False)

    def up_probabilities(self, sequence: RbSequence, draw: ShotDraw) -> np.ndarray:
        """Probability of measuring spin up for every shot in the draw"""
        prepared_up = self.spam.prepared_up(draw.u_init)
        if not self.noise.is_stochastic:
            # every shot sees the same channel: evolve the two possible inputs once
            finals = self.evolve(sequence, np.stack([_RHO_DOWN, _RHO_UP]),
                                 self._static_propagators(), np.zeros(1))
            p_down_in, p_up_in = np.clip(finals[:, 0, 0].real, 0.0, 1.0)
            return np.where(prepared_up, p_up_in, p_down_in)

        realization = NoiseRealization.from_normals(self.noise, draw.z_detuning, draw.z_amplitude)
        cliffords = self.clifford_propagators(realization)
        rhos = np.where(prepared_up[:, None, None], _RHO_UP, _RHO_DOWN).astype(complex)
        finals = self.evolve(sequence, rhos, cliffords, realization.detuning)
        return np.clip(finals[:, 0, 0].real, 0.0, 1.0)

    def run(self, sequence: RbSequence, draw: ShotDraw) -> np.ndarray:
        """
        Execute one shot per draw entry

        Returns:
            Boolean array, True where 'up' is reported
        """
        p_up = self.up_probabilities(sequence, draw)
        spin_up = draw.u_measure < p_up
        return self.spam.report(spin_up, draw.u_readout)


def run_shot(sequence: RbSequence, noise: Optional[NoiseModel], spam: Optional[SpamModel],
             rng: np.random.Generator,
             pulse_shape: Union[str, PulseShape] = config.DEFAULT_PULSE_SHAPE,
             pi_pulse_duration: float = config.DEFAULT_PI_PULSE_DURATION,
             max_slice_rotation: float = config.DEFAULT_MAX_SLICE_ROTATION) -> bool:
    """
    Single shot of a sequence

    Args:
        sequence: Sequence to execute
        noise: Noise model (noiseless if None)
        spam: SPAM model (perfect if None)
        rng: Shot random stream
        pulse_shape: Pulse envelope
        pi_pulse_duration: pi-pulse duration in seconds

    Returns:
        True if 'up' is reported
    """
    runner = ShotRunner(
        pulse_shape=PulseShape.parse(pulse_shape),
        pi_pulse_duration=pi_pulse_duration,
        noise=noise or NoiseModel(),
        spam=spam or SpamModel(),
        max_slice_rotation=max_slice_rotation,
    )
    return bool(runner.run(sequence, ShotDraw.from_generator(rng, 1))[0])
