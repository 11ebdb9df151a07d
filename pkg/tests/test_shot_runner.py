"""Tests for pulse-level sequence execution and single-shot sampling."""

import numpy as np
import pytest

from backend.clifford_engine.clifford_group import TargetState
from backend.rb_engine.sequence_generator import SequenceGenerator
from backend.rb_engine.shot_runner import ShotDraw, ShotRunner, run_shot
from backend.rb_engine.spam_model import SpamModel
from backend.spin_engine.noise_model import NoiseModel
from backend.spin_engine.qubit_state import QubitState, state_fidelity


@pytest.fixture(scope="module")
def generator():
    return SequenceGenerator()


def _draw(shots, u_init=0.5, u_measure=0.5, u_readout=0.5):
    u = np.full((shots, ShotDraw.N_DRAWS), 0.5)
    u[:, 0], u[:, 3], u[:, 4] = u_init, u_measure, u_readout
    return ShotDraw.from_uniforms(u)


def _ideal(target):
    return QubitState.from_vector(target.vector)


@pytest.mark.parametrize("shape", ["square", "sinc3"])
def test_noiseless_execution_reaches_target(generator, shape):
    runner = ShotRunner(pulse_shape=shape, group=generator.group)
    rng = np.random.default_rng(5)
    for length in (1, 16, 128):
        sequence = generator.generate(length, rng)
        fidelity = state_fidelity(runner.final_state(sequence), _ideal(sequence.target))
        assert fidelity > 1 - 1e-9


@pytest.mark.parametrize("length", [1, 4, 32, 256])
def test_depolarizing_matches_channel_algebra(generator, length):
    p_dep = 0.002
    runner = ShotRunner(noise=NoiseModel(depolarizing_per_clifford=p_dep), group=generator.group)
    sequence = generator.generate(length, np.random.default_rng(length))
    fidelity = state_fidelity(runner.final_state(sequence), _ideal(sequence.target))
    assert fidelity == pytest.approx(0.5 + 0.5 * (1 - p_dep) ** (length + 1), abs=1e-12)


def test_interleaved_depolarizing_only_hits_interleaved_gates(generator):
    noise = NoiseModel(depolarizing_per_clifford=0.002, interleaved_depolarizing=0.001)
    runner = ShotRunner(noise=noise, group=generator.group)
    sequence = generator.generate(20, np.random.default_rng(4), interleaved_gate="X")
    fidelity = state_fidelity(runner.final_state(sequence), _ideal(sequence.target))
    expected = 0.5 + 0.5 * (1 - 0.002) ** 21 * (1 - 0.001) ** 20
    assert fidelity == pytest.approx(expected, abs=1e-12)


def test_readout_fidelity_sets_reported_fraction(generator):
    runner = ShotRunner(spam=SpamModel(readout_fidelity_up=0.9), group=generator.group)
    rng = np.random.default_rng(8)
    sequence = generator.generate(3, rng)
    while sequence.target is not TargetState.UP:
        sequence = generator.generate(3, rng)
    outcomes = runner.run(sequence, ShotDraw.from_generator(np.random.default_rng(1), 20000))
    assert outcomes.mean() == pytest.approx(0.9, abs=0.01)


@pytest.mark.parametrize("length", [1, 16, 256])
def test_spam_does_not_depend_on_length(generator, length):
    spam = SpamModel(init_error=0.1, readout_fidelity_up=0.85, readout_fidelity_down=0.95)
    runner = ShotRunner(spam=spam, group=generator.group)
    sequence = generator.generate(length, np.random.default_rng(length), "down")

    # prepared |down> ends in |down>; a flipped preparation ends in |up>
    assert runner.up_probabilities(sequence, _draw(1, u_init=0.5))[0] == pytest.approx(0.0, abs=1e-9)
    assert runner.up_probabilities(sequence, _draw(1, u_init=0.05))[0] == pytest.approx(1.0, abs=1e-9)


def test_fast_path_matches_batched_evolution(generator):
    noise = NoiseModel(depolarizing_per_clifford=0.01, time_quantum=20e-9)
    runner = ShotRunner(pi_pulse_duration=0.5e-6, noise=noise, group=generator.group)
    sequence = generator.generate(12, np.random.default_rng(2))
    draw = _draw(4)

    fast = runner.up_probabilities(sequence, draw)
    # a vanishing amplitude spread forces the per-shot path
    slow_runner = ShotRunner(pi_pulse_duration=0.5e-6, group=generator.group,
                             noise=NoiseModel(depolarizing_per_clifford=0.01, time_quantum=20e-9,
                                              amplitude_error_sigma=1e-300))
    slow = slow_runner.up_probabilities(sequence, draw)
    assert np.allclose(fast, slow, atol=1e-12)


def test_stochastic_shots_differ_by_draw(generator):
    noise = NoiseModel(detuning_sigma=50e3)
    runner = ShotRunner(noise=noise, group=generator.group)
    sequence = generator.generate(8, np.random.default_rng(0))
    draw = ShotDraw.from_generator(np.random.default_rng(1), 50)
    p_up = runner.up_probabilities(sequence, draw)
    assert p_up.shape == (50,)
    assert np.ptp(p_up) > 1e-3


def test_idle_dephasing_lowers_success(generator):
    noise = NoiseModel(idle_time=0.1, t2_star=0.6)
    runner = ShotRunner(noise=noise, group=generator.group)
    sequence = generator.generate(20, np.random.default_rng(3))
    fidelity = state_fidelity(runner.final_state(sequence), _ideal(sequence.target))
    assert fidelity < 0.999


def test_run_shot_returns_bool(generator):
    sequence = generator.generate(4, np.random.default_rng(6))
    outcome = run_shot(sequence, None, None, np.random.default_rng(0))
    assert isinstance(outcome, bool)
    assert outcome == (sequence.target is TargetState.UP)


def test_shot_draw_from_counter_is_reproducible():
    a = ShotDraw.from_counter(3, (1, 4, 0, 0), 10)
    b = ShotDraw.from_counter(3, (1, 4, 0, 0), 10)
    assert len(a) == 10
    assert np.array_equal(a.u_measure, b.u_measure)
    assert np.all(np.isfinite(a.z_detuning))
