"""Tests for random Clifford sequence generation."""

import numpy as np
import pytest

from backend.clifford_engine.clifford_group import SPIN_DOWN, TargetState
from backend.exceptions import DomainError, UnknownGateError
from backend.rb_engine.sequence_generator import (
    SequenceGenerator, TargetPolicy, generate_sequence,
)


@pytest.fixture(scope="module")
def generator():
    return SequenceGenerator()


def _final_population(group, sequence, target):
    final = group.sequence_unitary(list(sequence.clifford_indices)) @ SPIN_DOWN
    return abs(np.vdot(target.vector, final)) ** 2


def test_length_one_indices_and_targets_are_uniform(generator):
    rng = np.random.default_rng(2024)
    draws = 100_000
    counts = np.zeros(25)
    ups = 0
    for _ in range(draws):
        sequence = generator.generate(1, rng)
        counts[sequence.random_indices[0]] += 1
        ups += sequence.target is TargetState.UP

    assert np.all(np.abs(counts[1:] / draws - 1 / 24) < 0.005)
    assert ups / draws == pytest.approx(0.5, abs=0.01)


@pytest.mark.parametrize("length", [1, 2, 16, 512])
def test_sequence_structure(generator, length):
    sequence = generator.generate(length, np.random.default_rng(length))

    assert sequence.length == length
    assert len(sequence.clifford_indices) == length + 1
    assert len(sequence.random_indices) == length
    assert all(1 <= c <= 24 for c in sequence.clifford_indices)
    assert not sequence.interleaved


@pytest.mark.parametrize("length", [1, 8, 512, 1000])
def test_noiseless_sequence_reaches_target(generator, length):
    sequence = generator.generate(length, np.random.default_rng(length))
    assert _final_population(generator.group, sequence, sequence.target) > 1 - 1e-9


def test_always_down_policy(generator):
    rng = np.random.default_rng(0)
    targets = {generator.generate(4, rng, TargetPolicy.ALWAYS_DOWN).target for _ in range(50)}
    assert targets == {TargetState.DOWN}


def test_always_down_draws_only_indices(generator):
    # the random policy draws the target after the indices, so the index draws agree
    random_policy = generator.generate(10, np.random.default_rng(9), "random")
    down_policy = generator.generate(10, np.random.default_rng(9), "down")
    assert random_policy.random_indices == down_policy.random_indices


@pytest.mark.parametrize("gate", ["X", "Y", "X/2", "Y/2", "-X/2", "-Y/2"])
def test_interleaved_structure(generator, gate):
    sequence = generator.generate(6, np.random.default_rng(1), interleaved_gate=gate)
    gate_index = generator.group.single_gate_element(gate).index

    assert sequence.interleaved_gate == gate
    assert len(sequence.clifford_indices) == 2 * 6 + 1
    assert sequence.interleaved_mask == (False, True) * 6 + (False,)
    assert list(sequence.clifford_indices[1:-1:2]) == [gate_index] * 6
    assert _final_population(generator.group, sequence, sequence.target) > 1 - 1e-9


def test_interleaved_keeps_random_draws(generator):
    plain = generator.generate(5, np.random.default_rng(3))
    interleaved = generator.generate(5, np.random.default_rng(3), interleaved_gate="X")
    assert plain.random_indices == interleaved.random_indices
    assert plain.target is interleaved.target


def test_unknown_interleaved_gate(generator):
    with pytest.raises(UnknownGateError):
        generator.generate(3, np.random.default_rng(0), interleaved_gate="Z")


def test_length_must_be_positive(generator):
    with pytest.raises(DomainError):
        generator.generate(0, np.random.default_rng(0))


def test_module_shortcut_matches_generator(generator):
    a = generate_sequence(7, np.random.default_rng(11))
    b = generator.generate(7, np.random.default_rng(11))
    assert a == b


def test_target_policy_parse():
    assert TargetPolicy.parse("Always_Down") is TargetPolicy.ALWAYS_DOWN
    with pytest.raises(DomainError):
        TargetPolicy.parse("up")
