"""Shared fixtures and synthetic-data builders for the spin bench tests."""

import math
import pathlib
import sys

import numpy as np
import pytest

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1]))

from backend import config
from backend.analysis.aggregation import AggregatedDecay, FitMode
from backend.clifford_engine.clifford_group import TargetState, build_clifford_group
from backend.rb_engine.dataset import RbDataset, SequenceRecord

GOLDEN_DIR = pathlib.Path(__file__).parent / "golden"


@pytest.fixture(scope="session")
def group():
    return build_clifford_group()


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    """Redirect the default output directory into the test's tmp dir"""
    out = tmp_path / "output"
    monkeypatch.setattr(config, "OUTPUT_DIR", out)
    return out


def synthetic_dataset(p=0.95, lengths=(1, 2, 4, 8, 16, 32), sequences=4, shots=400,
                      spread=0.01, seed=0):
    """
    Dataset whose success probability follows 0.5 + 0.5 * p**N

    Targets alternate up/down; each sequence gets a fixed success offset in
    +-spread so the per-length variance is non-zero. The first m shots of a
    record succeed, m = round(shots * success).
    """
    records = []
    offsets = np.linspace(-spread, spread, sequences)
    for n in lengths:
        for k in range(sequences):
            target = TargetState.UP if k % 2 == 0 else TargetState.DOWN
            success = min(1.0, max(0.0, 0.5 + 0.5 * p ** n + offsets[k]))
            m = int(round(shots * success))
            succeeded = np.arange(shots) < m
            outcomes = succeeded if target is TargetState.UP else ~succeeded
            records.append(SequenceRecord(n, k, target, outcomes))
    metadata = {"seed": seed, "config": {"shots_per_sequence": shots, "interleaved_gate": None}}
    return RbDataset(records, metadata)


def exact_curve(p, lengths, p0=0.5, p_inf=0.5, mode="combined", variances=None):
    """Aggregated curve lying exactly on the decay model"""
    mode = FitMode.parse(mode)
    n = np.asarray(lengths, dtype=int)
    means = p0 * np.power(p, n.astype(float)) + p_inf
    if variances is None:
        variances = np.full(n.size, 1e-4)
    return AggregatedDecay(
        lengths=n,
        means=means,
        variances=np.asarray(variances, dtype=float),
        counts=np.full(n.size, 15),
        mode=mode,
        offset=None if mode.offset_is_free else (mode.fixed_value if mode.fixed_value is not None else p_inf),
    )


def assert_matches(actual, expected, rel=1e-12):
    """Recursive equality with float tolerance for nested JSON-like values"""
    if isinstance(expected, dict):
        assert isinstance(actual, dict)
        assert set(actual) == set(expected), f"keys differ: {set(actual) ^ set(expected)}"
        for key in expected:
            assert_matches(actual[key], expected[key], rel)
    elif isinstance(expected, list):
        assert isinstance(actual, (list, tuple))
        assert len(actual) == len(expected)
        for a, e in zip(actual, expected):
            assert_matches(a, e, rel)
    elif isinstance(expected, float) and not isinstance(expected, bool):
        assert not isinstance(actual, bool)
        if math.isinf(expected):
            assert actual == expected
        else:
            assert actual == pytest.approx(expected, rel=rel)
    else:
        assert actual == expected
