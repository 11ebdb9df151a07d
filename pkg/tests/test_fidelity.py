"""Tests for the fidelity mappings and the interleaved comparison."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from backend.analysis.decay_fitter import FitResult
from backend.analysis.fidelity import (
    clifford_fidelity, compare_interleaved, interleaved_ci, interleaved_fidelity,
    single_gate_fidelity,
)
from backend.exceptions import DomainError, MissingConfidenceIntervalError

decay = st.floats(min_value=1e-3, max_value=1.0)


def _fit(p, half_width=0.0):
    ci = None if half_width is None else (p - half_width, p + half_width)
    return FitResult(
        mode="combined", p=p, p_ci=ci, p0=0.5, p0_ci=None, p_inf=0.5, p_inf_ci=None,
        clifford_fidelity=clifford_fidelity(p), clifford_fidelity_ci=None,
        single_gate_fidelity=single_gate_fidelity(clifford_fidelity(p)),
        single_gate_fidelity_ci=None, weighted_residual_sum=0.0, iterations=1,
        converged=True, dof=3, n_points=5,
    )


def test_perfect_decay():
    assert clifford_fidelity(1.0) == 1.0
    assert single_gate_fidelity(1.0) == 1.0


def test_known_values():
    assert clifford_fidelity(0.999) == pytest.approx(0.9995)
    assert single_gate_fidelity(0.9995) == pytest.approx(1 - 0.0005 / 1.875)
    assert single_gate_fidelity(0.9995) == pytest.approx(0.99973333333, abs=1e-10)


def test_single_gate_count_override():
    assert single_gate_fidelity(0.99, gates_per_clifford=1.0) == pytest.approx(0.99)


def test_equal_decays_give_unit_gate_fidelity():
    assert interleaved_fidelity(0.98, 0.98) == 1.0


def test_gate_fidelity_value():
    assert interleaved_fidelity(0.97, 0.98) == pytest.approx((1 + 0.97 / 0.98) / 2)


def test_zero_width_intervals():
    low, high = interleaved_ci(_fit(0.99), _fit(0.98))
    assert low == high == pytest.approx(interleaved_fidelity(0.98, 0.99))


def test_relative_widths_add_in_quadrature():
    # relative half-widths 0.03 and 0.04 combine to 0.05
    low, high = interleaved_ci(_fit(0.5, 0.015), _fit(0.5, 0.02))
    assert (high - low) / 2 == pytest.approx(0.05 / 2)
    assert (low + high) / 2 == pytest.approx(1.0)


def test_missing_interval():
    with pytest.raises(MissingConfidenceIntervalError, match="reference"):
        interleaved_ci(_fit(0.99, None), _fit(0.98))
    with pytest.raises(MissingConfidenceIntervalError, match="interleaved"):
        interleaved_ci(_fit(0.99), _fit(0.98, None))


def test_compare_flags_gate_fidelity_above_one(caplog):
    result = compare_interleaved("X", _fit(0.98, 1e-3), _fit(0.985, 1e-3))

    assert result.above_one
    assert result.gate_fidelity > 1.0
    assert "reported unclipped" in caplog.text
    assert result.to_dict()["gate_fidelity_ci"] == list(result.gate_fidelity_ci)


def test_compare_regular_gate():
    result = compare_interleaved("Y/2", _fit(0.99, 1e-3), _fit(0.985, 1e-3))
    assert not result.above_one
    assert result.gate == "Y/2"
    assert result.p_c == 0.99 and result.p_gate == 0.985


@given(decay, decay)
def test_clifford_fidelity_is_monotone(a, b):
    low, high = sorted((a, b))
    assert clifford_fidelity(low) <= clifford_fidelity(high)
    assert single_gate_fidelity(clifford_fidelity(low)) <= single_gate_fidelity(clifford_fidelity(high))


@given(decay)
def test_single_gate_fidelity_is_at_least_clifford_fidelity(p):
    f_c = clifford_fidelity(p)
    assert single_gate_fidelity(f_c) >= f_c


@pytest.mark.parametrize("p", [0.0, -0.1, 1.5, math.nan])
def test_decay_outside_domain(p):
    with pytest.raises(DomainError):
        clifford_fidelity(p)
    with pytest.raises(DomainError):
        interleaved_fidelity(p, 0.9)


@pytest.mark.parametrize("p", [np.int64(1), np.float32(0.998), np.float64(0.99)])
def test_numpy_scalars_accepted(p):
    assert clifford_fidelity(p) == pytest.approx((1.0 + float(p)) / 2.0)
    assert interleaved_fidelity(p, p) == pytest.approx(1.0)


@pytest.mark.parametrize("p", [True, "0.9", None])
def test_non_numeric_decay_rejected(p):
    with pytest.raises(DomainError):
        clifford_fidelity(p)


@pytest.mark.parametrize("f_c", [0.5, 0.2, 1.01])
def test_clifford_fidelity_outside_domain(f_c):
    with pytest.raises(DomainError):
        single_gate_fidelity(f_c)
