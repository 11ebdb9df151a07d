"""Tests for the residual bootstrap interval."""

import numpy as np
import pytest

from backend import config
from backend.analysis import bootstrap
from backend.analysis.aggregation import aggregate
from backend.analysis.bootstrap import bootstrap_ci
from backend.analysis.decay_fitter import fit_decay
from backend.exceptions import BootstrapError, DomainError, FitConvergenceError
from backend.rb_engine.experiment_runner import RbConfig, run_experiment
from backend.spin_engine.noise_model import NoiseModel
from conftest import exact_curve

LENGTHS = [1, 2, 4, 8, 16, 32, 64, 128]


def _noisy_curve():
    curve = exact_curve(0.99, LENGTHS, variances=np.linspace(2e-5, 2e-4, len(LENGTHS)))
    wiggle = 3e-3 * np.array([1, -1, 0.5, -0.5, 1, -1, 0.25, -0.25])
    return curve.with_means(curve.means + wiggle)


def test_exact_data_gives_zero_width():
    interval = bootstrap_ci(exact_curve(0.99, LENGTHS), n_resamples=20)

    assert interval.width < 1e-9
    assert interval.lower == pytest.approx(0.99, abs=1e-9)
    assert interval.n_failed == 0
    assert not interval.degenerate


def test_interval_contains_fitted_p():
    curve = _noisy_curve()
    fit = fit_decay(curve)
    interval = bootstrap_ci(curve, n_resamples=200, seed=5, fit=fit)

    assert interval.lower <= fit.p <= interval.upper
    assert interval.width > 0
    assert interval.n_resamples == 200


@pytest.mark.slow
@pytest.mark.parametrize("seed", [1, 2, 3])
def test_width_agrees_with_covariance_interval(seed):
    rb = RbConfig(lengths=config.ELECTRON_LENGTHS, sequences_per_length=15,
                  shots_per_sequence=200, seed=seed,
                  noise=NoiseModel(depolarizing_per_clifford=0.002))
    curve = aggregate(run_experiment(rb))
    fit = fit_decay(curve)
    interval = bootstrap_ci(curve, n_resamples=400, seed=seed, fit=fit)

    ratio = interval.width / (fit.p_ci[1] - fit.p_ci[0])
    assert 0.5 <= ratio <= 2.0
    assert interval.lower < fit.p_ci[1] and fit.p_ci[0] < interval.upper


def test_same_seed_same_interval():
    curve = _noisy_curve()
    assert bootstrap_ci(curve, n_resamples=50, seed=3) == bootstrap_ci(curve, n_resamples=50, seed=3)


def test_single_resample_is_degenerate():
    interval = bootstrap_ci(_noisy_curve(), n_resamples=1)
    assert interval.degenerate
    assert interval.width == 0.0


def test_free_mode_bootstrap():
    curve = exact_curve(0.99, LENGTHS, p0=-0.5, mode="free")
    interval = bootstrap_ci(curve, n_resamples=10)
    assert interval.lower == pytest.approx(0.99, abs=1e-8)


def _flaky_fit(fail_every):
    calls = {"n": 0}

    def fake(agg, mode=None, initial=None):
        calls["n"] += 1
        if calls["n"] % fail_every == 0:
            raise FitConvergenceError("forced failure")
        return fit_decay(agg, mode, initial)
    return fake


def test_tolerates_few_failed_refits(monkeypatch):
    curve = _noisy_curve()
    fit = fit_decay(curve)
    monkeypatch.setattr(bootstrap, "fit_decay", _flaky_fit(10))

    interval = bootstrap_ci(curve, n_resamples=20, fit=fit)
    assert interval.n_failed == 2


def test_too_many_failed_refits(monkeypatch):
    curve = _noisy_curve()
    fit = fit_decay(curve)
    monkeypatch.setattr(bootstrap, "fit_decay", _flaky_fit(1))

    with pytest.raises(BootstrapError, match="20/20"):
        bootstrap_ci(curve, n_resamples=20, fit=fit)


def test_resample_count_must_be_positive():
    with pytest.raises(DomainError):
        bootstrap_ci(_noisy_curve(), n_resamples=0)


def test_to_dict():
    data = bootstrap_ci(exact_curve(0.99, LENGTHS), n_resamples=2).to_dict()
    assert set(data) == {"lower", "upper", "n_resamples", "n_failed", "degenerate"}
