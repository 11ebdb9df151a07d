"""End-to-end benchmarking runs against known error channels."""

import pytest

from backend import config
from backend.analysis.aggregation import aggregate
from backend.analysis.decay_fitter import fit_decay
from backend.analysis.fidelity import compare_interleaved
from backend.experiment.experiment_config import parse_config
from backend.experiment.sweep_runner import run_sweep
from backend.main import BenchmarkLab
from backend.rb_engine.experiment_runner import RbConfig, run_experiment
from backend.rb_engine.spam_model import SpamModel
from backend.spin_engine.noise_model import NoiseModel

pytestmark = pytest.mark.slow

PERFECT = {
    "noise": {"detuning_sigma": 0.0, "time_quantum": 0.0},
    "spam": {"init_error": 0.0, "readout_fidelity_up": 1.0, "readout_fidelity_down": 1.0},
}


@pytest.mark.parametrize("preset", ["electron-square", "electron-sinc", "nuclear-square"])
def test_noiseless_presets_always_succeed(preset):
    cfg = parse_config(preset=preset, overrides=dict(PERFECT, sequences_per_length=2,
                                                     shots_per_sequence=5))
    dataset = run_experiment(cfg.rb)
    assert all(r.success == 1.0 for r in dataset)
    fit = fit_decay(aggregate(dataset))
    assert fit.clifford_fidelity == pytest.approx(1.0, abs=1e-9)


def test_depolarizing_channel_is_recovered():
    rb = RbConfig(lengths=config.ELECTRON_LENGTHS, sequences_per_length=15,
                  shots_per_sequence=10000, seed=1,
                  noise=NoiseModel(depolarizing_per_clifford=0.002))
    fit = fit_decay(aggregate(run_experiment(rb)))

    assert fit.p == pytest.approx(0.998, abs=5e-4)
    assert fit.clifford_fidelity == pytest.approx(0.999, abs=2.5e-4)
    assert fit.p_ci[0] < fit.p < fit.p_ci[1]


@pytest.mark.parametrize("gate_error, expected", [(0.001, 0.9995), (0.0, 1.0)])
def test_interleaved_gate_fidelity(gate_error, expected):
    base = dict(lengths=config.ELECTRON_LENGTHS, sequences_per_length=15,
                shots_per_sequence=10000, seed=2,
                noise=NoiseModel(interleaved_depolarizing=gate_error))
    reference = fit_decay(aggregate(run_experiment(RbConfig(**base))))
    gate = fit_decay(aggregate(run_experiment(RbConfig(interleaved_gate="X", **base))))

    row = compare_interleaved("X", reference, gate)
    assert row.gate_fidelity == pytest.approx(expected, abs=5e-4)
    if gate_error == 0.0:
        low, high = row.gate_fidelity_ci
        assert low <= 1.0 <= high


def test_fit_modes_agree():
    rb = RbConfig(lengths=config.ELECTRON_LENGTHS[:8], sequences_per_length=15,
                  shots_per_sequence=2000, seed=4,
                  noise=NoiseModel(depolarizing_per_clifford=0.01))
    dataset = run_experiment(rb)
    free = fit_decay(aggregate(dataset, "free"))
    fixed = fit_decay(aggregate(dataset, "fixed"))
    combined = fit_decay(aggregate(dataset, "combined"))

    assert abs(free.p - combined.p) <= free.p_half_width + combined.p_half_width
    assert abs(fixed.p - combined.p) <= fixed.p_half_width + combined.p_half_width
    assert abs(free.p - fixed.p) <= free.p_half_width + fixed.p_half_width
    assert combined.p_half_width < free.p_half_width


def test_coarse_timing_hurts_short_square_pulses():
    cfg = parse_config(data={
        "lengths": [1, 2, 4, 8, 16, 32, 64, 128],
        "sequences_per_length": 15,
        "shots_per_sequence": 500,
        "noise": {"detuning_sigma": 0.0, "time_quantum": 20e-9},
        "spam": PERFECT["spam"],
        "sweep": [{"pi_pulse_duration": 0.5e-6}, {"pi_pulse_duration": 4e-6}],
    })
    short, long = run_sweep(cfg).rows

    assert long.clifford_fidelity == pytest.approx(1.0, abs=1e-9)
    assert short.ok
    assert short.clifford_fidelity < long.clifford_fidelity


def test_outputs_do_not_depend_on_worker_count(tmp_path):
    cfg = parse_config(overrides={"lengths": [1, 8, 64], "sequences_per_length": 4,
                                  "shots_per_sequence": 50, "seed": 6,
                                  "noise": {"depolarizing_per_clifford": 0.02}})
    for workers in (1, 3):
        lab = BenchmarkLab(output_dir=tmp_path / str(workers), workers=workers)
        lab.fit_dataset(lab.run_rb(cfg))

    for name in ("dataset.csv", "dataset.json", "fit_report.json", "fit_decay.csv"):
        assert (tmp_path / "1" / name).read_bytes() == (tmp_path / "3" / name).read_bytes()


def test_spam_errors_do_not_shift_the_combined_decay():
    base = dict(lengths=config.ELECTRON_LENGTHS, sequences_per_length=15,
                shots_per_sequence=10000, seed=3,
                noise=NoiseModel(depolarizing_per_clifford=0.002))
    ideal = fit_decay(aggregate(run_experiment(RbConfig(**base))))

    for readout_up in (1.0, 0.95, 0.85):
        for init_error in (0.0, 0.1):
            spam = SpamModel(init_error=init_error, readout_fidelity_up=readout_up)
            fit = fit_decay(aggregate(run_experiment(RbConfig(spam=spam, **base))))
            assert abs(fit.p - ideal.p) < fit.p_half_width, (readout_up, init_error)


def test_long_sinc_pulses_suffer_from_slow_detuning_noise():
    cfg = parse_config(preset="electron-sinc", overrides={
        "lengths": [1, 2, 4, 8, 16, 32, 64, 128, 256],
        "sequences_per_length": 10,
        "shots_per_sequence": 300,
        "seed": 8,
        "sweep": [{"pulse_shape": "sinc3", "pi_pulse_duration": 11.06e-6},
                  {"pulse_shape": "sinc3", "pi_pulse_duration": 40e-6}],
    })
    assert cfg.rb.noise.time_quantum == 20e-9
    short, long = run_sweep(cfg).rows

    assert short.ok and long.ok
    assert long.clifford_fidelity < short.clifford_fidelity


def test_interleaved_interval_coverage():
    expected = 1.0 - 0.002 / 2.0
    trials, covered = 100, 0
    for seed in range(trials):
        base = dict(lengths=config.ELECTRON_LENGTHS, sequences_per_length=15,
                    shots_per_sequence=2000, seed=1000 + seed,
                    noise=NoiseModel(interleaved_depolarizing=0.002))
        reference = fit_decay(aggregate(run_experiment(RbConfig(**base))))
        gate = fit_decay(aggregate(run_experiment(RbConfig(interleaved_gate="X", **base))))
        low, high = compare_interleaved("X", reference, gate).gate_fidelity_ci
        covered += low <= expected <= high

    assert covered >= 0.9 * trials
