"""
Main orchestrator module
Drives Clifford checks, pulse scans, RB runs, fits, interleaved tables and sweeps
"""
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np

from backend import config
from backend.analysis.aggregation import FitMode, aggregate
from backend.analysis.bootstrap import bootstrap_ci
from backend.analysis.decay_fitter import FitResult, fit_decay
from backend.analysis.fidelity import InterleavedResult, compare_interleaved
from backend.clifford_engine.clifford_group import GroupVerification, build_clifford_group
from backend.exceptions import CliffordTableError, FitError
from backend.experiment.experiment_config import ExperimentConfig
from backend.experiment.report_writer import (
    write_fit_report, write_interleaved_table, write_sweep,
)
from backend.experiment.sweep_runner import SweepResult, run_sweep
from backend.rb_engine.dataset import RbDataset
from backend.rb_engine.experiment_runner import run_experiment
from backend.spin_engine.excitation_profile import excitation_profile, full_width_half_maximum
from backend.spin_engine.pulse_shapes import PulseShape, PulseSpec
from backend.utils.file_ops import load_json_file, save_csv_file, save_json_file
from backend.utils.logger import logger


def _banner(title: str) -> None:
    logger.info("=" * 60)
    logger.info(title)
    logger.info("=" * 60)


class BenchmarkLab:
    """Runs the benchmarking workflows and writes their artifacts"""

    def __init__(self, output_dir: Optional[Path] = None, workers: int = config.WORKERS):
        self.output_dir = Path(output_dir) if output_dir is not None else config.OUTPUT_DIR
        self.workers = workers

    def _formats(self, exp_config: Optional[ExperimentConfig]) -> List[str]:
        if exp_config is None:
            return ["csv", "json"]
        return [name for name, on in exp_config.report.to_dict().items() if on]

    # -- clifford verify ------------------------------------------------------------

    def verify_clifford(self) -> GroupVerification:
        """
        Exhaustive group checks

        Raises:
            CliffordTableError: if any check fails
        """
        group = build_clifford_group()
        report = group.verify()
        logger.info(f"{'✓' if report.distinct else '✗'} {len(group)} distinct elements")
        logger.info(f"{'✓' if report.closed else '✗'} closed under composition (24x24)")
        logger.info(f"{'✓' if report.inverses else '✗'} every element has an inverse")
        logger.info(f"  average physical gates per Clifford: {report.average_gate_count:.6f}")
        save_json_file({
            "elements": len(group),
            "distinct": report.distinct,
            "closed": report.closed,
            "inverses": report.inverses,
            "average_gate_count": report.average_gate_count,
            "failures": report.failures,
        }, self.output_dir, "clifford_verify.json")
        if not report.ok:
            raise CliffordTableError("; ".join(report.failures) or "group verification failed")
        return report

    # -- pulse profile --------------------------------------------------------------

    def pulse_profile(self, shape: Union[str, PulseShape], pi_pulse_duration: float,
                      span: float, points: int = 801, time_quantum: float = 0.0) -> float:
        """
        Excitation profile of a pi pulse over +-span Hz

        Returns:
            FWHM in Hz
        """
        pulse = PulseSpec(PulseShape.parse(shape), 0.0, np.pi, pi_pulse_duration)
        detunings = np.linspace(-span, span, points)
        profile = excitation_profile(pulse, detunings, time_quantum=time_quantum)
        stem = f"profile_{pulse.shape.value}"
        save_csv_file(("detuning", "p_up"), zip(detunings.tolist(), profile.tolist()),
                      self.output_dir, f"{stem}.csv")
        fwhm = full_width_half_maximum(detunings, profile)
        logger.info(f"✓ {pulse.shape.value} pi = {pi_pulse_duration * 1e6:.3f} us: "
                    f"peak P_up = {profile.max():.6f}, FWHM = {fwhm / 1e3:.3f} kHz")
        save_json_file({
            "pulse_shape": pulse.shape.value,
            "pi_pulse_duration": pi_pulse_duration,
            "peak_rabi": pulse.peak_rabi,
            "fwhm": fwhm,
        }, self.output_dir, f"{stem}.json")
        return fwhm

    # -- rb run / fit ---------------------------------------------------------------

    def run_rb(self, exp_config: ExperimentConfig, stem: str = "dataset") -> RbDataset:
        """Run the configured experiment and save the dataset with its sidecar"""
        dataset = run_experiment(exp_config.rb, self.workers)
        dataset.metadata["preset"] = exp_config.preset
        dataset.to_csv(self.output_dir, stem)
        logger.info(f"✓ {len(dataset)} sequence records written")
        return dataset

    def fit_dataset(self, dataset: Union[RbDataset, Path, str],
                    mode: Union[str, FitMode, None] = None, bootstrap: int = 0,
                    seed: Optional[int] = None, stem: str = "fit",
                    formats: Sequence[str] = ("csv", "json")) -> FitResult:
        """
        Aggregate, fit and (optionally) bootstrap a dataset

        Args:
            dataset: Dataset or the path of its CSV
            mode: Fit mode (combined by default)
            bootstrap: Residual-bootstrap resamples (0 disables)
            seed: Bootstrap seed (defaults to the dataset seed)
            stem: Report file stem
        """
        if not isinstance(dataset, RbDataset):
            dataset = RbDataset.from_csv(dataset)
        mode = FitMode.parse(mode)
        agg = aggregate(dataset, mode)
        fit = fit_decay(agg, mode)
        logger.info(f"✓ [{fit.mode}] p = {fit.p:.6f}, F_c = {fit.clifford_fidelity * 100:.4f}%, "
                    f"F_single = {fit.single_gate_fidelity * 100:.4f}%")
        if bootstrap:
            interval = bootstrap_ci(agg, mode, bootstrap,
                                    seed=seed if seed is not None else (dataset.seed or 0), fit=fit)
            fit.bootstrap = interval.to_dict()
            logger.info(f"  bootstrap p interval [{interval.lower:.6f}, {interval.upper:.6f}]")
        write_fit_report(fit, self.output_dir, stem, formats,
                         extra={"seed": dataset.seed, "interleaved_gate": dataset.interleaved_gate})
        return fit

    # -- rb interleaved -------------------------------------------------------------

    def interleaved_from_report(self, reference_report: Path, dataset: Union[Path, str]) -> InterleavedResult:
        """F_gate of one interleaved dataset against a saved reference report"""
        reference = FitResult.from_dict(load_json_file(Path(reference_report)))
        interleaved = RbDataset.from_csv(dataset)
        gate = interleaved.interleaved_gate or "?"
        fit = fit_decay(aggregate(interleaved, reference.mode))
        row = compare_interleaved(gate, reference, fit)
        write_interleaved_table([row], self.output_dir, reference=reference)
        return row

    def run_interleaved(self, exp_config: ExperimentConfig,
                        gates: Optional[Sequence[str]] = None) -> List[InterleavedResult]:
        """
        Reference run plus one interleaved run per gate, fitted and compared

        Gates default to the config's interleaved gate, else the full table.
        """
        if gates is None:
            gates = [exp_config.rb.interleaved_gate] if exp_config.rb.interleaved_gate \
                else list(config.INTERLEAVED_GATES)
        formats = self._formats(exp_config)

        _banner("STEP 1: Reference RB")
        reference_config = exp_config.with_rb(interleaved_gate=None)
        reference = self.fit_dataset(self.run_rb(reference_config, "dataset_reference"),
                                     exp_config.fit_mode, bootstrap=exp_config.bootstrap_resamples,
                                     stem="fit_reference", formats=formats)

        _banner(f"STEP 2: Interleaved RB over {len(gates)} gate(s)")
        rows = []
        for i, gate in enumerate(gates, 1):
            logger.info(f"[{i}/{len(gates)}] interleaved gate {gate}")
            gate_config = exp_config.with_rb(interleaved_gate=gate)
            tag = gate.replace("/", "_").replace("-", "m")
            try:
                fit = self.fit_dataset(self.run_rb(gate_config, f"dataset_{tag}"),
                                       exp_config.fit_mode, bootstrap=exp_config.bootstrap_resamples,
                                       stem=f"fit_{tag}", formats=formats)
                row = compare_interleaved(gate_config.rb.interleaved_gate, reference, fit)
            except FitError as e:
                logger.error(f"✗ {gate}: {e}")
                continue
            logger.info(f"✓ {row.gate}: F_gate = {row.gate_fidelity * 100:.3f}%")
            rows.append(row)

        write_interleaved_table(rows, self.output_dir, formats=formats, reference=reference)
        return rows

    # -- sweep run ------------------------------------------------------------------

    def run_sweep(self, exp_config: ExperimentConfig) -> SweepResult:
        result = run_sweep(exp_config, self.workers)
        write_sweep(result, self.output_dir, formats=self._formats(exp_config))
        logger.info(f"Sweep: {len(result) - len(result.failed)}/{len(result)} points fitted")
        return result
