"""
Report writer module
Plot-data CSVs and JSON summaries for fits, interleaved tables and sweeps
"""
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np

from backend.analysis.decay_fitter import FitResult
from backend.analysis.fidelity import InterleavedResult
from backend.clifford_engine.clifford_group import TargetState
from backend.experiment.sweep_runner import SweepResult
from backend.utils.file_ops import save_csv_file, save_json_file

DECAY_COLUMNS = ("n", "mean_success", "sem", "fit_value")
TARGET_COLUMNS = ("n", "target", "mean_p_up", "sem")
INTERLEAVED_COLUMNS = ("gate", "p_gate", "p_c", "gate_fidelity", "ci_lower", "ci_upper", "above_one")
SWEEP_COLUMNS = ("pi_pulse_duration", "pulse_shape", "p", "p_ci_lower", "p_ci_upper",
                 "clifford_fidelity", "ci_lower", "ci_upper", "error")

Formats = Sequence[str]


def _cell(value) -> Optional[float]:
    """numpy scalar to float, nan to empty"""
    if value is None:
        return None
    value = float(value)
    return None if np.isnan(value) else value


def _bounds(ci) -> List[Optional[float]]:
    return [ci[0], ci[1]] if ci else [None, None]


def write_fit_report(fit: FitResult, destination_dir: Path, stem: str = "fit",
                     formats: Formats = ("csv", "json"), extra: Optional[dict] = None) -> List[Path]:
    """
    Fit summary JSON plus decay-curve CSVs (combined/fitted curve and per target)

    Returns:
        Paths written
    """
    paths = []
    if "json" in formats:
        report = dict(extra or {})
        report.update(fit.to_dict())
        paths.append(save_json_file(report, destination_dir, f"{stem}_report.json"))
    if "csv" in formats:
        curve = fit.curve
        rows, target_rows = [], []
        if curve is not None:
            fitted = fit.predict(curve.lengths)
            for n, mean, sem, value in zip(curve.lengths, curve.means, curve.sem, fitted):
                rows.append((int(n), _cell(mean), _cell(sem), _cell(value)))
            for target in TargetState:
                if target not in curve.target_curves:
                    continue
                means, sems = curve.target_curves[target]
                for n, mean, sem in zip(curve.lengths, means, sems):
                    target_rows.append((int(n), target.value, _cell(mean), _cell(sem)))
        paths.append(save_csv_file(DECAY_COLUMNS, rows, destination_dir, f"{stem}_decay.csv"))
        paths.append(save_csv_file(TARGET_COLUMNS, target_rows, destination_dir, f"{stem}_targets.csv"))
    return paths


def write_interleaved_table(results: Iterable[InterleavedResult], destination_dir: Path,
                            stem: str = "interleaved", formats: Formats = ("csv", "json"),
                            reference: Optional[FitResult] = None) -> List[Path]:
    """One row per interleaved gate with F_gate and its interval"""
    results = list(results)
    paths = []
    if "csv" in formats:
        rows = [(r.gate, r.p_gate, r.p_c, r.gate_fidelity, *_bounds(r.gate_fidelity_ci), r.above_one)
                for r in results]
        paths.append(save_csv_file(INTERLEAVED_COLUMNS, rows, destination_dir, f"{stem}.csv"))
    if "json" in formats:
        summary = {
            "reference": reference.to_dict() if reference else None,
            "rows": [r.to_dict() for r in results],
        }
        paths.append(save_json_file(summary, destination_dir, f"{stem}.json"))
    return paths


def write_sweep(result: SweepResult, destination_dir: Path, stem: str = "sweep",
                formats: Formats = ("csv", "json")) -> List[Path]:
    """F_c versus pi-pulse duration, failed points kept with their error tag"""
    paths = []
    if "csv" in formats:
        rows = [(row.pi_pulse_duration, row.pulse_shape, row.p, *_bounds(row.p_ci),
                 row.clifford_fidelity, *_bounds(row.clifford_fidelity_ci), row.error)
                for row in result.rows]
        paths.append(save_csv_file(SWEEP_COLUMNS, rows, destination_dir, f"{stem}.csv"))
    if "json" in formats:
        summary = {"fit_mode": result.fit_mode, "rows": [row.to_dict() for row in result.rows]}
        paths.append(save_json_file(summary, destination_dir, f"{stem}.json"))
    return paths


ReportInput = Union[FitResult, SweepResult, Sequence[InterleavedResult]]


def emit_report(results: ReportInput, destination_dir: Union[str, Path],
                formats: Formats = ("csv", "json"), stem: Optional[str] = None) -> List[Path]:
    """
    Write the report files matching the result type

    Args:
        results: A fit, a sweep result or a list of interleaved rows (may be empty)
        destination_dir: Output directory
        formats: Any of "csv", "json"
        stem: File name stem (defaults per result type)

    Returns:
        Paths written
    """
    destination_dir = Path(destination_dir)
    if isinstance(results, FitResult):
        return write_fit_report(results, destination_dir, stem or "fit", formats)
    if isinstance(results, SweepResult):
        return write_sweep(results, destination_dir, stem or "sweep", formats)
    return write_interleaved_table(results, destination_dir, stem or "interleaved", formats)
