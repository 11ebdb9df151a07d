"""Tests for report CSV/JSON emission."""

import csv
import json

import pytest

from backend.analysis.aggregation import aggregate
from backend.analysis.decay_fitter import fit_decay
from backend.analysis.fidelity import compare_interleaved
from backend.experiment.experiment_config import SweepPoint
from backend.experiment.report_writer import (
    DECAY_COLUMNS, INTERLEAVED_COLUMNS, SWEEP_COLUMNS, TARGET_COLUMNS, emit_report,
)
from backend.experiment.sweep_runner import SweepResult, SweepRow
from backend.spin_engine.pulse_shapes import PulseShape
from conftest import synthetic_dataset


def _read(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


@pytest.fixture(scope="module")
def fit():
    return fit_decay(aggregate(synthetic_dataset(p=0.9)))


def test_fit_report_files(tmp_path, fit):
    paths = emit_report(fit, tmp_path)
    assert [p.name for p in paths] == ["fit_report.json", "fit_decay.csv", "fit_targets.csv"]

    decay = _read(tmp_path / "fit_decay.csv")
    assert tuple(decay[0]) == DECAY_COLUMNS
    assert [int(row[0]) for row in decay[1:]] == [1, 2, 4, 8, 16, 32]
    assert float(decay[1][3]) == pytest.approx(fit.predict([1])[0])

    targets = _read(tmp_path / "fit_targets.csv")
    assert tuple(targets[0]) == TARGET_COLUMNS
    assert len(targets) == 1 + 2 * 6
    assert {row[1] for row in targets[1:]} == {"up", "down"}

    report = json.loads((tmp_path / "fit_report.json").read_text())
    assert report["p"] == fit.p
    assert report["mode"] == "combined"


def test_format_selection(tmp_path, fit):
    paths = emit_report(fit, tmp_path, formats=("json",), stem="reference")
    assert [p.name for p in paths] == ["reference_report.json"]


def test_reports_are_byte_stable(tmp_path, fit):
    emit_report(fit, tmp_path / "a")
    emit_report(fit, tmp_path / "b")
    for name in ("fit_report.json", "fit_decay.csv", "fit_targets.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_interleaved_table(tmp_path, fit):
    gate_fit = fit_decay(aggregate(synthetic_dataset(p=0.88)))
    rows = [compare_interleaved("X", fit, gate_fit), compare_interleaved("Y/2", fit, fit)]
    emit_report(rows, tmp_path)

    table = _read(tmp_path / "interleaved.csv")
    assert tuple(table[0]) == INTERLEAVED_COLUMNS
    assert [row[0] for row in table[1:]] == ["X", "Y/2"]
    assert table[2][-1] == "0"
    summary = json.loads((tmp_path / "interleaved.json").read_text())
    assert summary["reference"] is None
    assert summary["rows"][0]["gate"] == "X"


def test_empty_interleaved_table_has_header_only(tmp_path):
    emit_report([], tmp_path)
    assert (tmp_path / "interleaved.csv").read_text() == ",".join(INTERLEAVED_COLUMNS) + "\n"
    assert json.loads((tmp_path / "interleaved.json").read_text())["rows"] == []


def test_sweep_report_keeps_failed_rows(tmp_path, fit):
    result = SweepResult("combined", [
        SweepRow.from_fit(SweepPoint(1e-6, PulseShape.SQUARE), fit),
        SweepRow(2e-6, "sinc3", error="FitConvergenceError: no"),
    ])
    emit_report(result, tmp_path)

    table = _read(tmp_path / "sweep.csv")
    assert tuple(table[0]) == SWEEP_COLUMNS
    assert table[1][:2] == ["1e-06", "square"]
    assert table[1][-1] == ""
    assert table[2][2] == "" and table[2][-1] == "FitConvergenceError: no"
    summary = json.loads((tmp_path / "sweep.json").read_text())
    assert summary["rows"][1]["p"] is None
