"""
Experiment configuration module
Merges preset, JSON file and command-line overrides into a validated config
"""
import math
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from backend import config
from backend.analysis.aggregation import FitMode
from backend.clifford_engine.physical_gates import parse_gate
from backend.exceptions import ConfigError, DomainError
from backend.experiment.presets import DEFAULT_PRESET, get_preset
from backend.rb_engine.experiment_runner import RbConfig
from backend.rb_engine.sequence_generator import TargetPolicy
from backend.rb_engine.spam_model import SpamModel
from backend.spin_engine.noise_model import NoiseModel
from backend.spin_engine.pulse_shapes import PulseShape
from backend.utils.file_ops import load_json_file
from backend.utils.logger import logger

RB_KEYS = (
    "lengths", "sequences_per_length", "shots_per_sequence", "interleaved_gate",
    "target_policy", "seed", "pulse_shape", "pi_pulse_duration", "share_sequences",
    "max_slice_rotation",
)
NOISE_KEYS = tuple(f.name for f in fields(NoiseModel))
SPAM_KEYS = tuple(f.name for f in fields(SpamModel))
SWEEP_KEYS = ("pi_pulse_duration", "pulse_shape")
REPORT_KEYS = ("csv", "json")
TOP_KEYS = RB_KEYS + ("preset", "noise", "spam", "output_dir", "fit_mode",
                      "bootstrap_resamples", "sweep", "report")


@dataclass(frozen=True)
class SweepPoint:
    """One point of a pulse-duration sweep"""

    pi_pulse_duration: float
    pulse_shape: PulseShape

    def to_dict(self) -> dict:
        return {"pi_pulse_duration": self.pi_pulse_duration, "pulse_shape": self.pulse_shape.value}


@dataclass(frozen=True)
class ReportOptions:
    csv: bool = True
    json: bool = True

    def to_dict(self) -> dict:
        return {"csv": self.csv, "json": self.json}


@dataclass(frozen=True)
class ExperimentConfig:
    """
    Fully resolved experiment settings

    ``output_dir`` None means the environment default (SPIN_BENCH_OUTPUT_DIR).
    """

    rb: RbConfig
    preset: Optional[str] = None
    output_dir: Optional[Path] = None
    fit_mode: str = "combined"
    bootstrap_resamples: int = 0
    sweep: List[SweepPoint] = field(default_factory=list)
    report: ReportOptions = field(default_factory=ReportOptions)

    @property
    def output_path(self) -> Path:
        return Path(self.output_dir) if self.output_dir is not None else config.OUTPUT_DIR

    def with_rb(self, **changes) -> "ExperimentConfig":
        return replace(self, rb=replace(self.rb, **changes))

    def to_dict(self) -> dict:
        """Resolved settings in the file schema (re-parses to an identical config)"""
        rb = self.rb.to_dict()
        data: Dict[str, Any] = {"preset": self.preset}
        data.update({key: rb[key] for key in RB_KEYS})
        data["noise"] = rb["noise"]
        data["spam"] = rb["spam"]
        data["output_dir"] = str(self.output_dir) if self.output_dir is not None else None
        data["fit_mode"] = self.fit_mode
        data["bootstrap_resamples"] = self.bootstrap_resamples
        data["sweep"] = [point.to_dict() for point in self.sweep]
        data["report"] = self.report.to_dict()
        return data


# -- validation helpers ----------------------------------------------------------

def _check_keys(section: Dict, allowed, prefix: str = "") -> None:
    if not isinstance(section, dict):
        raise ConfigError(prefix.rstrip(".") or None, "must be an object")
    for key in section:
        if key not in allowed:
            raise ConfigError(f"{prefix}{key}", "unknown key")


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(path, f"must be a number, got {value!r}")
    return float(value)


def _integer(value: Any, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(path, f"must be an integer, got {value!r}")
    return value


def _boolean(value: Any, path: str) -> bool:
    if not isinstance(value, bool):
        raise ConfigError(path, f"must be true or false, got {value!r}")
    return value


def _merge(base: Dict, overlay: Dict) -> Dict:
    merged = dict(base)
    for key, value in overlay.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _build_noise(section: Dict) -> NoiseModel:
    _check_keys(section, NOISE_KEYS, "noise.")
    values = {}
    for key, value in section.items():
        if key == "t2_star" and value is None:
            values[key] = math.inf
        else:
            values[key] = _number(value, f"noise.{key}")
    try:
        return NoiseModel(**values)
    except DomainError as e:
        raise ConfigError("noise", str(e)) from e


def _build_spam(section: Dict) -> SpamModel:
    _check_keys(section, SPAM_KEYS, "spam.")
    values = {key: _number(value, f"spam.{key}") for key, value in section.items()}
    try:
        return SpamModel(**values)
    except DomainError as e:
        raise ConfigError("spam", str(e)) from e


def _build_sweep(points: Any) -> List[SweepPoint]:
    if not isinstance(points, list):
        raise ConfigError("sweep", "must be a list of points")
    result = []
    for i, point in enumerate(points):
        _check_keys(point, SWEEP_KEYS, f"sweep[{i}].")
        if "pi_pulse_duration" not in point:
            raise ConfigError(f"sweep[{i}].pi_pulse_duration", "is required")
        duration = _number(point["pi_pulse_duration"], f"sweep[{i}].pi_pulse_duration")
        if duration <= 0:
            raise ConfigError(f"sweep[{i}].pi_pulse_duration", "must be positive")
        try:
            shape = PulseShape.parse(point.get("pulse_shape", config.DEFAULT_PULSE_SHAPE))
        except DomainError as e:
            raise ConfigError(f"sweep[{i}].pulse_shape", str(e)) from e
        result.append(SweepPoint(duration, shape))
    return result


def _build_rb(data: Dict, noise: NoiseModel, spam: SpamModel) -> RbConfig:
    values: Dict[str, Any] = {"noise": noise, "spam": spam}
    if "lengths" in data:
        if not isinstance(data["lengths"], list):
            raise ConfigError("lengths", "must be a list of integers")
        values["lengths"] = [_integer(n, f"lengths[{i}]") for i, n in enumerate(data["lengths"])]
    for key in ("sequences_per_length", "shots_per_sequence", "seed"):
        if key in data:
            values[key] = _integer(data[key], key)
    for key in ("pi_pulse_duration", "max_slice_rotation"):
        if key in data:
            values[key] = _number(data[key], key)
    if "share_sequences" in data:
        values["share_sequences"] = _boolean(data["share_sequences"], "share_sequences")
    parsers = {"interleaved_gate": parse_gate, "target_policy": TargetPolicy.parse,
               "pulse_shape": PulseShape.parse}
    for key, parse in parsers.items():
        if data.get(key) is None:
            continue
        try:
            parsed = parse(data[key])
        except DomainError as e:
            raise ConfigError(key, str(e)) from e
        values[key] = parsed.name if key == "interleaved_gate" else parsed
    return RbConfig(**values)


# -- entry point --------------------------------------------------------------------

def parse_config(path: Optional[Union[str, Path]] = None, preset: Optional[str] = None,
                 overrides: Optional[Dict[str, Any]] = None,
                 data: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """
    Resolve an experiment configuration

    Layers, later winning: preset <- JSON file (or ``data``) <- overrides.
    The preset comes from ``preset``, else the document's "preset" key,
    else electron-square.

    Args:
        path: JSON config file
        preset: Preset name
        overrides: Command-line values in the file schema
        data: Already-loaded document (used instead of ``path``)

    Returns:
        Validated ExperimentConfig

    Raises:
        ConfigError: on a missing file, unknown key or invalid value
    """
    document: Dict[str, Any] = {}
    if path is not None:
        path = Path(path)
        if not path.exists():
            raise ConfigError(None, f"config file not found: {path}")
        try:
            document = load_json_file(path)
        except ValueError as e:
            raise ConfigError(None, f"invalid JSON in {path}: {e}") from e
        logger.info(f"Loaded config file: {path}")
    elif data is not None:
        document = dict(data)
    _check_keys(document, TOP_KEYS)

    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    _check_keys(overrides, TOP_KEYS)

    preset_name = preset or overrides.get("preset") or document.get("preset") or DEFAULT_PRESET
    merged = _merge(get_preset(preset_name), document)
    merged = _merge(merged, overrides)
    merged["preset"] = preset_name

    noise = _build_noise(merged.get("noise", {}))
    spam = _build_spam(merged.get("spam", {}))
    rb = _build_rb(merged, noise, spam)

    try:
        fit_mode = FitMode.parse(merged.get("fit_mode", "combined")).label
    except ConfigError as e:
        raise ConfigError("fit_mode", e.message) from e
    bootstrap = _integer(merged.get("bootstrap_resamples", 0), "bootstrap_resamples")
    if bootstrap < 0:
        raise ConfigError("bootstrap_resamples", "must be >= 0")
    report = merged.get("report", {})
    _check_keys(report, REPORT_KEYS, "report.")
    output_dir = merged.get("output_dir")

    resolved = ExperimentConfig(
        rb=rb,
        preset=preset_name,
        output_dir=Path(output_dir) if output_dir else None,
        fit_mode=fit_mode,
        bootstrap_resamples=bootstrap,
        sweep=_build_sweep(merged.get("sweep", [])),
        report=ReportOptions(**{k: _boolean(v, f"report.{k}") for k, v in report.items()}),
    )
    logger.debug(f"Resolved config (preset {preset_name}): {resolved.to_dict()}")
    return resolved
