"""
Experiment runner module
Runs K sequences x r shots for every length and assembles the dataset
"""
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from datetime import datetime
from typing import List, Optional

from backend import __version__, config
from backend.clifford_engine.physical_gates import PHYSICAL_GATES, parse_gate
from backend.exceptions import ConfigError, ResourceLimitError
from backend.rb_engine.dataset import RbDataset, SequenceRecord
from backend.rb_engine.sequence_generator import SequenceGenerator, TargetPolicy
from backend.rb_engine.shot_runner import ShotDraw, ShotRunner
from backend.rb_engine.spam_model import SpamModel
from backend.spin_engine.noise_model import NoiseModel
from backend.spin_engine.pulse_shapes import PulseShape
from backend.utils.logger import logger
from backend.utils.rng import STREAM_SHOT, sequence_generator


@dataclass(frozen=True)
class RbConfig:
    """Everything needed to reproduce one RB experiment"""

    lengths: List[int] = field(default_factory=lambda: list(config.ELECTRON_LENGTHS))
    sequences_per_length: int = config.DEFAULT_SEQUENCES_PER_LENGTH
    shots_per_sequence: int = config.DEFAULT_SHOTS_PER_SEQUENCE
    interleaved_gate: Optional[str] = None
    target_policy: TargetPolicy = TargetPolicy.RANDOM_PER_SEQUENCE
    seed: int = 0
    pulse_shape: PulseShape = PulseShape.SQUARE
    pi_pulse_duration: float = config.DEFAULT_PI_PULSE_DURATION
    noise: NoiseModel = field(default_factory=NoiseModel)
    spam: SpamModel = field(default_factory=SpamModel)
    share_sequences: bool = False
    max_slice_rotation: float = config.DEFAULT_MAX_SLICE_ROTATION

    def __post_init__(self):
        if not self.lengths:
            raise ConfigError("lengths", "must contain at least one sequence length")
        for i, n in enumerate(self.lengths):
            if isinstance(n, bool) or not isinstance(n, int) or n < 1:
                raise ConfigError(f"lengths[{i}]", f"must be an integer >= 1, got {n!r}")
        if len(set(self.lengths)) != len(self.lengths):
            raise ConfigError("lengths", "must not repeat a length")
        for name in ("sequences_per_length", "shots_per_sequence"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError(name, f"must be an integer >= 1, got {value!r}")
        if not isinstance(self.seed, int) or self.seed < 0 or self.seed >= 2 ** 64:
            raise ConfigError("seed", "must be an unsigned 64-bit integer")
        if not self.pi_pulse_duration > 0:
            raise ConfigError("pi_pulse_duration", "must be positive")
        if not self.max_slice_rotation > 0:
            raise ConfigError("max_slice_rotation", "must be positive")
        object.__setattr__(self, "lengths", list(self.lengths))
        object.__setattr__(self, "target_policy", TargetPolicy.parse(self.target_policy))
        object.__setattr__(self, "pulse_shape", PulseShape.parse(self.pulse_shape))
        if self.interleaved_gate is not None:
            object.__setattr__(self, "interleaved_gate", parse_gate(self.interleaved_gate).name)

    @property
    def total_shots(self) -> int:
        return len(self.lengths) * self.sequences_per_length * self.shots_per_sequence

    def with_interleaved(self, gate: Optional[str]) -> "RbConfig":
        return replace(self, interleaved_gate=gate)

    def to_dict(self) -> dict:
        return {
            "lengths": list(self.lengths),
            "sequences_per_length": self.sequences_per_length,
            "shots_per_sequence": self.shots_per_sequence,
            "interleaved_gate": self.interleaved_gate,
            "target_policy": self.target_policy.value,
            "seed": self.seed,
            "pulse_shape": self.pulse_shape.value,
            "pi_pulse_duration": self.pi_pulse_duration,
            "noise": self.noise.to_dict(),
            "spam": self.spam.to_dict(),
            "share_sequences": self.share_sequences,
            "max_slice_rotation": self.max_slice_rotation,
        }


def stream_salt(interleaved_gate: Optional[str]) -> int:
    """Stream coordinate separating the reference run from each interleaved run"""
    if interleaved_gate is None:
        return 0
    return 1 + list(PHYSICAL_GATES).index(parse_gate(interleaved_gate).name)


def _run_length(rb_config: RbConfig, length: int) -> List[SequenceRecord]:
    """All K sequences of one length (top-level so worker processes can pickle it)"""
    generator = SequenceGenerator()
    runner = ShotRunner(
        pulse_shape=rb_config.pulse_shape,
        pi_pulse_duration=rb_config.pi_pulse_duration,
        noise=rb_config.noise,
        spam=rb_config.spam,
        group=generator.group,
        max_slice_rotation=rb_config.max_slice_rotation,
    )
    salt = stream_salt(rb_config.interleaved_gate)
    sequence_salt = 0 if rb_config.share_sequences else salt

    records = []
    for k in range(rb_config.sequences_per_length):
        rng = sequence_generator(rb_config.seed, length, k, sequence_salt)
        sequence = generator.generate(length, rng, rb_config.target_policy,
                                      rb_config.interleaved_gate)
        draw = ShotDraw.from_counter(rb_config.seed, (STREAM_SHOT, length, k, salt),
                                     rb_config.shots_per_sequence)
        outcomes = runner.run(sequence, draw)
        records.append(SequenceRecord(length, k, sequence.target, outcomes))
    return records


class ExperimentRunner:
    """Fans lengths out to workers and merges records in (N, k) order"""

    def __init__(self, rb_config: RbConfig, workers: int = config.WORKERS,
                 max_total_shots: int = config.MAX_TOTAL_SHOTS):
        self.config = rb_config
        self.workers = max(1, int(workers))
        self.max_total_shots = max_total_shots

    def check_budget(self) -> None:
        """
        Raises:
            ResourceLimitError: if the experiment exceeds the shot cap
        """
        total = self.config.total_shots
        if total > self.max_total_shots:
            raise ResourceLimitError(
                f"experiment needs {total:,} shots, cap is {self.max_total_shots:,} "
                f"(SPIN_BENCH_MAX_TOTAL_SHOTS)"
            )

    def metadata(self) -> dict:
        data = {
            "spin_bench_version": __version__,
            "seed": self.config.seed,
            "config": self.config.to_dict(),
        }
        if config.RECORD_TIMESTAMPS:
            data["created_at"] = datetime.now().isoformat(timespec="seconds")
        return data

    def run(self) -> RbDataset:
        self.check_budget()
        cfg = self.config
        label = f"interleaved {cfg.interleaved_gate}" if cfg.interleaved_gate else "reference"
        logger.info(f"Running {label} RB: {len(cfg.lengths)} lengths x "
                    f"{cfg.sequences_per_length} sequences x {cfg.shots_per_sequence} shots")

        lengths = list(cfg.lengths)
        records: List[SequenceRecord] = []
        if self.workers > 1 and len(lengths) > 1:
            with ProcessPoolExecutor(max_workers=min(self.workers, len(lengths))) as pool:
                # map yields in submission order
                results = pool.map(_run_length, [cfg] * len(lengths), lengths)
                for i, (length, batch) in enumerate(zip(lengths, results), 1):
                    records.extend(batch)
                    logger.info(f"  [{i}/{len(lengths)}] N={length} done")
        else:
            for i, length in enumerate(lengths, 1):
                records.extend(_run_length(cfg, length))
                logger.info(f"  [{i}/{len(lengths)}] N={length} done")

        records.sort(key=lambda r: (r.length, r.sequence_index))
        return RbDataset(records, self.metadata())


def run_experiment(rb_config: RbConfig, workers: int = config.WORKERS) -> RbDataset:
    """
    Run a full RB experiment

    Args:
        rb_config: Experiment configuration
        workers: Worker processes (1 runs in-process)

    Returns:
        RbDataset ordered by (N, k)

    Raises:
        ResourceLimitError: if the shot count exceeds the configured cap
    """
    return ExperimentRunner(rb_config, workers).run()
