"""
Dataset module
Shot-level RB records with CSV + JSON sidecar persistence
"""
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

import numpy as np

from backend.clifford_engine.clifford_group import TargetState
from backend.exceptions import ConfigError, InvariantViolation
from backend.utils.file_ops import load_csv_rows, load_json_file, save_csv_file, save_json_file
from backend.utils.logger import logger

CSV_COLUMNS = ("n", "k", "target", "shot_index", "outcome")


@dataclass
class SequenceRecord:
    """Outcomes of the r shots of one random sequence"""

    length: int
    sequence_index: int
    target: TargetState
    outcomes: np.ndarray

    def __post_init__(self):
        self.target = TargetState.parse(self.target)
        self.outcomes = np.asarray(self.outcomes, dtype=bool)

    @property
    def shots(self) -> int:
        return int(self.outcomes.size)

    @property
    def p_up(self) -> float:
        """Fraction of shots reporting spin up"""
        return float(np.mean(self.outcomes)) if self.outcomes.size else float("nan")

    @property
    def success(self) -> float:
        """Fraction of shots reporting the target state"""
        return self.p_up if self.target is TargetState.UP else 1.0 - self.p_up


@dataclass
class RbDataset:
    """
    Records of one RB experiment, ordered by (N, k)

    ``metadata`` holds the config echo and seed written to the sidecar.
    """

    records: List[SequenceRecord] = field(default_factory=list)
    metadata: Dict = field(default_factory=dict)

    def __iter__(self) -> Iterator[SequenceRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)

    @property
    def lengths(self) -> List[int]:
        return sorted({r.length for r in self.records})

    @property
    def seed(self) -> Optional[int]:
        return self.metadata.get("seed")

    @property
    def interleaved_gate(self) -> Optional[str]:
        return (self.metadata.get("config") or {}).get("interleaved_gate")

    def records_for(self, length: int, target: Optional[TargetState] = None) -> List[SequenceRecord]:
        return [r for r in self.records
                if r.length == length and (target is None or r.target is target)]

    def check(self, shots_per_sequence: Optional[int] = None) -> None:
        """
        Verify every record carries the same shot count

        Raises:
            InvariantViolation: on mismatched shot counts
        """
        expected = shots_per_sequence
        for record in self.records:
            if expected is None:
                expected = record.shots
            if record.shots != expected:
                raise InvariantViolation(
                    f"record N={record.length} k={record.sequence_index} has "
                    f"{record.shots} shots, expected {expected}"
                )

    # -- persistence ------------------------------------------------------------------

    def csv_rows(self) -> Iterator[Tuple]:
        for record in self.records:
            for shot, outcome in enumerate(record.outcomes):
                yield (record.length, record.sequence_index, record.target.value, shot, bool(outcome))

    def to_csv(self, destination_dir: Path, stem: str = "dataset") -> Path:
        """
        Write ``<stem>.csv`` and its ``<stem>.json`` sidecar

        Returns:
            Path to the CSV file
        """
        csv_path = save_csv_file(CSV_COLUMNS, self.csv_rows(), Path(destination_dir), f"{stem}.csv")
        save_json_file(self.metadata, Path(destination_dir), f"{stem}.json")
        return csv_path

    @classmethod
    def from_csv(cls, csv_path: Union[str, Path]) -> "RbDataset":
        """
        Load a dataset and its sidecar (if present next to the CSV)

        Raises:
            ConfigError: if the file is missing or has the wrong columns
        """
        csv_path = Path(csv_path)
        if not csv_path.exists():
            raise ConfigError("dataset", f"file not found: {csv_path}")
        rows = load_csv_rows(csv_path)
        if rows and tuple(rows[0].keys()) != CSV_COLUMNS:
            raise ConfigError("dataset", f"expected columns {', '.join(CSV_COLUMNS)}")

        grouped: Dict[Tuple[int, int], List] = defaultdict(list)
        targets: Dict[Tuple[int, int], str] = {}
        records = []
        try:
            for row in rows:
                key = (int(row["n"]), int(row["k"]))
                if row["outcome"] not in ("0", "1"):
                    raise ValueError(f"outcome must be 0 or 1, got {row['outcome']!r}")
                grouped[key].append((int(row["shot_index"]), row["outcome"] == "1"))
                targets[key] = row["target"]
            for key in sorted(grouped):
                shots = sorted(grouped[key])
                records.append(SequenceRecord(key[0], key[1], targets[key],
                                              np.array([o for _, o in shots], dtype=bool)))
        except (TypeError, ValueError) as e:
            raise ConfigError("dataset", f"malformed row: {e}") from e

        sidecar = csv_path.with_suffix(".json")
        metadata = load_json_file(sidecar) if sidecar.exists() else {}
        if not sidecar.exists():
            logger.warning(f"No sidecar next to {csv_path.name}; metadata left empty")
        dataset = cls(records, metadata or {})
        dataset.check((metadata or {}).get("config", {}).get("shots_per_sequence"))
        logger.info(f"Loaded dataset: {len(records)} records, lengths {dataset.lengths}")
        return dataset
