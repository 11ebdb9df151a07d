"""
File operations utility module
Handles creating folders and writing/reading the CSV and JSON artifacts
"""
import csv
import json
import math
from pathlib import Path
from typing import Any, Iterable, List, Optional, Sequence

import numpy as np

from backend.utils.logger import logger


def ensure_directory(path: Path) -> Path:
    """
    Ensure directory exists, create if it doesn't

    Args:
        path: Directory path

    Returns:
        Path object
    """
    path.mkdir(parents=True, exist_ok=True)
    return path


def format_value(value: Any) -> str:
    """
    Render one CSV cell

    Floats use repr (shortest round-trip form, '.' decimal), booleans are
    written as 0/1 and None as an empty cell.
    """
    if value is None:
        return ""
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def json_ready(value: Any) -> Any:
    """Replace non-finite floats (not valid JSON) with None, recursively"""
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {k: json_ready(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [json_ready(v) for v in value]
    return value


def save_csv_file(header: Sequence[str], rows: Iterable[Sequence[Any]],
                  destination_dir: Path, filename: str) -> Path:
    """
    Save rows as CSV with a header row and LF line endings

    Args:
        header: Column names
        rows: Row values
        destination_dir: Destination directory
        filename: Filename (should include .csv extension)

    Returns:
        Path to saved file
    """
    ensure_directory(destination_dir)
    file_path = destination_dir / filename
    with open(file_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([format_value(v) for v in row])
    logger.info(f"Saved CSV file: {file_path}")
    return file_path


def load_csv_rows(file_path: Path) -> List[dict]:
    """
    Load CSV rows as dictionaries keyed by the header

    Args:
        file_path: CSV file

    Returns:
        List of row dictionaries (string values)
    """
    with open(file_path, "r", encoding="utf-8", newline="") as fh:
        return list(csv.DictReader(fh))


def save_json_file(data: dict, destination_dir: Path, filename: str) -> Path:
    """
    Save JSON data to a file

    Key order is the insertion order of ``data``; output ends with a newline.

    Args:
        data: Dictionary to save as JSON
        destination_dir: Destination directory
        filename: Filename (should include .json extension)

    Returns:
        Path to saved file
    """
    ensure_directory(destination_dir)
    file_path = destination_dir / filename
    text = json.dumps(json_ready(data), indent=2, ensure_ascii=False)
    with open(file_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text + "\n")
    logger.info(f"Saved JSON file: {file_path}")
    return file_path


def load_json_file(file_path: Path) -> Optional[dict]:
    """
    Load a JSON document

    Args:
        file_path: JSON file

    Returns:
        Parsed document
    """
    with open(file_path, "r", encoding="utf-8") as fh:
        return json.load(fh)
