"""
Configuration file for spin bench
Contains output/log paths, run limits, physical constants and default knobs
"""
import math
import os
from pathlib import Path

# Load environment variables from .env file if it exists
try:
    from dotenv import load_dotenv
    load_dotenv()
except ImportError:
    pass  # python-dotenv not installed, use environment variables directly


def _env_bool(name: str, default: bool) -> bool:
    value = os.getenv(name)
    if value is None:
        return default
    return value.strip().lower() in ("1", "true", "yes", "on")


# Base directory
BASE_DIR = Path(__file__).parent.parent

# Folder paths
OUTPUT_DIR = Path(os.getenv("SPIN_BENCH_OUTPUT_DIR", str(BASE_DIR / "output")))
LOG_DIR = Path(os.getenv("SPIN_BENCH_LOG_DIR", str(BASE_DIR / "logs")))

# Logging
LOG_LEVEL = os.getenv("SPIN_BENCH_LOG_LEVEL", "INFO")

# Run limits
MAX_TOTAL_SHOTS = int(os.getenv("SPIN_BENCH_MAX_TOTAL_SHOTS", "50000000"))
WORKERS = int(os.getenv("SPIN_BENCH_WORKERS", "1"))
SHOT_CHUNK_SIZE = int(os.getenv("SPIN_BENCH_SHOT_CHUNK_SIZE", "512"))
# Upper bound on slices x realizations propagated in one shaped-pulse batch
SLICE_BATCH_ELEMENTS = int(os.getenv("SPIN_BENCH_SLICE_BATCH_ELEMENTS", "1048576"))

# Adds created_at to dataset sidecars
RECORD_TIMESTAMPS = _env_bool("SPIN_BENCH_RECORD_TIMESTAMPS", False)

# Device constants (rotating-frame simulation only uses detunings;
# these document where the default drive frequencies come from)
GAMMA_E = 27.97e9       # Hz/T
GAMMA_N = 17.23e6       # Hz/T
HYPERFINE_A = 96.9e6    # Hz
B0 = 1.5                # T
ELECTRON_FREQUENCY = GAMMA_E * B0 + HYPERFINE_A / 2
NUCLEAR_FREQUENCY = GAMMA_N * B0

# Noise defaults
RESONANCE_LINEWIDTH = 1.8e3                          # Hz, FWHM
FWHM_TO_SIGMA = 2.0 * math.sqrt(2.0 * math.log(2.0))  # ~2.355
DEFAULT_DETUNING_SIGMA = RESONANCE_LINEWIDTH / FWHM_TO_SIGMA
BASEBAND_TIME_QUANTUM = 20e-9                        # s
NUCLEAR_T2_STAR = 0.6                                # s

# Pulse defaults
DEFAULT_PULSE_SHAPE = "square"
DEFAULT_PI_PULSE_DURATION = 2.08e-6                  # s
DEFAULT_MAX_SLICE_ROTATION = 0.01                    # rad

# Protocol defaults
DEFAULT_SEQUENCES_PER_LENGTH = 15
DEFAULT_SHOTS_PER_SEQUENCE = 200
ELECTRON_LENGTHS = [1, 2, 4, 8, 16, 32, 64, 128, 256, 512]
NUCLEAR_LENGTHS = [1, 2, 5, 10, 20, 50, 100, 200, 500, 1000]
INTERLEAVED_GATES = ["X", "Y", "X/2", "Y/2", "-X/2", "-Y/2"]

# Analysis defaults
CONFIDENCE_LEVEL = 0.95
FIT_XTOL = 1e-10
FIT_MAX_ITERATIONS = 500
DEFAULT_BOOTSTRAP_RESAMPLES = 1000
BOOTSTRAP_MAX_FAILURE_FRACTION = 0.10
