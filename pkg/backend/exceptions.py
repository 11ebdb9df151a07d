"""
Exception hierarchy for spin bench
Every error carries the process exit code the CLI reports for it
"""
from typing import Optional


class SpinBenchError(Exception):
    """Base class for all spin bench errors"""

    exit_code = 1


class ConfigError(SpinBenchError):
    """Configuration schema violation, reported with its dotted field path"""

    exit_code = 2

    def __init__(self, field_path: Optional[str], message: str):
        self.field_path = field_path
        self.message = message
        prefix = f"{field_path}: " if field_path else ""
        super().__init__(f"{prefix}{message}")


class ResourceLimitError(SpinBenchError):
    """Requested experiment exceeds the configured shot cap"""


class DomainError(SpinBenchError, ValueError):
    """Argument outside the mathematical domain of an operation"""


class UnknownGateError(DomainError):
    """Gate name with no physical-gate or single-gate Clifford counterpart"""


class InvalidPulseError(DomainError):
    """Pulse whose quantized duration collapses to zero"""


class FitError(SpinBenchError):
    """Base class for decay-fit failures"""

    exit_code = 3


class FitConvergenceError(FitError):
    """Least-squares iteration did not converge or left the valid region"""


class DegenerateDataError(FitError):
    """Decay constant is unidentifiable from the data"""


class InsufficientDataError(FitError):
    """Not enough lengths or records to fit"""


class BootstrapError(FitError):
    """Too many bootstrap resamples failed to refit"""


class MissingConfidenceIntervalError(FitError):
    """A fit result has no confidence interval to propagate"""


class InvariantViolation(SpinBenchError):
    """Internal consistency check failed"""

    exit_code = 4


class CliffordTableError(InvariantViolation):
    """Clifford table is not a closed set of 24 distinct elements"""


class InvalidStateError(InvariantViolation):
    """Density matrix is not Hermitian, unit-trace and positive"""
