"""Exception types shared by all subpackages.

The CLI maps these onto process exit codes: ``ConfigError`` exits with 1,
``NumericalError`` and its subclasses with 2. Plain argument problems raise
the builtin ``ValueError``.
"""

from typing import Optional


class ConfigError(ValueError):
    """A run configuration could not be parsed or describes invalid physics."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class NumericalError(RuntimeError):
    """A numerical procedure failed or produced an untrustworthy result."""


class UnstableSystemError(NumericalError):
    """Drift matrix has an eigenvalue with non-negative real part."""


class LyapunovError(NumericalError):
    """Steady-state Lyapunov solve is singular or its residual is too large."""


class ReadoutIntegrationError(NumericalError):
    """Analyzer integrals disagree between the two quadrature paths."""


class InfeasibleWindowError(ValueError):
    """The pumping-rate search window is empty."""


class CalibrationError(ValueError):
    """Readout results do not share a usable shot-noise calibration."""
