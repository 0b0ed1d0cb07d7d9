"""Storage decay, retrieval and simulated homodyne readout."""

from .protocol import ProtocolResult, end_to_end
from .utils import (
    AnalyzerPower,
    ReadoutConfig,
    ReadoutResult,
    analyzer_power,
    exponential_lo,
    flat_lo,
    lo_profile,
    matched_lo,
    measured_inseparability,
    readout_correlation,
    simulate_readout,
    storage_decay,
)

__all__ = [
    "AnalyzerPower",
    "ProtocolResult",
    "ReadoutConfig",
    "ReadoutResult",
    "analyzer_power",
    "end_to_end",
    "exponential_lo",
    "flat_lo",
    "lo_profile",
    "matched_lo",
    "measured_inseparability",
    "readout_correlation",
    "simulate_readout",
    "storage_decay",
]
