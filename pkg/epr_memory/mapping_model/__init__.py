"""Reduced (adiabatic) model of EPR-correlation transfer onto two atomic ensembles."""

from .optimize import PumpingOptimum, golden_section_maximize, optimize_pumping, pumping_window
from .params import (
    DerivedRates,
    EnsembleParams,
    SpinEPRState,
    check_regime,
    decay_per_pumping,
    derive_rates,
)
from .trajectories import TrajectoryEstimate, simulate_trajectories
from .utils import (
    TransferBreakdown,
    beta_sq_microscopic,
    map_inseparability,
    map_squeezing,
    map_variances_spectral,
    mapping_fidelity,
    spin_spectrum,
)

__all__ = [
    "DerivedRates",
    "EnsembleParams",
    "PumpingOptimum",
    "SpinEPRState",
    "TrajectoryEstimate",
    "TransferBreakdown",
    "beta_sq_microscopic",
    "check_regime",
    "decay_per_pumping",
    "derive_rates",
    "golden_section_maximize",
    "map_inseparability",
    "map_squeezing",
    "map_variances_spectral",
    "mapping_fidelity",
    "optimize_pumping",
    "pumping_window",
    "simulate_trajectories",
    "spin_spectrum",
]
