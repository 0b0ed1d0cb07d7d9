"""Linearized three-level cavity model: exact steady-state covariances."""

from .system import (
    AdiabaticCoefficients,
    FieldSpectrum,
    LinearQuantumSystem,
    adiabatic_coefficients,
    build_three_level_system,
    collective_coupling,
)
from .utils import (
    SystemCovariance,
    full_map_inseparability,
    full_spin_state,
    input_noise_matrix,
    output_field_spectrum,
    steady_covariance,
)

__all__ = [
    "AdiabaticCoefficients",
    "FieldSpectrum",
    "LinearQuantumSystem",
    "SystemCovariance",
    "adiabatic_coefficients",
    "build_three_level_system",
    "collective_coupling",
    "full_map_inseparability",
    "full_spin_state",
    "input_noise_matrix",
    "output_field_spectrum",
    "steady_covariance",
]
