"""Gaussian states, symplectic optics and entanglement metrics."""

from .states import (
    QuadratureState,
    direct_sum,
    epr_squeezing_for,
    make_epr,
    make_vacuum,
    symplectic_eigenvalues,
    symplectic_form,
)
from .transforms import (
    SymplecticTransform,
    apply_transform,
    beamsplitter,
    compose,
    half_wave_plate,
    identity,
    inverse,
    passive_transform,
    phase_rotation,
    quarter_wave_plate,
    readout_basis_rotation,
    single_mode_squeezing,
)
from .utils import (
    duan_inseparability,
    eof_symmetric,
    epr_variances,
    load_covariance_csv,
    save_covariance_csv,
)

__all__ = [
    "QuadratureState",
    "SymplecticTransform",
    "apply_transform",
    "beamsplitter",
    "compose",
    "direct_sum",
    "duan_inseparability",
    "eof_symmetric",
    "epr_squeezing_for",
    "epr_variances",
    "half_wave_plate",
    "identity",
    "inverse",
    "load_covariance_csv",
    "make_epr",
    "make_vacuum",
    "passive_transform",
    "phase_rotation",
    "quarter_wave_plate",
    "readout_basis_rotation",
    "save_covariance_csv",
    "single_mode_squeezing",
    "symplectic_eigenvalues",
    "symplectic_form",
]
