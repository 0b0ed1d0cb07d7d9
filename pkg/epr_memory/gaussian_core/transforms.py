"""Symplectic transforms for the source and the polarization readout chain.

All factories return a ``SymplecticTransform`` on ``n_modes`` modes that acts
as the identity on modes it does not touch. Phase conventions: a rotation by
theta sends A -> exp(i*theta) A, i.e. X' = cos(theta) X - sin(theta) Y and
Y' = sin(theta) X + cos(theta) Y.
"""

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .states import SETTINGS, QuadratureState, symplectic_form

_TRANSFORM_SETTINGS = SETTINGS["SymplecticTransform"]


@dataclass(frozen=True, eq=False)
class SymplecticTransform:
    """Real 2n x 2n matrix S with S Omega S^T = Omega."""

    matrix: np.ndarray

    def __post_init__(self):
        s = np.array(self.matrix, dtype=float)
        if s.ndim != 2 or s.shape[0] != s.shape[1] or s.shape[0] % 2:
            raise ValueError(f"Symplectic matrix must be square of even size, got {s.shape}.")

        omega = symplectic_form(s.shape[0] // 2)
        defect = float(np.max(np.abs(s @ omega @ s.T - omega)))
        if defect > _TRANSFORM_SETTINGS["symplectic_atol"]:
            raise ValueError(f"Matrix is not symplectic (max defect {defect:.3e}).")
        det = float(np.linalg.det(s))
        if abs(det - 1.0) > _TRANSFORM_SETTINGS["determinant_atol"]:
            raise ValueError(f"Symplectic matrix must have unit determinant, got {det:.12g}.")

        s.setflags(write=False)
        object.__setattr__(self, "matrix", s)

    @property
    def n_modes(self) -> int:
        return self.matrix.shape[0] // 2


def apply_transform(state: QuadratureState, transform: SymplecticTransform) -> QuadratureState:
    """Return the state with covariance S cov S^T."""
    if state.n_modes != transform.n_modes:
        raise ValueError(
            f"Transform acts on {transform.n_modes} mode(s) but state has {state.n_modes}."
        )
    s = transform.matrix
    return QuadratureState(state.n_modes, s @ state.cov @ s.T)


def identity(n_modes: int) -> SymplecticTransform:
    return SymplecticTransform(np.eye(2 * n_modes))


def compose(*transforms: SymplecticTransform) -> SymplecticTransform:
    """Composite transform; the first argument is applied first."""
    if not transforms:
        raise ValueError("compose needs at least one transform.")
    n_modes = transforms[0].n_modes
    result = np.eye(2 * n_modes)
    for t in transforms:
        if t.n_modes != n_modes:
            raise ValueError("Cannot compose transforms acting on different mode counts.")
        result = t.matrix @ result
    return SymplecticTransform(result)


def inverse(transform: SymplecticTransform) -> SymplecticTransform:
    """Inverse via S^-1 = -Omega S^T Omega."""
    omega = symplectic_form(transform.n_modes)
    return SymplecticTransform(-omega @ transform.matrix.T @ omega)


def passive_transform(n_modes: int, unitary: np.ndarray, modes: Sequence[int]) -> SymplecticTransform:
    """
    Symplectic image of a passive (number-conserving) mode transformation.

    The listed modes transform as A_j -> sum_k U_jk A_k. Each complex entry
    U_jk = a + ib becomes the real block [[a, -b], [b, a]].

    Args:
        n_modes: Total number of modes.
        unitary: Complex m x m unitary matrix.
        modes: The m mode indices the unitary acts on.

    Returns:
        SymplecticTransform on all n_modes modes.

    Raises:
        ValueError: If the matrix is not unitary or the mode list is invalid.
    """
    u = np.atleast_2d(np.asarray(unitary, dtype=complex))
    modes = list(modes)
    if u.shape != (len(modes), len(modes)):
        raise ValueError(f"Unitary shape {u.shape} does not match {len(modes)} listed mode(s).")
    if len(set(modes)) != len(modes) or any(not 0 <= m < n_modes for m in modes):
        raise ValueError(f"Invalid mode list {modes} for {n_modes} mode(s).")
    if not np.allclose(u @ u.conj().T, np.eye(len(modes)), atol=1e-12):
        raise ValueError("Mode transformation is not unitary.")

    s = np.eye(2 * n_modes)
    for j, mj in enumerate(modes):
        for k, mk in enumerate(modes):
            a, b = u[j, k].real, u[j, k].imag
            s[2 * mj:2 * mj + 2, 2 * mk:2 * mk + 2] = [[a, -b], [b, a]]
    return SymplecticTransform(s)


def phase_rotation(n_modes: int, mode: int, theta: float) -> SymplecticTransform:
    """Rotate the noise ellipse of one mode by theta."""
    return passive_transform(n_modes, [[np.exp(1j * theta)]], [mode])


def beamsplitter(n_modes: int, i: int, j: int, theta: float = np.pi / 4) -> SymplecticTransform:
    """Mixer A_i' = cos A_i - sin A_j, A_j' = sin A_i + cos A_j; 50:50 by default."""
    c, s = np.cos(theta), np.sin(theta)
    return passive_transform(n_modes, [[c, -s], [s, c]], [i, j])


def single_mode_squeezing(n_modes: int, mode: int, r: float) -> SymplecticTransform:
    """Squeeze X by exp(-r) and stretch Y by exp(r) on one mode."""
    if not 0 <= mode < n_modes:
        raise ValueError(f"Mode index {mode} out of range for {n_modes} mode(s).")
    s = np.eye(2 * n_modes)
    s[2 * mode, 2 * mode] = np.exp(-r)
    s[2 * mode + 1, 2 * mode + 1] = np.exp(r)
    return SymplecticTransform(s)


def quarter_wave_plate(n_modes: int, mode: int) -> SymplecticTransform:
    """Quarter-wave plate at 0 degrees: a pi/2 rotation of one mode's ellipse."""
    return phase_rotation(n_modes, mode, np.pi / 2)


def half_wave_plate(n_modes: int, i: int, j: int) -> SymplecticTransform:
    """
    Half-wave plate at 22.5 degrees projecting onto the +/-45 degree modes.

    Mode convention: A_i' = (A_i + i A_j)/sqrt(2), A_j' = (-i A_i - A_j)/sqrt(2),
    chosen so that after a
    quarter-wave plate on mode j the composite gives X_i' = (X_i - X_j)/sqrt(2)
    and X_j' = (Y_i + Y_j)/sqrt(2).
    """
    mixer = np.array([[1.0, 1.0j], [-1.0j, -1.0]]) / np.sqrt(2.0)
    return passive_transform(n_modes, mixer, [i, j])


def readout_basis_rotation() -> SymplecticTransform:
    """
    Polarization-basis rotation of the two outgoing modes before detection.

    A quarter-wave plate rotates mode 2 by pi/2, then the half-wave plate mixes
    both modes. The net mode transformation is
    A1' = (A1 - A2)/sqrt(2), A2' = -i(A1 + A2)/sqrt(2), so
    X1' = (X1 - X2)/sqrt(2) and X2' = (Y1 + Y2)/sqrt(2) exactly and both
    output modes of an EPR pair are squeezed on X.
    """
    return compose(quarter_wave_plate(2, 1), half_wave_plate(2, 0, 1))
