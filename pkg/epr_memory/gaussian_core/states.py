"""Gaussian field states described by their quadrature covariance matrix.

Quadratures are ordered per mode, (X1, Y1, X2, Y2, ...), with
X = A + A^dagger and Y = i(A^dagger - A). Vacuum has unit variance on
every quadrature, so the separable bound of the EPR criterion is 2.
"""

import json
import os
from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

# Load settings
_SETTINGS_PATH = os.path.join(os.path.dirname(__file__), "settings.json")
with open(_SETTINGS_PATH, "r", encoding="utf-8") as f:
    SETTINGS = json.load(f)

_STATE_SETTINGS = SETTINGS["QuadratureState"]

_OMEGA_1 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def symplectic_form(n_modes: int) -> np.ndarray:
    """Standard symplectic form for the interleaved quadrature ordering."""
    return np.kron(np.eye(n_modes), _OMEGA_1)


def symplectic_eigenvalues(cov: np.ndarray) -> np.ndarray:
    """
    Symplectic spectrum of a covariance matrix.

    The eigenvalues of i*Omega*cov come in +/- pairs; one modulus per pair is
    kept, in ascending order.

    Args:
        cov: Real 2n x 2n covariance matrix.

    Returns:
        Array of the n symplectic eigenvalues.
    """
    n_modes = cov.shape[0] // 2
    eigs = np.linalg.eigvals(1j * symplectic_form(n_modes) @ cov)
    return np.sort(np.abs(eigs))[::2]


@dataclass(frozen=True, eq=False)
class QuadratureState:
    """Covariance matrix of n field modes, vacuum = identity."""

    n_modes: int
    cov: np.ndarray

    def __post_init__(self):
        if int(self.n_modes) != self.n_modes or self.n_modes < 1:
            raise ValueError(f"n_modes must be a positive integer, got {self.n_modes!r}.")

        dim = 2 * self.n_modes
        cov = np.array(self.cov, dtype=float)
        if cov.shape != (dim, dim):
            raise ValueError(
                f"Covariance for {self.n_modes} mode(s) must be {dim}x{dim}, got {cov.shape}."
            )
        if not np.all(np.isfinite(cov)):
            raise ValueError("Covariance contains non-finite entries.")

        scale = max(float(np.max(np.abs(cov))), 1.0)
        asymmetry = float(np.max(np.abs(cov - cov.T)))
        if asymmetry > _STATE_SETTINGS["symmetry_rtol"] * scale:
            raise ValueError(f"Covariance is not symmetric (max deviation {asymmetry:.3e}).")
        cov = 0.5 * (cov + cov.T)

        # rounding in the symplectic spectrum grows with the covariance norm
        nu_min = float(symplectic_eigenvalues(cov).min())
        norm = max(float(np.linalg.norm(cov, 2)), 1.0)
        if nu_min < 1.0 - _STATE_SETTINGS["heisenberg_atol"] * norm:
            raise ValueError(
                f"Covariance violates the Heisenberg condition "
                f"(smallest symplectic eigenvalue {nu_min:.12g} < 1)."
            )

        cov.setflags(write=False)
        object.__setattr__(self, "n_modes", int(self.n_modes))
        object.__setattr__(self, "cov", cov)

    def symplectic_eigenvalues(self) -> np.ndarray:
        return symplectic_eigenvalues(self.cov)

    def variance(self, mode: int, quadrature: str = "X") -> float:
        """Variance of the X or Y quadrature of one mode."""
        self._check_mode(mode)
        offset = {"X": 0, "Y": 1}.get(quadrature.upper())
        if offset is None:
            raise ValueError(f"Quadrature must be 'X' or 'Y', got {quadrature!r}.")
        index = 2 * mode + offset
        return float(self.cov[index, index])

    def reduced(self, modes) -> "QuadratureState":
        """Marginal state on the listed modes, in the given order."""
        modes = list(modes)
        for mode in modes:
            self._check_mode(mode)
        idx = [2 * m + k for m in modes for k in (0, 1)]
        return QuadratureState(len(modes), self.cov[np.ix_(idx, idx)])

    def _check_mode(self, mode: int) -> None:
        if not 0 <= mode < self.n_modes:
            raise IndexError(f"Mode index {mode} out of range for {self.n_modes} mode(s).")


def make_vacuum(n_modes: int) -> QuadratureState:
    """Vacuum on ``n_modes`` modes."""
    if int(n_modes) != n_modes or n_modes < 1:
        raise ValueError(f"n_modes must be a positive integer, got {n_modes!r}.")
    return QuadratureState(int(n_modes), np.eye(2 * int(n_modes)))


def make_epr(r: float) -> QuadratureState:
    """
    Two-mode squeezed vacuum with squeezing parameter r.

    Amplitudes are correlated and phases anti-correlated, so both
    Var(X1 - X2) and Var(Y1 + Y2) equal 2*exp(-2r).

    Args:
        r: Squeezing parameter, r >= 0.

    Returns:
        Two-mode QuadratureState.

    Raises:
        ValueError: If r is negative or not finite.
    """
    if not np.isfinite(r) or r < 0:
        raise ValueError(f"Squeezing parameter must be finite and >= 0, got {r!r}.")

    c, s = np.cosh(2 * r), np.sinh(2 * r)
    cov = np.diag([c, c, c, c])
    cov[0, 2] = cov[2, 0] = s
    cov[1, 3] = cov[3, 1] = -s
    return QuadratureState(2, cov)


def epr_squeezing_for(inseparability: float) -> float:
    """Squeezing parameter whose two-mode squeezed vacuum has the given inseparability."""
    if not 0 < inseparability <= 2:
        raise ValueError(f"Inseparability must lie in (0, 2], got {inseparability!r}.")
    return -0.5 * np.log(inseparability / 2.0)


def direct_sum(*states: QuadratureState) -> QuadratureState:
    """Product state of independent modes, in argument order."""
    if not states:
        raise ValueError("direct_sum needs at least one state.")
    return QuadratureState(
        sum(s.n_modes for s in states),
        block_diag(*[s.cov for s in states]),
    )
