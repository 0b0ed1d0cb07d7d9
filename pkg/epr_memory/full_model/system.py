"""Linearized three-level model of one cavity + ensemble.

Fluctuation vector, each operator scaled to unit vacuum noise:

    v = (p, b, a, p^dagger, b^dagger, a^dagger)

p is the collective optical coherence on the signal transition, b the
collective ground-state coherence (the transverse spin, J ~ sqrt(N)/2 x_b)
and a the intracavity signal mode. With all atoms pumped into the populated
ground state the equations are

    dp/dt = -(gamma + i Delta) p + i G a + i Omega b + f_p
    db/dt = -(gamma0 + i delta') b + i Omega p + f_b
    da/dt = -(kappa + i Delta_c) a + i G p + sqrt(2 kappa) a_in

with G^2 = 2 kappa gamma C, so that G^2/(kappa gamma) = 2C. The cavity
detuning Delta_c = G^2 Delta/(gamma^2 + Delta^2) cancels the atomic
dispersion and delta' = delta + (light shift), so delta is measured from the
shifted two-photon resonance. Output convention: a_out = sqrt(2 kappa) a - a_in.
"""

import json
import math
import os
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

import numpy as np
from scipy.linalg import block_diag

from ..errors import UnstableSystemError
from ..mapping_model import EnsembleParams

# Load settings
_SETTINGS_PATH = os.path.join(os.path.dirname(__file__), "settings.json")
with open(_SETTINGS_PATH, "r", encoding="utf-8") as f:
    SETTINGS = json.load(f)

_SYSTEM_SETTINGS = SETTINGS["LinearQuantumSystem"]

OPTICAL, SPIN, CAVITY = 0, 1, 2


# ──────────────────────────────────────────────────────────────────────
#  Input spectra
# ──────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class FieldSpectrum:
    """Flat quadrature spectral densities of a field, vacuum = (1, 1, 0)."""

    s_x: float
    s_y: float
    s_xy: float = 0.0

    def __post_init__(self):
        if self.s_x < 0 or self.s_y < 0:
            raise ValueError(f"Quadrature densities must be >= 0, got {self.s_x!r}, {self.s_y!r}.")
        product = self.s_x * self.s_y - self.s_xy ** 2
        if product < 1.0 - SETTINGS["FieldSpectrum"]["uncertainty_atol"]:
            raise ValueError(f"Spectrum violates S_X S_Y - S_XY^2 >= 1 (got {product:.12g}).")

    @classmethod
    def vacuum(cls) -> "FieldSpectrum":
        return cls(1.0, 1.0)

    @classmethod
    def squeezed(cls, s_x: float) -> "FieldSpectrum":
        """Minimum-uncertainty squeezed vacuum with the given X density."""
        return cls(s_x, 1.0 / s_x)

    def ordered(self) -> np.ndarray:
        """Matrix [[<a a+>, <a a>], [<a+ a+>, <a+ a>]] of the input (a_in, a_in^dagger)."""
        n = 0.25 * (self.s_x + self.s_y) - 0.5
        m = 0.25 * (self.s_x - self.s_y) + 0.5j * self.s_xy
        return np.array([[n + 1.0, m], [np.conj(m), n]], dtype=complex)


# ──────────────────────────────────────────────────────────────────────
#  System container
# ──────────────────────────────────────────────────────────────────────

@dataclass(frozen=True, eq=False)
class LinearQuantumSystem:
    """
    dv/dt = M v + B eps_in + xi, a_out = C v + F a_in.

    ``diffusion`` holds the internal Langevin correlations <xi xi^dagger>;
    the input drive enters through ``input_coupling`` and an input spectrum.
    ``spin_phase`` is the phase of the effective field-to-spin coupling; spin
    quadratures are read in the frame where that coupling is real.
    """

    labels: Tuple[str, ...]
    drift: np.ndarray
    input_coupling: np.ndarray
    diffusion: np.ndarray
    output_map: np.ndarray
    feedthrough: np.ndarray
    n_atoms: float
    spin_phase: float = 0.0

    def __post_init__(self):
        dim = len(self.labels)
        shapes = {
            "drift": (dim, dim),
            "input_coupling": (dim, 2),
            "diffusion": (dim, dim),
            "output_map": (2, dim),
            "feedthrough": (2, 2),
        }
        for name, shape in shapes.items():
            value = np.array(getattr(self, name), dtype=complex)
            if value.shape != shape:
                raise ValueError(f"{name} must have shape {shape}, got {value.shape}.")
            value.setflags(write=False)
            object.__setattr__(self, name, value)

        eigs = np.linalg.eigvals(self.drift)
        if np.max(eigs.real) >= 0:
            raise UnstableSystemError(
                f"Drift matrix is not stable (max Re eigenvalue {np.max(eigs.real):.6g})."
            )

        d = self.diffusion
        if not np.allclose(d, d.conj().T, atol=_SYSTEM_SETTINGS["diffusion_psd_atol"]):
            raise ValueError("Diffusion matrix is not Hermitian.")
        lowest = float(np.min(np.linalg.eigvalsh(0.5 * (d + d.conj().T))))
        if lowest < -_SYSTEM_SETTINGS["diffusion_psd_atol"]:
            raise ValueError(f"Diffusion matrix is not positive semidefinite (eigenvalue {lowest:.3e}).")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.drift)


# ──────────────────────────────────────────────────────────────────────
#  Adiabatic reduction
# ──────────────────────────────────────────────────────────────────────

class AdiabaticCoefficients(NamedTuple):
    """Spin equation after eliminating the optical coherence and cavity mode at zero frequency."""

    gamma_tilde0: float
    transfer_rate: float
    emission_rate: float
    frequency_shift: float
    coupling_phase: float


def _schur_reduce(block: np.ndarray, b_in: np.ndarray, noise: np.ndarray) -> AdiabaticCoefficients:
    fast = [OPTICAL, CAVITY]
    gain = block[SPIN, fast] @ np.linalg.inv(block[np.ix_(fast, fast)])
    m_eff = block[SPIN, SPIN] - gain @ block[fast, SPIN]
    b_eff = b_in[SPIN] - gain @ b_in[fast]

    weights = np.zeros(3, dtype=complex)
    weights[SPIN] = 1.0
    weights[fast] = -gain
    noise_eff = float(np.real(weights @ noise @ weights.conj()))

    return AdiabaticCoefficients(
        gamma_tilde0=float(-m_eff.real),
        transfer_rate=float(abs(b_eff) ** 2),
        emission_rate=noise_eff - float(noise[SPIN, SPIN].real),
        frequency_shift=float(-m_eff.imag),
        coupling_phase=float(np.angle(-b_eff)) if abs(b_eff) > 0 else 0.0,
    )


def adiabatic_coefficients(system: LinearQuantumSystem) -> AdiabaticCoefficients:
    """
    Zero-frequency elimination of the fast variables (Schur complement).

    Reproduces the reduced-model gamma_tilde0, transfer and emission rates;
    exact for EIT on resonance.
    """
    return _schur_reduce(
        system.drift[:3, :3],
        system.input_coupling[:3, 0],
        system.diffusion[:3, :3],
    )


# ──────────────────────────────────────────────────────────────────────
#  Construction
# ──────────────────────────────────────────────────────────────────────

def collective_coupling(params: EnsembleParams) -> float:
    """G = sqrt(2 kappa gamma C)."""
    return math.sqrt(2.0 * params.kappa * params.gamma * params.cooperativity)


def build_three_level_system(
    params: EnsembleParams,
    Delta: Optional[float] = None,
    delta: float = 0.0,
) -> LinearQuantumSystem:
    """
    Drift, input, diffusion and output matrices of one cavity + ensemble.

    Args:
        params: Ensemble parameters.
        Delta: One-photon detuning; defaults to 0 (EIT) or ``delta_raman``.
        delta: Two-photon detuning from the light-shifted resonance.

    Returns:
        LinearQuantumSystem.

    Raises:
        UnstableSystemError: If the drift matrix is not stable.
    """
    if Delta is None:
        Delta = params.delta_raman if params.scheme == "Raman" else 0.0
    gamma, gamma0, kappa = params.gamma, params.gamma0, params.kappa
    big_g = collective_coupling(params)
    omega = params.omega
    delta_c = big_g ** 2 * Delta / (gamma ** 2 + Delta ** 2)

    fast = np.array([
        [-(gamma + 1j * Delta), 1j * big_g],
        [1j * big_g, -(kappa + 1j * delta_c)],
    ])
    light_shift = (omega ** 2 * np.linalg.inv(fast)[0, 0]).imag
    delta_total = delta + light_shift

    block = np.array([
        [-(gamma + 1j * Delta), 1j * omega, 1j * big_g],
        [1j * omega, -(gamma0 + 1j * delta_total), 0.0],
        [1j * big_g, 0.0, -(kappa + 1j * delta_c)],
    ])
    drift = block_diag(block, block.conj())

    root = math.sqrt(2.0 * kappa)
    b_in = np.zeros((6, 2), dtype=complex)
    b_in[CAVITY, 0] = root
    b_in[3 + CAVITY, 1] = root

    diffusion = np.zeros((6, 6), dtype=complex)
    diffusion[OPTICAL, OPTICAL] = 2.0 * gamma
    diffusion[SPIN, SPIN] = 2.0 * gamma0

    output_map = np.zeros((2, 6), dtype=complex)
    output_map[0, CAVITY] = root
    output_map[1, 3 + CAVITY] = root

    phase = _schur_reduce(block, b_in[:3, 0], diffusion[:3, :3]).coupling_phase

    return LinearQuantumSystem(
        labels=tuple(_SYSTEM_SETTINGS["labels"]),
        drift=drift,
        input_coupling=b_in,
        diffusion=diffusion,
        output_map=output_map,
        feedthrough=-np.eye(2),
        n_atoms=params.n_atoms,
        spin_phase=phase,
    )
