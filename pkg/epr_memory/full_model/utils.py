"""Steady-state covariances and spectra of the three-level model."""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy.integrate import quad_vec
from scipy.linalg import solve_continuous_lyapunov

from ..errors import LyapunovError, NumericalError
from ..gaussian_core import QuadratureState
from ..mapping_model import EnsembleParams, SpinEPRState
from .system import (
    CAVITY,
    SETTINGS,
    SPIN,
    FieldSpectrum,
    LinearQuantumSystem,
    build_three_level_system,
)

logger = logging.getLogger(__name__)

_LOG_PREFIX = "[EPR Memory][full model]"

InputSpectra = Union[FieldSpectrum, Callable[[float], FieldSpectrum]]


@dataclass(frozen=True, eq=False)
class SystemCovariance:
    """Steady state of a LinearQuantumSystem."""

    ordered: np.ndarray
    quadratures: np.ndarray
    mode_names: tuple

    def mode_state(self) -> QuadratureState:
        """Quadrature covariance of all modes; the spin block is in the coupling frame."""
        return QuadratureState(len(self.mode_names), self.quadratures)

    def spin_variances(self):
        """(x, y) spin quadrature variances; a coherent spin state gives 1."""
        i = 2 * SPIN
        return float(self.quadratures[i, i]), float(self.quadratures[i + 1, i + 1])


def _quadrature_map(system: LinearQuantumSystem) -> np.ndarray:
    """Rows x_k = e^{-i phi} v_k + e^{i phi} v_k^+, y_k = -i e^{-i phi} v_k + i e^{i phi} v_k^+."""
    n_modes = system.dim // 2
    lmap = np.zeros((system.dim, system.dim), dtype=complex)
    for k in range(n_modes):
        phase = np.exp(1j * system.spin_phase) if k == SPIN else 1.0
        lmap[2 * k, k] = np.conj(phase)
        lmap[2 * k, k + n_modes] = phase
        lmap[2 * k + 1, k] = -1j * np.conj(phase)
        lmap[2 * k + 1, k + n_modes] = 1j * phase
    return lmap


def input_noise_matrix(system: LinearQuantumSystem, spectrum: FieldSpectrum) -> np.ndarray:
    """Total drive B S_in B^dagger + internal diffusion."""
    b = system.input_coupling
    return b @ spectrum.ordered() @ b.conj().T + system.diffusion


def _finish(system: LinearQuantumSystem, ordered: np.ndarray) -> SystemCovariance:
    ordered = 0.5 * (ordered + ordered.conj().T)
    lmap = _quadrature_map(system)
    quad = np.real(lmap @ ordered @ lmap.conj().T)
    return SystemCovariance(
        ordered=ordered,
        quadratures=0.5 * (quad + quad.T),
        mode_names=tuple(SETTINGS["LinearQuantumSystem"]["mode_names"]),
    )


def _lyapunov_covariance(system: LinearQuantumSystem, spectrum: FieldSpectrum) -> np.ndarray:
    m = system.drift
    d_total = input_noise_matrix(system, spectrum)
    try:
        v = solve_continuous_lyapunov(m, -d_total)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise LyapunovError(f"Lyapunov solve failed: {exc}") from exc

    residual = np.linalg.norm(m @ v + v @ m.conj().T + d_total)
    limit = SETTINGS["lyapunov"]["residual_rtol"] * max(np.linalg.norm(d_total), 1e-300)
    if not residual <= limit:
        raise LyapunovError(
            f"Lyapunov residual {residual:.3e} exceeds {limit:.3e}; drift may be near-degenerate."
        )
    return v


def _frequency_covariance(system: LinearQuantumSystem, spectra: Callable[[float], FieldSpectrum]) -> np.ndarray:
    """
    V = integral dw/2pi H(w) D(w) H(w)^dagger with H = (-i w - M)^-1.

    w = s tan(theta) maps the real line onto (-pi/2, pi/2); s is the slowest
    decay rate and resonances are passed as breakpoints.
    """
    m = system.drift
    dim = system.dim
    eigs = np.linalg.eigvals(m)
    scale = float(np.min(np.abs(eigs.real)))
    centres = -eigs.imag
    widths = np.abs(eigs.real)
    points = np.unique(np.round(np.arctan(np.concatenate([
        centres / scale, (centres - widths) / scale, (centres + widths) / scale,
    ])), 14))
    points = points[np.abs(points) < 0.5 * math.pi - 1e-12]

    identity = np.eye(dim)

    def integrand(theta: float) -> np.ndarray:
        w = scale * math.tan(theta)
        h = np.linalg.inv(-1j * w * identity - m)
        d_total = input_noise_matrix(system, spectra(w))
        value = h @ d_total @ h.conj().T * (scale / math.cos(theta) ** 2) / (2.0 * math.pi)
        return np.concatenate([value.real.ravel(), value.imag.ravel()])

    freq = SETTINGS["frequency"]
    result, _, info = quad_vec(
        integrand,
        -0.5 * math.pi,
        0.5 * math.pi,
        epsabs=freq["epsabs"],
        epsrel=freq["epsrel"],
        norm="max",
        limit=freq["limit"],
        points=list(points),
        full_output=True,
    )
    if info.status != 0:
        raise NumericalError(f"Frequency integration did not converge: {info.message}")
    return (result[: dim * dim] + 1j * result[dim * dim:]).reshape(dim, dim)


def steady_covariance(
    system: LinearQuantumSystem,
    input_spectra: Optional[InputSpectra] = None,
    method: str = "lyapunov",
) -> SystemCovariance:
    """
    Steady-state covariance of all system variables.

    White inputs are solved from M V + V M^dagger + D_total = 0; colored inputs
    (a callable of omega returning a FieldSpectrum, assumed even in omega) are
    integrated over frequency. ``method="frequency"`` forces the integral for
    white inputs too.

    Args:
        system: Stable linear system.
        input_spectra: Signal-field input spectrum; vacuum by default.
        method: "lyapunov" or "frequency".

    Returns:
        SystemCovariance.

    Raises:
        LyapunovError: If the Lyapunov solve is singular or inaccurate.
        NumericalError: If the frequency integral does not converge.
    """
    if input_spectra is None:
        input_spectra = FieldSpectrum.vacuum()
    if method not in ("lyapunov", "frequency"):
        raise ValueError(f"method must be 'lyapunov' or 'frequency', got {method!r}.")

    if callable(input_spectra):
        ordered = _frequency_covariance(system, input_spectra)
    elif method == "frequency":
        ordered = _frequency_covariance(system, lambda _w: input_spectra)
    else:
        ordered = _lyapunov_covariance(system, input_spectra)
    return _finish(system, ordered)


def output_field_spectrum(
    system: LinearQuantumSystem,
    input_spectra: Optional[InputSpectra],
    omega: float,
) -> FieldSpectrum:
    """
    Symmetrized quadrature spectra of the cavity output at frequency omega.

    a_out = sqrt(2 kappa) a - a_in, so the transfer function is
    T(w) = C (-i w - M)^-1 B - 1 and S_out = T S_in T^+ + C H D H^+ C^+.
    """
    if input_spectra is None:
        input_spectra = FieldSpectrum.vacuum()

    lq = np.array([[1.0, 1.0], [-1j, 1j]])

    def ordered_quadratures(w: float) -> np.ndarray:
        spectrum = input_spectra(w) if callable(input_spectra) else input_spectra
        h = np.linalg.inv(-1j * w * np.eye(system.dim) - system.drift)
        c_h = system.output_map @ h
        transfer = c_h @ system.input_coupling + system.feedthrough
        s_out = transfer @ spectrum.ordered() @ transfer.conj().T + c_h @ system.diffusion @ c_h.conj().T
        return np.real(lq @ s_out @ lq.conj().T)

    q = 0.5 * (ordered_quadratures(omega) + ordered_quadratures(-omega))
    return FieldSpectrum(float(q[0, 0]), float(q[1, 1]), float(0.5 * (q[0, 1] + q[1, 0])))


def full_spin_state(
    params: EnsembleParams,
    i_f: float,
    Delta: Optional[float] = None,
    delta: float = 0.0,
) -> SpinEPRState:
    """
    Spin EPR variances of two symmetric cavities fed by a two-mode squeezed vacuum.

    The difference mode (a1 - a2)/sqrt(2) carries X density I_f/2 and drives
    J_x1 - J_x2; the sum mode carries Y density I_f/2 and drives J_y1 + J_y2.
    Both see identical single-cavity dynamics, so one system is solved twice.

    Raises:
        ValueError: If i_f is not positive.
    """
    if not i_f > 0:
        raise ValueError(f"Field inseparability must be positive, got {i_f!r}.")
    system = build_three_level_system(params, Delta, delta)
    v_minus, _ = steady_covariance(system, FieldSpectrum(0.5 * i_f, 2.0 / i_f)).spin_variances()
    _, v_plus = steady_covariance(system, FieldSpectrum(2.0 / i_f, 0.5 * i_f)).spin_variances()
    logger.debug("%s I_f=%.6g -> v-=%.9g, v+=%.9g", _LOG_PREFIX, i_f, v_minus, v_plus)
    return SpinEPRState(v_minus, v_plus, params.n_atoms / 2.0)


def full_map_inseparability(
    params: EnsembleParams,
    i_f: float,
    Delta: Optional[float] = None,
    delta: float = 0.0,
) -> float:
    """Atomic inseparability from the full three-level model."""
    return full_spin_state(params, i_f, Delta, delta).inseparability
