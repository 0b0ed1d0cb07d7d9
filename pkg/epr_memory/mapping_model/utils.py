"""Reduced-model transfer of EPR correlations from the field to the spins."""

import math
from typing import Callable, NamedTuple, Union

import numpy as np
from scipy.integrate import quad

from ..gaussian_core import eof_symmetric
from .params import SETTINGS, DerivedRates, EnsembleParams, SpinEPRState

SpectralDensity = Union[float, Callable[[float], float]]

_SPECTRAL_SETTINGS = SETTINGS["spectral"]


class TransferBreakdown(NamedTuple):
    """Atomic inseparability split into its coupling and noise contributions."""

    i_at: float
    coupling: float
    ground_noise: float
    emission_noise: float

    @property
    def noise(self) -> float:
        return self.ground_noise + self.emission_noise


def map_inseparability(rates: DerivedRates, i_f: float) -> TransferBreakdown:
    """
    Atomic inseparability produced by a broadband EPR input.

    I_at = coupling * I_f + 2 gamma0/gamma_tilde0 + emission_rate/gamma_tilde0,
    with coupling = transfer_rate / (2 gamma_tilde0). In EIT this is
    [2C/(1+2C)] [Gamma_E/((1+2C) gamma_tilde0)] I_f
    + 2 [gamma0/gamma_tilde0 + Gamma_E/((1+2C)^2 gamma_tilde0)].
    The three coefficients always sum so that I_f = 2 maps to I_at = 2.

    Args:
        rates: Derived rates of the (symmetric) ensembles.
        i_f: Field inseparability, > 0.

    Returns:
        TransferBreakdown with I_at and its three terms.

    Raises:
        ValueError: If i_f is not positive.
    """
    if not i_f > 0:
        raise ValueError(f"Field inseparability must be positive, got {i_f!r}.")

    coupling = rates.transfer_rate / (2.0 * rates.gamma_tilde0)
    ground_noise = 2.0 * rates.gamma0 / rates.gamma_tilde0
    emission_noise = rates.emission_rate / rates.gamma_tilde0
    return TransferBreakdown(
        i_at=coupling * i_f + ground_noise + emission_noise,
        coupling=coupling,
        ground_noise=ground_noise,
        emission_noise=emission_noise,
    )


def map_squeezing(rates: DerivedRates, s_input: float) -> float:
    """
    Normalized spin variance of one ensemble driven by a squeezed vacuum.

    Args:
        rates: Derived rates.
        s_input: Flat quadrature spectral density of the input, vacuum = 1.

    Returns:
        2 Var(J)/N; 1 for a vacuum input.
    """
    if s_input < 0:
        raise ValueError(f"Spectral density must be >= 0, got {s_input!r}.")
    breakdown = map_inseparability(rates, 2.0)
    return breakdown.coupling * s_input + 0.5 * breakdown.noise


def spin_spectrum(rates: DerivedRates, s_input: float, omega) -> np.ndarray:
    """Lorentzian spectrum (beta^2 S + 2D)/(gamma_tilde0^2 + omega^2) of a spin combination."""
    omega = np.asarray(omega, dtype=float)
    return (rates.beta_sq * s_input + 2.0 * rates.diffusion) / (rates.gamma_tilde0 ** 2 + omega ** 2)


def _combination_variance(rates: DerivedRates, density: SpectralDensity) -> float:
    """Normalized variance of one spin combination for a flat or callable input density."""
    if callable(density):
        # omega = gamma_tilde0 tan(theta) turns the Lorentzian into a flat weight
        gt = rates.gamma_tilde0

        def integrand(theta: float) -> float:
            value = density(gt * math.tan(theta))
            if value < 0:
                raise ValueError(f"Spectral density is negative ({value!r}) at omega = {gt * math.tan(theta)!r}.")
            return value

        integral, _ = quad(
            integrand,
            -0.5 * math.pi,
            0.5 * math.pi,
            epsabs=0.0,
            epsrel=_SPECTRAL_SETTINGS["quad_epsrel"],
            limit=_SPECTRAL_SETTINGS["quad_limit"],
        )
        mean_density = integral / math.pi
    else:
        if density < 0:
            raise ValueError(f"Spectral density must be >= 0, got {density!r}.")
        mean_density = float(density)

    variance = (rates.beta_sq * mean_density + 2.0 * rates.diffusion) / (2.0 * rates.gamma_tilde0)
    return variance / (rates.n_atoms / 2.0)


def map_variances_spectral(
    rates: DerivedRates,
    s_minus: SpectralDensity,
    s_plus: SpectralDensity,
) -> SpinEPRState:
    """
    Spin EPR variances from the frequency-domain Langevin model.

    Each combination has variance integral dw/2pi (beta^2 S(w) + 2D)/(gamma_tilde0^2 + w^2),
    closed form for flat S and adaptive quadrature for callable S, normalized
    by N/2.

    Args:
        rates: Derived rates.
        s_minus: Spectral density of X1 - X2 (vacuum 2), constant or callable of omega.
        s_plus: Spectral density of Y1 + Y2.

    Returns:
        SpinEPRState.

    Raises:
        ValueError: If a density is negative.
    """
    return SpinEPRState(
        v_minus=_combination_variance(rates, s_minus),
        v_plus=_combination_variance(rates, s_plus),
        mean_jz=rates.n_atoms / 2.0,
    )


def mapping_fidelity(rates: DerivedRates, i_f: float) -> float:
    """
    Ratio of atomic to field entanglement of formation.

    Raises:
        ValueError: If i_f is outside (0, 2); the ratio is undefined at 2.
    """
    if not 0 < i_f < 2:
        raise ValueError(f"Mapping fidelity needs an entangled input, 0 < I_f < 2; got {i_f!r}.")
    return eof_symmetric(map_inseparability(rates, i_f).i_at) / eof_symmetric(i_f)


def beta_sq_microscopic(params: EnsembleParams) -> float:
    """beta^2 = g^2 N^2 Omega^2 / (gamma^2 T (1+2C)^2), EIT only."""
    if params.scheme != "EIT":
        raise ValueError("The microscopic coupling formula applies to the EIT scheme only.")
    enhancement = 1.0 + 2.0 * params.cooperativity
    return (
        params.g ** 2 * params.n_atoms ** 2 * params.omega ** 2
        / (params.gamma ** 2 * params.transmission * enhancement ** 2)
    )
