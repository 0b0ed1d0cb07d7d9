"""Physical parameters of one cavity + ensemble and the rates derived from them.

All rates are expressed relative to the optical dipole decay rate, which is
1 by default, so times are in units of 1/gamma.
"""

import json
import logging
import math
import os
from dataclasses import dataclass, replace
from typing import Optional, Tuple

# Load settings
_SETTINGS_PATH = os.path.join(os.path.dirname(__file__), "settings.json")
with open(_SETTINGS_PATH, "r", encoding="utf-8") as f:
    SETTINGS = json.load(f)

logger = logging.getLogger(__name__)

_LOG_PREFIX = "[EPR Memory][mapping]"


# ──────────────────────────────────────────────────────────────────────
#  Parameter types
# ──────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class EnsembleParams:
    """Microscopic parameters of a single cavity + atomic ensemble."""

    gamma: float
    gamma0: float
    kappa: float
    g: float
    n_atoms: float
    transmission: float
    omega: float
    scheme: str = "EIT"
    delta_raman: Optional[float] = None

    def __post_init__(self):
        for name in ("gamma", "gamma0", "kappa"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be a finite positive rate, got {value!r}.")
        for name in ("g", "omega"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value >= 0):
                raise ValueError(f"{name} must be finite and >= 0, got {value!r}.")
        if not (math.isfinite(self.n_atoms) and self.n_atoms >= 1):
            raise ValueError(f"n_atoms must be >= 1, got {self.n_atoms!r}.")
        if not 0 < self.transmission <= 1:
            raise ValueError(f"transmission must lie in (0, 1], got {self.transmission!r}.")
        if self.scheme not in SETTINGS["schemes"]:
            raise ValueError(f"scheme must be one of {SETTINGS['schemes']}, got {self.scheme!r}.")
        if self.scheme == "Raman":
            if self.delta_raman is None or not math.isfinite(self.delta_raman) or self.delta_raman == 0:
                raise ValueError("Raman scheme needs a finite non-zero delta_raman.")

    @property
    def cooperativity(self) -> float:
        """C = g^2 N / (T gamma)."""
        return self.g ** 2 * self.n_atoms / (self.transmission * self.gamma)

    @property
    def pumping_rate(self) -> float:
        """Gamma_E = Omega^2/gamma (EIT) or Gamma_R = gamma Omega^2/Delta^2 (Raman)."""
        if self.scheme == "Raman":
            return self.gamma * self.omega ** 2 / self.delta_raman ** 2
        return self.omega ** 2 / self.gamma

    @classmethod
    def from_rates(
        cls,
        cooperativity: float,
        pumping_rate: float,
        *,
        gamma: float = 1.0,
        gamma0: float = 1e-3,
        kappa: float = 2.0,
        n_atoms: float = 1e6,
        transmission: float = 0.1,
        scheme: str = "EIT",
        delta_raman: Optional[float] = None,
    ) -> "EnsembleParams":
        """
        Build microscopic parameters from the dimensionless pair (C, pumping rate).

        Args:
            cooperativity: Target C >= 0.
            pumping_rate: Target Gamma_E (EIT) or Gamma_R (Raman), >= 0.
            gamma, gamma0, kappa: Dipole, ground-state and cavity decay rates.
            n_atoms: Atom number.
            transmission: Coupling-mirror transmission.
            scheme: "EIT" or "Raman".
            delta_raman: One-photon detuning, Raman only.

        Returns:
            EnsembleParams whose derived C and pumping rate equal the targets.

        Raises:
            ValueError: If a target is negative or the scheme data is incomplete.
        """
        if cooperativity < 0 or pumping_rate < 0:
            raise ValueError(
                f"Cooperativity and pumping rate must be >= 0, got {cooperativity!r}, {pumping_rate!r}."
            )
        g = math.sqrt(cooperativity * transmission * gamma / n_atoms)
        if scheme == "Raman":
            if delta_raman is None:
                raise ValueError("Raman scheme needs delta_raman.")
            omega = abs(delta_raman) * math.sqrt(pumping_rate / gamma)
        else:
            omega = math.sqrt(pumping_rate * gamma)
        return cls(
            gamma=gamma,
            gamma0=gamma0,
            kappa=kappa,
            g=g,
            n_atoms=n_atoms,
            transmission=transmission,
            omega=omega,
            scheme=scheme,
            delta_raman=delta_raman,
        )

    @classmethod
    def reference(cls) -> "EnsembleParams":
        """Reference operating point: C=100, kappa=2 gamma, gamma=1000 gamma0, Gamma_E=15 gamma."""
        ref = dict(SETTINGS["reference"])
        return cls.from_rates(ref.pop("cooperativity"), ref.pop("pumping_rate"), **ref)

    def with_rates(
        self,
        cooperativity: Optional[float] = None,
        pumping_rate: Optional[float] = None,
    ) -> "EnsembleParams":
        """Copy with a different cooperativity and/or pumping rate."""
        return EnsembleParams.from_rates(
            self.cooperativity if cooperativity is None else cooperativity,
            self.pumping_rate if pumping_rate is None else pumping_rate,
            gamma=self.gamma,
            gamma0=self.gamma0,
            kappa=self.kappa,
            n_atoms=self.n_atoms,
            transmission=self.transmission,
            scheme=self.scheme,
            delta_raman=self.delta_raman,
        )


@dataclass(frozen=True)
class DerivedRates:
    """
    Reduced-model coefficients of one ensemble.

    ``transfer_rate`` is the squared input coupling of the reduced spin
    equation (4 C Gamma_E/(1+2C)^2 in EIT) and ``emission_rate`` the extra
    spontaneous-emission noise (2 Gamma_E/(1+2C)^2); every scheme satisfies
    gamma_tilde0 = gamma0 + (transfer_rate + emission_rate)/2.
    """

    scheme: str
    raman_strategy: Optional[str]
    cooperativity: float
    pumping_rate: float
    gamma: float
    gamma0: float
    kappa: float
    n_atoms: float
    gamma_tilde0: float
    beta_sq: float
    diffusion: float
    transfer_rate: float
    emission_rate: float
    regime_warnings: Tuple[str, ...] = ()

    @property
    def beta(self) -> float:
        return math.sqrt(self.beta_sq)

    @property
    def memory_bandwidth(self) -> float:
        return self.gamma_tilde0

    @property
    def storage_lifetime(self) -> float:
        return 1.0 / self.gamma0

    @property
    def bandwidth_ratio(self) -> float:
        """Memory bandwidth times storage lifetime."""
        return self.gamma_tilde0 / self.gamma0


@dataclass(frozen=True)
class SpinEPRState:
    """Normalized EPR variances of the two-ensemble spin combinations."""

    v_minus: float
    v_plus: float
    mean_jz: float

    def __post_init__(self):
        if not (self.v_minus > 0 and self.v_plus > 0):
            raise ValueError(
                f"Spin EPR variances must be positive, got {self.v_minus!r}, {self.v_plus!r}."
            )

    @property
    def inseparability(self) -> float:
        return self.v_minus + self.v_plus

    @classmethod
    def coherent(cls, n_atoms: float) -> "SpinEPRState":
        return cls(1.0, 1.0, n_atoms / 2.0)


# ──────────────────────────────────────────────────────────────────────
#  Derivation
# ──────────────────────────────────────────────────────────────────────

def _transfer_and_emission(cooperativity: float, pumping_rate: float, scheme: str, strategy: Optional[str]):
    enhancement = 1.0 + 2.0 * cooperativity
    if scheme == "Raman" and strategy == "cavity_enhanced":
        return 4.0 * cooperativity * pumping_rate, 2.0 * pumping_rate
    return (
        4.0 * cooperativity * pumping_rate / enhancement ** 2,
        2.0 * pumping_rate / enhancement ** 2,
    )


def decay_per_pumping(cooperativity: float, scheme: str = "EIT", raman_strategy: Optional[str] = None) -> float:
    """Derivative of gamma_tilde0 with respect to the pumping rate."""
    strategy = _resolve_strategy(scheme, raman_strategy)
    transfer, emission = _transfer_and_emission(cooperativity, 1.0, scheme, strategy)
    return 0.5 * (transfer + emission)


def _resolve_strategy(scheme: str, raman_strategy: Optional[str]) -> Optional[str]:
    if scheme != "Raman":
        return None
    strategy = raman_strategy or SETTINGS["raman"]["default_strategy"]
    if strategy not in SETTINGS["raman"]["strategies"]:
        raise ValueError(
            f"Raman strategy must be one of {SETTINGS['raman']['strategies']}, got {strategy!r}."
        )
    return strategy


def check_regime(rates: DerivedRates, strictness: Optional[float] = None) -> Tuple[str, ...]:
    """
    Report violations of the adiabatic window gamma0 << rate << min(kappa, gamma).

    The bounded rate is gamma_tilde0 for EIT and the pumped part
    gamma_tilde0 - gamma0 for Raman.

    Args:
        rates: Derived rates to check.
        strictness: Required ratio for "<<"; defaults to settings.

    Returns:
        Tuple of human-readable warnings, empty when the regime holds.
    """
    rho = SETTINGS["regime"]["strictness"] if strictness is None else strictness
    rate = rates.gamma_tilde0 if rates.scheme == "EIT" else rates.gamma_tilde0 - rates.gamma0
    ceiling = min(rates.kappa, rates.gamma)

    warnings = []
    if rate < rho * rates.gamma0:
        warnings.append(
            f"pumped decay {rate:.6g} is not >> gamma0 = {rates.gamma0:.6g} (ratio {rate / rates.gamma0:.3g} < {rho:g})"
        )
    if rate * rho > ceiling:
        warnings.append(
            f"pumped decay {rate:.6g} is not << min(kappa, gamma) = {ceiling:.6g} (ratio {ceiling / rate:.3g} < {rho:g})"
        )
    return tuple(warnings)


def derive_rates(
    params: EnsembleParams,
    strictness: Optional[float] = None,
    raman_strategy: Optional[str] = None,
) -> DerivedRates:
    """
    Compute the reduced-model coefficients of one ensemble.

    Args:
        params: Microscopic parameters.
        strictness: Regime ratio used for the warning flags.
        raman_strategy: "cavity_enhanced" or "substitution"; Raman only.

    Returns:
        DerivedRates with regime warnings attached (never raised).
    """
    strategy = _resolve_strategy(params.scheme, raman_strategy)
    cooperativity = params.cooperativity
    pumping = params.pumping_rate
    transfer, emission = _transfer_and_emission(cooperativity, pumping, params.scheme, strategy)

    rates = DerivedRates(
        scheme=params.scheme,
        raman_strategy=strategy,
        cooperativity=cooperativity,
        pumping_rate=pumping,
        gamma=params.gamma,
        gamma0=params.gamma0,
        kappa=params.kappa,
        n_atoms=params.n_atoms,
        gamma_tilde0=params.gamma0 + 0.5 * (transfer + emission),
        beta_sq=params.n_atoms * transfer / 4.0,
        diffusion=0.5 * params.n_atoms * (params.gamma0 + 0.5 * emission),
        transfer_rate=transfer,
        emission_rate=emission,
    )
    warnings = check_regime(rates, strictness)
    if warnings:
        logger.debug("%s Regime check: %s", _LOG_PREFIX, "; ".join(warnings))
    return replace(rates, regime_warnings=warnings)
