"""Storage, retrieval and homodyne readout of the stored spin correlations."""

import json
import logging
import math
import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, NamedTuple, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.integrate import quad

from ..errors import CalibrationError, ReadoutIntegrationError
from ..mapping_model import DerivedRates, SpinEPRState

# Load settings
_SETTINGS_PATH = os.path.join(os.path.dirname(__file__), "settings.json")
with open(_SETTINGS_PATH, "r", encoding="utf-8") as f:
    SETTINGS = json.load(f)

logger = logging.getLogger(__name__)

_LOG_PREFIX = "[EPR Memory][readout]"

_CONFIG_SETTINGS = SETTINGS["ReadoutConfig"]
_INTEGRATION = SETTINGS["integration"]

LOProfile = Callable[[np.ndarray, float], np.ndarray]


# ──────────────────────────────────────────────────────────────────────
#  Local-oscillator profiles (time s measured from the window start)
# ──────────────────────────────────────────────────────────────────────

def matched_lo(s: np.ndarray, gamma_tilde0: float) -> np.ndarray:
    """exp(-gamma_tilde0 s), the temporal shape of the retrieved mode."""
    return np.exp(-gamma_tilde0 * np.asarray(s, dtype=float))


def flat_lo(s: np.ndarray, gamma_tilde0: float) -> np.ndarray:
    return np.ones_like(np.asarray(s, dtype=float))


def exponential_lo(rate_factor: float) -> LOProfile:
    """Exponential LO decaying at rate_factor * gamma_tilde0."""
    if rate_factor < 0:
        raise ValueError(f"LO rate factor must be >= 0, got {rate_factor!r}.")

    def profile(s: np.ndarray, gamma_tilde0: float) -> np.ndarray:
        return np.exp(-rate_factor * gamma_tilde0 * np.asarray(s, dtype=float))

    return profile


def lo_profile(name: str, rate_factor: float = 1.0) -> LOProfile:
    """LO profile by name: "matched", "flat" or "exponential"."""
    if name == "matched":
        return matched_lo
    if name == "flat":
        return flat_lo
    if name == "exponential":
        return exponential_lo(rate_factor)
    raise ValueError(f"LO profile must be one of {_CONFIG_SETTINGS['lo_profiles']}, got {name!r}.")


# ──────────────────────────────────────────────────────────────────────
#  Types
# ──────────────────────────────────────────────────────────────────────

@dataclass(frozen=True)
class ReadoutConfig:
    """Analyzer window, measurement start times and LO settings."""

    t0: float
    t_grid: Tuple[float, ...] = (0.0,)
    lo_profile: LOProfile = field(default=matched_lo, compare=False)
    quadrature_samples: int = _CONFIG_SETTINGS["quadrature_samples"]

    def __post_init__(self):
        if not (math.isfinite(self.t0) and self.t0 > 0):
            raise ValueError(f"Analyzer window T0 must be positive, got {self.t0!r}.")
        if self.quadrature_samples < _CONFIG_SETTINGS["min_samples"]:
            raise ValueError(
                f"quadrature_samples must be >= {_CONFIG_SETTINGS['min_samples']}, "
                f"got {self.quadrature_samples!r}."
            )
        grid = tuple(float(t) for t in self.t_grid)
        if not grid or any(t < 0 or not math.isfinite(t) for t in grid):
            raise ValueError(f"t_grid must be a non-empty list of times >= 0, got {self.t_grid!r}.")
        object.__setattr__(self, "t_grid", grid)

    @classmethod
    def from_quality(cls, rates: DerivedRates, quality: float, **kwargs) -> "ReadoutConfig":
        """Window with gamma_tilde0 * T0 = quality."""
        return cls(t0=quality / rates.gamma_tilde0, **kwargs)

    def quality(self, rates: DerivedRates) -> float:
        """gamma_tilde0 T0; the SNR approaches its limit when this is >> 1."""
        return rates.gamma_tilde0 * self.t0


class AnalyzerPower(NamedTuple):
    power: float
    n_cal: float
    s_sig: float


@dataclass(frozen=True, eq=False)
class ReadoutResult:
    """Analyzer traces of both homodyne detections with their shared calibration."""

    times: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    n_cal: float
    s_sig: float
    quality: float
    i_measured: float

    @property
    def snr(self) -> float:
        return self.s_sig / self.n_cal


# ──────────────────────────────────────────────────────────────────────
#  Storage and correlation function
# ──────────────────────────────────────────────────────────────────────

def storage_decay(state: SpinEPRState, t_store: float, gamma0: float) -> SpinEPRState:
    """
    Relax both normalized variances toward the coherent value 1.

    v(t) = 1 + (v(0) - 1) exp(-2 gamma0 t_store).

    Raises:
        ValueError: If t_store is negative.
    """
    if t_store < 0:
        raise ValueError(f"Storage time must be >= 0, got {t_store!r}.")
    factor = math.exp(-2.0 * gamma0 * t_store)
    return SpinEPRState(
        v_minus=1.0 + (state.v_minus - 1.0) * factor,
        v_plus=1.0 + (state.v_plus - 1.0) * factor,
        mean_jz=state.mean_jz,
    )


def readout_correlation(rates: DerivedRates, v: float, t: float, t_prime: float) -> Tuple[float, float]:
    """
    Correlation function of a retrieved output quadrature.

    Returns:
        Tuple (coefficient of delta(t - t'), smooth part
        -transfer_rate (1 - v) exp(-gamma_tilde0 (t + t'))).
    """
    if t < 0 or t_prime < 0:
        raise ValueError(f"Readout times must be >= 0, got {t!r}, {t_prime!r}.")
    smooth = -rates.transfer_rate * (1.0 - v) * math.exp(-rates.gamma_tilde0 * (t + t_prime))
    return 1.0, smooth


# ──────────────────────────────────────────────────────────────────────
#  Analyzer integrals
# ──────────────────────────────────────────────────────────────────────

def _panel_edges(t0: float, gamma_tilde0: float) -> np.ndarray:
    """Geometric panels 0, b/g, 2b/g, 4b/g, ... up to T0."""
    edges = [0.0]
    edge = _INTEGRATION["panel_base"] / gamma_tilde0
    while edge < t0:
        edges.append(edge)
        edge *= 2.0
    edges.append(t0)
    return np.array(edges)


@lru_cache(maxsize=64)
def _panel_rule(t0: float, gamma_tilde0: float, samples: int) -> Tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes and weights on [0, T0]."""
    edges = _panel_edges(t0, gamma_tilde0)
    per_panel = max(_INTEGRATION["min_nodes_per_panel"], samples // (edges.size - 1))
    x, w = leggauss(per_panel)
    nodes, weights = [], []
    for lo, hi in zip(edges[:-1], edges[1:]):
        half = 0.5 * (hi - lo)
        nodes.append(lo + half * (x + 1.0))
        weights.append(half * w)
    nodes, weights = np.concatenate(nodes), np.concatenate(weights)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _lo_values(config: ReadoutConfig, s: np.ndarray, gamma_tilde0: float) -> np.ndarray:
    values = np.asarray(config.lo_profile(s, gamma_tilde0), dtype=float)
    if values.shape != s.shape or not np.all(np.isfinite(values)) or np.any(values < 0):
        raise ValueError("LO profile must return finite non-negative values for every node.")
    return values


def _window_integral(s: np.ndarray, weights: np.ndarray, f: np.ndarray, t0: float) -> float:
    """
    Double time integral of f(s) f(s') over the analyzer window.

    The frequency integral over [-pi/T0, pi/T0] has been done analytically:
    it leaves the kernel sin(pi (s - s')/T0) / (pi (s - s')).
    """
    kernel = np.sinc((s[:, None] - s[None, :]) / t0) / t0
    wf = weights * f
    return float(wf @ kernel @ wf)


def _shot_noise(rates: DerivedRates, config: ReadoutConfig) -> float:
    gt = rates.gamma_tilde0
    s, w = _panel_rule(config.t0, gt, config.quadrature_samples)
    n_cal = float(w @ _lo_values(config, s, gt) ** 2) / config.t0

    edges = _panel_edges(config.t0, gt)
    reference, _ = quad(
        lambda x: float(config.lo_profile(np.array([x]), gt)[0]) ** 2,
        0.0,
        config.t0,
        points=edges[1:-1] if edges.size > 2 else None,
        limit=_INTEGRATION["quad_limit"],
    )
    reference /= config.t0
    if not (n_cal > 0 and abs(n_cal - reference) <= _INTEGRATION["crosscheck_rtol"] * reference):
        raise ReadoutIntegrationError(
            f"Shot-noise integral mismatch: Gauss-Legendre {n_cal!r} vs adaptive {reference!r} "
            f"(T0={config.t0:.6g}, gamma_tilde0={gt:.6g}, nodes={s.size})."
        )
    return n_cal


def _signal_integral(rates: DerivedRates, config: ReadoutConfig, t: float) -> float:
    """Double-time integral of the smooth correlation shape for a window starting at t."""
    gt = rates.gamma_tilde0
    s, w = _panel_rule(config.t0, gt, config.quadrature_samples)
    f = _lo_values(config, s, gt) * np.exp(-gt * (t + s))
    return _window_integral(s, w, f, config.t0)


def _checked_signal(rates: DerivedRates, config: ReadoutConfig) -> float:
    """Signal integral at t = 0, cross-checked against a rule with twice the nodes."""
    value = _signal_integral(rates, config, 0.0)
    refined_config = ReadoutConfig(
        t0=config.t0,
        lo_profile=config.lo_profile,
        quadrature_samples=2 * config.quadrature_samples,
    )
    refined = _signal_integral(rates, refined_config, 0.0)
    if abs(value - refined) > _INTEGRATION["crosscheck_rtol"] * abs(refined):
        raise ReadoutIntegrationError(
            f"Signal integral not converged: {value!r} vs {refined!r} with doubled nodes "
            f"(T0={config.t0:.6g}, gamma_tilde0={rates.gamma_tilde0:.6g}, "
            f"nodes={config.quadrature_samples})."
        )
    return value


def _calibration(rates: DerivedRates, config: ReadoutConfig) -> Tuple[float, float]:
    """Shot noise N and signal S of the analyzer, independent of the stored state and of t."""
    return _shot_noise(rates, config), rates.transfer_rate * _checked_signal(rates, config)


def analyzer_power(rates: DerivedRates, v: float, t: float, config: ReadoutConfig) -> AnalyzerPower:
    """
    Power of one spectrum-analyzer channel for a window starting at t.

    P(t) = N - S (1 - v) exp(-2 gamma_tilde0 t). The delta part of the
    correlation only contributes the shot noise N = (1/T0) integral E_LO^2;
    S = transfer_rate times the windowed double integral of the LO-weighted
    retrieved mode.

    Args:
        rates: Derived rates during retrieval.
        v: Normalized variance of the stored spin combination.
        t: Start time of the analyzer window, >= 0.
        config: Analyzer configuration.

    Returns:
        AnalyzerPower(power, n_cal, s_sig).

    Raises:
        ReadoutIntegrationError: If the quadrature cross-checks fail.
    """
    if t < 0:
        raise ValueError(f"Measurement time must be >= 0, got {t!r}.")
    n_cal, s_sig = _calibration(rates, config)
    power = n_cal - rates.transfer_rate * (1.0 - v) * _signal_integral(rates, config, t)
    return AnalyzerPower(power, n_cal, s_sig)


def measured_inseparability(result_x: AnalyzerPower, result_y: AnalyzerPower) -> float:
    """
    Single-shot estimate (P1(0) + P2(0)) / N.

    Raises:
        CalibrationError: If the two channels lack a common positive shot-noise level.
    """
    for result in (result_x, result_y):
        if result.n_cal is None or not result.n_cal > 0:
            raise CalibrationError("Analyzer result has no positive shot-noise calibration.")
    if not math.isclose(result_x.n_cal, result_y.n_cal, rel_tol=1e-12):
        raise CalibrationError(
            f"Channels use different calibrations: {result_x.n_cal!r} vs {result_y.n_cal!r}."
        )
    return (result_x.power + result_y.power) / result_x.n_cal


def simulate_readout(rates: DerivedRates, state: SpinEPRState, config: ReadoutConfig) -> ReadoutResult:
    """Both analyzer traces over ``config.t_grid`` for a stored spin state."""
    times = np.array(config.t_grid)
    n_cal, s_sig = _calibration(rates, config)

    # both channels share the window integral; only the stored variance differs
    window = np.array([_signal_integral(rates, config, float(t)) for t in times])
    p1 = n_cal - rates.transfer_rate * (1.0 - state.v_minus) * window
    p2 = n_cal - rates.transfer_rate * (1.0 - state.v_plus) * window

    at_zero = _signal_integral(rates, config, 0.0)
    first_x = AnalyzerPower(n_cal - rates.transfer_rate * (1.0 - state.v_minus) * at_zero, n_cal, s_sig)
    first_y = AnalyzerPower(n_cal - rates.transfer_rate * (1.0 - state.v_plus) * at_zero, n_cal, s_sig)
    logger.debug(
        "%s gamma_tilde0*T0=%.4g, N=%.9g, S/N=%.9g",
        _LOG_PREFIX, config.quality(rates), first_x.n_cal, first_x.s_sig / first_x.n_cal,
    )
    return ReadoutResult(
        times=times,
        p1=p1,
        p2=p2,
        n_cal=first_x.n_cal,
        s_sig=first_x.s_sig,
        quality=config.quality(rates),
        i_measured=measured_inseparability(first_x, first_y),
    )
