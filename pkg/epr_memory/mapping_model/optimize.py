"""Pumping-rate optimization of the mapping fidelity."""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from ..errors import InfeasibleWindowError
from ..gaussian_core import eof_symmetric
from .params import SETTINGS, EnsembleParams, decay_per_pumping, derive_rates
from .utils import mapping_fidelity

logger = logging.getLogger(__name__)

_LOG_PREFIX = "[EPR Memory][optimize]"

_OPT_SETTINGS = SETTINGS["optimizer"]

INV_PHI = (math.sqrt(5) - 1) / 2  # 1 / phi
INV_PHI_SQUARE = (3 - math.sqrt(5)) / 2  # 1 / phi^2


@dataclass(frozen=True)
class PumpingOptimum:
    """Best pumping rate found; ``at_bound`` is set when it sits on an edge of ``bounds``."""

    pumping_rate: float
    eta: float
    bounds: Tuple[float, float]
    unimodal: bool
    at_bound: bool = False


def golden_section_maximize(f: Callable[[float], float], a: float, b: float, tol: float) -> Tuple[float, float]:
    """
    Golden-section search for the maximum of a unimodal f on [a, b].

    Returns:
        Tuple (x, f(x)) of the best point evaluated.
    """
    a, b = min(a, b), max(a, b)
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)

    # Required steps to achieve tolerance
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))

    c = a + INV_PHI_SQUARE * h
    d = a + INV_PHI * h
    yc = f(c)
    yd = f(d)

    for _ in range(n - 1):
        if yc > yd:
            b = d
            d = c
            yd = yc
            h = INV_PHI * h
            c = a + INV_PHI_SQUARE * h
            yc = f(c)
        else:
            a = c
            c = d
            yc = yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)

    return (c, yc) if yc > yd else (d, yd)


def _is_unimodal(values: np.ndarray) -> bool:
    """True when the sampled values rise to a single peak and then fall."""
    tol = 1e-12 * max(float(np.max(np.abs(values))), 1.0)
    peak = int(np.argmax(values))
    rising = np.all(np.diff(values[: peak + 1]) >= -tol)
    falling = np.all(np.diff(values[peak:]) <= tol)
    return bool(rising and falling)


def pumping_window(
    cooperativity: float,
    template: EnsembleParams,
    raman_strategy: Optional[str] = None,
    strictness: Optional[float] = None,
) -> Tuple[float, float]:
    """
    Pumping-rate interval keeping gamma_tilde0 within the adiabatic window.

    gamma_tilde0 ranges over [w gamma0, min(kappa, gamma)/w] with w the
    regime strictness, so every point of the window passes ``check_regime``
    at the same strictness. The bounds are mapped back to pumping rates
    through d gamma_tilde0 / d Gamma.

    Raises:
        InfeasibleWindowError: If w^2 gamma0 >= min(kappa, gamma).
    """
    w = SETTINGS["regime"]["strictness"] if strictness is None else strictness
    low = w * template.gamma0
    high = min(template.kappa, template.gamma) / w
    if low >= high:
        raise InfeasibleWindowError(
            f"Empty pumping window: {w:g}*gamma0 = {low:.6g} >= min(kappa, gamma)/{w:g} = {high:.6g}."
        )
    slope = decay_per_pumping(cooperativity, template.scheme, raman_strategy)
    return (low - template.gamma0) / slope, (high - template.gamma0) / slope


def _fidelity_objective(
    cooperativity: float,
    i_f: float,
    template: EnsembleParams,
    model: str,
    raman_strategy: Optional[str],
) -> Callable[[float], float]:
    if model == "reduced":
        def objective(pumping_rate: float) -> float:
            params = template.with_rates(cooperativity, pumping_rate)
            return mapping_fidelity(derive_rates(params, raman_strategy=raman_strategy), i_f)
    elif model == "full":
        from ..full_model import full_map_inseparability

        denominator = eof_symmetric(i_f)

        def objective(pumping_rate: float) -> float:
            params = template.with_rates(cooperativity, pumping_rate)
            return eof_symmetric(full_map_inseparability(params, i_f)) / denominator
    else:
        raise ValueError(f"model must be 'reduced' or 'full', got {model!r}.")
    return objective


def optimize_pumping(
    cooperativity: float,
    i_f: float,
    params_template: Optional[EnsembleParams] = None,
    bounds: Optional[Tuple[float, float]] = None,
    *,
    model: str = "reduced",
    raman_strategy: Optional[str] = None,
    strictness: Optional[float] = None,
) -> PumpingOptimum:
    """
    Maximize the mapping fidelity over the pumping rate at fixed cooperativity.

    A log-spaced pre-scan checks unimodality; a golden-section search on
    log(Gamma) then refines the bracket around the best sample. If the scan
    is not unimodal the grid argmax is returned.

    The reduced fidelity grows with gamma_tilde0 at fixed C, so its optimum
    is the upper window edge and ``at_bound`` is set; the full model has an
    interior optimum.

    Args:
        cooperativity: C >= 0.
        i_f: Field inseparability in (0, 2).
        params_template: Supplies gamma, gamma0, kappa, N, T and the scheme.
        bounds: Pumping-rate interval; defaults to ``pumping_window``.
        model: "reduced" (closed form) or "full" (three-level model).
        raman_strategy: Raman effective-decay strategy.
        strictness: Regime ratio of the default window.

    Returns:
        PumpingOptimum.

    Raises:
        InfeasibleWindowError: If the window is empty.
    """
    if cooperativity < 0:
        raise ValueError(f"Cooperativity must be >= 0, got {cooperativity!r}.")
    template = params_template or EnsembleParams.reference()
    if bounds is None:
        bounds = pumping_window(cooperativity, template, raman_strategy, strictness)
    low, high = bounds
    if not (0 < low < high and math.isfinite(high)):
        raise InfeasibleWindowError(f"Invalid pumping bounds ({low!r}, {high!r}).")

    objective = _fidelity_objective(cooperativity, i_f, template, model, raman_strategy)

    def log_objective(x: float) -> float:
        return objective(math.exp(x))

    grid = np.linspace(math.log(low), math.log(high), _OPT_SETTINGS["prescan_points"])
    values = np.array([log_objective(x) for x in grid])
    unimodal = _is_unimodal(values)
    best = int(np.argmax(values))
    best_x, best_eta = float(grid[best]), float(values[best])

    if unimodal:
        lo = grid[max(best - 1, 0)]
        hi = grid[min(best + 1, grid.size - 1)]
        x, eta = golden_section_maximize(log_objective, lo, hi, math.log1p(_OPT_SETTINGS["rtol"]))
        if eta > best_eta:
            best_x, best_eta = x, eta
    else:
        logger.warning(
            "%s Fidelity is not unimodal in the pumping rate at C=%.6g; using the grid maximum.",
            _LOG_PREFIX, cooperativity,
        )

    edge_tol = 2.0 * math.log1p(_OPT_SETTINGS["rtol"])
    at_bound = min(best_x - math.log(low), math.log(high) - best_x) <= edge_tol
    if at_bound:
        logger.debug(
            "%s Optimum at C=%.6g sits on the window edge (Gamma=%.6g, bounds %.6g..%.6g).",
            _LOG_PREFIX, cooperativity, math.exp(best_x), low, high,
        )

    return PumpingOptimum(
        pumping_rate=math.exp(best_x),
        eta=best_eta,
        bounds=(float(low), float(high)),
        unimodal=unimodal,
        at_bound=at_bound,
    )
