"""Sweep commands: each turns a RunConfig into one result table."""

import logging
import math
from typing import List

import numpy as np
import pandas as pd

from ..errors import InfeasibleWindowError
from ..full_model import full_map_inseparability
from ..gaussian_core import eof_symmetric
from ..mapping_model import (
    DerivedRates,
    SpinEPRState,
    derive_rates,
    map_inseparability,
    optimize_pumping,
)
from ..readout import ReadoutConfig, end_to_end, lo_profile, simulate_readout
from .config import RunConfig
from .utils import parallel_map

logger = logging.getLogger(__name__)

_LOG_PREFIX = "[EPR Memory][cli]"


def derive_run_rates(config: RunConfig) -> DerivedRates:
    """Derived rates of the configured ensemble; regime violations are logged once here."""
    rates = derive_rates(
        config.params,
        strictness=config.regime_strictness,
        raman_strategy=config.raman_strategy,
    )
    for warning in rates.regime_warnings:
        logger.warning("%s Outside the adiabatic regime: %s", _LOG_PREFIX, warning)
    return rates


def build_readout_config(config: RunConfig, rates: DerivedRates, t_grid=(0.0,)) -> ReadoutConfig:
    spec = config.readout
    t0 = spec.t0 if spec.t0 is not None else spec.quality / rates.gamma_tilde0
    return ReadoutConfig(
        t0=t0,
        t_grid=tuple(t_grid),
        lo_profile=lo_profile(spec.lo_profile, spec.lo_rate_factor),
        quadrature_samples=spec.quadrature_samples,
    )


class MapCommand:
    """Atomic inseparability and entanglement of formation against the field inseparability."""

    NAME = "map"
    OUTPUT_FILE = "fig2a.csv"
    COLUMNS = [
        "epr_correlation",
        "i_f",
        "i_at_simple",
        "i_at_full",
        "eof_field",
        "eof_atoms_simple",
        "eof_atoms_full",
    ]

    def execute(self, config: RunConfig, *, full: bool = False, threads: int = 1) -> pd.DataFrame:
        rates = derive_run_rates(config)
        sweep = config.sweep
        grid = np.linspace(sweep.i_f_min, sweep.i_f_max, sweep.i_f_count)

        def row(i_f: float) -> List[float]:
            i_at = map_inseparability(rates, i_f).i_at
            i_full = full_map_inseparability(config.params, i_f) if full else math.nan
            return [
                2.0 - i_f,
                i_f,
                i_at,
                i_full,
                eof_symmetric(i_f),
                eof_symmetric(i_at),
                eof_symmetric(i_full) if full else math.nan,
            ]

        rows = parallel_map(row, [float(x) for x in grid], threads)
        return pd.DataFrame(rows, columns=self.COLUMNS)


class FidelityCommand:
    """Mapping fidelity maximized over the pumping rate, per cooperativity."""

    NAME = "fidelity"
    OUTPUT_FILE = "fig2b.csv"
    COLUMNS = ["c", "gamma_e_star", "eta_star", "at_bound"]

    def execute(self, config: RunConfig, *, full: bool = False, threads: int = 1) -> pd.DataFrame:
        derive_run_rates(config)
        sweep = config.sweep
        grid = np.geomspace(sweep.c_min, sweep.c_max, sweep.c_count)
        model = "full" if full else "reduced"

        def row(cooperativity: float) -> list:
            try:
                best = optimize_pumping(
                    cooperativity,
                    sweep.i_f_fixed,
                    config.params,
                    model=model,
                    raman_strategy=config.raman_strategy,
                    strictness=config.regime_strictness,
                )
            except InfeasibleWindowError as exc:
                logger.warning("%s C=%.6g: %s", _LOG_PREFIX, cooperativity, exc)
                return [cooperativity, math.nan, math.nan, False]
            return [cooperativity, best.pumping_rate, best.eta, best.at_bound]

        rows = parallel_map(row, [float(c) for c in grid], threads)
        frame = pd.DataFrame(rows, columns=self.COLUMNS)
        pinned = int(frame["at_bound"].sum())
        if pinned:
            logger.info(
                "%s %d of %d optima sit on the edge of the regime window (strictness %g).",
                _LOG_PREFIX, pinned, len(frame), config.regime_strictness,
            )
        return frame


class ReadoutCommand:
    """Analyzer traces of both homodyne channels for a stored spin state."""

    NAME = "readout"
    OUTPUT_FILE = "readout.csv"
    COLUMNS = ["t", "p1", "p2", "n_cal", "s_sig", "i_measured_at_0"]

    def stored_state(self, config: RunConfig, rates: DerivedRates) -> SpinEPRState:
        i_at = config.readout.stored_inseparability
        if i_at is None:
            i_at = map_inseparability(rates, config.sweep.i_f_fixed).i_at
        return SpinEPRState(0.5 * i_at, 0.5 * i_at, rates.n_atoms / 2.0)

    def execute(self, config: RunConfig, *, full: bool = False, threads: int = 1) -> pd.DataFrame:
        rates = derive_run_rates(config)
        sweep = config.sweep
        times = np.linspace(0.0, sweep.t_max / rates.gamma_tilde0, sweep.t_count)
        result = simulate_readout(
            rates,
            self.stored_state(config, rates),
            build_readout_config(config, rates, times),
        )
        return pd.DataFrame({
            "t": result.times,
            "p1": result.p1,
            "p2": result.p2,
            "n_cal": np.full(result.times.size, result.n_cal),
            "s_sig": np.full(result.times.size, result.s_sig),
            "i_measured_at_0": np.full(result.times.size, result.i_measured),
        }, columns=self.COLUMNS)


class ProtocolCommand:
    """Inseparability after mapping, storage and readout, against the storage time."""

    NAME = "end-to-end"
    OUTPUT_FILE = "protocol.csv"
    COLUMNS = ["t_store", "i_f", "i_at_stored", "i_at_after_storage", "i_measured", "eta_overall"]

    def execute(self, config: RunConfig, *, full: bool = False, threads: int = 1) -> pd.DataFrame:
        rates = derive_run_rates(config)
        sweep = config.sweep
        readout_config = build_readout_config(config, rates)
        grid = np.linspace(0.0, sweep.t_store_max / rates.gamma0, sweep.t_store_count)

        def row(t_store: float) -> List[float]:
            result = end_to_end(
                config.params,
                sweep.i_f_fixed,
                t_store,
                readout_config,
                raman_strategy=config.raman_strategy,
            )
            return [
                t_store,
                result.i_f,
                result.i_at_stored,
                result.i_at_after_storage,
                result.i_measured,
                result.eta_overall,
            ]

        rows = parallel_map(row, [float(t) for t in grid], threads)
        return pd.DataFrame(rows, columns=self.COLUMNS)


COMMAND_CLASS_MAPPINGS = {
    MapCommand.NAME: MapCommand,
    FidelityCommand.NAME: FidelityCommand,
    ReadoutCommand.NAME: ReadoutCommand,
    ProtocolCommand.NAME: ProtocolCommand,
}

COMMAND_DISPLAY_NAME_MAPPINGS = {
    MapCommand.NAME: "Atomic vs field inseparability",
    FidelityCommand.NAME: "Optimized mapping fidelity",
    ReadoutCommand.NAME: "Homodyne readout traces",
    ProtocolCommand.NAME: "Map, store and read out",
}
