"""Run configuration: strict INI-style ``key = value`` files with section headers.

Rates are relative to gamma = 1. Time-like sweep settings are in natural
units of the stage they describe: ``sweep.t_max`` and the ``mc`` step and
duration in 1/gamma_tilde0, ``sweep.t_store_max`` in 1/gamma0.

Example::

    [ensemble]
    cooperativity = 100
    gamma_e = 15

    [sweep]
    i_f_fixed = 1.0
"""

import configparser
import json
import os
import re
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

from ..errors import ConfigError
from ..mapping_model import EnsembleParams
from ..mapping_model.params import SETTINGS as MAPPING_SETTINGS
from ..readout.utils import SETTINGS as READOUT_SETTINGS

# Load settings
_SETTINGS_PATH = os.path.join(os.path.dirname(__file__), "settings.json")
with open(_SETTINGS_PATH, "r", encoding="utf-8") as f:
    SETTINGS = json.load(f)

_RAMAN_STRATEGIES = MAPPING_SETTINGS["raman"]["strategies"]
_LO_PROFILES = READOUT_SETTINGS["ReadoutConfig"]["lo_profiles"]

_SCHEMA: Dict[str, Dict[str, str]] = SETTINGS["config_schema"]
_DEFAULTS: Dict[str, Dict[str, Any]] = SETTINGS["defaults"]

_SECTION_RE = re.compile(r"^\s*\[([^\]]+)\]")
_KEY_RE = re.compile(r"^\s*([^=:#;\s\[][^=:]*?)\s*[=:]")
_MICROSCOPIC_KEYS = ("g", "omega")
_DIMENSIONLESS_KEYS = ("cooperativity", "gamma_e")

# First word of an EnsembleParams error -> config keys that can cause it
_ERROR_KEYS = {
    "Raman": ("delta_raman", "scheme"),
    "Cooperativity": _DIMENSIONLESS_KEYS,
}


@dataclass(frozen=True)
class SweepSpec:
    i_f_min: float
    i_f_max: float
    i_f_count: int
    i_f_fixed: float
    c_min: float
    c_max: float
    c_count: int
    t_max: float
    t_count: int
    t_store_max: float
    t_store_count: int


@dataclass(frozen=True)
class ReadoutSpec:
    quality: float
    quadrature_samples: int
    lo_profile: str
    lo_rate_factor: float
    t0: Optional[float] = None
    stored_inseparability: Optional[float] = None


@dataclass(frozen=True)
class MonteCarloSpec:
    n_traj: int
    dt: float
    duration: float
    seed: int
    cases: int


@dataclass(frozen=True)
class OutputSpec:
    directory: str
    precision: int


@dataclass(frozen=True)
class RunConfig:
    """Fully validated run configuration."""

    params: EnsembleParams
    raman_strategy: Optional[str]
    regime_strictness: float
    sweep: SweepSpec
    readout: ReadoutSpec
    mc: MonteCarloSpec
    output: OutputSpec
    source: str = "<defaults>"


def _line_index(text: str) -> Tuple[Dict[str, int], Dict[Tuple[str, str], int]]:
    """1-based line numbers of section headers and of keys within sections."""
    sections: Dict[str, int] = {}
    keys: Dict[Tuple[str, str], int] = {}
    current = None
    for number, line in enumerate(text.splitlines(), start=1):
        header = _SECTION_RE.match(line)
        if header:
            current = header.group(1).strip()
            sections.setdefault(current, number)
            continue
        key = _KEY_RE.match(line)
        if key and current is not None:
            keys.setdefault((current, key.group(1).strip().lower()), number)
    return sections, keys


def _convert(raw: str, kind: str) -> Any:
    if kind == "float":
        value = float(raw)
        if value != value:
            raise ValueError("NaN is not allowed")
        return value
    if kind == "int":
        return int(raw)
    return raw.strip().strip('"').strip("'")


def _read_values(text: str, source: str) -> Tuple[Dict[str, Dict[str, Any]], Dict[Tuple[str, str], int]]:
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    try:
        parser.read_string(text, source=source)
    except configparser.MissingSectionHeaderError as exc:
        raise ConfigError(f"{source}: entry before any [section] header", exc.lineno) from exc
    except (configparser.DuplicateSectionError, configparser.DuplicateOptionError) as exc:
        raise ConfigError(f"{source}: {exc.message}", exc.lineno) from exc
    except configparser.ParsingError as exc:
        lineno, line = exc.errors[0]
        raise ConfigError(f"{source}: cannot parse {line!r}", lineno) from exc

    section_lines, key_lines = _line_index(text)
    values: Dict[str, Dict[str, Any]] = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(
                f"{source}: unknown section [{section}] (allowed: {', '.join(_SCHEMA)})",
                section_lines.get(section),
            )
        values[section] = {}
        for key, raw in parser.items(section):
            line = key_lines.get((section, key))
            kind = _SCHEMA[section].get(key)
            if kind is None:
                raise ConfigError(f"{source}: unknown key '{key}' in [{section}]", line)
            try:
                values[section][key] = _convert(raw, kind)
            except ValueError as exc:
                raise ConfigError(f"{source}: [{section}] {key} = {raw!r} is not a valid {kind}", line) from exc
    return values, key_lines


def _ensemble_error_line(
    message: str,
    explicit: Dict[str, Any],
    key_lines: Dict[Tuple[str, str], int],
) -> Optional[int]:
    """Line of the [ensemble] key an EnsembleParams error points at, else the first key of the section."""
    word = message.split(" ", 1)[0]
    candidates = _ERROR_KEYS.get(word, (word,))
    if word == "Cooperativity":
        candidates = [k for k in candidates if explicit.get(k, 0.0) < 0] or list(candidates)
    for key in candidates:
        line = key_lines.get(("ensemble", key))
        if line is not None:
            return line
    return min((l for (s, _), l in key_lines.items() if s == "ensemble"), default=None)


def _build_params(
    ensemble: Dict[str, Any],
    explicit: Dict[str, Any],
    key_lines: Dict[Tuple[str, str], int],
) -> EnsembleParams:
    microscopic = [k for k in _MICROSCOPIC_KEYS if k in explicit]
    if microscopic:
        missing = [k for k in _MICROSCOPIC_KEYS if k not in explicit]
        if missing:
            raise ConfigError(
                f"[ensemble] microscopic parameters need {', '.join(missing)} as well",
                key_lines.get(("ensemble", microscopic[0])),
            )
        clash = [k for k in _DIMENSIONLESS_KEYS if k in explicit]
        if clash:
            raise ConfigError(
                f"[ensemble] give either g/omega or cooperativity/gamma_e, not both ({', '.join(clash)})",
                key_lines.get(("ensemble", clash[0])),
            )
        return EnsembleParams(
            gamma=ensemble["gamma"],
            gamma0=ensemble["gamma0"],
            kappa=ensemble["kappa"],
            g=ensemble["g"],
            n_atoms=ensemble["n_atoms"],
            transmission=ensemble["transmission"],
            omega=ensemble["omega"],
            scheme=ensemble["scheme"],
            delta_raman=ensemble.get("delta_raman"),
        )
    return EnsembleParams.from_rates(
        ensemble["cooperativity"],
        ensemble["gamma_e"],
        gamma=ensemble["gamma"],
        gamma0=ensemble["gamma0"],
        kappa=ensemble["kappa"],
        n_atoms=ensemble["n_atoms"],
        transmission=ensemble["transmission"],
        scheme=ensemble["scheme"],
        delta_raman=ensemble.get("delta_raman"),
    )


def _check_sweep(sweep: SweepSpec, key_lines, source: str) -> None:
    def fail(key: str, message: str):
        raise ConfigError(f"{source}: [sweep] {message}", key_lines.get(("sweep", key)))

    if not 0 < sweep.i_f_min <= sweep.i_f_max:
        fail("i_f_min", f"need 0 < i_f_min <= i_f_max, got {sweep.i_f_min!r}, {sweep.i_f_max!r}")
    if not 0 < sweep.i_f_fixed < 2:
        fail("i_f_fixed", f"i_f_fixed must lie in (0, 2), got {sweep.i_f_fixed!r}")
    if not 0 < sweep.c_min <= sweep.c_max:
        fail("c_min", f"need 0 < c_min <= c_max for the log grid, got {sweep.c_min!r}, {sweep.c_max!r}")
    if sweep.t_max < 0 or sweep.t_store_max < 0:
        fail("t_max", "time spans must be >= 0")
    for key in ("i_f_count", "c_count", "t_count", "t_store_count"):
        if getattr(sweep, key) < 1:
            fail(key, f"{key} must be >= 1")


def parse_config(text: str, source: str = "<string>") -> RunConfig:
    """
    Parse and validate a run configuration.

    Args:
        text: Configuration text.
        source: Name used in error messages.

    Returns:
        RunConfig with defaults filled in.

    Raises:
        ConfigError: On syntax errors, unknown sections or keys, bad types and
            physically invalid parameters; carries the line number when known.
    """
    values, key_lines = _read_values(text, source)
    merged = {section: {**defaults, **values.get(section, {})} for section, defaults in _DEFAULTS.items()}
    explicit = values.get("ensemble", {})
    ensemble = merged["ensemble"]

    try:
        params = _build_params(ensemble, explicit, key_lines)
    except ConfigError:
        raise
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(
            f"{source}: invalid [ensemble] parameters: {exc}",
            _ensemble_error_line(str(exc), explicit, key_lines),
        ) from exc

    strategy = ensemble["raman_strategy"] if params.scheme == "Raman" else None
    if strategy is not None and strategy not in _RAMAN_STRATEGIES:
        raise ConfigError(
            f"{source}: [ensemble] raman_strategy must be one of {_RAMAN_STRATEGIES}, got {strategy!r}",
            key_lines.get(("ensemble", "raman_strategy")),
        )
    sweep = SweepSpec(**merged["sweep"])
    _check_sweep(sweep, key_lines, source)

    readout = ReadoutSpec(**merged["readout"])
    if readout.quality <= 0 or (readout.t0 is not None and readout.t0 <= 0):
        raise ConfigError(f"{source}: [readout] quality and t0 must be positive",
                          key_lines.get(("readout", "t0"), key_lines.get(("readout", "quality"))))
    if readout.quadrature_samples < READOUT_SETTINGS["ReadoutConfig"]["min_samples"]:
        raise ConfigError(f"{source}: [readout] quadrature_samples must be >= "
                          f"{READOUT_SETTINGS['ReadoutConfig']['min_samples']}",
                          key_lines.get(("readout", "quadrature_samples")))
    if readout.lo_profile not in _LO_PROFILES:
        raise ConfigError(f"{source}: [readout] lo_profile must be one of {_LO_PROFILES}, got {readout.lo_profile!r}",
                          key_lines.get(("readout", "lo_profile")))
    if readout.lo_rate_factor < 0:
        raise ConfigError(f"{source}: [readout] lo_rate_factor must be >= 0",
                          key_lines.get(("readout", "lo_rate_factor")))
    if readout.stored_inseparability is not None and readout.stored_inseparability <= 0:
        raise ConfigError(f"{source}: [readout] stored_inseparability must be positive",
                          key_lines.get(("readout", "stored_inseparability")))

    mc = MonteCarloSpec(**merged["mc"])
    if mc.n_traj < 100 or not 0 < mc.dt <= 0.1 or mc.duration < 10 or mc.cases < 1:
        raise ConfigError(f"{source}: [mc] needs n_traj >= 100, 0 < dt <= 0.1, duration >= 10, cases >= 1",
                          key_lines.get(("mc", "n_traj")))

    output = OutputSpec(**merged["output"])
    if not 1 <= output.precision <= 17:
        raise ConfigError(f"{source}: [output] precision must lie in 1..17",
                          key_lines.get(("output", "precision")))

    return RunConfig(
        params=params,
        raman_strategy=strategy,
        regime_strictness=ensemble["regime_strictness"],
        sweep=sweep,
        readout=readout,
        mc=mc,
        output=output,
        source=source,
    )


def load_config(path: Optional[str] = None) -> RunConfig:
    """Read a configuration file, or return the defaults when path is None."""
    if path is None:
        return parse_config("", "<defaults>")
    try:
        with open(path, "r", encoding="utf-8") as f:
            text = f.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc.strerror}") from exc
    return parse_config(text, source=str(path))
