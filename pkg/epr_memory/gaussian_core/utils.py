"""Entanglement metrics and covariance serialization."""

import os
from typing import Tuple, Union

import numpy as np
from scipy.special import xlogy

from .states import SETTINGS, QuadratureState

_EOF_TOLERANCE = SETTINGS["eof"]["boundary_tolerance"]
_CSV_SETTINGS = SETTINGS["csv"]


def _check_pair(state: QuadratureState, i: int, j: int) -> None:
    if i == j:
        raise ValueError(f"EPR variances need two distinct modes, got i = j = {i}.")
    for mode in (i, j):
        if not 0 <= mode < state.n_modes:
            raise IndexError(f"Mode index {mode} out of range for {state.n_modes} mode(s).")


def epr_variances(state: QuadratureState, i: int = 0, j: int = 1) -> Tuple[float, float]:
    """
    Variances of the EPR-type combinations of two modes.

    Args:
        state: Gaussian state.
        i: First mode index.
        j: Second mode index.

    Returns:
        Tuple (Var(X_i - X_j), Var(Y_i + Y_j)).

    Raises:
        ValueError: If i == j.
        IndexError: If a mode index is out of range.
    """
    _check_pair(state, i, j)
    v = state.cov
    xi, yi, xj, yj = 2 * i, 2 * i + 1, 2 * j, 2 * j + 1
    var_minus = v[xi, xi] + v[xj, xj] - 2.0 * v[xi, xj]
    var_plus = v[yi, yi] + v[yj, yj] + 2.0 * v[yi, yj]
    return float(var_minus), float(var_plus)


def duan_inseparability(state: QuadratureState, i: int = 0, j: int = 1) -> float:
    """Half the sum of the two EPR variances; below 2 witnesses entanglement."""
    var_minus, var_plus = epr_variances(state, i, j)
    return 0.5 * (var_minus + var_plus)


def eof_symmetric(inseparability: float) -> float:
    """
    Entanglement of formation of a symmetric Gaussian state, in ebits.

    With v = I/2 the per-quadrature EPR variance, c+- = (v^-1/2 +- v^1/2)^2 / 4
    and EoF = c+ log2 c+ - c- log2 c-. Zero on [2, inf).

    Args:
        inseparability: Value of the EPR criterion, > 0.

    Returns:
        Entanglement of formation.

    Raises:
        ValueError: If the inseparability is not positive.
    """
    if not inseparability > 0:
        raise ValueError(f"Inseparability must be positive, got {inseparability!r}.")

    v = 0.5 * inseparability
    if v >= 1.0 - _EOF_TOLERANCE:
        return 0.0

    c_plus = (v ** -0.5 + v ** 0.5) ** 2 / 4.0
    c_minus = (v ** -0.5 - v ** 0.5) ** 2 / 4.0
    return float((xlogy(c_plus, c_plus) - xlogy(c_minus, c_minus)) / np.log(2.0))


def save_covariance_csv(state: QuadratureState, path: Union[str, os.PathLike]) -> None:
    """Write the covariance row-major with an ``n_modes=<n>`` header line."""
    np.savetxt(
        path,
        state.cov,
        delimiter=_CSV_SETTINGS["delimiter"],
        fmt=_CSV_SETTINGS["float_format"],
        header=f"{_CSV_SETTINGS['header_key']}={state.n_modes}",
        comments="",
        encoding="utf-8",
    )


def load_covariance_csv(path: Union[str, os.PathLike]) -> QuadratureState:
    """
    Read a covariance written by ``save_covariance_csv``.

    Raises:
        ValueError: If the header is missing or disagrees with the matrix size.
    """
    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().strip()

    key, _, value = header.partition("=")
    if key != _CSV_SETTINGS["header_key"] or not value.isdigit():
        raise ValueError(f"Missing '{_CSV_SETTINGS['header_key']}=<n>' header in {path}.")

    cov = np.loadtxt(path, delimiter=_CSV_SETTINGS["delimiter"], skiprows=1, ndmin=2)
    return QuadratureState(int(value), cov)
