"""Stochastic cross-check of the reduced spin equations.

Each spin combination J is scaled to z = J / sqrt(N/2) and integrated as an
Ornstein-Uhlenbeck process

    dz = -gamma_tilde0 z dt - sqrt(beta^2 S / (N/2)) dW_field + sqrt(2D / (N/2)) dW_atom

with the Euler-Maruyama scheme. Var(z) is the normalized spin variance.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .params import SETTINGS, DerivedRates, SpinEPRState

logger = logging.getLogger(__name__)

_LOG_PREFIX = "[EPR Memory][trajectories]"

_TRAJ_SETTINGS = SETTINGS["trajectories"]


@dataclass(frozen=True, eq=False)
class TrajectoryEstimate:
    """Cross-trajectory variance estimates at the final time plus their time paths."""

    state: SpinEPRState
    se_minus: float
    se_plus: float
    times: np.ndarray
    var_minus: np.ndarray
    var_plus: np.ndarray
    n_traj: int

    @property
    def se_inseparability(self) -> float:
        return math.hypot(self.se_minus, self.se_plus)


def _stream_sizes(n_traj: int, stream_size: int) -> List[int]:
    full, rest = divmod(n_traj, stream_size)
    return [stream_size] * full + ([rest] if rest else [])


def _run_stream(
    seed_seq: np.random.SeedSequence,
    size: int,
    n_steps: int,
    record_idx: np.ndarray,
    decay: float,
    field_scale: np.ndarray,
    atom_scale: float,
    initial_std: float,
) -> Tuple[np.ndarray, np.ndarray]:
    """Integrate one independently seeded block; return per-record sums and sums of squares."""
    rng = np.random.default_rng(seed_seq)
    z = initial_std * rng.standard_normal((2, size))

    sums = np.zeros((2, record_idx.size))
    sumsq = np.zeros((2, record_idx.size))
    k = 0
    for step in range(n_steps + 1):
        if k < record_idx.size and step == record_idx[k]:
            sums[:, k] = z.sum(axis=1)
            sumsq[:, k] = np.einsum("ij,ij->i", z, z)
            k += 1
        if step == n_steps:
            break
        dw_field = rng.standard_normal((2, size))
        dw_atom = rng.standard_normal((2, size))
        z = decay * z - field_scale * dw_field + atom_scale * dw_atom
    return sums, sumsq


def simulate_trajectories(
    rates: DerivedRates,
    s_minus: float,
    s_plus: float,
    duration: float,
    dt: float,
    n_traj: int,
    seed: int,
    *,
    initial_variance: float = 1.0,
    record_points: Optional[int] = None,
    workers: int = 1,
) -> TrajectoryEstimate:
    """
    Monte-Carlo estimate of the spin EPR variances.

    Trajectories start in a coherent spin state (normalized variance
    ``initial_variance``) and are split into blocks of ``stream_size``, each
    seeded from ``SeedSequence(seed).spawn``; the result does not depend on
    ``workers``.

    Args:
        rates: Derived rates.
        s_minus: Flat spectral density of X1 - X2 (vacuum 2).
        s_plus: Flat spectral density of Y1 + Y2.
        duration: Integration time, >= 10/gamma_tilde0.
        dt: Time step, <= 0.1/gamma_tilde0.
        n_traj: Number of trajectories, >= 100.
        seed: Root seed.
        initial_variance: Normalized variance of the initial state.
        record_points: Number of time points kept for the variance paths.
        workers: Threads used to run the blocks.

    Returns:
        TrajectoryEstimate with final-time variances and standard errors.

    Raises:
        ValueError: If a step-size, duration or sample-size precondition fails.
    """
    gt = rates.gamma_tilde0
    max_dt = _TRAJ_SETTINGS["max_dt"] / gt
    min_duration = _TRAJ_SETTINGS["min_duration"] / gt
    if not 0 < dt <= max_dt * (1 + 1e-12):
        raise ValueError(f"dt must lie in (0, {max_dt:.6g}] (0.1/gamma_tilde0), got {dt!r}.")
    if duration < min_duration * (1 - 1e-12):
        raise ValueError(f"duration must be >= {min_duration:.6g} (10/gamma_tilde0), got {duration!r}.")
    if n_traj < _TRAJ_SETTINGS["min_trajectories"]:
        raise ValueError(f"n_traj must be >= {_TRAJ_SETTINGS['min_trajectories']}, got {n_traj!r}.")
    if s_minus < 0 or s_plus < 0:
        raise ValueError(f"Spectral densities must be >= 0, got {s_minus!r}, {s_plus!r}.")
    if initial_variance < 0:
        raise ValueError(f"initial_variance must be >= 0, got {initial_variance!r}.")

    n_steps = int(round(duration / dt))
    n_record = record_points or _TRAJ_SETTINGS["record_points"]
    record_idx = np.unique(np.linspace(0, n_steps, max(n_record, 2)).round().astype(int))

    half_n = rates.n_atoms / 2.0
    field_scale = math.sqrt(rates.beta_sq / half_n * dt) * np.sqrt([[s_minus], [s_plus]])
    atom_scale = math.sqrt(2.0 * rates.diffusion / half_n * dt)

    sizes = _stream_sizes(n_traj, _TRAJ_SETTINGS["stream_size"])
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    logger.debug(
        "%s %d trajectories in %d streams, %d steps of dt=%.4g",
        _LOG_PREFIX, n_traj, len(sizes), n_steps, dt,
    )

    def run(job):
        seq, size = job
        return _run_stream(seq, size, n_steps, record_idx, 1.0 - gt * dt, field_scale, atom_scale,
                           math.sqrt(initial_variance))

    with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
        blocks = list(pool.map(run, zip(seeds, sizes)))

    total = np.sum([b[0] for b in blocks], axis=0)
    total_sq = np.sum([b[1] for b in blocks], axis=0)
    variances = (total_sq - total ** 2 / n_traj) / (n_traj - 1)

    v_minus, v_plus = float(variances[0, -1]), float(variances[1, -1])
    se_factor = math.sqrt(2.0 / (n_traj - 1))
    return TrajectoryEstimate(
        state=SpinEPRState(v_minus, v_plus, half_n),
        se_minus=v_minus * se_factor,
        se_plus=v_plus * se_factor,
        times=record_idx * dt,
        var_minus=variances[0],
        var_plus=variances[1],
        n_traj=n_traj,
    )
