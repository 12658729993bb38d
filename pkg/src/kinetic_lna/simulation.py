# Copyright 2026 sudoping01.

# Licensed under the MIT License; you may not use this file except in compliance with the License.
# You may obtain a copy of the License at:

# https://opensource.org/licenses/MIT

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Exact (Gillespie direct method) and Euler-Maruyama simulation of reaction networks.

Random streams: ``make_rng(seed)`` is PCG64 seeded through ``SeedSequence(seed)``;
replicate r of a Monte Carlo run uses ``SeedSequence(seed, spawn_key=(r,))``, so every
replicate is reproducible on its own and independent of the others.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .config import IntegratorConfig, SimulationMethod
from .errors import NumericalError, SimulationError, StateInconsistencyError
from .lna import solve_eta_path
from .network import ReactionNetwork

logger = logging.getLogger(__name__)

Seed = Union[int, np.random.Generator]

_GRID_RTOL = 1e-9


# =======================#
# RANDOM STREAMS         #
# =======================#


def make_rng(seed: int, replicate: int | None = None) -> np.random.Generator:
    """PCG64 generator for a seed, or for replicate ``replicate`` of that seed."""
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed!r}")
    if replicate is None:
        sequence = np.random.SeedSequence(int(seed))
    else:
        sequence = np.random.SeedSequence(int(seed), spawn_key=(int(replicate),))
    return np.random.Generator(np.random.PCG64(sequence))


def _as_rng(seed: Seed) -> np.random.Generator:
    return seed if isinstance(seed, np.random.Generator) else make_rng(seed)


# =======================#
# TRAJECTORIES           #
# =======================#


@dataclass(frozen=True)
class Trajectory:
    """
    A simulated path.

    Exact trajectories hold one row per event plus the initial state and a final row at
    t_end; Euler-Maruyama trajectories hold one row per requested grid time.
    """

    times: np.ndarray
    states: np.ndarray
    kind: SimulationMethod

    def __post_init__(self) -> None:
        times = np.asarray(self.times, dtype=float)
        states = np.atleast_2d(np.asarray(self.states, dtype=float))
        if states.shape[0] != times.size:
            raise ValueError("times and states must have equal length")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "states", states)

    @property
    def t_start(self) -> float:
        return float(self.times[0])

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def __len__(self) -> int:
        return int(self.times.size)


def ssa_trajectory(
    net: ReactionNetwork,
    theta: Sequence[float],
    x0: Sequence[float],
    t_end: float,
    seed: Seed,
) -> Trajectory:
    """
    Gillespie direct-method path from time 0 to t_end.

    Waiting times are exponential with rate sum(h); reaction i fires with probability
    h_i / sum(h). The path stops early when every propensity vanishes, holding the
    absorbing state to t_end.

    Raises:
        StateInconsistencyError: a propensity is negative along the path
        SimulationError: non-finite total propensity
    """
    if not t_end > 0:
        raise ValueError(f"t_end must be positive, got {t_end}")
    x = np.asarray(x0, dtype=float).ravel()
    if x.size != net.n_species or np.any(x < 0) or np.any(x != np.round(x)):
        raise ValueError(f"x0 must be {net.n_species} nonnegative integers, got {list(x0)}")
    rng = _as_rng(seed)
    jumps = net.net_effect_matrix.astype(float)

    t = 0.0
    times = [t]
    states = [x.copy()]
    while True:
        h = net.propensities(x, theta)
        negative = np.flatnonzero(h < 0)
        if negative.size:
            i = int(negative[0])
            raise StateInconsistencyError(i, float(h[i]))
        total = float(h.sum())
        if not math.isfinite(total):
            raise SimulationError("propensity overflow", t)
        if total == 0.0:
            break
        t += rng.exponential(1.0 / total)
        if t >= t_end:
            break
        cumulative = np.cumsum(h)
        i = min(int(np.searchsorted(cumulative, rng.random() * total, side="right")), h.size - 1)
        x = x + jumps[i]
        times.append(t)
        states.append(x.copy())

    times.append(float(t_end))
    states.append(x.copy())
    logger.debug("ssa: %d events to t=%g", len(times) - 2, t_end)
    return Trajectory(np.array(times), np.array(states), SimulationMethod.EXACT)


def _check_grid(grid_times: Sequence[float]) -> np.ndarray:
    grid = np.asarray(grid_times, dtype=float).ravel()
    if grid.size == 0 or grid[0] < 0:
        raise ValueError("grid times must be nonempty and start at a time >= 0")
    if np.any(np.diff(grid) <= 0):
        raise ValueError("grid times must be strictly increasing")
    return grid


def euler_maruyama(
    drift_fn: Callable[[float, np.ndarray], np.ndarray],
    noise_fn: Callable[[float, np.ndarray], np.ndarray],
    x0: Sequence[float],
    grid_times: Sequence[float],
    dt: float,
    seed: Seed,
) -> Trajectory:
    """
    Euler-Maruyama for dX = a(t, X) dt + B(t, X) dW.

    Args:
        drift_fn: a(t, x)
        noise_fn: B(t, x), any matrix with B B' equal to the diffusion, e.g. psd_sqrt(D)
        x0: State at grid_times[0]
        grid_times: Strictly increasing recording times
        dt: Step length; the step before each grid time is shortened to land on it
        seed: Seed or generator

    Raises:
        SimulationError: the state became non-finite
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    grid = _check_grid(grid_times)
    rng = _as_rng(seed)
    x = np.asarray(x0, dtype=float).ravel().copy()
    states = [x.copy()]
    t = float(grid[0])
    for target in grid[1:]:
        n_steps = max(1, math.ceil((target - t) / dt - _GRID_RTOL))
        start = t
        for k in range(1, n_steps + 1):
            t_next = target if k == n_steps else start + k * dt
            h_step = t_next - t
            b = np.atleast_2d(noise_fn(t, x))
            z = rng.standard_normal(b.shape[1])
            x = x + drift_fn(t, x) * h_step + (b @ z) * math.sqrt(h_step)
            t = t_next
            if not np.all(np.isfinite(x)):
                raise SimulationError("state became non-finite", t)
        t = float(target)
        states.append(x.copy())
    return Trajectory(grid, np.array(states), SimulationMethod.EULER_MARUYAMA)


def reaction_noise(net: ReactionNetwork, x: np.ndarray, theta: Sequence[float]) -> np.ndarray:
    """A' diag(sqrt(h)), an n_s x n_r square root of A' diag(h) A; negative h floored at 0."""
    h = net.propensities(x, theta)
    return net.net_effect_matrix.T * np.sqrt(np.clip(h, 0.0, None))


def em_trajectory(
    net: ReactionNetwork,
    theta: Sequence[float],
    x0: Sequence[float],
    grid_times: Sequence[float],
    dt: float,
    seed: Seed,
) -> Trajectory:
    """
    Euler-Maruyama path of the chemical Langevin equation dX = A'h dt + sqrt(A'HA) dW.

    States are neither rounded nor clamped.
    """
    return euler_maruyama(
        lambda t, x: net.drift(x, theta),
        lambda t, x: reaction_noise(net, x, theta),
        x0,
        grid_times,
        dt,
        seed,
    )


def sample_at_times(traj: Trajectory, times: Sequence[float]) -> np.ndarray:
    """
    States at the query times, one row per time.

    Exact paths are read right-continuously (a query at a jump time sees the post-jump
    state); Euler-Maruyama paths only answer at their grid times.
    """
    query = np.asarray(times, dtype=float).ravel()
    tol = _GRID_RTOL * max(1.0, abs(traj.t_end))
    if query.size and (query.min() < traj.t_start - tol or query.max() > traj.t_end + tol):
        raise ValueError(
            f"query times must lie in [{traj.t_start}, {traj.t_end}], "
            f"got [{query.min()}, {query.max()}]"
        )
    if traj.kind is SimulationMethod.EXACT:
        idx = np.searchsorted(traj.times, query, side="right") - 1
        return traj.states[np.clip(idx, 0, len(traj) - 1)].copy()

    idx = np.clip(np.searchsorted(traj.times, query - tol), 0, len(traj) - 1)
    off_grid = np.abs(traj.times[idx] - query) > tol
    if np.any(off_grid):
        raise ValueError(f"time {query[off_grid][0]} is not a grid time of this trajectory")
    return traj.states[idx].copy()


# =======================#
# MONTE CARLO ORACLES    #
# =======================#


@dataclass(frozen=True)
class EmpiricalTransition:
    """Replicate states at one time with their sample mean and unbiased covariance."""

    time: float
    samples: np.ndarray

    @property
    def mean(self) -> np.ndarray:
        return self.samples.mean(axis=0)

    @property
    def cov(self) -> np.ndarray:
        return np.atleast_2d(np.cov(self.samples, rowvar=False, ddof=1))

    @property
    def sd(self) -> np.ndarray:
        return np.sqrt(np.diag(self.cov))

    @property
    def reps(self) -> int:
        return int(self.samples.shape[0])


def empirical_transitions(
    net: ReactionNetwork,
    theta: Sequence[float],
    x0: Sequence[float],
    times: Sequence[float],
    reps: int,
    method: SimulationMethod | str,
    seed: int,
    dt: float = 1e-3,
) -> list[EmpiricalTransition]:
    """
    Independent replicate simulations from x0, each read off at every requested time.

    Raises:
        SimulationError: a replicate failed; the error names the replicate index
    """
    method = method if isinstance(method, SimulationMethod) else SimulationMethod.parse(method)
    if reps < 2:
        raise ValueError(f"reps must be at least 2, got {reps}")
    query = _check_grid(times)
    if query[0] <= 0:
        raise ValueError("transition times must be positive")
    samples = np.empty((query.size, reps, net.n_species))
    for r in range(reps):
        rng = make_rng(seed, r)
        try:
            if method is SimulationMethod.EXACT:
                traj = ssa_trajectory(net, theta, x0, float(query[-1]), rng)
                samples[:, r, :] = sample_at_times(traj, query)
            else:
                traj = em_trajectory(net, theta, x0, np.concatenate([[0.0], query]), dt, rng)
                samples[:, r, :] = traj.states[1:]
        except NumericalError as exc:
            reason = getattr(exc, "reason", str(exc))
            raise SimulationError(reason, getattr(exc, "time", float("nan")), replicate=r) from exc
    logger.debug("%s: %d replicates at %d times", method.value, reps, query.size)
    return [EmpiricalTransition(float(t), samples[i]) for i, t in enumerate(query)]


def empirical_transition(
    net: ReactionNetwork,
    theta: Sequence[float],
    x0: Sequence[float],
    t: float,
    reps: int,
    method: SimulationMethod | str,
    seed: int,
    dt: float = 1e-3,
) -> EmpiricalTransition:
    return empirical_transitions(net, theta, x0, [t], reps, method, seed, dt)[0]


def em_lna_perturbation(
    net: ReactionNetwork,
    theta: Sequence[float],
    eta0: Sequence[float],
    m0: Sequence[float],
    t: float,
    dt: float,
    reps: int,
    seed: int,
    cfg: IntegratorConfig | None = None,
) -> np.ndarray:
    """
    Euler-Maruyama sample of the linear perturbation dM = F M dt + S dW at time t.

    F and S are taken from the deterministic path started at eta0, so the sample
    covariance estimates the LNA covariance Psi(t) when m0 = 0.

    Returns:
        reps x n_s array of M(t)
    """
    if not (t > 0 and dt > 0) or reps < 2:
        raise ValueError("t and dt must be positive and reps >= 2")
    path = solve_eta_path(net, theta, eta0, 0.0, t, cfg or IntegratorConfig())
    rng = make_rng(seed)
    m = np.tile(np.asarray(m0, dtype=float).ravel(), (reps, 1))
    n_steps = max(1, math.ceil(t / dt - _GRID_RTOL))
    s = 0.0
    for k in range(1, n_steps + 1):
        s_next = t if k == n_steps else k * dt
        h_step = s_next - s
        eta = path(s)
        jac = net.drift_jacobian(eta, theta)
        b = reaction_noise(net, eta, theta)
        z = rng.standard_normal((reps, b.shape[1]))
        m = m + (m @ jac.T) * h_step + (z @ b.T) * math.sqrt(h_step)
        s = s_next
    return m
