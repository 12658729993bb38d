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
Simulation studies on the predator-prey and autoregulatory networks.

Predator-prey: exact simulation from x0 = (40, 140) with theta = (0.01, 0.6, 0.3),
predators observed exactly every second for 30 seconds, stopping at the first
observation where a species is extinct. The unobserved prey gets a N(140, 100) prior.

Autoregulation: exact simulation from x0 = (5, 8, 8, 8) observed every half second for
25 seconds, either all four species or RNA, P and P2 only, each exactly or with
Gaussian error of variance 1.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .config import (
    ChainConfig,
    IntegratorConfig,
    LikelihoodEngine,
    ObservationRegime,
    TuningConfig,
)
from .inference import (
    ObservationModel,
    ObservationSeries,
    likelihood_function,
    loglik_lna_filter,
    loglik_lna_global,
)
from .mcmc import PosteriorTarget, PriorEntry, PriorSpec, rwm_chain, summarize, tune_proposal
from .models import autoreg, lotka_volterra
from .network import ReactionNetwork
from .simulation import make_rng, sample_at_times, ssa_trajectory

logger = logging.getLogger(__name__)

LV_PRIOR = PriorEntry.gamma(2.0, 10.0)
LV_PREY_PRIOR_VAR = 100.0

AUTOREG_PRIOR = PriorEntry.halfcauchy(4.0)
AUTOREG_NOISE_VAR = 1.0


def lv_observation_model(x0: Sequence[float]) -> ObservationModel:
    return ObservationModel.partially_observed([0], x0, [0.0, LV_PREY_PRIOR_VAR])


def truncate_at_extinction(times: np.ndarray, states: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Keep observations up to and including the first one with an extinct species."""
    extinct = np.flatnonzero(np.any(states <= 0, axis=1))
    if extinct.size:
        stop = int(extinct[0]) + 1
        return times[:stop], states[:stop]
    return times, states


def simulate_lv_dataset(
    seed: int,
    net: ReactionNetwork,
    theta: Sequence[float],
    x0: Sequence[float],
    times: Sequence[float],
    replicate: int | None = None,
) -> tuple[ObservationSeries, np.ndarray]:
    """
    One synthetic predator series.

    Returns:
        (predator observations, full simulated states at the kept times)
    """
    grid = np.asarray(times, dtype=float)
    traj = ssa_trajectory(net, theta, x0, float(grid[-1]), make_rng(seed, replicate))
    kept_times, states = truncate_at_extinction(grid, sample_at_times(traj, grid))
    return ObservationSeries(kept_times, states[:, :1]), states


@dataclass(frozen=True)
class PredictionComparison:
    restart_mse: float
    global_mse: float


def one_step_prediction_errors(
    net: ReactionNetwork,
    theta: Sequence[float],
    x0: Sequence[float],
    obs: ObservationModel,
    series: ObservationSeries,
    cfg: IntegratorConfig | None = None,
) -> PredictionComparison:
    """Mean squared one-step predictive error of the restarted and the global LNA filters."""
    restart = loglik_lna_filter(net, theta, obs, series, cfg)
    global_ = loglik_lna_global(net, theta, x0, obs, series, cfg)
    return PredictionComparison(restart.prediction_mse(series), global_.prediction_mse(series))


@dataclass(frozen=True)
class EngineScore:
    """Mean posterior median, mean |median - truth|, mean CI width and CI coverage."""

    mean_median: float
    mean_abs_error: float
    mean_ci_width: float
    coverage: float


@dataclass
class StudyResult:
    truth: np.ndarray
    names: tuple[str, ...]
    scores: dict[LikelihoodEngine, list[EngineScore]] = field(default_factory=dict)
    medians: dict[LikelihoodEngine, np.ndarray] = field(default_factory=dict)
    n_datasets: int = 0


_Fit = tuple[np.ndarray, np.ndarray, np.ndarray]


def _fit(
    target: PosteriorTarget,
    truth: np.ndarray,
    names: Sequence[str],
    seq: np.random.SeedSequence,
    chain: ChainConfig,
    tuning: TuningConfig,
) -> _Fit:
    """Tune, run one chain from the truth and return (medians, lower, upper)."""
    chain_seed = int(seq.generate_state(1)[0])
    cov = tune_proposal(target, truth, chain_seed, tuning)
    draws = rwm_chain(target, truth, cov, chain.iters, make_rng(chain_seed, 0), names)
    summary = summarize(draws, chain.effective_burnin)
    return (
        np.array([s.median for s in summary]),
        np.array([s.lower for s in summary]),
        np.array([s.upper for s in summary]),
    )


def _score(
    truth: np.ndarray, names: tuple[str, ...], rows: dict[LikelihoodEngine, list[_Fit]], n: int
) -> StudyResult:
    result = StudyResult(truth, names, n_datasets=n)
    for engine, fits in rows.items():
        medians = np.array([f[0] for f in fits])
        lower = np.array([f[1] for f in fits])
        upper = np.array([f[2] for f in fits])
        covered = (lower <= truth) & (truth <= upper)
        result.medians[engine] = medians
        result.scores[engine] = [
            EngineScore(
                float(medians[:, j].mean()),
                float(np.abs(medians[:, j] - truth[j]).mean()),
                float((upper[:, j] - lower[:, j]).mean()),
                float(covered[:, j].mean()),
            )
            for j in range(truth.size)
        ]
    return result


def lotka_volterra_study(
    n_datasets: int,
    chain: ChainConfig,
    seed: int,
    engines: Sequence[LikelihoodEngine] = tuple(LikelihoodEngine),
    tuning: TuningConfig | None = None,
    cfg: IntegratorConfig | None = None,
    t_end: float = 30.0,
) -> StudyResult:
    """
    Fit every engine to the same simulated datasets and score the log10 posteriors.

    Chains start at the true parameters; the global-LNA and ODE engines use the true x0.
    """
    net, theta, x0 = lotka_volterra()
    truth = np.log10(theta)
    obs = lv_observation_model(x0)
    prior = PriorSpec.uniform_family(net.params, LV_PRIOR)
    times = np.arange(0.0, t_end + 0.5, 1.0)
    tuning = tuning or TuningConfig.quick()

    rows: dict[LikelihoodEngine, list[_Fit]] = {e: [] for e in engines}
    for k in range(n_datasets):
        series, _ = simulate_lv_dataset(seed, net, theta, x0, times, replicate=k)
        for e_index, engine in enumerate(engines):
            target = PosteriorTarget(
                likelihood_function(engine, net, obs, series, cfg, x0=x0), prior, chain.jacobian
            )
            seq = np.random.SeedSequence(seed, spawn_key=(k, e_index))
            rows[engine].append(_fit(target, truth, net.params, seq, chain, tuning))
        logger.info(
            "study: dataset %d/%d done (%d observations)", k + 1, n_datasets, series.times.size
        )
    return _score(truth, net.params, rows, n_datasets)


# ==================#
# AUTOREGULATION    #
# ==================#


def autoreg_observation_model(
    x0: Sequence[float], regime: ObservationRegime, noise_var: float = AUTOREG_NOISE_VAR
) -> ObservationModel:
    """Known initial state; observed species and error variance set by the regime."""
    observed = regime.observed
    v_diag = [noise_var if regime.noisy else 0.0] * len(observed)
    return ObservationModel.partially_observed(observed, x0, np.zeros(len(x0)), v_diag)


def simulate_autoreg_dataset(
    seed: int,
    net: ReactionNetwork,
    theta: Sequence[float],
    x0: Sequence[float],
    times: Sequence[float],
    obs: ObservationModel,
    replicate: int | None = None,
) -> tuple[ObservationSeries, np.ndarray]:
    """
    One exact path read off at ``times`` and observed through ``obs``.

    Observation errors come from their own stream, so the path does not depend on V.

    Returns:
        (observations, full simulated states at the observation times)
    """
    grid = np.asarray(times, dtype=float)
    traj = ssa_trajectory(net, theta, x0, float(grid[-1]), make_rng(seed, replicate))
    states = sample_at_times(traj, grid)
    clean = states @ obs.P.T
    if not np.any(obs.V):
        return ObservationSeries(grid, clean), states
    noise_seq = np.random.SeedSequence(seed, spawn_key=(0 if replicate is None else replicate, 1))
    rng = np.random.Generator(np.random.PCG64(noise_seq))
    noise = rng.multivariate_normal(np.zeros(obs.obs_dim), obs.V, size=grid.size)
    return ObservationSeries(grid, clean + noise), states


def autoreg_study(
    n_datasets: int,
    chain: ChainConfig,
    seed: int,
    regime: ObservationRegime = ObservationRegime.ALL_NOISY,
    rate_scale: float = 1.0,
    engines: Sequence[LikelihoodEngine] = (LikelihoodEngine.LNA,),
    tuning: TuningConfig | None = None,
    cfg: IntegratorConfig | None = None,
    t_end: float = 25.0,
    interval: float = 0.5,
) -> StudyResult:
    """
    Autoregulatory network observed every ``interval`` seconds up to ``t_end``.

    All rates are multiplied by ``rate_scale`` (1 and 4 are the usual settings). Every
    rate gets a half-Cauchy prior with c = 4, x0 is known, and chains start at the truth.
    """
    if rate_scale <= 0:
        raise ValueError(f"rate_scale must be positive, got {rate_scale}")
    if not 0 < interval <= t_end:
        raise ValueError(f"need 0 < interval <= t_end, got {interval} and {t_end}")
    net, base, x0 = autoreg()
    theta = base * rate_scale
    truth = np.log10(theta)
    obs = autoreg_observation_model(x0, regime)
    prior = PriorSpec.uniform_family(net.params, AUTOREG_PRIOR)
    times = interval * np.arange(int(round(t_end / interval)) + 1)
    tuning = tuning or TuningConfig.quick()

    rows: dict[LikelihoodEngine, list[_Fit]] = {e: [] for e in engines}
    for k in range(n_datasets):
        series, _ = simulate_autoreg_dataset(seed, net, theta, x0, times, obs, replicate=k)
        for e_index, engine in enumerate(engines):
            target = PosteriorTarget(
                likelihood_function(engine, net, obs, series, cfg, x0=x0), prior, chain.jacobian
            )
            seq = np.random.SeedSequence(seed, spawn_key=(k, e_index))
            rows[engine].append(_fit(target, truth, net.params, seq, chain, tuning))
        logger.info("autoreg study (%s): dataset %d/%d done", regime.value, k + 1, n_datasets)
    return _score(truth, net.params, rows, n_datasets)
