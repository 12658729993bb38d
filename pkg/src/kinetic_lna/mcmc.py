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
Random-walk Metropolis on log10 parameters, with priors, pilot tuning and diagnostics.

Examples:
    >>> import numpy as np
    >>> chain = rwm_chain(lambda phi: -0.5 * float(phi @ phi), [0.0], [[5.76]], 1000, seed=1)
    >>> chain.draws.shape
    (1000, 1)
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence, Union

import numpy as np
import scipy.fft
import scipy.stats

from .config import PriorFamily, TuningConfig
from .errors import NumericalError, TuningWarning
from .lna import psd_sqrt
from .simulation import Seed, make_rng

logger = logging.getLogger(__name__)

LogPosterior = Callable[[np.ndarray], float]

_LOG_LN10 = math.log(math.log(10.0))


# ==================#
# PRIORS            #
# ==================#


@dataclass(frozen=True)
class PriorEntry:
    """
    Prior on one rate parameter.

    gamma: shape ``a`` and rate ``b`` (mean a / b).
    halfcauchy: ``a`` is c, density proportional to 1 / (1 + (c theta)^2) on theta > 0.
    """

    family: PriorFamily
    a: float
    b: float | None = None

    def __post_init__(self) -> None:
        if not (self.a > 0 and math.isfinite(self.a)):
            raise ValueError(f"prior parameter must be positive, got {self.a}")
        if self.family is PriorFamily.GAMMA and not (
            self.b is not None and self.b > 0 and math.isfinite(self.b)
        ):
            raise ValueError(f"gamma prior needs a positive rate, got {self.b}")

    def logpdf(self, theta: float) -> float:
        if not (theta > 0 and math.isfinite(theta)):
            return -math.inf
        if self.family is PriorFamily.GAMMA:
            return float(scipy.stats.gamma.logpdf(theta, self.a, scale=1.0 / self.b))
        return float(scipy.stats.halfcauchy.logpdf(theta, scale=1.0 / self.a))

    @classmethod
    def gamma(cls, shape: float, rate: float) -> PriorEntry:
        return cls(PriorFamily.GAMMA, shape, rate)

    @classmethod
    def halfcauchy(cls, c: float) -> PriorEntry:
        return cls(PriorFamily.HALFCAUCHY, c)


@dataclass(frozen=True)
class PriorSpec:
    names: tuple[str, ...]
    entries: tuple[PriorEntry, ...]

    def __post_init__(self) -> None:
        if len(self.names) != len(self.entries) or not self.entries:
            raise ValueError("a prior spec needs exactly one entry per parameter")

    def __len__(self) -> int:
        return len(self.entries)

    @classmethod
    def uniform_family(cls, names: Sequence[str], entry: PriorEntry) -> PriorSpec:
        return cls(tuple(names), tuple(entry for _ in names))


def log_prior(prior: PriorSpec, theta: Sequence[float], jacobian: bool = True) -> float:
    """
    Log prior density of theta, optionally of the chain coordinates phi = log10(theta).

    With ``jacobian`` the change-of-variables term sum(log theta) + n_p log(ln 10) is
    added. Out-of-support values give -inf.
    """
    values = np.asarray(theta, dtype=float).ravel()
    if values.size != len(prior):
        raise ValueError(f"expected {len(prior)} parameters, got {values.size}")
    total = 0.0
    for entry, value in zip(prior.entries, values):
        lp = entry.logpdf(float(value))
        if lp == -math.inf:
            return -math.inf
        total += lp
    if jacobian:
        total += float(np.sum(np.log(values))) + values.size * _LOG_LN10
    return total


@dataclass(frozen=True)
class InitialStatePrior:
    """
    Gaussian prior N(mu0, Sigma0) on the initial state, restricted to x0 >= 0.

    Only components with a positive prior variance are free; the others stay at mu0.
    Free components are sampled on the linear scale.
    """

    species: tuple[str, ...]
    mean: np.ndarray
    cov: np.ndarray
    free: tuple[int, ...]

    @classmethod
    def from_moments(
        cls, species: Sequence[str], mu0: Sequence[float], sigma0: np.ndarray
    ) -> InitialStatePrior:
        mean = np.asarray(mu0, dtype=float).ravel()
        cov = np.atleast_2d(np.asarray(sigma0, dtype=float))
        if cov.shape != (mean.size, mean.size) or len(species) != mean.size:
            raise ValueError(f"mu0 and Sigma0 do not match {len(species)} species")
        free = tuple(int(i) for i in np.flatnonzero(np.diag(cov) > 0.0))
        return cls(tuple(species), mean, cov, free)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.species[i] for i in self.free)

    @property
    def scale(self) -> np.ndarray:
        """Prior standard deviation of each free component."""
        return np.sqrt(np.diag(self.cov)[list(self.free)])

    def __len__(self) -> int:
        return len(self.free)

    def complete(self, values: Sequence[float]) -> np.ndarray:
        """Full initial state with the free components replaced by ``values``."""
        x0 = self.mean.copy()
        x0[list(self.free)] = np.asarray(values, dtype=float).ravel()
        return x0

    def logpdf(self, values: Sequence[float]) -> float:
        x = np.asarray(values, dtype=float).ravel()
        if x.size != len(self.free):
            raise ValueError(f"expected {len(self.free)} initial-state values, got {x.size}")
        if not np.all(np.isfinite(x)) or np.any(x < 0.0):
            return -math.inf
        idx = np.ix_(self.free, self.free)
        return float(
            scipy.stats.multivariate_normal.logpdf(x, self.mean[list(self.free)], self.cov[idx])
        )


class PosteriorTarget:
    """
    log pi(theta) + log L(theta) as a function of phi = log10(theta).

    With an ``initial`` prior, phi is followed by the free initial-state components and
    the likelihood is called as ``loglik(theta, x0)``. The likelihood is skipped when
    the prior is already -inf.
    """

    def __init__(
        self,
        loglik: Callable[..., float],
        prior: PriorSpec,
        jacobian: bool = True,
        initial: InitialStatePrior | None = None,
    ):
        self.loglik = loglik
        self.prior = prior
        self.jacobian = jacobian
        self.initial = initial

    @property
    def dim(self) -> int:
        return len(self.prior) + (len(self.initial) if self.initial is not None else 0)

    def __call__(self, phi: np.ndarray) -> float:
        phi = np.asarray(phi, dtype=float).ravel()
        if phi.size != self.dim:
            raise ValueError(f"expected {self.dim} chain coordinates, got {phi.size}")
        n_p = len(self.prior)
        theta = np.power(10.0, phi[:n_p])
        lp = log_prior(self.prior, theta, self.jacobian)
        if self.initial is not None and lp != -math.inf:
            lp += self.initial.logpdf(phi[n_p:])
        if lp == -math.inf:
            return lp
        if self.initial is None:
            return lp + float(self.loglik(theta))
        return lp + float(self.loglik(theta, self.initial.complete(phi[n_p:])))


# ==================#
# SAMPLER           #
# ==================#


@dataclass
class SampleChain:
    """
    Stored Metropolis states on the log10 scale.

    Attributes:
        draws: iters x n_p chain states (log10 theta)
        logpost: Log posterior of each stored state
        accepted: Per-iteration acceptance flags
        proposal_cov: Proposal covariance used
        failures: Proposals whose evaluation raised a numerical error (rejected)
    """

    draws: np.ndarray
    logpost: np.ndarray
    accepted: np.ndarray
    proposal_cov: np.ndarray
    failures: int = 0
    names: tuple[str, ...] = field(default_factory=tuple)

    @property
    def iters(self) -> int:
        return int(self.draws.shape[0])

    @property
    def accept_count(self) -> int:
        return int(self.accepted.sum())

    def acceptance_rate(self, burnin: int = 0) -> float:
        tail = self.accepted[burnin:]
        return float(tail.mean()) if tail.size else float("nan")

    @property
    def failure_rate(self) -> float:
        return self.failures / self.iters


def log_accept_ratio(lp_current: float, lp_proposal: float) -> float:
    """log of pi(proposal) / pi(current) for a symmetric proposal."""
    if lp_proposal == -math.inf:
        return -math.inf
    return lp_proposal - lp_current


def _rng(seed: Union[Seed, None]) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return make_rng(0 if seed is None else seed)


def rwm_chain(
    logpost: LogPosterior,
    theta0_log: Sequence[float],
    proposal_cov: np.ndarray,
    iters: int,
    seed: Seed,
    names: Sequence[str] = (),
) -> SampleChain:
    """
    Block random-walk Metropolis with Gaussian proposals phi' = phi + R z, R R' = cov.

    Every state is stored. A proposal whose log posterior raises a numerical error or
    is NaN counts as a failure and is rejected.

    Raises:
        NumericalError: log posterior at the starting point is not finite
    """
    if iters < 1:
        raise ValueError(f"iters must be positive, got {iters}")
    rng = _rng(seed)
    phi = np.asarray(theta0_log, dtype=float).ravel().copy()
    cov = np.atleast_2d(np.asarray(proposal_cov, dtype=float))
    root = psd_sqrt(cov)
    lp = float(logpost(phi))
    if not math.isfinite(lp):
        raise NumericalError(f"log posterior at the starting point is {lp}")

    d = phi.size
    draws = np.empty((iters, d))
    lps = np.empty(iters)
    accepted = np.zeros(iters, dtype=bool)
    failures = 0
    for k in range(iters):
        proposal = phi + root @ rng.standard_normal(d)
        u = rng.random()
        try:
            lp_prop = float(logpost(proposal))
        except NumericalError as exc:
            logger.debug("proposal %d failed: %s", k, exc)
            lp_prop, failures = -math.inf, failures + 1
        if math.isnan(lp_prop):
            lp_prop, failures = -math.inf, failures + 1
        delta = log_accept_ratio(lp, lp_prop)
        if delta >= 0.0 or (u > 0.0 and math.log(u) < delta):
            phi, lp = proposal, lp_prop
            accepted[k] = True
        draws[k] = phi
        lps[k] = lp
    return SampleChain(draws, lps, accepted, cov, failures, tuple(names))


def tune_proposal(
    logpost: LogPosterior,
    theta0_log: Sequence[float],
    seed: int,
    config: TuningConfig | None = None,
    coordinate_scale: Sequence[float] | None = None,
) -> np.ndarray:
    """
    Pilot-tune the proposal covariance to an acceptance rate inside the target bracket.

    Pilot runs start with sd ``initial_sd`` times ``coordinate_scale`` (isotropic when it is
    None); the global scale is bracketed by
    factors of 4 and then bisected geometrically. Once a pilot run lands in the bracket the
    base switches to its empirical covariance times 2.38^2 / d and tuning
    continues on that base.

    Returns:
        The proposal covariance; after ``max_rounds`` without success, the best one
        seen, with a TuningWarning
    """
    config = config or TuningConfig()
    start = np.asarray(theta0_log, dtype=float).ravel()
    d = start.size
    spread = np.ones(d)
    if coordinate_scale is not None:
        spread = np.asarray(coordinate_scale, dtype=float).ravel()
    if spread.size != d or not np.all(spread > 0.0):
        raise ValueError(f"coordinate_scale needs {d} positive entries")
    base = np.diag((config.initial_sd * spread) ** 2)
    empirical = False
    scale = 1.0
    lo: float | None = None
    hi: float | None = None
    best_cov, best_gap = base, math.inf

    for round_ in range(config.max_rounds):
        cov = scale * base
        pilot = rwm_chain(logpost, start, cov, config.pilot_iters, make_rng(seed, round_))
        rate = pilot.acceptance_rate()
        logger.debug("tuning round %d: scale %.4g, acceptance %.3f", round_, scale, rate)
        gap = abs(rate - config.target)
        if gap < best_gap:
            best_cov, best_gap = cov, gap
        start = pilot.draws[-1]

        if config.target_low <= rate <= config.target_high:
            if empirical:
                return cov
            sample_cov = np.atleast_2d(np.cov(pilot.draws, rowvar=False))
            if np.linalg.eigvalsh(sample_cov)[0] <= 0.0:
                return cov
            base = sample_cov * 2.38**2 / d
            empirical, scale, lo, hi = True, 1.0, None, None
            continue

        if rate > config.target_high:
            lo = scale
        else:
            hi = scale
        if hi is None:
            scale *= 4.0
        elif lo is None:
            scale /= 4.0
        else:
            scale = math.sqrt(lo * hi)

    warnings.warn(
        f"proposal tuning did not reach [{config.target_low}, {config.target_high}] in "
        f"{config.max_rounds} rounds; using the closest scale",
        TuningWarning,
        stacklevel=2,
    )
    return best_cov


# ==================#
# DIAGNOSTICS       #
# ==================#


@dataclass(frozen=True)
class ESSResult:
    value: float
    degenerate: bool = False

    def __float__(self) -> float:
        return self.value


def ess(series: Sequence[float]) -> ESSResult:
    """
    Effective sample size N / (1 + 2 sum rho_k).

    Autocorrelations come from an FFT; the sum is truncated at the first non-positive
    pair rho_{2k} + rho_{2k+1}. The result is clipped to [1, N]; a constant series gives
    1 flagged as degenerate.
    """
    x = np.asarray(series, dtype=float).ravel()
    n = x.size
    if n < 100:
        raise ValueError(f"ESS needs at least 100 draws, got {n}")
    centred = x - x.mean()
    if not np.any(centred):
        return ESSResult(1.0, degenerate=True)

    size = scipy.fft.next_fast_len(2 * n)
    spectrum = scipy.fft.rfft(centred, size)
    acov = scipy.fft.irfft(spectrum * np.conj(spectrum), size)[:n]
    rho = acov / acov[0]

    pairs = rho[: 2 * (n // 2)].reshape(-1, 2).sum(axis=1)
    non_positive = np.flatnonzero(pairs <= 0.0)
    stop = int(non_positive[0]) if non_positive.size else pairs.size
    tau = -1.0 + 2.0 * float(pairs[:stop].sum())
    value = n / tau if tau > 0 else float(n)
    return ESSResult(float(min(max(value, 1.0), n)))


@dataclass(frozen=True)
class ParameterSummary:
    name: str
    median: float
    lower: float
    upper: float
    ess: float
    acceptance_rate: float
    ess_degenerate: bool = False


def summarize(
    chain: SampleChain | Sequence[SampleChain],
    burnin: int,
    names: Sequence[str] | None = None,
) -> list[ParameterSummary]:
    """
    Posterior median and 95% interval (linear-interpolation quantiles) per parameter.

    Several chains are pooled after discarding ``burnin`` from each; their ESS values
    add up.
    """
    chains = [chain] if isinstance(chain, SampleChain) else list(chain)
    if not chains:
        raise ValueError("no chains to summarize")
    if any(not 0 <= burnin < c.iters for c in chains):
        raise ValueError(f"burnin must be in [0, iters), got {burnin}")
    default_names = [f"theta{j + 1}" for j in range(chains[0].draws.shape[1])]
    labels = list(names or chains[0].names or default_names)
    kept = [c.draws[burnin:] for c in chains]
    pooled = np.concatenate(kept)
    accepted = np.concatenate([c.accepted[burnin:] for c in chains])
    rate = float(accepted.mean())

    out = []
    for j, label in enumerate(labels):
        lower, median, upper = np.quantile(pooled[:, j], [0.025, 0.5, 0.975])
        total, degenerate = 0.0, False
        for draws in kept:
            if draws.shape[0] >= 100:
                result = ess(draws[:, j])
                total += result.value
                degenerate = degenerate or result.degenerate
            else:
                total += float(draws.shape[0])
        out.append(
            ParameterSummary(
                label, float(median), float(lower), float(upper), total, rate, degenerate
            )
        )
    return out
