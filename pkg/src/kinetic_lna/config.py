# Copyright 2026 sudoping01.

# Licensed under the MIT License; you may not use this file except in compliance with the License.
# You may obtain a copy of the License at:

# https://opensource.org/licenses/MIT

# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from __future__ import annotations

import os
from dataclasses import dataclass, replace
from enum import Enum

from .errors import ConfigurationError

RTOL_ENV_VAR = "KINETIC_LNA_RTOL"

# Innovation / transition covariances with a smallest eigenvalue below JITTER_FLOOR get
# JITTER_SCALE * max(1, trace) added to the diagonal.
JITTER_FLOOR = 1e-12
JITTER_SCALE = 1e-10

# PSD checks: eigenvalues down to -NEGATIVITY_FLOOR * trace are clipped, below that is an error.
NEGATIVITY_FLOOR = 1e-8
SYMMETRY_RTOL = 1e-8

ODE_SOLVERS = ("RK45", "RK23", "DOP853", "Radau", "BDF", "LSODA")


class SimulationMethod(Enum):
    EXACT = "ssa"
    EULER_MARUYAMA = "em"

    @classmethod
    def parse(cls, name: str) -> SimulationMethod:
        aliases = {
            "ssa": cls.EXACT,
            "exact": cls.EXACT,
            "em": cls.EULER_MARUYAMA,
            "euler-maruyama": cls.EULER_MARUYAMA,
        }
        try:
            return aliases[name.strip().lower()]
        except KeyError:
            raise ConfigurationError(
                f"Unknown simulation method: {name}. Choose from: {sorted(aliases)}"
            ) from None


class LikelihoodEngine(Enum):
    LNA = "lna"
    LNA_GLOBAL = "lna-global"
    ODE = "ode"


class PriorFamily(Enum):
    GAMMA = "gamma"
    HALFCAUCHY = "halfcauchy"


class ObservationRegime(Enum):
    """Which autoregulatory species are observed, and whether with Gaussian error."""

    ALL_EXACT = "4ne"
    ALL_NOISY = "4ge"
    THREE_EXACT = "3ne"
    THREE_NOISY = "3ge"

    @property
    def noisy(self) -> bool:
        return self in (ObservationRegime.ALL_NOISY, ObservationRegime.THREE_NOISY)

    @property
    def observed(self) -> tuple[int, ...]:
        """Observed species indices in (DNA, RNA, P, P2) order; DNA is dropped first."""
        if self in (ObservationRegime.ALL_EXACT, ObservationRegime.ALL_NOISY):
            return (0, 1, 2, 3)
        return (1, 2, 3)


@dataclass(frozen=True)
class IntegratorConfig:
    """
    Settings for the adaptive ODE engine.

    Attributes:
        rtol: Relative tolerance of the embedded error estimate
        atol: Absolute tolerance of the embedded error estimate
        max_steps: Accepted-step limit per call before giving up
        method: Name of the scipy.integrate stepper (explicit pairs or implicit methods)
    """

    rtol: float = 1e-6
    atol: float = 1e-8
    max_steps: int = 10**6
    method: str = "RK45"

    def __post_init__(self) -> None:
        if not (self.rtol > 0 and self.atol > 0):
            raise ConfigurationError(
                f"Tolerances must be positive: rtol={self.rtol}, atol={self.atol}"
            )
        if self.rtol < 1e-12:
            raise ConfigurationError(f"rtol must be at least 1e-12, got {self.rtol}")
        if self.max_steps < 1:
            raise ConfigurationError(f"max_steps must be positive, got {self.max_steps}")
        if self.method not in ODE_SOLVERS:
            raise ConfigurationError(
                f"Unknown ODE method: {self.method}. Choose from: {ODE_SOLVERS}"
            )

    @classmethod
    def reference(cls) -> IntegratorConfig:
        return cls(rtol=1e-10, atol=1e-12)

    @classmethod
    def from_env(cls) -> IntegratorConfig:
        value = os.environ.get(RTOL_ENV_VAR)
        if value is None or not value.strip():
            return cls()
        try:
            rtol = float(value)
        except ValueError:
            raise ConfigurationError(f"{RTOL_ENV_VAR} is not a number: {value!r}") from None
        return cls(rtol=rtol)

    def with_overrides(
        self, rtol: float | None = None, atol: float | None = None, method: str | None = None
    ) -> IntegratorConfig:
        changes: dict[str, object] = {}
        if rtol is not None:
            changes["rtol"] = rtol
        if atol is not None:
            changes["atol"] = atol
        if method is not None:
            changes["method"] = method
        return replace(self, **changes)


@dataclass(frozen=True)
class TuningConfig:
    """
    Pilot-run settings for proposal tuning.

    Attributes:
        pilot_iters: Iterations per pilot run
        max_rounds: Pilot rounds before returning the best scale found
        target_low: Lower end of the accepted acceptance-rate bracket
        target_high: Upper end of the accepted acceptance-rate bracket
        initial_sd: Isotropic proposal standard deviation of the first pilot run (log10 units)
    """

    pilot_iters: int = 5000
    max_rounds: int = 20
    target_low: float = 0.25
    target_high: float = 0.30
    initial_sd: float = 0.1

    def __post_init__(self) -> None:
        if self.pilot_iters < 2 or self.max_rounds < 1:
            raise ConfigurationError("pilot_iters must be >= 2 and max_rounds >= 1")
        if not 0.0 < self.target_low < self.target_high < 1.0:
            raise ConfigurationError(
                f"Invalid acceptance bracket [{self.target_low}, {self.target_high}]"
            )

    @property
    def target(self) -> float:
        return 0.5 * (self.target_low + self.target_high)

    @classmethod
    def quick(cls) -> TuningConfig:
        return cls(pilot_iters=500, max_rounds=12)


@dataclass(frozen=True)
class ChainConfig:
    """
    Length and bookkeeping of one Metropolis run.

    Attributes:
        iters: Number of stored iterations
        burnin: Discarded leading iterations; None means 20% of iters
        jacobian: Include the log10 change-of-variables term in the prior
    """

    iters: int = 100_000
    burnin: int | None = None
    jacobian: bool = True

    def __post_init__(self) -> None:
        if self.iters < 1:
            raise ConfigurationError(f"iters must be positive, got {self.iters}")
        if self.burnin is not None and not 0 <= self.burnin < self.iters:
            raise ConfigurationError(f"burnin must be in [0, iters), got {self.burnin}")

    @property
    def effective_burnin(self) -> int:
        return self.iters // 5 if self.burnin is None else self.burnin
