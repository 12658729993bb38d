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
Linear Noise Approximation engine.

The state is split as X = eta + M where eta solves d(eta)/dt = A'h(eta) and the perturbation
M is Gaussian with mean and covariance following

    dm/dt   = F m
    dPsi/dt = Psi F' + F Psi + S S'

with F the drift Jacobian and S S' = A' diag(h) A, both evaluated on eta(t).

The ODEs are integrated by scipy's adaptive steppers (embedded Runge-Kutta pairs by
default); the step loop here adds a step limit and exact landing on the end time.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
import scipy.integrate
import scipy.linalg

from .config import NEGATIVITY_FLOOR, SYMMETRY_RTOL, IntegratorConfig
from .errors import IntegrationError, MatrixError, NegativeEtaWarning
from .network import ReactionNetwork

logger = logging.getLogger(__name__)

Field = Callable[[float, np.ndarray], np.ndarray]


# =======================#
# GAUSSIAN CURRENCY      #
# =======================#


@dataclass(frozen=True)
class GaussianDist:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self) -> None:
        mean = np.atleast_1d(np.asarray(self.mean, dtype=float))
        cov = np.atleast_2d(np.asarray(self.cov, dtype=float))
        if cov.shape != (mean.size, mean.size):
            raise ValueError(
                f"Covariance shape {cov.shape} does not match mean of size {mean.size}"
            )
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    @property
    def dim(self) -> int:
        return int(self.mean.size)

    @property
    def sd(self) -> np.ndarray:
        return np.sqrt(np.clip(np.diag(self.cov), 0.0, None))


@dataclass(frozen=True)
class LNAState:
    """Deterministic path value, perturbation mean and covariance at one time."""

    time: float
    eta: np.ndarray
    m: np.ndarray
    psi: np.ndarray

    @property
    def mean(self) -> np.ndarray:
        return self.eta + self.m

    def as_gaussian(self) -> GaussianDist:
        return GaussianDist(self.mean, self.psi)


# =======================#
# MATRIX HELPERS         #
# =======================#


def _symmetric_eigh(
    matrix: np.ndarray, scale: float = 0.0
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    m = np.atleast_2d(np.asarray(matrix, dtype=float))
    if m.shape[0] != m.shape[1]:
        raise MatrixError(f"Matrix must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise MatrixError("Matrix has non-finite entries")
    magnitude = max(float(np.abs(m).max(initial=0.0)), 1.0)
    if np.abs(m - m.T).max(initial=0.0) > SYMMETRY_RTOL * magnitude:
        raise MatrixError("Matrix is not symmetric")
    sym = 0.5 * (m + m.T)
    eigvals, eigvecs = scipy.linalg.eigh(sym)
    floor = -NEGATIVITY_FLOOR * max(abs(float(np.trace(sym))), scale, np.finfo(float).tiny)
    if eigvals.size and eigvals.min() < floor:
        raise MatrixError(f"Matrix has eigenvalue {eigvals.min():.3g} below the negativity floor")
    return sym, eigvals, eigvecs


def clip_psd(matrix: np.ndarray, scale: float = 0.0) -> np.ndarray:
    """
    Symmetrise and clip slightly negative eigenvalues to zero.

    ``scale`` raises the negativity floor for results of cancellation, e.g. a posterior
    covariance near zero computed from a much larger prior.
    """
    sym, eigvals, eigvecs = _symmetric_eigh(matrix, scale)
    if eigvals.size and eigvals.min() >= 0.0:
        return sym
    clipped = (eigvecs * np.clip(eigvals, 0.0, None)) @ eigvecs.T
    return 0.5 * (clipped + clipped.T)


def psd_sqrt(matrix: np.ndarray) -> np.ndarray:
    """
    Symmetric square root R of a PSD matrix, so that R R' reproduces it.

    Negative eigenvalues down to -1e-8 * trace are clipped to zero.

    Raises:
        MatrixError: asymmetric input or an eigenvalue below the negativity floor
    """
    _, eigvals, eigvecs = _symmetric_eigh(matrix)
    root = (eigvecs * np.sqrt(np.clip(eigvals, 0.0, None))) @ eigvecs.T
    return 0.5 * (root + root.T)


# =======================#
# ODE ENGINE             #
# =======================#


def _guarded(field: Field) -> Field:
    def wrapped(t: float, y: np.ndarray) -> np.ndarray:
        dy = np.asarray(field(t, y), dtype=float)
        if not np.all(np.isfinite(dy)):
            raise IntegrationError("non-finite derivative", t)
        return dy

    return wrapped


def _step_through(
    field: Field,
    y0: np.ndarray,
    t0: float,
    t1: float,
    cfg: IntegratorConfig,
    dense: bool,
    watch: int = 0,
) -> tuple[np.ndarray, list[float], list[object], np.ndarray]:
    # The running minimum covers the first `watch` components at every accepted step.
    solver_cls = getattr(scipy.integrate, cfg.method)
    solver = solver_cls(_guarded(field), t0, y0, t1, rtol=cfg.rtol, atol=cfg.atol)
    times: list[float] = [t0]
    interpolants: list[object] = []
    low = np.array(y0[:watch], dtype=float)
    steps = 0
    while solver.status == "running":
        if steps >= cfg.max_steps:
            raise IntegrationError(f"exceeded {cfg.max_steps} steps", float(solver.t))
        message = solver.step()
        steps += 1
        if solver.status == "failed":
            raise IntegrationError(f"step failed: {message}", float(solver.t))
        low = np.minimum(low, solver.y[:watch])
        if dense:
            times.append(float(solver.t))
            interpolants.append(solver.dense_output())
    logger.debug("integrated [%g, %g] in %d steps (%s)", t0, t1, steps, cfg.method)
    return np.array(solver.y, dtype=float), times, interpolants, low


def integrate_ode(
    field: Field,
    y0: Sequence[float],
    t0: float,
    t1: float,
    cfg: IntegratorConfig | None = None,
) -> np.ndarray:
    """
    Integrate dy/dt = field(t, y) from t0 to t1 with adaptive step-size control.

    Args:
        field: Right-hand side mapping (t, y) to dy/dt
        y0: Initial value
        t0: Start time
        t1: End time (t1 >= t0); the last step lands on it exactly
        cfg: Tolerances, step limit and stepper

    Returns:
        y(t1)

    Raises:
        IntegrationError: step limit exhausted, failed step or non-finite derivative
    """
    cfg = cfg or IntegratorConfig()
    y = np.array(y0, dtype=float).ravel()
    if t1 < t0:
        raise ValueError(f"t1 must be >= t0, got [{t0}, {t1}]")
    if t1 == t0:
        return y
    result, _, _, _ = _step_through(field, y, float(t0), float(t1), cfg, dense=False)
    return result


class EtaPath:
    """Dense deterministic path eta(t) over [t0, t1], solved once."""

    def __init__(
        self,
        t0: float,
        t1: float,
        x0: np.ndarray,
        solution: object | None,
        went_negative: bool = False,
    ):
        self.t0 = float(t0)
        self.t1 = float(t1)
        self._x0 = np.asarray(x0, dtype=float)
        self._solution = solution
        self.went_negative = went_negative

    def covers(self, t0: float, t1: float) -> bool:
        tol = 1e-12 * max(1.0, abs(self.t1))
        return self.t0 - tol <= t0 and t1 <= self.t1 + tol

    def __call__(self, t: float) -> np.ndarray:
        if not self.covers(t, t):
            raise ValueError(f"time {t} is outside the eta path domain [{self.t0}, {self.t1}]")
        if self._solution is None:
            return self._x0.copy()
        at = min(max(t, self.t0), self.t1)
        return np.asarray(self._solution(at), dtype=float)  # type: ignore[operator]


def solve_eta_path(
    net: ReactionNetwork,
    theta: Sequence[float],
    x0: Sequence[float],
    t0: float,
    t1: float,
    cfg: IntegratorConfig | None = None,
) -> EtaPath:
    """Solve the deterministic rate equations once from x0 and keep a dense interpolant."""
    cfg = cfg or IntegratorConfig()
    x = np.asarray(x0, dtype=float)
    if t1 < t0:
        raise ValueError(f"t1 must be >= t0, got [{t0}, {t1}]")
    if t1 == t0:
        return EtaPath(t0, t1, x, None)

    def field(t: float, y: np.ndarray) -> np.ndarray:
        return net.drift(y, theta)

    _, times, interpolants, low = _step_through(
        field, x, float(t0), float(t1), cfg, dense=True, watch=x.size
    )
    negative = _warn_negative(low, cfg)
    return EtaPath(t0, t1, x, scipy.integrate.OdeSolution(times, interpolants), negative)


def _warn_negative(low: np.ndarray, cfg: IntegratorConfig) -> bool:
    if np.any(low < -cfg.atol):
        warnings.warn(
            f"deterministic path went negative: min component {low.min():.3g}",
            NegativeEtaWarning,
            stacklevel=3,
        )
        return True
    return False


def _noise(
    net: ReactionNetwork, eta: np.ndarray, theta: Sequence[float]
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    # Propensities are floored at zero for S S' when eta leaves the positive orthant.
    h = net.propensities(eta, theta)
    jac = net.drift_jacobian(eta, theta)
    a_t = net._stoichiometry
    ss = (a_t * np.clip(h, 0.0, None)) @ a_t.T
    return a_t @ h, jac, ss


# =======================#
# LNA OPERATIONS         #
# =======================#


def lna_predict(
    net: ReactionNetwork,
    theta: Sequence[float],
    eta0: Sequence[float],
    psi0: np.ndarray,
    dt: float,
    cfg: IntegratorConfig | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Restarted LNA prediction over dt: eta and Psi integrated jointly, m kept at zero.

    Returns:
        (eta(t + dt), Psi(t + dt)) with Psi symmetrised and eigenvalue-clipped
    """
    cfg = cfg or IntegratorConfig()
    n = net.n_species
    eta = np.asarray(eta0, dtype=float).ravel()
    psi = clip_psd(np.asarray(psi0, dtype=float).reshape(n, n))
    if dt < 0:
        raise ValueError(f"dt must be non-negative, got {dt}")

    def field(t: float, y: np.ndarray) -> np.ndarray:
        drift_, jac, ss = _noise(net, y[:n], theta)
        p = y[n:].reshape(n, n)
        return np.concatenate([drift_, (p @ jac.T + jac @ p + ss).ravel()])

    if dt == 0:
        return eta, psi
    y0 = np.concatenate([eta, psi.ravel()])
    y1, _, _, low = _step_through(field, y0, 0.0, float(dt), cfg, dense=False, watch=n)
    eta1 = y1[:n]
    _warn_negative(low, cfg)
    return eta1, clip_psd(y1[n:].reshape(n, n), scale=1.0)


def lna_predict_global(
    net: ReactionNetwork,
    theta: Sequence[float],
    eta_path: EtaPath,
    m0: Sequence[float],
    psi0: np.ndarray,
    t0: float,
    t1: float,
    cfg: IntegratorConfig | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """
    LNA prediction along a fixed global path: dm/dt = F(eta(t)) m and the Psi equation.

    The predicted state mean is eta_path(t1) + m(t1).

    Returns:
        (m(t1), Psi(t1))
    """
    cfg = cfg or IntegratorConfig()
    if not eta_path.covers(t0, t1):
        raise ValueError(
            f"eta path [{eta_path.t0}, {eta_path.t1}] does not cover [{t0}, {t1}]"
        )
    n = net.n_species
    m = np.asarray(m0, dtype=float).ravel()
    psi = clip_psd(np.asarray(psi0, dtype=float).reshape(n, n))

    def field(t: float, y: np.ndarray) -> np.ndarray:
        _, jac, ss = _noise(net, eta_path(t), theta)
        p = y[n:].reshape(n, n)
        return np.concatenate([jac @ y[:n], (p @ jac.T + jac @ p + ss).ravel()])

    y1 = integrate_ode(field, np.concatenate([m, psi.ravel()]), float(t0), float(t1), cfg)
    return y1[:n], clip_psd(y1[n:].reshape(n, n), scale=1.0)


def lna_transition_density(
    net: ReactionNetwork,
    theta: Sequence[float],
    x_prev: Sequence[float],
    dt: float,
    cfg: IntegratorConfig | None = None,
) -> GaussianDist:
    """Gaussian transition law N(eta(dt), Psi(dt)) started at eta = x_prev, Psi = 0."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    n = net.n_species
    eta1, psi1 = lna_predict(net, theta, x_prev, np.zeros((n, n)), dt, cfg)
    return GaussianDist(eta1, psi1)
