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
Command-line interface for the kinetic LNA toolkit.

Usage:
    kinetic-lna simulate --network builtin:lotka-volterra --obs-times 0:30:1 --out lv.csv
    kinetic-lna transdens --network builtin:autoreg:10 --times 0.1,0.5,2.5 --out-prefix fig
    kinetic-lna loglik --network builtin:sir --data pox.csv --obs-model pox.obs --engine lna
    kinetic-lna infer --network builtin:sir --data pox.csv --obs-model pox.obs --prior pox.prior --out pox
    kinetic-lna dataset --name smallpox --out pox.csv --obs-model-out pox.obs
    kinetic-lna study --datasets 20 --iters 20000 --out lv_study.csv
    kinetic-lna study --kind autoreg --regime 3ge --rate-scale 4 --out autoreg.csv

Exit codes: 0 success, 1 usage, 2 parse/data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .config import (
    ChainConfig,
    IntegratorConfig,
    LikelihoodEngine,
    ObservationRegime,
    SimulationMethod,
    TuningConfig,
)
from .datasets import DATASETS, load_dataset
from .errors import (
    ConfigurationError,
    DataFormatError,
    NetworkParseError,
    NumericalError,
    UnknownNameError,
)
from .formats import (
    MomentRecord,
    chain_text,
    column_labels,
    csv_text,
    format_float,
    moments_text,
    obs_model_text,
    read_obs_model,
    read_observations,
    read_prior,
    summary_csv_text,
    summary_table,
    time_label,
    write_observations,
    write_states,
    write_trajectory,
)
from .inference import (
    FilterResult,
    ObservationModel,
    ObservationSeries,
    likelihood_function,
    loglik_lna_filter,
    loglik_lna_global,
    loglik_ode_gauss,
    loglik_ode_profile,
)
from .lna import lna_transition_density
from .mcmc import (
    InitialStatePrior,
    PosteriorTarget,
    SampleChain,
    rwm_chain,
    summarize,
    tune_proposal,
)
from .models import builtin
from .network import ReactionNetwork, parse_network
from .simulation import (
    em_trajectory,
    empirical_transitions,
    make_rng,
    sample_at_times,
    ssa_trajectory,
)
from .studies import (
    autoreg_study,
    lotka_volterra_study,
    lv_observation_model,
    one_step_prediction_errors,
    simulate_lv_dataset,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3

MAX_FAILURE_RATE = 0.01


class UsageError(Exception):
    """Flag misuse detected after argument parsing."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ==================#
# FLAG PARSING      #
# ==================#


def parse_floats(text: str) -> list[float]:
    """
    Comma list or inclusive ``start:stop:step`` range.

    Examples:
        >>> parse_floats("0.1,0.5,2.5")
        [0.1, 0.5, 2.5]
        >>> parse_floats("0:3:1")
        [0.0, 1.0, 2.0, 3.0]
    """
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"range must be start:stop:step, got {text!r}")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError:
            raise UsageError(f"range must be numeric, got {text!r}") from None
        if not step > 0 or stop < start:
            raise UsageError(f"range needs step > 0 and stop >= start, got {text!r}")
        count = int(math.floor((stop - start) / step + 1e-9))
        return [start + k * step for k in range(count + 1)]
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from None


@dataclass(frozen=True)
class NetworkChoice:
    net: ReactionNetwork
    theta: np.ndarray | None
    x0: np.ndarray | None


def load_network(spec: str) -> NetworkChoice:
    """``builtin:name[:scale]`` or a path to a network DSL file."""
    if spec.startswith("builtin:"):
        parts = spec.split(":")
        if len(parts) not in (2, 3):
            raise UsageError(f"expected builtin:name[:scale], got {spec!r}")
        try:
            scale = float(parts[2]) if len(parts) == 3 else 1.0
        except ValueError:
            raise UsageError(f"builtin scale must be a number, got {parts[2]!r}") from None
        net, theta, x0 = builtin(parts[1], scale)
        return NetworkChoice(net, theta, x0)
    path = Path(spec)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataFormatError(f"cannot read network file: {exc.strerror}", spec) from None
    return NetworkChoice(parse_network(text), None, None)


def _vector(
    flag: str | None, default: np.ndarray | None, size: int, name: str
) -> np.ndarray:
    if flag is not None:
        values = np.array(parse_floats(flag))
    elif default is not None:
        values = np.asarray(default, dtype=float)
    else:
        raise UsageError(f"--{name} is required for networks without defaults")
    if values.size != size:
        raise UsageError(f"--{name} needs {size} values, got {values.size}")
    return values


def _theta(flag: str | None, choice: NetworkChoice) -> np.ndarray:
    theta = _vector(flag, choice.theta, choice.net.n_params, "theta")
    if not np.all(theta > 0):
        raise UsageError("--theta entries must be positive")
    return theta


def _integrator(parsed: argparse.Namespace) -> IntegratorConfig:
    return IntegratorConfig.from_env().with_overrides(
        rtol=parsed.rtol, atol=parsed.atol, method=parsed.ode_method
    )


def _observations(
    parsed: argparse.Namespace, net: ReactionNetwork
) -> tuple[ObservationSeries, ObservationModel]:
    series, _ = read_observations(parsed.data)
    obs = read_obs_model(parsed.obs_model, net.n_species)
    if series.obs_dim != obs.obs_dim:
        raise DataFormatError(
            f"{series.obs_dim} observation columns but obs_dim is {obs.obs_dim}", str(parsed.data)
        )
    return series, obs


def _write_all(outputs: dict[Path, str]) -> None:
    for path, text in outputs.items():
        Path(path).write_text(text, encoding="utf-8")
        print(f"Output written to {path}", file=sys.stderr)


def parse_args(args: list[str] | None = None) -> argparse.Namespace:
    common = _Parser(add_help=False)
    common.add_argument(
        "--rtol", type=float, help="ODE relative tolerance (overrides KINETIC_LNA_RTOL)"
    )
    common.add_argument("--atol", type=float, help="ODE absolute tolerance")
    common.add_argument(
        "--ode-method", help="scipy.integrate stepper: RK45 (default), DOP853, RK23, Radau, BDF, LSODA"
    )
    common.add_argument("--verbose", "-V", action="store_true", help="Debug logging on stderr")

    parser = _Parser(
        prog="kinetic-lna",
        description="Simulation and LNA-based inference for stochastic reaction networks",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=__doc__.split("Usage:", 1)[1] if __doc__ else None,
    )
    parser.add_argument("--version", "-v", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    network_help = "Network DSL file or builtin:name[:scale] (lotka-volterra, sir, autoreg, ou)"

    p = sub.add_parser("simulate", parents=[common], help="Simulate one trajectory")
    p.add_argument("--network", required=True, help=network_help)
    p.add_argument("--theta", help="Rate parameters, comma-separated")
    p.add_argument("--x0", help="Initial state, comma-separated")
    p.add_argument("--t-end", type=float, required=True)
    p.add_argument("--method", default="ssa", help="ssa (exact) or em (Euler-Maruyama)")
    p.add_argument("--dt", type=float, default=1e-3, help="Euler-Maruyama step (default: 0.001)")
    p.add_argument("--obs-times", help="Record only these times: list or start:stop:step")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("transdens", parents=[common], help="Transition densities by method")
    p.add_argument("--network", required=True, help=network_help)
    p.add_argument("--theta")
    p.add_argument("--x0")
    p.add_argument("--times", required=True, help="Transition times: list or start:stop:step")
    p.add_argument("--reps", type=int, default=10_000)
    p.add_argument("--methods", default="ssa,em,lna")
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-prefix", required=True)

    p = sub.add_parser("loglik", parents=[common], help="Evaluate one log-likelihood")
    p.add_argument("--network", required=True, help=network_help)
    p.add_argument("--theta")
    p.add_argument("--data", type=Path, required=True)
    p.add_argument("--obs-model", type=Path, required=True)
    p.add_argument("--engine", choices=[e.value for e in LikelihoodEngine], default="lna")
    p.add_argument("--x0", help="Deterministic-path start for lna-global/ode (default: mu0)")
    p.add_argument(
        "--sigma2", type=float, help="ODE error variance (ode engine; default: profiled)"
    )
    p.add_argument("--out", type=Path, help="Filtered means CSV (filter engines)")

    p = sub.add_parser("infer", parents=[common], help="Random-walk Metropolis inference")
    p.add_argument("--network", required=True, help=network_help)
    p.add_argument("--data", type=Path, required=True)
    p.add_argument("--obs-model", type=Path, required=True)
    p.add_argument("--prior", type=Path, required=True)
    p.add_argument("--engine", choices=[e.value for e in LikelihoodEngine], default="lna")
    p.add_argument("--theta", help="Chain start (default: prior scale)")
    p.add_argument(
        "--x0",
        help="Fixed path start for lna-global/ode (default: lna-global samples the x0 components "
        "with Sigma0 > 0, ode uses mu0)",
    )
    p.add_argument("--sigma2", type=float)
    p.add_argument("--iters", type=int, default=100_000)
    p.add_argument("--burnin", type=int, help="Default: 20%% of --iters")
    p.add_argument("--chains", type=int, default=1)
    p.add_argument("--tune-iters", type=int, default=TuningConfig.pilot_iters)
    p.add_argument("--tune-rounds", type=int, default=TuningConfig.max_rounds)
    p.add_argument(
        "--no-jacobian", action="store_true", help="Drop the log10 change-of-variables term"
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="Output prefix")

    p = sub.add_parser("dataset", parents=[common], help="Write an embedded dataset")
    p.add_argument("--name", required=True, choices=sorted(DATASETS))
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--tail-days", type=int, default=10)
    p.add_argument("--obs-model-out", type=Path)

    p = sub.add_parser("study", parents=[common], help="Simulation studies")
    p.add_argument("--kind", choices=["table", "divergence", "autoreg"], default="table")
    p.add_argument("--datasets", type=int, default=20)
    p.add_argument("--engines", help="Default: lna,lna-global,ode for table, lna for autoreg")
    p.add_argument(
        "--regime", choices=[r.value for r in ObservationRegime], default="4ge", help="autoreg only"
    )
    p.add_argument("--rate-scale", type=float, default=1.0, help="autoreg rate multiplier")
    p.add_argument("--iters", type=int, default=20_000)
    p.add_argument("--burnin", type=int)
    p.add_argument("--tune-iters", type=int, default=TuningConfig.quick().pilot_iters)
    p.add_argument("--tune-rounds", type=int, default=TuningConfig.quick().max_rounds)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True)

    return parser.parse_args(args)


# ==================#
# COMMANDS          #
# ==================#


def cmd_simulate(parsed: argparse.Namespace) -> int:
    choice = load_network(parsed.network)
    net = choice.net
    theta = _theta(parsed.theta, choice)
    x0 = _vector(parsed.x0, choice.x0, net.n_species, "x0")
    if not parsed.t_end > 0:
        raise UsageError("--t-end must be positive")
    method = SimulationMethod.parse(parsed.method)
    obs_times = None
    if parsed.obs_times:
        obs_times = np.array(parse_floats(parsed.obs_times))
        if obs_times.min() < 0 or obs_times.max() > parsed.t_end or np.any(np.diff(obs_times) <= 0):
            raise UsageError("--obs-times must be increasing and inside [0, t-end]")

    if method is SimulationMethod.EXACT:
        traj = ssa_trajectory(net, theta, x0, parsed.t_end, parsed.seed)
        if obs_times is None:
            write_trajectory(parsed.out, traj, net.species)
        else:
            write_states(parsed.out, obs_times, sample_at_times(traj, obs_times), net.species)
    else:
        if not parsed.dt > 0:
            raise UsageError("--dt must be positive")
        if obs_times is None:
            steps = max(1, math.ceil(parsed.t_end / parsed.dt - 1e-9))
            grid = np.append(np.arange(steps) * parsed.dt, parsed.t_end)
        else:
            grid = obs_times if obs_times[0] == 0 else np.concatenate([[0.0], obs_times])
        traj = em_trajectory(net, theta, x0, grid, parsed.dt, parsed.seed)
        keep = obs_times if obs_times is not None else grid
        write_states(parsed.out, keep, sample_at_times(traj, keep), net.species)
    print(f"Output written to {parsed.out}", file=sys.stderr)
    return EXIT_OK


def cmd_transdens(parsed: argparse.Namespace) -> int:
    choice = load_network(parsed.network)
    net = choice.net
    theta = _theta(parsed.theta, choice)
    x0 = _vector(parsed.x0, choice.x0, net.n_species, "x0")
    times = parse_floats(parsed.times)
    if parsed.reps < 2:
        raise UsageError("--reps must be at least 2")
    methods = [m.strip().lower() for m in parsed.methods.split(",") if m.strip()]
    unknown = set(methods) - {"ssa", "em", "lna"}
    if unknown or not methods:
        raise UsageError(f"--methods takes ssa, em and lna, got {parsed.methods!r}")
    cfg = _integrator(parsed)

    outputs: dict[Path, str] = {}
    moments: list[MomentRecord] = []
    prefix = parsed.out_prefix
    for method in methods:
        if method == "lna":
            for t in times:
                dens = lna_transition_density(net, theta, x0, t, cfg)
                header = ["index", "mean", *(f"cov_{s}" for s in net.species)]
                rows = [
                    [i, float(dens.mean[i]), *map(float, dens.cov[i])]
                    for i in range(net.n_species)
                ]
                outputs[Path(f"{prefix}_lna_t{time_label(t)}.csv")] = csv_text(header, rows)
                moments += [
                    MomentRecord(t, "lna", s, float(dens.mean[i]), float(dens.sd[i]))
                    for i, s in enumerate(net.species)
                ]
            continue
        samples = empirical_transitions(
            net, theta, x0, times, parsed.reps, method, parsed.seed, parsed.dt
        )
        for sample in samples:
            label = time_label(sample.time)
            outputs[Path(f"{prefix}_{method}_t{label}.csv")] = csv_text(
                list(net.species), ([*map(float, row)] for row in sample.samples)
            )
            moments += [
                MomentRecord(sample.time, method, s, float(sample.mean[i]), float(sample.sd[i]))
                for i, s in enumerate(net.species)
            ]
    outputs[Path(f"{prefix}_moments.csv")] = moments_text(moments)
    _write_all(outputs)
    return EXIT_OK


def cmd_loglik(parsed: argparse.Namespace) -> int:
    choice = load_network(parsed.network)
    net = choice.net
    theta = _theta(parsed.theta, choice)
    engine = LikelihoodEngine(parsed.engine)
    if parsed.sigma2 is not None and engine is not LikelihoodEngine.ODE:
        raise UsageError("--sigma2 applies to --engine ode only")
    if parsed.x0 is not None and engine is LikelihoodEngine.LNA:
        raise UsageError("--x0 applies to --engine lna-global and ode only")
    if parsed.out is not None and engine is LikelihoodEngine.ODE:
        raise UsageError("--out (filtered means) applies to the filter engines only")
    series, obs = _observations(parsed, net)
    x0 = _vector(parsed.x0, obs.mu0, net.n_species, "x0")
    cfg = _integrator(parsed)

    result: FilterResult | None = None
    if engine is LikelihoodEngine.LNA:
        result = loglik_lna_filter(net, theta, obs, series, cfg)
        value = result.loglik
    elif engine is LikelihoodEngine.LNA_GLOBAL:
        result = loglik_lna_global(net, theta, x0, obs, series, cfg)
        value = result.loglik
    elif parsed.sigma2 is None:
        value = loglik_ode_profile(net, theta, x0, obs, series, cfg)
    else:
        value = loglik_ode_gauss(net, theta, x0, parsed.sigma2, obs, series, cfg)

    if result is not None and result.y0_dropped:
        logger.info("y_0 term dropped: point-mass prior observed exactly")
    if parsed.out is not None and result is not None:
        times = series.times[: len(result.filtered)]
        rows = ([float(t), *map(float, g.mean)] for t, g in zip(times, result.filtered))
        _write_all({parsed.out: csv_text(["time", *net.species], rows)})
    print(format_float(value))
    return EXIT_OK


def _chain_start(flag: str | None, choice: NetworkChoice, prior_scale: np.ndarray) -> np.ndarray:
    if flag is not None:
        return np.log10(_theta(flag, choice))
    return np.log10(prior_scale)


def cmd_infer(parsed: argparse.Namespace) -> int:
    choice = load_network(parsed.network)
    net = choice.net
    engine = LikelihoodEngine(parsed.engine)
    if parsed.sigma2 is not None and engine is not LikelihoodEngine.ODE:
        raise UsageError("--sigma2 applies to --engine ode only")
    if parsed.chains < 1:
        raise UsageError("--chains must be positive")
    if parsed.burnin is not None and parsed.burnin >= parsed.iters:
        raise UsageError("--burnin must be smaller than --iters")
    chain_cfg = ChainConfig(parsed.iters, parsed.burnin, jacobian=not parsed.no_jacobian)
    tuning = TuningConfig(pilot_iters=parsed.tune_iters, max_rounds=parsed.tune_rounds)
    series, obs = _observations(parsed, net)
    prior = read_prior(parsed.prior, net.params)
    x0 = _vector(parsed.x0, obs.mu0, net.n_species, "x0")
    cfg = _integrator(parsed)

    initial = None
    if engine is LikelihoodEngine.LNA_GLOBAL and parsed.x0 is None:
        initial = InitialStatePrior.from_moments(net.species, obs.mu0, obs.sigma0)
        if len(initial) == 0:
            initial = None
    if initial is None:
        loglik = likelihood_function(engine, net, obs, series, cfg, x0=x0, sigma2=parsed.sigma2)
    else:
        loglik = likelihood_function(engine, net, obs, series, cfg, sample_x0=True)
        logger.info("sampling x0 for %s", ", ".join(initial.names))
    target = PosteriorTarget(loglik, prior, chain_cfg.jacobian, initial)

    scale = np.array([e.a / e.b if e.b is not None else 1.0 / e.a for e in prior.entries])
    start = _chain_start(parsed.theta, choice, scale)
    spread = np.ones(start.size)
    if initial is not None:
        # The initial state starts at mu0 with its prior sd as the proposal scale.
        start = np.concatenate([start, initial.mean[list(initial.free)]])
        spread = np.concatenate([spread, initial.scale])
    labels = column_labels(net.params, initial.names if initial is not None else ())

    def run(index: int) -> SampleChain:
        seed = int(np.random.SeedSequence(parsed.seed, spawn_key=(index,)).generate_state(1)[0])
        cov = tune_proposal(target, start, seed, tuning, spread)
        chain = rwm_chain(target, start, cov, chain_cfg.iters, make_rng(seed), labels)
        rate = chain.acceptance_rate(chain_cfg.effective_burnin)
        logger.info("chain %d: acceptance %.3f", index, rate)
        return chain

    began = time.perf_counter()
    if parsed.chains == 1:
        chains = [run(0)]
    else:
        with ThreadPoolExecutor(max_workers=parsed.chains) as pool:
            chains = list(pool.map(run, range(parsed.chains)))
    wall = time.perf_counter() - began

    failures = sum(c.failures for c in chains)
    evaluations = sum(c.iters for c in chains)
    if failures > MAX_FAILURE_RATE * evaluations:
        print(
            f"Error: {failures} of {evaluations} likelihood evaluations failed numerically",
            file=sys.stderr,
        )
        return EXIT_NUMERICAL

    summaries = summarize(chains, chain_cfg.effective_burnin, labels)
    table = summary_table(summaries, wall)
    _write_all(
        {
            Path(f"{parsed.out}_chain.csv"): chain_text(chains, labels),
            Path(f"{parsed.out}_summary.csv"): summary_csv_text(summaries),
            Path(f"{parsed.out}_summary.txt"): table,
        }
    )
    print(table, end="")
    return EXIT_OK


def cmd_dataset(parsed: argparse.Namespace) -> int:
    if parsed.tail_days < 0:
        raise UsageError("--tail-days must be nonnegative")
    data = load_dataset(parsed.name, parsed.tail_days)
    write_observations(parsed.out, data.series, data.columns)
    print(f"Output written to {parsed.out}", file=sys.stderr)
    if parsed.obs_model_out is not None:
        _write_all({parsed.obs_model_out: obs_model_text(data.obs_model)})
    return EXIT_OK


def cmd_study(parsed: argparse.Namespace) -> int:
    cfg = _integrator(parsed)
    if parsed.kind == "divergence":
        net, theta, x0 = builtin("lotka-volterra")
        series, _ = simulate_lv_dataset(parsed.seed, net, theta, x0, np.arange(31.0))
        comparison = one_step_prediction_errors(
            net, theta, x0, lv_observation_model(x0), series, cfg
        )
        rows = [
            ["restart", comparison.restart_mse],
            ["global", comparison.global_mse],
        ]
        _write_all({parsed.out: csv_text(["filter", "prediction_mse"], rows)})
        return EXIT_OK

    default_engines = "lna" if parsed.kind == "autoreg" else "lna,lna-global,ode"
    text = parsed.engines if parsed.engines is not None else default_engines
    try:
        engines = [LikelihoodEngine(e.strip()) for e in text.split(",") if e.strip()]
    except ValueError:
        raise UsageError(f"unknown engine in {text!r}") from None
    if not engines:
        raise UsageError("--engines is empty")
    if parsed.datasets < 1:
        raise UsageError("--datasets must be positive")
    if not parsed.rate_scale > 0:
        raise UsageError("--rate-scale must be positive")
    if parsed.burnin is not None and parsed.burnin >= parsed.iters:
        raise UsageError("--burnin must be smaller than --iters")
    chain_cfg = ChainConfig(parsed.iters, parsed.burnin)
    tuning = TuningConfig(pilot_iters=parsed.tune_iters, max_rounds=parsed.tune_rounds)
    if parsed.kind == "autoreg":
        regime = ObservationRegime(parsed.regime)
        result = autoreg_study(
            parsed.datasets, chain_cfg, parsed.seed, regime, parsed.rate_scale, engines, tuning, cfg
        )
    else:
        result = lotka_volterra_study(
            parsed.datasets, chain_cfg, parsed.seed, engines, tuning, cfg
        )
    header = [
        "engine",
        "parameter",
        "truth",
        "mean_median",
        "mean_abs_error",
        "mean_ci_width",
        "coverage",
    ]
    rows = [
        [
            engine.value,
            f"log10_{name}",
            float(result.truth[j]),
            s.mean_median,
            s.mean_abs_error,
            s.mean_ci_width,
            s.coverage,
        ]
        for engine, scores in result.scores.items()
        for j, (name, s) in enumerate(zip(result.names, scores))
    ]
    _write_all({parsed.out: csv_text(header, rows)})
    return EXIT_OK


COMMANDS: dict[str, Callable[[argparse.Namespace], int]] = {
    "simulate": cmd_simulate,
    "transdens": cmd_transdens,
    "loglik": cmd_loglik,
    "infer": cmd_infer,
    "dataset": cmd_dataset,
    "study": cmd_study,
}


def main(args: Sequence[str] | None = None) -> int:
    try:
        parsed = parse_args(None if args is None else list(args))
    except SystemExit as exc:
        return int(exc.code or 0)

    logging.basicConfig(
        level=logging.DEBUG if parsed.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    logging.captureWarnings(True)

    try:
        return COMMANDS[parsed.command](parsed)
    except (UsageError, ConfigurationError, UnknownNameError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except (NetworkParseError, DataFormatError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as e:
        print(f"Error: numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
