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
Readers and writers for the text formats used on the command line.

Numbers are written with 17 significant digits and time labels as the shortest text that
reads back to the same double, so everything survives a round trip.

Observation-model spec::

    obs_dim 1
    P 1 1
    Vdiag 0
    mu0 1 118
    Sigma0diag 0 0

Prior spec::

    theta1 gamma 2 10
    theta2 halfcauchy 100
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .config import PriorFamily
from .errors import DataFormatError
from .inference import ObservationModel, ObservationSeries
from .mcmc import ParameterSummary, PriorEntry, PriorSpec, SampleChain
from .simulation import Trajectory


def format_float(value: float) -> str:
    return format(float(value), ".17g")


def time_label(value: float) -> str:
    """Shortest text for a time point that reads back as the same double."""
    short = format(float(value), "g")
    return short if float(short) == float(value) else repr(float(value))


def csv_text(header: Sequence[str], rows: Iterable[Sequence[object]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(
            [format_float(v) if isinstance(v, (float, np.floating)) else v for v in row]
        )
    return buffer.getvalue()


def write_table(path: Path, header: Sequence[str], rows: Iterable[Sequence[object]]) -> None:
    Path(path).write_text(csv_text(header, rows), encoding="utf-8")


def read_records(path: Path) -> list[dict[str, str]]:
    """Rows of a CSV with mixed text and numeric columns, keyed by header."""
    try:
        with open(path, encoding="utf-8", newline="") as f:
            return list(csv.DictReader(f))
    except OSError as exc:
        raise DataFormatError(f"cannot read file: {exc.strerror}", str(path)) from None


def read_table(path: Path) -> tuple[list[str], np.ndarray]:
    """Numeric CSV with a header row; returns the header and a rows x columns array."""
    source = str(path)
    try:
        with open(path, encoding="utf-8", newline="") as f:
            lines = list(csv.reader(f))
    except OSError as exc:
        raise DataFormatError(f"cannot read file: {exc.strerror}", source) from None
    lines = [row for row in lines if row and any(cell.strip() for cell in row)]
    if not lines:
        raise DataFormatError("empty file", source)
    header = [cell.strip() for cell in lines[0]]
    rows = []
    for number, row in enumerate(lines[1:], start=2):
        if len(row) != len(header):
            raise DataFormatError(f"expected {len(header)} fields, got {len(row)}", source, number)
        try:
            values = [float(cell) for cell in row]
        except ValueError:
            raise DataFormatError(f"non-numeric field in {row}", source, number) from None
        if not all(math.isfinite(v) for v in values):
            raise DataFormatError("non-finite value", source, number)
        rows.append(values)
    return header, np.array(rows, dtype=float).reshape(len(rows), len(header))


# ==================#
# OBSERVATIONS      #
# ==================#


def read_observations(path: Path) -> tuple[ObservationSeries, list[str]]:
    """Observation CSV ``time,<y1..yd>``; returns the series and the column names."""
    header, data = read_table(path)
    if len(header) < 2 or header[0] != "time":
        raise DataFormatError("header must be time,<columns...>", str(path), 1)
    try:
        series = ObservationSeries(data[:, 0], data[:, 1:])
    except ValueError as exc:
        raise DataFormatError(str(exc), str(path)) from None
    return series, header[1:]


def write_observations(path: Path, series: ObservationSeries, names: Sequence[str]) -> None:
    rows = ([float(t), *map(float, y)] for t, y in zip(series.times, series.observations))
    write_table(path, ["time", *names], rows)


def write_trajectory(path: Path, traj: Trajectory, species: Sequence[str]) -> None:
    write_states(path, traj.times, traj.states, species)


def write_states(
    path: Path, times: Sequence[float], states: np.ndarray, species: Sequence[str]
) -> None:
    rows = ([float(t), *map(float, x)] for t, x in zip(times, states))
    write_table(path, ["time", *species], rows)


# ==================#
# SPEC FILES        #
# ==================#


def _spec_lines(path: Path) -> list[tuple[int, list[str]]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataFormatError(f"cannot read file: {exc.strerror}", str(path)) from None
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append((number, line.split()))
    return out


def _numbers(fields: Sequence[str], source: str, line: int) -> list[float]:
    try:
        values = [float(f) for f in fields]
    except ValueError:
        raise DataFormatError(f"expected numbers, got {' '.join(fields)}", source, line) from None
    if not all(math.isfinite(v) for v in values):
        raise DataFormatError("non-finite number", source, line)
    return values


def read_obs_model(path: Path, n_species: int) -> ObservationModel:
    """Parse an observation-model spec for a network with ``n_species`` species."""
    source = str(path)
    obs_dim = None
    p_rows: list[list[float]] = []
    vectors: dict[str, list[float]] = {}
    for number, fields in _spec_lines(path):
        key, rest = fields[0], fields[1:]
        if key == "obs_dim":
            if obs_dim is not None or len(rest) != 1 or not rest[0].isdigit() or int(rest[0]) < 1:
                raise DataFormatError("obs_dim takes one positive integer, once", source, number)
            obs_dim = int(rest[0])
        elif key == "P":
            row = _numbers(rest, source, number)
            if len(row) != n_species:
                raise DataFormatError(f"P rows need {n_species} entries", source, number)
            p_rows.append(row)
        elif key in ("Vdiag", "mu0", "Sigma0diag"):
            if key in vectors:
                raise DataFormatError(f"duplicate {key}", source, number)
            vectors[key] = _numbers(rest, source, number)
        else:
            raise DataFormatError(f"unknown key {key!r}", source, number)

    missing = [k for k in ("Vdiag", "mu0", "Sigma0diag") if k not in vectors]
    if obs_dim is None or missing:
        raise DataFormatError(f"missing {['obs_dim'] if obs_dim is None else missing}", source)
    if len(p_rows) != obs_dim or len(vectors["Vdiag"]) != obs_dim:
        raise DataFormatError(f"need {obs_dim} P rows and {obs_dim} Vdiag entries", source)
    if len(vectors["mu0"]) != n_species or len(vectors["Sigma0diag"]) != n_species:
        raise DataFormatError(f"mu0 and Sigma0diag need {n_species} entries", source)
    if min(vectors["Vdiag"] + vectors["Sigma0diag"]) < 0:
        raise DataFormatError("Vdiag and Sigma0diag must be nonnegative", source)
    return ObservationModel(
        np.array(p_rows),
        np.diag(vectors["Vdiag"]),
        np.array(vectors["mu0"]),
        np.diag(vectors["Sigma0diag"]),
    )


def obs_model_text(obs: ObservationModel) -> str:
    """Spec text for a model with diagonal V and Sigma0 (off-diagonal entries are dropped)."""

    def join(values: Iterable[float]) -> str:
        return " ".join(format_float(v) for v in values)

    lines = [f"obs_dim {obs.obs_dim}"]
    lines += [f"P {join(row)}" for row in obs.P]
    lines.append(f"Vdiag {join(np.diag(obs.V))}")
    lines.append(f"mu0 {join(obs.mu0)}")
    lines.append(f"Sigma0diag {join(np.diag(obs.sigma0))}")
    return "\n".join(lines) + "\n"


def read_prior(path: Path, param_names: Sequence[str]) -> PriorSpec:
    """Parse a prior spec; every parameter must appear exactly once."""
    source = str(path)
    entries: dict[str, PriorEntry] = {}
    for number, fields in _spec_lines(path):
        name = fields[0]
        if name not in param_names:
            raise DataFormatError(f"unknown parameter {name!r}", source, number)
        if name in entries:
            raise DataFormatError(f"duplicate prior for {name}", source, number)
        family = fields[1] if len(fields) > 1 else ""
        values = _numbers(fields[2:], source, number)
        try:
            if family == PriorFamily.GAMMA.value and len(values) == 2:
                entries[name] = PriorEntry.gamma(*values)
            elif family == PriorFamily.HALFCAUCHY.value and len(values) == 1:
                entries[name] = PriorEntry.halfcauchy(values[0])
            else:
                raise DataFormatError(
                    "expected '<param> gamma <shape> <rate>' or '<param> halfcauchy <c>'",
                    source,
                    number,
                )
        except ValueError as exc:
            if isinstance(exc, DataFormatError):
                raise
            raise DataFormatError(str(exc), source, number) from None
    missing = [n for n in param_names if n not in entries]
    if missing:
        raise DataFormatError(f"no prior for {missing}", source)
    return PriorSpec(tuple(param_names), tuple(entries[n] for n in param_names))


# ==================#
# CHAIN OUTPUT      #
# ==================#

LOG10_PREFIX = "log10_"
X0_PREFIX = "x0_"


def column_labels(params: Sequence[str], initial: Sequence[str] = ()) -> list[str]:
    """Chain column labels: log10_<param> for rates, x0_<species> for sampled initial states."""
    return [f"{LOG10_PREFIX}{p}" for p in params] + [f"{X0_PREFIX}{s}" for s in initial]


def chain_text(chains: Sequence[SampleChain], labels: Sequence[str]) -> str:
    """Chain CSV; several chains are written one after another with a running iter index."""
    header = ["iter", "logpost", *labels]
    rows = []
    k = 0
    for chain in chains:
        for lp, draw in zip(chain.logpost, chain.draws):
            rows.append([k, float(lp), *map(float, draw)])
            k += 1
    return csv_text(header, rows)


def read_chain(path: Path) -> tuple[list[str], np.ndarray, np.ndarray]:
    """Returns column labels, log posteriors and draws of a chain CSV."""
    header, data = read_table(path)
    if header[:2] != ["iter", "logpost"] or not all(
        h.startswith((LOG10_PREFIX, X0_PREFIX)) for h in header[2:]
    ):
        raise DataFormatError(
            "header must be iter,logpost,log10_<param>...,x0_<species>...", str(path), 1
        )
    return header[2:], data[:, 1], data[:, 2:]


_SUMMARY_HEADER = ["parameter", "median", "q2.5", "q97.5", "ess", "acceptance_rate"]


def summary_csv_text(summaries: Sequence[ParameterSummary]) -> str:
    rows = ([s.name, s.median, s.lower, s.upper, s.ess, s.acceptance_rate] for s in summaries)
    return csv_text(_SUMMARY_HEADER, rows)


def read_summary(path: Path) -> list[ParameterSummary]:
    """Summary CSV written by ``summary_csv_text``."""
    records = read_records(path)
    if not records or list(records[0]) != _SUMMARY_HEADER:
        raise DataFormatError(f"header must be {','.join(_SUMMARY_HEADER)}", str(path), 1)
    out = []
    for number, record in enumerate(records, start=2):
        try:
            values = [float(record[key]) for key in _SUMMARY_HEADER[1:]]
        except (TypeError, ValueError):
            raise DataFormatError("non-numeric summary field", str(path), number) from None
        out.append(ParameterSummary(record["parameter"], *values))
    return out


def summary_table(summaries: Sequence[ParameterSummary], wall_seconds: float) -> str:
    """Aligned plain-text summary."""
    header = ["parameter", "median", "2.5%", "97.5%", "ESS", "accept"]
    body = [
        [
            s.name,
            f"{s.median:.4f}",
            f"{s.lower:.4f}",
            f"{s.upper:.4f}",
            f"{s.ess:.1f}" + ("*" if s.ess_degenerate else ""),
            f"{s.acceptance_rate:.3f}",
        ]
        for s in summaries
    ]
    widths = [max(len(row[i]) for row in [header, *body]) for i in range(len(header))]
    lines = [
        "  ".join(
            cell.rjust(w) if i else cell.ljust(w) for i, (cell, w) in enumerate(zip(row, widths))
        )
        for row in [header, *body]
    ]
    lines.append(f"wall-clock seconds: {wall_seconds:.2f}")
    return "\n".join(lines) + "\n"


# ==================#
# MOMENTS           #
# ==================#

MOMENTS_HEADER = ["time", "method", "species", "mean", "sd"]


@dataclass(frozen=True)
class MomentRecord:
    """One row of a transition-density moments file."""

    time: float
    method: str
    species: str
    mean: float
    sd: float


def moments_text(records: Iterable[MomentRecord]) -> str:
    rows = ([time_label(r.time), r.method, r.species, r.mean, r.sd] for r in records)
    return csv_text(MOMENTS_HEADER, rows)


def read_moments(path: Path) -> list[MomentRecord]:
    records = read_records(path)
    if not records or list(records[0]) != MOMENTS_HEADER:
        raise DataFormatError(f"header must be {','.join(MOMENTS_HEADER)}", str(path), 1)
    out = []
    for number, r in enumerate(records, start=2):
        try:
            time, mean, sd = float(r["time"]), float(r["mean"]), float(r["sd"])
        except (TypeError, ValueError):
            raise DataFormatError("non-numeric moment field", str(path), number) from None
        out.append(MomentRecord(time, r["method"], r["species"], mean, sd))
    return out
