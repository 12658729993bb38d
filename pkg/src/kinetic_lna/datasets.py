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
Embedded datasets.

smallpox: 29 inter-removal times (days) from an outbreak in a community of 120.
Time origin is the first removal, with one infective left just after it, so the state at
day 0 is (I, S) = (1, 118). Each day observes I + S = 120 - removed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import UnknownNameError
from .inference import ObservationModel, ObservationSeries

SMALLPOX_INTER_REMOVAL_DAYS = (
    13, 7, 2, 3, 0, 0, 1, 4, 5, 3, 2, 0, 2, 0, 5, 3, 1, 4, 0, 1, 1, 1, 2, 0, 1, 5, 0, 5, 5,
)  # fmt: skip
SMALLPOX_COMMUNITY = 120


@dataclass(frozen=True)
class Dataset:
    name: str
    network: str
    series: ObservationSeries
    columns: tuple[str, ...]
    obs_model: ObservationModel


def removal_days(gaps: tuple[int, ...] = SMALLPOX_INTER_REMOVAL_DAYS) -> np.ndarray:
    """Day of each removal counted from the first one."""
    return np.concatenate([[0], np.cumsum(gaps[1:])]).astype(int)


def smallpox(tail_days: int = 10) -> Dataset:
    """Daily I + S series, with ``tail_days`` constant days after the final removal."""
    if tail_days < 0:
        raise ValueError(f"tail_days must be nonnegative, got {tail_days}")
    removals = removal_days()
    days = np.arange(int(removals[-1]) + tail_days + 1)
    removed = np.searchsorted(removals, days, side="right")
    series = ObservationSeries(days.astype(float), (SMALLPOX_COMMUNITY - removed).astype(float))
    obs = ObservationModel(
        np.array([[1.0, 1.0]]), np.zeros((1, 1)), np.array([1.0, 118.0]), np.zeros((2, 2))
    )
    return Dataset("smallpox", "sir", series, ("y",), obs)


DATASETS: dict[str, Callable[[int], Dataset]] = {"smallpox": smallpox}


def load_dataset(name: str, tail_days: int = 10) -> Dataset:
    try:
        factory = DATASETS[name]
    except KeyError:
        raise UnknownNameError(f"Unknown dataset: {name}. Choose from: {list(DATASETS)}") from None
    return factory(tail_days)
