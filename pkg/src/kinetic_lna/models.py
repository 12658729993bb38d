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
Builtin networks with their default parameters and initial states.

Examples:
    >>> net, theta, x0 = builtin("lotka-volterra")
    >>> theta, x0
    (array([0.01, 0.6 , 0.3 ]), array([ 40., 140.]))

    >>> net, theta, x0 = builtin("autoreg", 10)
    >>> x0
    array([50., 80., 80., 80.])
"""

from __future__ import annotations

from typing import Callable

import numpy as np

from .errors import ConfigurationError, UnknownNameError
from .network import ReactionNetwork, parse_network

LOTKA_VOLTERRA = """\
# predator-prey: predators reproduce by eating prey, die; prey reproduce
species pred prey
param theta1 theta2 theta3
reaction: pred + prey -> 2 pred @ theta1 * pred * prey
reaction: pred -> 0 @ theta2 * pred
reaction: prey -> 2 prey @ theta3 * prey
"""

SIR = """\
# infection of a susceptible, removal of an infective
species I S
param theta1 theta2
reaction: I + S -> 2 I @ theta1 * I * S
reaction: I -> 0 @ theta2 * I
"""

# DNA.P2 is untracked: DNA + DNA.P2 = k is conserved.
_AUTOREG_TEMPLATE = """\
# prokaryotic autoregulation: DNA, RNA, protein P and dimer P2
species DNA RNA P P2
param theta1 theta2 theta3 theta4 theta5 theta6 theta7 theta8
const k = {k!r}
reaction: DNA + P2 -> 0 @ theta1 * DNA * P2
reaction: 0 -> DNA + P2 @ theta2 * (k - DNA)
reaction: DNA -> DNA + RNA @ theta3 * DNA
reaction: RNA -> RNA + P @ theta4 * RNA
reaction: 2 P -> P2 @ 0.5 * theta5 * P * (P - 1)
reaction: P2 -> 2 P @ theta6 * P2
reaction: RNA -> 0 @ theta7 * RNA
reaction: P -> 0 @ theta8 * P
"""

# Linear test system: drift -X and unit diffusion for 0 <= X <= 1.
ORNSTEIN_UHLENBECK = """\
species X
param theta
reaction: X -> 0 @ theta * 0.5 * (1 + X)
reaction: 0 -> X @ theta * 0.5 * (1 - X)
"""


def lotka_volterra(scale: float = 1.0) -> tuple[ReactionNetwork, np.ndarray, np.ndarray]:
    return parse_network(LOTKA_VOLTERRA), np.array([0.01, 0.6, 0.3]), np.array([40.0, 140.0])


def sir(scale: float = 1.0) -> tuple[ReactionNetwork, np.ndarray, np.ndarray]:
    # One infective just after the first removal in a community of 120.
    return parse_network(SIR), np.array([10**-3.06, 10**-1.13]), np.array([1.0, 118.0])


def autoreg(scale: float = 1.0) -> tuple[ReactionNetwork, np.ndarray, np.ndarray]:
    omega = float(scale)
    net = parse_network(_AUTOREG_TEMPLATE.format(k=10.0 * omega))
    theta = np.array([0.1 / omega, 0.7, 0.35, 0.2, 0.1 / omega, 0.9, 0.3, 0.1])
    x0 = np.array([5.0, 8.0, 8.0, 8.0]) * omega
    return net, theta, x0


def ornstein_uhlenbeck(scale: float = 1.0) -> tuple[ReactionNetwork, np.ndarray, np.ndarray]:
    return parse_network(ORNSTEIN_UHLENBECK), np.array([1.0]), np.array([1.0])


BUILTINS: dict[str, Callable[[float], tuple[ReactionNetwork, np.ndarray, np.ndarray]]] = {
    "lotka-volterra": lotka_volterra,
    "sir": sir,
    "autoreg": autoreg,
    "ou": ornstein_uhlenbeck,
}


def builtin(name: str, scale: float = 1.0) -> tuple[ReactionNetwork, np.ndarray, np.ndarray]:
    """
    Builtin network with default parameters and initial state.

    Args:
        name: One of "lotka-volterra", "sir", "autoreg", "ou"
        scale: System size Omega (autoreg only)

    Returns:
        (network, theta, x0)
    """
    if not scale > 0:
        raise ConfigurationError(f"scale must be positive, got {scale}")
    try:
        factory = BUILTINS[name]
    except KeyError:
        raise UnknownNameError(
            f"Unknown builtin network: {name}. Choose from: {list(BUILTINS)}"
        ) from None
    return factory(scale)
