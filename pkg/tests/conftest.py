import numpy as np
import pytest

from kinetic_lna import IntegratorConfig, builtin, parse_network

FROZEN_NETWORK = """\
species X Y
param k
reaction: X -> Y @ k * X
reaction: Y -> X @ k * Y
"""


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run long statistical checks"
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def lv():
    return builtin("lotka-volterra")


@pytest.fixture
def sir():
    return builtin("sir")


@pytest.fixture
def autoreg():
    return builtin("autoreg", 1.0)


@pytest.fixture
def ou():
    return builtin("ou")


@pytest.fixture
def frozen():
    """Two-species exchange network; with k = 0 nothing ever happens."""
    return parse_network(FROZEN_NETWORK), np.array([0.0]), np.array([3.0, 5.0])


@pytest.fixture
def cfg():
    return IntegratorConfig()


@pytest.fixture
def tight_cfg():
    return IntegratorConfig(rtol=1e-9, atol=1e-11)
