import math

import numpy as np
import pytest

from minsurf.weierstrass import WeierstrassData

ENNEPER = WeierstrassData.from_strings("z", "1", (-1.5, 1.5, -1.5, 1.5))
HELICOID = WeierstrassData.from_strings("exp(z)", "-1i*exp(-z)", (-1, 1, -math.pi, math.pi))
CATENOID = WeierstrassData.from_strings("exp(z)", "exp(-z)", (-1, 1, -math.pi, math.pi))
PERTURBED = WeierstrassData.from_strings("z+z^3/10", "1", (-1, 1, -1, 1))

# expressions checked in several suites; each is holomorphic near the unit square
CORPUS = [
    "z^3 - 2*z + 1",
    "exp((1+1i)*z)",
    "sin(z)*cosh(z/2)",
    "(2*z+1)/(z+3)",
    "log(z+4) + sqrt(z+5)",
    "z + z^3/10",
    "exp(z) + z",
]


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


def random_points(rng, n, box=(-1.0, 1.0, -1.0, 1.0)):
    u0, u1, v0, v1 = box
    return rng.uniform(u0, u1, n) + 1j * rng.uniform(v0, v1, n)


def pytest_terminal_summary(terminalreporter):
    import sys

    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(acceptance.RESULTS):
        terminalreporter.write_line(acceptance.RESULTS[number])
