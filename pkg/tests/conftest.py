import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from implicitlaw import Exponential, ImplicitDensity, Normal, Uniform  # noqa: E402


@pytest.fixture(scope="session")
def ex1():
    return ImplicitDensity.build("t^5 + t", (-2, 2), Uniform(0, 1))


@pytest.fixture(scope="session")
def ex2():
    return ImplicitDensity.build("t^5 + t", (-3, 3), Exponential(0.1))


@pytest.fixture(scope="session")
def ex3():
    return ImplicitDensity.build("t + .9*sin(t)", (-10, 10), Uniform(0, 1))


@pytest.fixture(scope="session")
def ex4():
    return ImplicitDensity.build("t^5 + t", (-2, 2), Normal(0, 1))


@pytest.fixture(scope="session")
def identity():
    return ImplicitDensity.build("t", (-2, 2), Uniform(0, 1))


@pytest.fixture(scope="session")
def decreasing():
    return ImplicitDensity.build("-t", (-2, 2), Uniform(0, 1))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for text in sorted(module.RESULTS, key=lambda s: int(s.split()[2])):
        terminalreporter.write_line(text)
