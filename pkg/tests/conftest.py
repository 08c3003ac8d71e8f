import random

import pytest
from hypothesis import HealthCheck, settings

from gcdga import fixtures
from gcdga.constructions import build_semidirect

settings.register_profile(
    "default",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def packages():
    return {name: build_semidirect(fixtures.connection(name)) for name in fixtures.available()}


@pytest.fixture(scope="session")
def ex1(packages):
    return packages["kodaira-thurston"]


@pytest.fixture(scope="session")
def ex2(packages):
    return packages["solvable-ex2"]


@pytest.fixture(scope="session")
def ex3(packages):
    return packages["solvable-ex3"]


@pytest.fixture
def rng():
    return random.Random(20261014)


def pytest_terminal_summary(terminalreporter):
    try:
        import test_acceptance
    except ImportError:
        return
    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.summary_lines():
            terminalreporter.write_line(line)
