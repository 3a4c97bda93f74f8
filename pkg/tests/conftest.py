import numpy as np
import pytest

from graddiv import ballgrid


@pytest.fixture(scope="session")
def rule():
    return ballgrid.default_rule()


@pytest.fixture(scope="session")
def small_rule():
    return ballgrid.build_ball_quadrature(1.0, 24, 16, 32)


@pytest.fixture(scope="session")
def sphere_rule():
    return ballgrid.build_sphere_quadrature(1.0, 48, 96)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_configure(config):
    config.acceptance_lines = {}


def pytest_terminal_summary(terminalreporter, config):
    lines = config.acceptance_lines
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(lines):
        terminalreporter.write_line(lines[num])
