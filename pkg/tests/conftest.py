import numpy as np
import pytest

from robinspec import fem2d
from robinspec.asympt import geometric_grid
from robinspec.geometry import DomainSpec

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def ellipse():
    """The cos-2theta perturbed disk r = 1 + 0.2 cos(2 theta)."""
    return DomainSpec.star2d([1.0, 0.0, 0.2], domain_id="ellipse02")


@pytest.fixture(scope="session")
def ellipse_fem_curve(ellipse):
    """Extrapolated FEM E_1 on the perturbed disk over alpha in [5, 40]."""
    out = []
    for a in geometric_grid(5.0, 40.0, 7):
        out += fem2d.refine_and_extrapolate(ellipse, a, 1, preset="medium")
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
