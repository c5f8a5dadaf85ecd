"""Shared fixtures: small spaces and measures used across the tests."""
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)



from fractions import Fraction

import pytest

from wqlab.instances import (
    default_suite,
    equidistant_space,
    line_space,
    random_six_atom,
    two_point_space,
)
from wqlab.measures import DiscreteMeasure


@pytest.fixture(scope="session")
def two_point():
    return two_point_space()


@pytest.fixture(scope="session")
def two_point_uniform(two_point):
    return DiscreteMeasure.uniform(two_point)


@pytest.fixture(scope="session")
def two_point_skew(two_point):
    return DiscreteMeasure(two_point, [Fraction(3, 4), Fraction(1, 4)])


@pytest.fixture(scope="session")
def eq4_uniform():
    return DiscreteMeasure.uniform(equidistant_space(4))


@pytest.fixture(scope="session")
def eq8_uniform():
    return DiscreteMeasure.uniform(equidistant_space(8))


@pytest.fixture(scope="session")
def line5_uniform():
    return DiscreteMeasure.uniform(line_space(5))


@pytest.fixture(scope="session")
def random6():
    return random_six_atom(1)


@pytest.fixture(scope="session")
def suite():
    return default_suite()
