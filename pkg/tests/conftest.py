import random

import pytest

from sublap.algebra import LieAlgebra, subriemannian_group
from sublap.catalog import abelian_group, engel_group
from sublap.heisenberg import heisenberg_group
from sublap.rational import Rat


def random_rational(rng, max_num=9, max_den=9):
    num = rng.randint(-max_num, max_num)
    den = rng.randint(1, max_den)
    return Rat(num, den)


def random_vector(rng, dim, max_num=9, max_den=9):
    return tuple(random_rational(rng, max_num, max_den) for _ in range(dim))


@pytest.fixture(scope="session")
def h1():
    return heisenberg_group(1, (1,))


@pytest.fixture(scope="session")
def h2():
    return heisenberg_group(2, (1, 1))


@pytest.fixture(scope="session")
def engel():
    return engel_group()


@pytest.fixture(scope="session")
def r2():
    return abelian_group(2)


@pytest.fixture
def rng():
    return random.Random(20240817)


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
