import random

import pytest

from flevel import homideal
from flevel.field import PrimeField
from flevel.poly import Polynomial, monomials_of_degree

homideal.VERIFY_EXPRESS = True

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_form(rng, F, nvars, degree, density=1.0):
    """Random homogeneous polynomial; never zero."""
    while True:
        terms = {}
        for m in monomials_of_degree(nvars, degree):
            if rng.random() < density:
                terms[m] = rng.randrange(F.p)
        f = Polynomial(F, nvars, terms)
        if f:
            return f


@pytest.fixture
def rng():
    return random.Random(20241016)


@pytest.fixture
def F5():
    return PrimeField(5)


@pytest.fixture
def F7():
    return PrimeField(7)
