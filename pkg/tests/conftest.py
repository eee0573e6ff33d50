"""Shared fields for the test suite, built once per session."""

import pytest
from src.agents.corpus import build_corpus_field
from src.utils.number_field import cyclotomic_field, make_field, quadratic_field, rational_field


@pytest.fixture(scope="session")
def rationals():
    return rational_field()


@pytest.fixture(scope="session")
def gaussian():
    return quadratic_field(-1)


@pytest.fixture(scope="session")
def sqrt_minus5():
    return quadratic_field(-5)


@pytest.fixture(scope="session")
def sqrt_minus3():
    return quadratic_field(-3)


@pytest.fixture(scope="session")
def sqrt2():
    return quadratic_field(2)


@pytest.fixture(scope="session")
def zeta5():
    return cyclotomic_field(5)


@pytest.fixture(scope="session")
def quartic():
    """alpha^4 + 4 alpha^2 + 1 = 0, i.e. alpha^2 = sqrt(3) - 2."""
    return build_corpus_field("quartic-paper")


@pytest.fixture(scope="session")
def cm39():
    """Q(sqrt 5, sqrt -39)."""
    return build_corpus_field("cm:√5:39")


@pytest.fixture(scope="session")
def s4_quartic():
    """x^4 + x + 1: totally complex with Galois group S4."""
    return make_field([1, 1, 0, 0, 1], label="x^4+x+1")
