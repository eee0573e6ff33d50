"""Tests for integer polynomial utilities."""

import pytest
from src.utils.intervals import Interval, working_precision
from src.utils.polynomials import (
    IntPolynomial,
    count_real_roots,
    cyclotomic,
    dedekind_is_p_maximal,
    is_irreducible,
    mahler_measure,
    power_basis_is_maximal,
    root_modulus_bound,
    sieve_irreducible,
)


def poly(*coefficients):
    return IntPolynomial(coefficients=list(coefficients))


def test_leading_zeros_are_stripped():
    p = poly(1, 2, 0, 0)
    assert p.coefficients == [1, 2]
    assert p.degree == 1


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        poly(0)


def test_cyclotomic():
    assert cyclotomic(5).coefficients == [1, 1, 1, 1, 1]
    assert cyclotomic(4).coefficients == [1, 0, 1]
    assert cyclotomic(6).coefficients == [1, -1, 1]


@pytest.mark.parametrize(
    "coefficients, expected",
    [
        ([-3, 0, 1], 2),
        ([1, 0, 1], 0),
        ([1, 0, 4, 0, 1], 0),
        ([1, 1, 0, 0, 1], 0),
        ([0, -1, 0, 1], 3),
        # Sturm chains ending in a constant
        ([-1, 0, 0, 1], 1),
        ([-2, 0, 0, 0, 1], 2),
        ([2, 0, -1], 2),
    ],
)
def test_count_real_roots(coefficients, expected):
    assert count_real_roots(poly(*coefficients)) == expected


def test_sieve_certifies_cyclotomic():
    assert sieve_irreducible(cyclotomic(7)) is True


def test_biquadratic_needs_exact_factorization():
    # x^4 + 1 splits modulo every prime
    assert sieve_irreducible(poly(1, 0, 0, 0, 1)) is None
    assert is_irreducible(poly(1, 0, 0, 0, 1))


def test_reducible_detected():
    assert not is_irreducible(poly(-1, 0, 1))
    assert not is_irreducible(poly(2, 3, 1))


def test_discriminant():
    assert poly(1, 0, 1).discriminant() == -4
    assert poly(1, 0, 4, 0, 1).discriminant() == 2304


def test_dedekind():
    assert dedekind_is_p_maximal(poly(1, 0, 1), 2)
    assert not dedekind_is_p_maximal(poly(3, 0, 1), 2)


def test_power_basis_maximal():
    assert power_basis_is_maximal(poly(1, 0, 1))
    assert power_basis_is_maximal(cyclotomic(5))
    assert power_basis_is_maximal(poly(1, 0, 4, 0, 1))
    assert not power_basis_is_maximal(poly(3, 0, 1))
    assert not power_basis_is_maximal(poly(-5, 0, 1))


def test_root_modulus_bound():
    assert root_modulus_bound(poly(1, 1, 0, 0, 1)) == 2
    assert root_modulus_bound(poly(-6, 0, 1)) == 7


def test_mahler_measure():
    with working_precision(128):
        assert Interval.from_arb(mahler_measure(poly(-2, 0, 1))).contains(2)
        assert Interval.from_arb(mahler_measure(cyclotomic(12))).contains(1)
        golden = Interval.from_arb(mahler_measure(poly(-1, -1, 1)))
    assert abs(golden.mid - 1.6180339887) < 1e-9
