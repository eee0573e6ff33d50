"""Tests for exact number field arithmetic and subfield linear algebra."""

from fractions import Fraction
import pytest
from sympy import Rational
from src.utils.errors import (
    BasisNotARing,
    BasisNotIntegral,
    BasisRequired,
    DimensionMismatch,
    DiscriminantsNotCoprime,
    DivisionByZero,
    FieldMismatch,
    FNotTotallyReal,
    InternalInconsistency,
    NotMonic,
    NotSquarefree,
    ReducibleOrUndecided,
)
from src.utils import number_field
from src.utils.number_field import (
    cm_composite,
    degree_of,
    generates,
    intersect_subfields,
    is_integral,
    make_field,
    minimal_polynomial,
    quadratic_discriminant,
    quadratic_field,
    rational_field,
    subfield_generated,
)


class TestMakeField:
    def test_gaussian_without_basis(self):
        K = make_field([1, 0, 1])
        assert K.degree == 2
        assert K.signature == (0, 1)
        assert K.discriminant == -4

    def test_rational_field(self):
        K = make_field([-1, 1])
        assert K.degree == 1
        assert K.signature == (1, 0)
        assert K.discriminant == 1

    def test_quartic_discriminant(self, quartic):
        assert quartic.discriminant == 2304
        assert quartic.signature == (0, 2)

    def test_not_monic(self):
        with pytest.raises(NotMonic):
            make_field([1, 0, 2])

    def test_reducible(self):
        with pytest.raises(ReducibleOrUndecided):
            make_field([-1, 0, 1])

    def test_assert_irreducible_skips_check(self):
        K = make_field([1, 0, 0, 0, 1], assert_irreducible=True)
        assert K.discriminant == 256

    def test_non_maximal_power_basis_needs_basis(self):
        with pytest.raises(BasisRequired):
            make_field([-5, 0, 1])

    def test_basis_not_integral(self):
        with pytest.raises(BasisNotIntegral):
            make_field([1, 0, 1], [[1, 0], ["1/2", "1/2"]])

    def test_basis_must_start_with_one(self):
        with pytest.raises(BasisNotARing):
            make_field([1, 0, 1], [[2, 0], [0, 1]])

    def test_basis_shape(self):
        with pytest.raises(DimensionMismatch):
            make_field([1, 0, 1], [[1, 0, 0], [0, 1, 0], [0, 0, 1]])

    def test_ring_closure(self, sqrt_minus3):
        basis = sqrt_minus3.basis_elements()
        for a in basis:
            for b in basis:
                assert is_integral(a * b)


class TestQuadraticField:
    @pytest.mark.parametrize("m, discriminant", [(-5, -20), (-3, -3), (-1, -4), (2, 8), (5, 5)])
    def test_discriminant(self, m, discriminant):
        assert quadratic_field(m).discriminant == discriminant
        assert quadratic_discriminant(m) == discriminant

    def test_half_integral_basis(self, sqrt_minus3):
        omega = sqrt_minus3.basis_elements()[1]
        assert omega.coords == (Rational(1, 2), Rational(1, 2))

    @pytest.mark.parametrize("m", [0, 1, 4, -12])
    def test_not_squarefree(self, m):
        with pytest.raises(NotSquarefree):
            quadratic_field(m)


class TestCMComposite:
    def test_sqrt5_sqrt_minus39(self):
        K = cm_composite(quadratic_field(5), 39)
        assert K.degree == 4
        assert abs(K.discriminant) == 38025
        assert K.signature == (0, 2)

    def test_degenerates_to_quadratic(self):
        K = cm_composite(rational_field(), 5)
        assert K.degree == 2
        assert abs(K.discriminant) == 20

    def test_discriminants_not_coprime(self):
        with pytest.raises(DiscriminantsNotCoprime):
            cm_composite(quadratic_field(5), 35)

    def test_base_must_be_totally_real(self, gaussian):
        with pytest.raises(FNotTotallyReal):
            cm_composite(gaussian, 5)

    def test_n_squarefree(self):
        with pytest.raises(NotSquarefree):
            cm_composite(quadratic_field(5), 12)

    def test_discriminant_mismatch_raises(self, monkeypatch):
        F = quadratic_field(5)
        # a wrong Delta_M makes the product basis disagree with Delta_F^2 |Delta_M|^N
        monkeypatch.setattr(number_field, "quadratic_discriminant", lambda m: 4 * m)
        with pytest.raises(InternalInconsistency):
            cm_composite(F, 39)


class TestArithmetic:
    def test_i_squared(self, gaussian):
        i = gaussian.gen()
        assert i * i == gaussian(-1)

    def test_inverse(self, gaussian):
        i = gaussian.gen()
        assert (1 + i).inverse() == gaussian.element([Fraction(1, 2), Fraction(-1, 2)])

    def test_root_of_unity_cancellation(self, zeta5):
        z = zeta5.gen()
        assert z * z ** 4 == zeta5.one()
        assert z ** 5 == zeta5.one()
        assert z ** -1 == z ** 4

    def test_division(self, gaussian):
        i = gaussian.gen()
        assert (2 * i) / i == gaussian(2)

    def test_division_by_zero(self, gaussian):
        with pytest.raises(DivisionByZero):
            gaussian.one() / gaussian.zero()
        with pytest.raises(ZeroDivisionError):
            gaussian.zero().inverse()

    def test_field_mismatch(self, gaussian, sqrt_minus5):
        with pytest.raises(FieldMismatch):
            gaussian.gen() + sqrt_minus5.gen()

    def test_coordinate_count(self, gaussian):
        with pytest.raises(DimensionMismatch):
            gaussian.element([1, 2, 3])


class TestElementPredicates:
    def test_minimal_polynomials(self, gaussian, zeta5):
        z = zeta5.gen()
        assert minimal_polynomial(gaussian.gen()).coefficients == [1, 0, 1]
        assert minimal_polynomial(z + z ** 4).coefficients == [-1, 1, 1]
        assert minimal_polynomial(zeta5(2)).coefficients == [-2, 1]

    def test_minimal_polynomial_non_integral(self, gaussian):
        half = gaussian.gen() / 2
        assert minimal_polynomial(half).coefficients == [1, 0, 4]
        assert degree_of(half) == 2

    def test_generates(self, zeta5):
        z = zeta5.gen()
        assert generates(z)
        assert not generates(z + z ** 4)
        assert not generates(zeta5.zero())

    def test_is_integral(self, sqrt_minus3, sqrt_minus5):
        assert is_integral(sqrt_minus3.element([Fraction(1, 2), Fraction(1, 2)]))
        assert not is_integral(sqrt_minus5.element([Fraction(1, 2), Fraction(1, 2)]))
        assert is_integral(sqrt_minus5.one())

    def test_integral_coords(self, sqrt_minus3):
        omega = sqrt_minus3.element([Fraction(1, 2), Fraction(1, 2)])
        assert omega.integral_coords() == [0, 1]
        assert sqrt_minus3.from_integral([0, 1]) == omega


class TestSubfields:
    def test_generated_dimensions(self, zeta5):
        z = zeta5.gen()
        assert subfield_generated(z + z ** 4).dim == 2
        assert subfield_generated(zeta5.one()).dim == 1
        assert subfield_generated(z).dim == 4

    def test_generated_subfield_invariants(self, zeta5):
        z = zeta5.gen()
        k = subfield_generated(z + z ** 4)
        assert k.verify_invariants()
        assert k.contains(z + z ** 4)
        assert not k.contains(z)

    def test_intersection_with_itself(self, zeta5):
        K = zeta5.as_subfield()
        assert intersect_subfields([K, K]) == K

    def test_intersection_with_containing_field(self, zeta5):
        z = zeta5.gen()
        real = subfield_generated(z + z ** 4)
        assert intersect_subfields([real, zeta5.as_subfield()]) == real

    def test_intersection_of_quadratic_subfields(self, quartic):
        alpha = quartic.gen()
        sqrt3 = alpha ** 2 + 2
        sqrt_minus2 = alpha - alpha ** 3 - 4 * alpha
        common = intersect_subfields([subfield_generated(sqrt3), subfield_generated(sqrt_minus2)])
        assert common == quartic.rational_subfield()
