"""Tests for generator constructions, height enumeration and the inequality checks."""

from fractions import Fraction
import pytest
from src.agents.search import (
    cm_family_lower_bound,
    enumerate_by_height,
    find_generator,
    find_generator_real_case,
    find_generator_torsion,
    min_generator,
    quadratic_min_height_formula,
    sweep_imaginary_quadratic,
    test_inequality as check_inequality,
)
from src.utils.embeddings import c_K, compute_places, height
from src.utils.errors import (
    MuTotallyReal,
    NoRealPlace,
    NotFoundBelow,
    PreconditionError,
    TorsionTrivial,
    ZeroElement,
)
from src.utils.number_field import generates, is_integral, minimal_polynomial


def _certified(K, certificate):
    alpha = K.element(certificate.generator)
    assert generates(alpha)
    assert is_integral(alpha)
    assert minimal_polynomial(alpha).coefficients == certificate.minimal_polynomial
    h = certificate.height.to_interval()
    assert h.upper <= certificate.bound.to_interval().lower
    return alpha


class TestFindGenerator:
    def test_quadratic_branch(self, gaussian):
        mu = gaussian.gen() + 1
        certificate = find_generator(gaussian, mu, 128)
        assert certificate.branch == "quadratic"
        assert _certified(gaussian, certificate) == mu
        assert certificate.height.to_interval().mid == pytest.approx(2 ** 0.5, rel=1e-12)

    def test_quartic_with_theta(self, quartic):
        certificate = find_generator(quartic, quartic.gen(), 128)
        assert certificate.branch in ("xi-generates", "mu-times-xi")
        _certified(quartic, certificate)
        assert certificate.bound.to_interval().mid == pytest.approx(1.38990 * 2.1, abs=5e-3)
        assert certificate.mu == quartic.gen().as_strings()

    def test_totally_real_mu(self, quartic):
        with pytest.raises(MuTotallyReal):
            find_generator(quartic, quartic.gen() ** 2 + 2, 128)

    def test_zero_mu(self, quartic):
        with pytest.raises(ZeroElement):
            find_generator(quartic, quartic.zero(), 128)

    def test_non_integral_mu(self, gaussian):
        with pytest.raises(PreconditionError):
            find_generator(gaussian, gaussian.gen() / 2, 128)


class TestRealCase:
    def test_rationals(self, rationals):
        certificate = find_generator_real_case(rationals, 128)
        assert certificate.generator == ["1"]
        assert certificate.minimal_polynomial == [-1, 1]

    def test_sqrt2(self, sqrt2):
        certificate = find_generator_real_case(sqrt2, 128)
        assert certificate.branch == "real-place"
        _certified(sqrt2, certificate)
        assert certificate.bound.to_interval().overlaps(c_K(sqrt2, 128))

    def test_totally_complex(self, gaussian):
        with pytest.raises(NoRealPlace):
            find_generator_real_case(gaussian, 128)


class TestTorsionGenerator:
    def test_gaussian(self, gaussian):
        certificate = find_generator_torsion(gaussian, 128)
        assert certificate.branch == "torsion"
        alpha = _certified(gaussian, certificate)
        assert alpha ** 4 == gaussian.one()
        assert certificate.bound.to_interval().overlaps(c_K(gaussian, 128))

    def test_cyclotomic(self, zeta5):
        certificate = find_generator_torsion(zeta5, 128)
        _certified(zeta5, certificate)

    def test_trivial_torsion(self, sqrt_minus5):
        with pytest.raises(TorsionTrivial):
            find_generator_torsion(sqrt_minus5, 128)


class TestEnumerateByHeight:
    def test_height_one_is_torsion(self, gaussian):
        hits = enumerate_by_height(gaussian, 1, 128)
        i = gaussian.gen()
        assert {hit.element for hit in hits} == {gaussian(1), gaussian(-1), i, -i}
        assert all(hit.height.contains(1) for hit in hits)

    def test_sqrt_minus5(self, sqrt_minus5):
        hits = enumerate_by_height(sqrt_minus5, "5/2", 128)
        assert len(hits) == 10
        assert not any(hit.at_boundary for hit in hits)
        assert all(hit.height.upper <= Fraction(5, 2) for hit in hits)

    def test_bound_below_one(self, gaussian):
        with pytest.raises(PreconditionError):
            enumerate_by_height(gaussian, "1/2")


class TestMinGenerator:
    def test_gaussian(self, gaussian):
        alpha, h = min_generator(gaussian, "3/2", 128)
        assert alpha == gaussian.gen()
        assert h.contains(1)

    def test_sqrt_minus5(self, sqrt_minus5):
        alpha, h = min_generator(sqrt_minus5, "5/2", 128)
        assert alpha == sqrt_minus5.gen()
        assert h.overlaps(quadratic_min_height_formula(-5, 128))

    def test_not_found_below(self, sqrt_minus5):
        with pytest.raises(NotFoundBelow):
            min_generator(sqrt_minus5, "9/5", 128)


class TestInequality:
    def test_fails_with_nontrivial_torsion(self, gaussian, sqrt_minus3):
        assert not check_inequality(gaussian, 1, 128)
        assert not check_inequality(sqrt_minus3, 1, 128)

    def test_holds_with_trivial_torsion(self, sqrt_minus5):
        assert check_inequality(sqrt_minus5, 1, 128)

    def test_cap_below_one(self, gaussian):
        with pytest.raises(PreconditionError):
            check_inequality(gaussian, "1/2")


class TestClosedForms:
    @pytest.mark.parametrize("m, expected", [(-1, 1.0), (-3, 1.0), (-5, 5 ** 0.5), (-7, 2 ** 0.5)])
    def test_quadratic_formula(self, m, expected):
        assert quadratic_min_height_formula(m, 128).mid == pytest.approx(expected, rel=1e-12)

    def test_cm_family_bound_exceeds_c_k(self, cm39):
        bound = cm_family_lower_bound(39, 128)
        assert bound.mid == pytest.approx(39 ** 0.5 / 2, rel=1e-12)
        assert bound.greater_than(c_K(cm39, 128))

    def test_small_sweep(self):
        rows = sweep_imaginary_quadratic(-7, -6, 128)
        assert [row["m"] for row in rows] == [-7, -6]
        assert all(row["formula_matches"] and row["consistent"] for row in rows)
        assert all(row["inequality_holds"] for row in rows)


@pytest.mark.slow
class TestAcceptance:
    def test_cm_composite_inequality_holds(self, cm39):
        assert check_inequality(cm39, 1, 128)

    def test_quartic_inequality_fails(self, quartic):
        assert not check_inequality(quartic, 1, 128)

    def test_sweep_is_consistent(self):
        rows = sweep_imaginary_quadratic(-30, -1, 128)
        assert all(row["formula_matches"] and row["consistent"] for row in rows)
        assert {row["m"] for row in rows if not row["inequality_holds"]} == {-1, -3}

    def test_min_generator_matches_formula(self, sqrt_minus3):
        alpha, h = min_generator(sqrt_minus3, "3/2", 128)
        assert h.overlaps(quadratic_min_height_formula(-3, 128))
        assert height(alpha, compute_places(sqrt_minus3, 128)).overlaps(h)
