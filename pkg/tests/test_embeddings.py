"""Tests for places, absolute values, heights and c_K."""

from fractions import Fraction
import pytest
from src.utils import embeddings
from src.utils.embeddings import (
    absolute_value,
    c_K,
    compute_places,
    height,
    is_real_at,
    is_root_of_unity,
    is_totally_real,
    modulus_equals,
)
from src.utils.errors import PreconditionError, ZeroElement
from src.utils.number_field import quadratic_field


class TestPlaces:
    def test_gaussian_has_one_complex_place(self, gaussian):
        places = compute_places(gaussian, 128)
        assert len(places) == 1
        assert places.complex_places[0].local_degree == 2
        assert not places.real_places

    def test_real_places_come_first(self, sqrt2):
        places = compute_places(sqrt2, 128)
        assert [p.kind for p in places] == ["real", "real"]
        assert places[0].root.real < places[1].root.real

    def test_signature_matches_places(self, quartic, s4_quartic, zeta5):
        for K in (quartic, s4_quartic, zeta5):
            places = compute_places(K, 128)
            assert len(places.real_places) == K.r
            assert len(places.complex_places) == K.s

    def test_places_are_cached(self, zeta5):
        assert compute_places(zeta5, 128) is compute_places(zeta5, 128)

    def test_cache_evicts_least_recently_used(self, monkeypatch):
        monkeypatch.setattr(embeddings, "_PLACE_CACHE_SIZE", 2)
        fields = [quadratic_field(m) for m in (-7, -11, -13)]
        for K in fields:
            compute_places(K, 128)
        cached = [entry.field for entry in embeddings._PLACE_CACHE.values()]
        assert len(cached) == 2
        assert fields[0] not in cached
        assert fields[2] in cached

    def test_minimum_precision(self, gaussian):
        with pytest.raises(PreconditionError):
            compute_places(gaussian, 32)

    def test_all_embeddings_count(self, zeta5):
        places = compute_places(zeta5, 128)
        assert len(places.all_embeddings(zeta5.gen())) == 4


class TestAbsoluteValues:
    def test_unit_modulus(self, gaussian):
        places = compute_places(gaussian, 128)
        assert absolute_value(gaussian.gen(), places[0], places).contains(1)

    def test_normalized_by_degree(self, gaussian):
        places = compute_places(gaussian, 128)
        value = absolute_value(gaussian.gen() + 1, places[0], places)
        assert value.mid == pytest.approx(2 ** 0.5, rel=1e-12)

    def test_zero(self, gaussian):
        places = compute_places(gaussian, 128)
        assert absolute_value(gaussian.zero(), places[0], places).is_exact()


class TestHeight:
    def test_roots_of_unity_have_height_one(self, gaussian, zeta5):
        assert height(gaussian.gen(), compute_places(gaussian, 128)).contains(1)
        assert height(zeta5.gen(), compute_places(zeta5, 128)).contains(1)

    def test_sqrt_minus5(self, sqrt_minus5):
        h = height(sqrt_minus5.gen(), compute_places(sqrt_minus5, 128))
        assert h.mid == pytest.approx(5 ** 0.5, rel=1e-12)

    def test_quartic_generator(self, quartic):
        h = height(quartic.gen(), compute_places(quartic, 128))
        assert h.mid == pytest.approx((3 ** 0.5 + 2) ** 0.25, rel=1e-12)
        assert h.mid == pytest.approx(1.389911, abs=1e-5)

    def test_non_integral_uses_mahler_measure(self, rationals):
        assert height(rationals(Fraction(1, 2))).contains(2)
        assert height(rationals(Fraction(-3, 7))).contains(7)

    def test_invariant_under_negation_and_inversion(self, sqrt_minus5):
        places = compute_places(sqrt_minus5, 128)
        a = sqrt_minus5.gen() + 2
        assert height(a, places).overlaps(height(-a, places))
        assert height(a, places).overlaps(height(a.inverse(), places))

    def test_at_least_one(self, zeta5):
        places = compute_places(zeta5, 128)
        z = zeta5.gen()
        for a in (z + 1, z ** 2 - z, 3 * z):
            assert not height(a, places).less_than(1)

    def test_zero_has_no_height(self, gaussian):
        with pytest.raises(ZeroElement):
            height(gaussian.zero())

    def test_enclosure_narrows_with_precision(self, sqrt_minus5):
        coarse = height(sqrt_minus5.gen(), compute_places(sqrt_minus5, 128))
        fine = height(sqrt_minus5.gen(), compute_places(sqrt_minus5, 512))
        assert fine.width < coarse.width
        assert coarse.overlaps(fine)


class TestCK:
    @pytest.mark.parametrize(
        "fixture, expected",
        [
            ("gaussian", 1.128379),
            ("sqrt_minus5", 1.687320),
            ("zeta5", 1.458995),
            ("sqrt2", 8 ** 0.25),
        ],
    )
    def test_values(self, request, fixture, expected):
        K = request.getfixturevalue(fixture)
        assert c_K(K, 128).mid == pytest.approx(expected, abs=1e-5)

    def test_quartic(self, quartic):
        assert c_K(quartic, 128).mid == pytest.approx(2.1, abs=1e-3)

    def test_rationals(self, rationals):
        assert c_K(rationals, 128).contains(1)

    def test_width_bounded_by_precision(self, zeta5):
        assert c_K(zeta5, 256).width < Fraction(1, 2 ** 200)


class TestRealityPredicates:
    def test_totally_real(self, zeta5):
        z = zeta5.gen()
        assert is_totally_real(z + z ** 4)
        assert not is_totally_real(z)
        assert is_totally_real(zeta5(3))

    def test_real_at_complex_place(self, quartic):
        places = compute_places(quartic, 128)
        alpha = quartic.gen()
        sqrt3 = alpha ** 2 + 2
        for w in places:
            assert is_real_at(sqrt3, w, precision=128)
            assert not is_real_at(alpha, w, precision=128)

    def test_real_place_is_always_real(self, sqrt2):
        places = compute_places(sqrt2, 128)
        assert is_real_at(sqrt2.gen(), places[0])

    def test_roots_of_unity(self, gaussian, zeta5, sqrt_minus3):
        assert is_root_of_unity(gaussian.gen())
        assert is_root_of_unity(-zeta5.gen() ** 2)
        omega = sqrt_minus3.element([Fraction(1, 2), Fraction(1, 2)])
        assert is_root_of_unity(omega)
        assert not is_root_of_unity(gaussian.gen() + 1)
        assert not is_root_of_unity(gaussian.zero())


class TestModulusEquals:
    def test_roots_of_unity_lie_on_the_circle(self, zeta5):
        places = compute_places(zeta5, 128)
        z = zeta5.gen()
        assert all(modulus_equals(z ** k, v, places, 1) for v in places for k in range(1, 5))

    def test_units_off_the_circle(self, zeta5):
        places = compute_places(zeta5, 128)
        one_plus_zeta = zeta5.gen() + 1
        assert not any(modulus_equals(one_plus_zeta, v, places, 1) for v in places)

    def test_norm_nine(self, sqrt_minus5):
        places = compute_places(sqrt_minus5, 128)
        v = places[0]
        assert modulus_equals(sqrt_minus5.gen() + 2, v, places, 3)
        assert modulus_equals(sqrt_minus5(-3), v, places, 3)
        assert not modulus_equals(sqrt_minus5.gen() + 1, v, places, 3)

    def test_real_place(self, sqrt2):
        places = compute_places(sqrt2, 128)
        assert modulus_equals(sqrt2(-2), places[0], places, 2)
        assert not modulus_equals(sqrt2.gen(), places[0], places, Fraction(3, 2))
        assert not modulus_equals(sqrt2.zero(), places[1], places, 1)
