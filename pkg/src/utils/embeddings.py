"""Archimedean places, normalized absolute values, Weil heights and c_K."""

import threading
from collections import OrderedDict
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple
from loguru import logger
from sympy import totient
from flint import acb, arb
from .errors import PreconditionError, Undecided, ZeroElement
from .intervals import Interval, arb_endpoints, arb_max, escalate, fraction_to_arb, working_precision
from .number_field import FieldElement, NumberField, is_integral, minimal_polynomial
from .polynomials import count_real_roots, cyclotomic, mahler_measure
from .settings import settings

_CACHE_LOCK = threading.Lock()
_PLACE_CACHE: "OrderedDict[Tuple[int, int], PlaceSet]" = OrderedDict()
_PLACE_CACHE_SIZE = 64


def _box(z: acb) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
    re_lo, re_hi = arb_endpoints(z.real)
    im_lo, im_hi = arb_endpoints(z.imag)
    return re_lo, re_hi, im_lo, im_hi


def boxes_overlap(a: acb, b: acb) -> bool:
    a_re_lo, a_re_hi, a_im_lo, a_im_hi = _box(a)
    b_re_lo, b_re_hi, b_im_lo, b_im_hi = _box(b)
    return not (
        a_re_hi < b_re_lo or b_re_hi < a_re_lo or a_im_hi < b_im_lo or b_im_hi < a_im_lo
    )


def _rational_arb(value) -> arb:
    value = Fraction(int(value.p), int(value.q)) if hasattr(value, "q") else Fraction(value)
    return fraction_to_arb(value)


class Place:
    """An archimedean place: a certified root box plus its kind and local degree."""

    __slots__ = ("index", "kind", "root", "local_degree")

    def __init__(self, index: int, kind: str, root: acb):
        self.index = index
        self.kind = kind
        self.root = root
        self.local_degree = 1 if kind == "real" else 2

    @property
    def is_real(self) -> bool:
        return self.kind == "real"

    def __repr__(self) -> str:
        return f"Place({self.index}, {self.kind}, {self.root})"


class PlaceSet:
    """
    Ordered archimedean places of a field at a fixed working precision.

    Real places come first by ascending root, then complex places (upper half-plane
    representative) ascending by real part, ties by imaginary part.
    """

    def __init__(self, field: NumberField, places: List[Place], precision: int):
        self.field = field
        self.places = places
        self.precision = precision
        with working_precision(precision):
            self._power_values = []
            self._basis_values = []
            for place in places:
                powers, current = [], acb(1)
                for _ in range(field.degree):
                    powers.append(current)
                    current = current * place.root
                self._power_values.append(powers)
                self._basis_values.append(
                    [self._embed_coords(omega.coords, powers) for omega in field.basis_elements()]
                )

    @staticmethod
    def _embed_coords(coords: Sequence, powers: List[acb]) -> acb:
        total = acb(0)
        for c, p in zip(coords, powers):
            if c != 0:
                total += p * _rational_arb(c)
        return total

    def __iter__(self):
        return iter(self.places)

    def __len__(self) -> int:
        return len(self.places)

    def __getitem__(self, index: int) -> Place:
        return self.places[index]

    @property
    def real_places(self) -> List[Place]:
        return [p for p in self.places if p.is_real]

    @property
    def complex_places(self) -> List[Place]:
        return [p for p in self.places if not p.is_real]

    def embed(self, a: FieldElement, place: Place) -> acb:
        """sigma_v(a) as a complex ball."""
        with working_precision(self.precision):
            return self._embed_coords(a.coords, self._power_values[place.index])

    def embed_integral(self, coords: Sequence[int], place: Place) -> acb:
        """sigma_v of the element with the given integral-basis coordinates."""
        with working_precision(self.precision):
            total = acb(0)
            for n, value in zip(coords, self._basis_values[place.index]):
                if n:
                    total += value * n
            return total

    def all_embeddings(self, a: FieldElement) -> List[acb]:
        """The d embeddings tau(a), conjugate pairs adjacent."""
        values = []
        for place in self.places:
            z = self.embed(a, place)
            values.append(z)
            if not place.is_real:
                values.append(z.conjugate())
        return values


def compute_places(K: NumberField, precision: Optional[int] = None) -> PlaceSet:
    """
    Certified archimedean places of K.

    Args:
        K: Number field
        precision: Working precision in bits (>= 64)

    Returns:
        PlaceSet with r real and s complex places

    Raises:
        PrecisionExhausted: If root separation is not achieved below the cap
    """
    precision = precision or settings.precision
    if precision < 64:
        raise PreconditionError("Precision must be at least 64 bits")
    key = (id(K), precision)
    with _CACHE_LOCK:
        cached = _PLACE_CACHE.get(key)
        if cached is not None and cached.field is K:
            _PLACE_CACHE.move_to_end(key)
            return cached

    def isolate(bits: int) -> PlaceSet:
        roots = [root for root, _ in K.min_poly.to_flint().complex_roots()]
        boxes = [_box(z) for z in roots]
        if len(roots) != K.degree:
            raise Undecided("root count mismatch")
        for i in range(len(roots)):
            for j in range(i + 1, len(roots)):
                if boxes_overlap(roots[i], roots[j]):
                    raise Undecided("root boxes not disjoint")
        real = [(z, b) for z, b in zip(roots, boxes) if b[2] == 0 and b[3] == 0]
        upper = [(z, b) for z, b in zip(roots, boxes) if b[2] > 0]
        if len(real) != K.r or len(upper) != K.s:
            raise Undecided("real/complex classification disagrees with the Sturm count")
        real.sort(key=lambda item: item[1][0] + item[1][1])
        upper.sort(key=lambda item: (item[1][0] + item[1][1], item[1][2] + item[1][3]))
        places = [Place(i, "real", z) for i, (z, _) in enumerate(real)]
        places += [Place(len(places) + i, "complex", z) for i, (z, _) in enumerate(upper)]
        return PlaceSet(K, places, bits)

    place_set = escalate(isolate, start=precision, what=f"places of {K.label}")
    if place_set.precision != precision:
        logger.debug(f"Places of {K.label} needed {place_set.precision} bits")
    with _CACHE_LOCK:
        _PLACE_CACHE[key] = place_set
        _PLACE_CACHE.move_to_end(key)
        # least recently used first
        while len(_PLACE_CACHE) > _PLACE_CACHE_SIZE:
            _PLACE_CACHE.popitem(last=False)
    return place_set


def absolute_value(a: FieldElement, v: Place, places: Optional[PlaceSet] = None) -> Interval:
    """|a|_v = ||a||_v^(d_v/d)."""
    if a.is_zero():
        return Interval.exact(0)
    places = places or compute_places(a.field)
    with working_precision(places.precision):
        modulus = abs(places.embed(a, v))
        value = modulus ** (arb(v.local_degree) / arb(a.field.degree))
        return Interval.from_arb(value)


def local_heights_product(values: List[Tuple[acb, int]]) -> arb:
    """prod max(1, |z|)^(d_v) over (embedding value, local degree) pairs."""
    product = arb(1)
    for z, local_degree in values:
        product *= arb_max(arb(1), abs(z)) ** local_degree
    return product


def height(a: FieldElement, places: Optional[PlaceSet] = None) -> Interval:
    """
    Absolute multiplicative Weil height.

    Integral elements use the archimedean places of their field; other elements
    use the Mahler measure of the primitive minimal polynomial.

    Raises:
        ZeroElement: For a = 0
    """
    if a.is_zero():
        raise ZeroElement("The height of 0 is undefined")
    K = a.field
    if is_integral(a):
        places = places or compute_places(K)
        with working_precision(places.precision):
            product = local_heights_product([(places.embed(a, v), v.local_degree) for v in places])
            return Interval.from_arb(product ** (arb(1) / arb(K.degree)))
    poly = minimal_polynomial(a)
    precision = places.precision if places else settings.precision
    with working_precision(precision):
        return Interval.from_arb(mahler_measure(poly) ** (arb(1) / arb(poly.degree)))


def c_K_arb(K: NumberField) -> arb:
    d, s = K.degree, K.s
    value = arb(abs(K.discriminant)) ** (arb(1) / arb(2 * d))
    if s:
        value *= (arb(2) / arb.pi()) ** (arb(s) / arb(d))
    return value


def c_K(K: NumberField, precision: Optional[int] = None) -> Interval:
    """c_K = (2/pi)^(s/d) |Delta_K|^(1/2d)."""
    with working_precision(precision or settings.precision):
        return Interval.from_arb(c_K_arb(K))


def is_totally_real(a: FieldElement) -> bool:
    """All roots of the minimal polynomial are real (Sturm)."""
    if a.is_rational():
        return True
    poly = minimal_polynomial(a)
    return count_real_roots(poly) == poly.degree


def is_real_at(
    a: FieldElement,
    w: Place,
    conjugation=None,
    precision: Optional[int] = None,
) -> bool:
    """
    Decide sigma_w(a) in R.

    Args:
        a: Field element
        w: Place of a.field
        conjugation: Optional recognized automorphism tau_w; when given, a fixed point test decides
        precision: Starting precision

    Returns:
        True iff sigma_w(a) is real
    """
    if w.is_real or a.is_rational():
        return True
    K = a.field

    def decide(bits: int) -> bool:
        places = compute_places(K, bits)
        z = places.embed(a, places[w.index])
        im_lo, im_hi = arb_endpoints(z.imag)
        if im_lo > 0 or im_hi < 0:
            return False
        if conjugation is not None:
            return conjugation.apply(a) == a
        candidates = [
            root for root, _ in minimal_polynomial(a).to_flint().complex_roots()
            if boxes_overlap(root, z)
        ]
        if len(candidates) != 1:
            raise Undecided("evaluation box meets several roots of the minimal polynomial")
        lo, hi = arb_endpoints(candidates[0].imag)
        return lo == 0 and hi == 0

    return escalate(decide, start=precision, what="is_real_at")


def modulus_equals(a: FieldElement, v: Place, places: PlaceSet, radius) -> bool:
    """
    Exact test of |sigma_v(a)| = radius for a positive rational radius.

    At a real place this is a^2 = radius^2. At a complex place it holds iff
    conj(sigma_v(a)) = sigma_v(radius^2 / a); both sides are then roots of the
    minimal polynomial of a, and matching isolated root boxes settles it.

    Raises:
        Undecided: If an embedding box meets more than one root
    """
    if a.is_zero():
        return False
    K = a.field
    square = K(Fraction(radius) ** 2)
    if v.is_real:
        return a * a == square
    partner = square / a
    poly = minimal_polynomial(a)
    if minimal_polynomial(partner) != poly:
        return False
    with working_precision(places.precision):
        left = places.embed(a, v).conjugate()
        right = places.embed(partner, v)
        roots = [root for root, _ in poly.to_flint().complex_roots()]
    left_hits = [i for i, root in enumerate(roots) if boxes_overlap(root, left)]
    right_hits = [i for i, root in enumerate(roots) if boxes_overlap(root, right)]
    if len(left_hits) != 1 or len(right_hits) != 1:
        raise Undecided(f"|sigma_{v.index}| of {a} cannot be matched to a root")
    return left_hits == right_hits


def is_root_of_unity(a: FieldElement) -> bool:
    """Kronecker test: the minimal polynomial of a is cyclotomic."""
    if a.is_zero() or not is_integral(a):
        return False
    poly = minimal_polynomial(a)
    n = poly.degree
    for m in range(1, 2 * n * n + 3):
        if totient(m) == n and cyclotomic(m) == poly:
            return True
    return False
