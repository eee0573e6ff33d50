"""Search Agent - Generator constructions, the Northcott enumerator and the inequality tests."""

from fractions import Fraction
from math import isqrt
from typing import List, Optional, Tuple, Union
from loguru import logger
from tqdm import tqdm
from flint import arb
from ..models import GeneratorCertificate, IntervalRecord
from ..utils.embeddings import (
    absolute_value,
    c_K_arb,
    compute_places,
    height,
    is_real_at,
    is_root_of_unity,
    is_totally_real,
)
from ..utils.errors import (
    InternalInconsistency,
    MuTotallyReal,
    NoRealPlace,
    NotFoundBelow,
    PreconditionError,
    TorsionTrivial,
    Undecided,
    ZeroElement,
)
from ..utils.intervals import Interval, arb_max, escalate, fraction_to_arb, precision_ladder, working_precision
from ..utils.lattice import bounded_height_points, round_up, small_at_all_but_one
from ..utils.number_field import (
    FieldElement,
    NumberField,
    generates,
    is_integral,
    is_squarefree,
    minimal_polynomial,
    quadratic_discriminant,
    quadratic_field,
)
from ..utils.settings import settings
from .structure import torsion_subgroup

Bound = Union[int, Fraction, str]


class HeightHit:
    """An integral element found by the height enumerator."""

    __slots__ = ("element", "height", "at_boundary")

    def __init__(self, element: FieldElement, height: Interval, at_boundary: bool = False):
        self.element = element
        self.height = height
        self.at_boundary = at_boundary

    def __repr__(self) -> str:
        flag = ", at boundary" if self.at_boundary else ""
        return f"HeightHit({self.element}, H={self.height}{flag})"


def _as_fraction(value: Bound) -> Fraction:
    return Fraction(str(value)) if not isinstance(value, Fraction) else value


def _certificate(
    alpha: FieldElement,
    alpha_height: Interval,
    bound: Interval,
    branch: str,
    place: Optional[int] = None,
    xi: Optional[FieldElement] = None,
    mu: Optional[FieldElement] = None,
) -> GeneratorCertificate:
    if not generates(alpha) or not is_integral(alpha):
        raise InternalInconsistency(f"{alpha} is not an integral generator")
    if alpha_height.greater_than(bound):
        raise InternalInconsistency(f"H(alpha) = {alpha_height} exceeds {bound}")
    if alpha_height.upper > bound.lower:
        raise Undecided("height and bound enclosures overlap")
    return GeneratorCertificate(
        generator=alpha.as_strings(),
        minimal_polynomial=minimal_polynomial(alpha).coefficients,
        height=IntervalRecord.from_interval(alpha_height),
        bound=IntervalRecord.from_interval(bound),
        branch=branch,
        strict=alpha_height.less_than(bound),
        place=place,
        xi=xi.as_strings() if xi is not None else None,
        mu=mu.as_strings() if mu is not None else None,
    )


def find_generator_real_case(
    K: NumberField,
    precision: Optional[int] = None,
    node_cap: Optional[int] = None,
) -> GeneratorCertificate:
    """
    Integral generator with H(alpha) <= c_K when K has a real place.

    At a real place w the subfield Q(xi^(w)) cannot be proper, so xi^(w) itself generates.

    Raises:
        NoRealPlace: If K is totally complex
    """
    if K.r == 0:
        raise NoRealPlace(f"{K.label} is totally complex")
    if K.degree == 1:
        return _certificate(K.one(), Interval.exact(1), Interval.exact(1), "real-place", place=0)

    def build(bits: int) -> GeneratorCertificate:
        places = compute_places(K, bits)
        w = places.real_places[0]
        small = small_at_all_but_one(K, w, {}, precision=bits, node_cap=node_cap)
        if not generates(small.element):
            raise InternalInconsistency(f"xi at the real place {w.index} does not generate {K.label}")
        bound = Interval.from_arb(c_K_arb(K))
        return _certificate(small.element, small.height, bound, "real-place", place=w.index, xi=small.element)

    return escalate(build, start=precision, what="real-place generator")


def _envelope(mu: FieldElement, w_index: int, places) -> dict:
    """B_v = max{1, |mu|_v}^-1 for v != w."""
    bounds = {}
    with working_precision(places.precision):
        for v in places:
            if v.index == w_index:
                continue
            value = absolute_value(mu, v, places).to_arb()
            bounds[v.index] = Interval.from_arb(1 / arb_max(arb(1), value))
    return bounds


def find_generator(
    K: NumberField,
    mu: FieldElement,
    precision: Optional[int] = None,
    node_cap: Optional[int] = None,
) -> GeneratorCertificate:
    """
    Integral generator alpha with H(alpha) <= H(mu) c_K.

    Args:
        K: Number field
        mu: Nonzero integral element that is not totally real
        precision: Starting precision
        node_cap: Enumeration node budget

    Returns:
        GeneratorCertificate recording the branch taken

    Raises:
        MuTotallyReal: If mu is totally real
    """
    if mu.field is not K:
        raise PreconditionError("mu must belong to K")
    if mu.is_zero():
        raise ZeroElement("mu must be nonzero")
    if not is_integral(mu):
        raise PreconditionError(f"{mu} is not integral")
    if is_totally_real(mu):
        raise MuTotallyReal(f"{mu} is totally real")

    if K.r > 0:
        certificate = find_generator_real_case(K, precision, node_cap)
        certificate.mu = mu.as_strings()
        return certificate

    def build(bits: int) -> GeneratorCertificate:
        places = compute_places(K, bits)
        mu_height = height(mu, places)
        bound = Interval.from_arb(mu_height.to_arb() * c_K_arb(K))
        if K.degree == 2:
            return _certificate(mu, mu_height, bound, "quadratic", place=0, mu=mu)

        w = next((v for v in places if not is_real_at(mu, v, precision=bits)), None)
        if w is None:
            raise InternalInconsistency(f"{mu} is real at every place but not totally real")
        small = small_at_all_but_one(K, w, _envelope(mu, w.index, places), precision=bits, node_cap=node_cap)
        xi = small.element
        if generates(xi):
            logger.debug(f"xi^({w.index}) generates {K.label}")
            return _certificate(xi, small.height, bound, "xi-generates", place=w.index, xi=xi, mu=mu)
        alpha = mu * xi
        if not generates(alpha):
            raise InternalInconsistency(f"mu * xi^({w.index}) does not generate {K.label}")
        return _certificate(alpha, height(alpha, places), bound, "mu-times-xi", place=w.index, xi=xi, mu=mu)

    return escalate(build, start=precision, what="generator")


def find_generator_torsion(
    K: NumberField,
    precision: Optional[int] = None,
    node_cap: Optional[int] = None,
) -> GeneratorCertificate:
    """
    Generator with H(alpha) <= c_K from a root of unity of order at least 3.

    Raises:
        TorsionTrivial: If the torsion subgroup is {+1, -1}
    """
    order, zeta = torsion_subgroup(K)
    if order < 3:
        raise TorsionTrivial(f"Torsion of {K.label} is {{+1, -1}}")
    certificate = find_generator(K, zeta, precision, node_cap)
    with working_precision(precision or settings.precision):
        # H(zeta) = 1 exactly, so the bound is c_K itself
        certificate.bound = IntervalRecord.from_interval(Interval.from_arb(c_K_arb(K)))
    certificate.branch = "torsion"
    return certificate


def enumerate_by_height(
    K: NumberField,
    B: Bound,
    precision: Optional[int] = None,
    node_cap: Optional[int] = None,
) -> List[HeightHit]:
    """
    Nonzero integral alpha with H(alpha) <= B, in canonical order.

    Heights that still straddle B at the precision cap are returned with ``at_boundary`` set;
    height-one ties are settled exactly by the Kronecker test.

    Args:
        K: Number field
        B: Rational bound >= 1
        precision: Starting precision
        node_cap: Enumeration node budget

    Returns:
        List of HeightHit
    """
    bound = _as_fraction(B)
    if bound < 1:
        raise PreconditionError(f"Height bound {bound} is below 1")

    def box(bits: int):
        return bounded_height_points(K, bound, compute_places(K, bits), node_cap)

    points = escalate(box, start=precision, what=f"height box of {K.label}")
    hits: List[HeightHit] = []
    for point in points:
        alpha = K.from_integral(point.coords)
        h = point.height
        if h.greater_than(bound):
            continue
        if h.upper <= bound:
            hits.append(HeightHit(alpha, h))
            continue
        if is_root_of_unity(alpha):
            hits.append(HeightHit(alpha, Interval.exact(1)))
            continue
        hit = _refine_boundary(alpha, bound, precision)
        if hit is not None:
            hits.append(hit)
    logger.debug(f"{len(hits)} integral elements of {K.label} with H <= {bound}")
    return hits


def _refine_boundary(alpha: FieldElement, bound: Fraction, precision: Optional[int]) -> Optional[HeightHit]:
    h = None
    start = min(2 * (precision or settings.precision), settings.precision_cap)
    for bits in precision_ladder(start):
        h = height(alpha, compute_places(alpha.field, bits))
        if h.greater_than(bound):
            return None
        if h.upper <= bound:
            return HeightHit(alpha, h)
    logger.warning(f"H({alpha}) straddles {bound} at the precision cap")
    return HeightHit(alpha, h, at_boundary=True)


def _sign_normalized(alpha: FieldElement) -> Tuple:
    coords = alpha.integral_coords()
    for c in coords:
        if c:
            return tuple(coords) if c > 0 else tuple(-c for c in coords)
    return tuple(coords)


def min_generator(
    K: NumberField,
    B: Bound,
    precision: Optional[int] = None,
    node_cap: Optional[int] = None,
) -> Tuple[FieldElement, Interval]:
    """
    Height-minimal integral generator with H <= B.

    Raises:
        NotFoundBelow: If no integral generator has height <= B
    """
    candidates = [hit for hit in enumerate_by_height(K, B, precision, node_cap) if generates(hit.element)]
    if not candidates:
        raise NotFoundBelow(B)
    lowest_upper = min(hit.height.upper for hit in candidates)
    tied = [hit for hit in candidates if hit.height.lower <= lowest_upper]
    # the sign-normalized representative wins among +-alpha
    best = min(
        tied,
        key=lambda hit: (
            _sign_normalized(hit.element),
            tuple(hit.element.integral_coords()) != _sign_normalized(hit.element),
        ),
    )
    if len({_sign_normalized(hit.element) for hit in tied}) > 1:
        logger.debug(f"{len(tied)} generators tie for the minimal height of {K.label}")
    return best.element, best.height


def test_inequality(
    K: NumberField,
    H_cap: Bound = 1,
    precision: Optional[int] = None,
    node_cap: Optional[int] = None,
) -> bool:
    """True iff no integral generator has height <= H_cap * c_K."""
    cap = _as_fraction(H_cap)
    if cap < 1:
        raise PreconditionError(f"Height cap {cap} is below 1")
    with working_precision(precision or settings.precision):
        bound = round_up(fraction_to_arb(cap) * c_K_arb(K))
    try:
        alpha, h = min_generator(K, max(bound, Fraction(1)), precision, node_cap)
    except NotFoundBelow:
        return True
    logger.info(f"{K.label}: generator {alpha} has H = {h} <= {cap} c_K")
    return False


# keeps pytest from collecting the name when tests import it
test_inequality.__test__ = False


def quadratic_min_height_formula(m: int, precision: Optional[int] = None) -> Interval:
    """Minimal height of an integral generator of Q(sqrt(m)), m < 0 squarefree."""
    delta = abs(quadratic_discriminant(m))
    with working_precision(precision or settings.precision):
        if m % 4 == 1:
            return Interval.from_arb((1 + arb(delta)).sqrt() / 2)
        return Interval.from_arb(arb(delta).sqrt() / 2)


def cm_family_lower_bound(n: int, precision: Optional[int] = None) -> Interval:
    """Lower bound sqrt(n)/2 for generator heights in F(sqrt(-n))."""
    with working_precision(precision or settings.precision):
        return Interval.from_arb(arb(n).sqrt() / 2)


def sweep_imaginary_quadratic(
    m_from: int,
    m_to: int,
    precision: Optional[int] = None,
    node_cap: Optional[int] = None,
) -> List[dict]:
    """
    Compare min_generator with the closed formula and test_inequality with the torsion order
    for every squarefree m in [m_from, m_to], m < 0.
    """
    rows = []
    for m in tqdm(range(min(m_from, m_to), max(m_from, m_to) + 1), desc="imag-quadratic sweep"):
        if m >= 0 or not is_squarefree(m):
            continue
        K = quadratic_field(m)
        alpha, h = min_generator(K, isqrt(-m) + 1, precision, node_cap)
        formula = quadratic_min_height_formula(m, precision)
        order, _ = torsion_subgroup(K)
        inequality = test_inequality(K, 1, precision, node_cap)
        rows.append({
            "m": m,
            "discriminant": K.discriminant,
            "generator": ",".join(alpha.as_strings()),
            "min_height": h.display(15),
            "formula": formula.display(15),
            "formula_matches": h.overlaps(formula) and h.width < Fraction(1, 10 ** 12),
            "torsion_order": order,
            "inequality_holds": inequality,
            "consistent": inequality == (order == 2),
        })
    return rows
