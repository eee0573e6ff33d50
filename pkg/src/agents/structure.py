"""Structure Agent - Conjugation automorphisms, the subfields k^(w), torsion and the CM test."""

from functools import lru_cache
from typing import List, Optional, Sequence, Tuple
from loguru import logger
from sympy import Matrix, Rational, eye, totient
from flint import arb
from ..models import IntervalRecord, PlaceRecord, StructureReport
from ..utils.embeddings import (
    Place,
    boxes_overlap,
    compute_places,
    height,
    is_real_at,
    is_totally_real,
    modulus_equals,
)
from ..utils.errors import (
    HypothesisViolated,
    InternalInconsistency,
    NotTotallyComplex,
    PreconditionError,
    RecognitionFailed,
    Undecided,
)
from ..utils.group_builder import GroupBuilder
from ..utils.intervals import arb_endpoints, escalate, working_precision
from ..utils.lattice import bounded_height_points, roots_in_field, round_up, small_at_all_but_one
from ..utils.number_field import (
    FieldElement,
    NumberField,
    SubfieldDescription,
    intersect_subfields,
    subfield_generated,
)
from ..utils.polynomials import cyclotomic
from ..utils.settings import settings


class Automorphism:
    """A field automorphism, determined by the exact image of the primitive element."""

    def __init__(self, field: NumberField, image: FieldElement):
        if image.field is not field or not image.evaluate_poly(field.min_poly).is_zero():
            raise RecognitionFailed(f"{image} is not a root of {field.min_poly} in {field.label}")
        self.field = field
        self.image = image
        rows, current = [], field.one()
        for _ in range(field.degree):
            rows.append(list(current.coords))
            current = current * image
        self.matrix: Matrix = Matrix(rows)
        if self.matrix.det() == 0:
            raise RecognitionFailed(f"theta -> {image} does not induce a bijection")

    @classmethod
    def identity(cls, field: NumberField) -> "Automorphism":
        return cls(field, field.gen())

    @property
    def key(self) -> Tuple[Rational, ...]:
        return self.image.coords

    def apply(self, a: FieldElement) -> FieldElement:
        return self.field.element(list(Matrix([list(a.coords)]) * self.matrix))

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self o other."""
        return Automorphism(self.field, self.apply(other.image))

    def is_identity(self) -> bool:
        return self.image == self.field.gen()

    def order(self) -> int:
        power, n = self, 1
        while not power.is_identity():
            power = self.compose(power)
            n += 1
        return n

    def fixes(self, subfield: SubfieldDescription) -> bool:
        return all(self.apply(e) == e for e in subfield.elements())

    def verify_multiplicative(self) -> bool:
        basis = self.field.basis_elements()
        return all(
            self.apply(basis[i] * basis[j]) == self.apply(basis[i]) * self.apply(basis[j])
            for i in range(len(basis))
            for j in range(i, len(basis))
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, Automorphism) and other.field is self.field and other.key == self.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"Automorphism(theta -> {self.image.to_poly().as_expr()})"


@lru_cache(maxsize=64)
def all_automorphisms(K: NumberField) -> Tuple[Automorphism, ...]:
    """Aut(K/Q): one automorphism per root of the defining polynomial lying in K."""
    return tuple(Automorphism(K, beta) for beta in roots_in_field(K, K.min_poly))


def recognize_conjugation(K: NumberField, w: Place, precision: Optional[int] = None) -> Automorphism:
    """
    Recognize tau_w = sigma_w^-1 rho sigma_w as an automorphism of K.

    Args:
        K: Number field
        w: Complex place
        precision: Starting precision

    Returns:
        The involution tau_w

    Raises:
        RecognitionFailed: If no root of f in K matches conj(sigma_w(theta))
    """
    if w.is_real:
        raise PreconditionError("Conjugation is only defined at a complex place")
    candidates = all_automorphisms(K)

    def match(bits: int) -> Automorphism:
        places = compute_places(K, bits)
        place = places[w.index]
        target = places.embed(K.gen(), place).conjugate()
        hits = [tau for tau in candidates if boxes_overlap(places.embed(tau.image, place), target)]
        if not hits:
            raise RecognitionFailed(f"No automorphism of {K.label} realizes conjugation at place {w.index}")
        if len(hits) > 1:
            raise Undecided("several automorphisms match the conjugated root box")
        tau = hits[0]
        for omega in K.basis_elements():
            if not boxes_overlap(places.embed(tau.apply(omega), place), places.embed(omega, place).conjugate()):
                raise RecognitionFailed(f"{tau} disagrees with conjugation on {omega}")
        return tau

    tau = escalate(match, start=precision, what=f"conjugation at place {w.index}")
    if not tau.compose(tau).is_identity():
        raise InternalInconsistency(f"{tau} is not an involution")
    return tau


def _require_totally_complex(K: NumberField) -> None:
    if K.r:
        raise NotTotallyComplex(f"{K.label} has {K.r} real places")
    if K.s < 2:
        raise PreconditionError(f"{K.label} has only one archimedean place")


def kw_subfield(
    K: NumberField,
    w: Place,
    precision: Optional[int] = None,
    node_cap: Optional[int] = None,
) -> Tuple[FieldElement, SubfieldDescription]:
    """xi^(w) from the B = 1 construction and k^(w) = Q(xi^(w))."""
    _require_totally_complex(K)
    small = small_at_all_but_one(K, w, {}, precision=precision, node_cap=node_cap)
    return small.element, subfield_generated(small.element)


def _below_one_elsewhere(K: NumberField, xi: FieldElement, w: Place, precision: Optional[int]) -> None:
    def check(bits: int) -> None:
        places = compute_places(K, bits)
        for v in places:
            if v.index == w.index:
                continue
            modulus = abs(places.embed(xi, v))
            if modulus < 1:
                continue
            if modulus > 1:
                raise HypothesisViolated(f"|xi|_{v.index} > 1")
            if modulus_equals(xi, v, places, 1):
                raise HypothesisViolated(f"|xi|_{v.index} = 1")
            raise Undecided(f"|xi|_{v.index} is too close to 1")

    escalate(check, start=precision, what="lemma hypothesis")


def lemma22_check(
    K: NumberField,
    xi: FieldElement,
    w: Place,
    conjugation: Optional[Automorphism] = None,
    precision: Optional[int] = None,
) -> PlaceRecord:
    """
    Check the index-2 dichotomy for Q(xi) when xi is small away from w.

    Returns:
        PlaceRecord with ``full`` set when xi generates K, else the index-2 certificates

    Raises:
        HypothesisViolated: If |xi|_v >= 1 at some v != w
        InternalInconsistency: If Q(xi) is proper of index other than 2, or proper while tau_w is not an automorphism
    """
    _require_totally_complex(K)
    _below_one_elsewhere(K, xi, w, precision)
    k = subfield_generated(xi)
    record = PlaceRecord(index=w.index, kind=w.kind, xi=xi.as_strings(), subfield_dim=k.dim, full=k.dim == K.degree)
    if record.full:
        return record
    if K.degree != 2 * k.dim:
        raise InternalInconsistency(f"[K : Q(xi)] = {K.degree // k.dim}, expected 2")
    tau = conjugation
    if tau is None:
        try:
            tau = recognize_conjugation(K, w, precision)
        except RecognitionFailed as e:
            raise InternalInconsistency(f"k^(w) has index 2 but tau_w is missing: {e}")
    record.real_at_w = all(is_real_at(e, w, tau, precision) for e in k.elements())
    record.fixed_by_conjugation = tau.fixes(k)
    record.conjugation = tau.image.as_strings()
    return record


def fixed_field(G: Sequence[Automorphism], K: Optional[NumberField] = None) -> SubfieldDescription:
    """Joint kernel of (P - I) over the automorphism matrices P."""
    if not G:
        if K is None:
            raise ValueError("fixed_field of an empty set needs the field")
        return K.as_subfield()
    K = G[0].field
    d = K.degree
    stacked = Matrix.vstack(*[(g.matrix - eye(d)).T for g in G])
    return SubfieldDescription(K, [list(v.T) for v in stacked.nullspace()])


def automorphisms_fixing(K: NumberField, F: SubfieldDescription) -> List[Automorphism]:
    return [sigma for sigma in all_automorphisms(K) if sigma.fixes(F)]


def is_galois(K: NumberField, F: SubfieldDescription) -> bool:
    """K/F is Galois iff #Aut(K/F) = [K : F]."""
    count = len(automorphisms_fixing(K, F))
    logger.debug(f"|Aut({K.label}/F)| = {count}, [K : F] = {K.degree // F.dim}")
    return count == K.degree // F.dim


def _conjugation_or_none(
    K: NumberField, w: Place, precision: Optional[int]
) -> Tuple[Optional[Automorphism], Optional[str]]:
    try:
        return recognize_conjugation(K, w, precision), None
    except RecognitionFailed as e:
        logger.warning(f"Place {w.index}: {e}")
        return None, str(e)


def _totally_real_by_height(
    K: NumberField,
    precision: Optional[int] = None,
    node_cap: Optional[int] = None,
) -> SubfieldDescription:
    """
    Largest Q(beta) over totally real integral beta with H(beta) <= |Delta_K|^(1/2d).

    Every totally real F inside K has an integral generator of height at most
    c_F <= |Delta_K|^(1/2d), so the largest such Q(beta) is the maximal totally real subfield.
    """
    with working_precision(precision or settings.precision):
        bound = round_up(arb(abs(K.discriminant)) ** (arb(1) / arb(2 * K.degree)))

    def run(bits: int) -> List[Tuple[int, ...]]:
        places = compute_places(K, bits)
        survivors = []
        for point in bounded_height_points(K, bound, places, node_cap):
            values = [places.embed_integral(point.coords, v) for v in places.complex_places]
            # an imaginary part bounded away from 0 rules the point out
            if any(lo > 0 or hi < 0 for lo, hi in (arb_endpoints(z.imag) for z in values)):
                continue
            survivors.append(point.coords)
        return survivors

    best = K.rational_subfield()
    for coords in escalate(run, start=precision, what="totally real subfield"):
        beta = K.from_integral(coords)
        if best.contains(beta) or not is_totally_real(beta):
            continue
        k = subfield_generated(beta)
        if k.dim > best.dim:
            best = k
    logger.debug(f"Totally real subfield of {K.label} from heights <= {bound}: dimension {best.dim}")
    return best


def _resolve_subfield(
    K: NumberField,
    intersection: SubfieldDescription,
    conjugations: Sequence[Optional[Automorphism]],
    precision: Optional[int] = None,
    node_cap: Optional[int] = None,
) -> SubfieldDescription:
    """
    The maximal totally real subfield of K, compared against the intersection of the k^(w).

    With every tau_w recognized this is their joint fixed field; otherwise a height search decides.
    """
    if not intersection.verify_invariants():
        raise InternalInconsistency("Intersection of the k^(w) is not a subfield")
    if all(tau is not None for tau in conjugations):
        F = fixed_field(list(conjugations), K)
    else:
        F = _totally_real_by_height(K, precision, node_cap)
    if intersection != F:
        logger.info(
            f"Intersection of the k^(w) has dimension {intersection.dim}; "
            f"the maximal totally real subfield has dimension {F.dim}"
        )
    return F


def maximal_totally_real_subfield(
    K: NumberField,
    precision: Optional[int] = None,
    node_cap: Optional[int] = None,
) -> SubfieldDescription:
    """
    The maximal totally real subfield of a totally complex field.

    This is the intersection of all k^(w) whenever that intersection is totally real.
    Otherwise the fixed field of all tau_w is returned, or the height search result
    when some tau_w is not an automorphism. Fields with a single archimedean place give Q.
    """
    if K.r + K.s == 1:
        return K.rational_subfield()
    _require_totally_complex(K)
    subfields, conjugations = [], []
    for w in compute_places(K, precision):
        _, k = kw_subfield(K, w, precision, node_cap)
        subfields.append(k)
        conjugations.append(_conjugation_or_none(K, w, precision)[0])
    return _resolve_subfield(K, intersect_subfields(subfields), conjugations, precision, node_cap)


def torsion_subgroup(K: NumberField) -> Tuple[int, FieldElement]:
    """
    Order 2 q_K and a generator of the roots of unity in K.

    Every m >= 3 with phi(m) | d is tested by exact root recognition of Phi_m.
    """
    d = K.degree
    order, generator = 2, -K.one()
    found = [2]
    for m in range(3, 2 * d * d + 3):
        if d % int(totient(m)):
            continue
        roots = roots_in_field(K, cyclotomic(m))
        if roots:
            found.append(m)
            if m > order:
                order, generator = m, roots[0]
    if order % 2 or any(order % m for m in found):
        raise InternalInconsistency(f"Inconsistent torsion orders {found}")
    logger.debug(f"Torsion of {K.label} has order {order}")
    return order, generator


def is_cm(K: NumberField, precision: Optional[int] = None) -> bool:
    """Totally complex and all conjugations tau_w coincide."""
    if K.r or K.degree % 2:
        return False
    if K.s == 1:
        return True
    try:
        conjugations = {recognize_conjugation(K, w, precision) for w in compute_places(K, precision)}
    except RecognitionFailed:
        return False
    return len(conjugations) == 1


class StructureAnalyzerAgent:
    """Agent responsible for assembling structure reports."""

    def __init__(self, precision: Optional[int] = None, node_cap: Optional[int] = None):
        """
        Initialize the structure analyzer.

        Args:
            precision: Starting precision in bits
            node_cap: Enumeration node budget
        """
        self.precision = precision
        self.node_cap = node_cap

    def analyze(self, K: NumberField, height_cap: Rational = Rational(1)) -> StructureReport:
        """
        Build the structure report of K.

        Args:
            K: Number field
            height_cap: Cap for the small-height check

        Returns:
            StructureReport
        """
        logger.info(f"Analyzing structure of {K.label}")
        places = compute_places(K, self.precision)
        records: List[PlaceRecord] = []
        conjugations: List[Optional[Automorphism]] = []

        if K.r + K.s == 1:
            F = K.rational_subfield()
            if K.s:
                conjugations.append(recognize_conjugation(K, places[0], self.precision))
            intersection = F
            galois = True
        elif K.s == 0:
            F = intersection = K.as_subfield()
            galois = True
        else:
            _require_totally_complex(K)
            subfields = []
            for w in places:
                xi, k = kw_subfield(K, w, self.precision, self.node_cap)
                tau, failure = _conjugation_or_none(K, w, self.precision)
                record = lemma22_check(K, xi, w, tau, self.precision)
                record.xi_height = self._height_record(xi, places)
                record.conjugation = tau.image.as_strings() if tau is not None else None
                record.recognition_error = failure
                records.append(record)
                subfields.append(k)
                conjugations.append(tau)
                logger.info(f"Place {w.index}: dim k^(w) = {k.dim}")
            intersection = intersect_subfields(subfields)
            F = _resolve_subfield(K, intersection, conjugations, self.precision, self.node_cap)
            galois = is_galois(K, F)

        recognized = list(dict.fromkeys(tau for tau in conjugations if tau is not None))
        group = GroupBuilder().build_from_generators(recognized, Automorphism.identity(K))
        group.verify_closure()
        order, generator = torsion_subgroup(K)
        checked, counterexample = self._small_height_check(K, F, height_cap)
        if recognized and None not in conjugations:
            matches = fixed_field(recognized, K) == intersection
        else:
            matches = not conjugations and intersection.dim == K.degree

        return StructureReport(
            places=records,
            subfield_basis=[[str(c) for c in row] for row in F.basis.tolist()],
            subfield_dim=F.dim,
            totally_real=all(is_totally_real(e) for e in F.elements()),
            intersection_dim=intersection.dim,
            intersection_totally_real=all(is_totally_real(e) for e in intersection.elements()),
            matches_fixed_field=matches,
            galois=galois,
            galois_group_order=group.order,
            group=group.get_statistics(),
            cayley_graph=group.export_to_dict(),
            automorphism_generators=[tau.image.as_strings() for tau in recognized],
            torsion_order=order,
            torsion_generator=generator.as_strings(),
            q_divides_discriminant=K.discriminant % (order // 2) == 0,
            cm=is_cm(K, self.precision),
            height_cap=str(height_cap),
            elements_checked=checked,
            all_small_in_subfield=counterexample is None,
            counterexample=counterexample.as_strings() if counterexample is not None else None,
        )

    def _height_record(self, xi: FieldElement, places) -> IntervalRecord:
        return IntervalRecord.from_interval(height(xi, places))

    def _small_height_check(
        self, K: NumberField, F: SubfieldDescription, height_cap: Rational
    ) -> Tuple[int, Optional[FieldElement]]:
        """Every integral mu with H(mu) <= cap is totally real and lies in F, or a counterexample."""
        from .search import enumerate_by_height

        hits = enumerate_by_height(K, height_cap, precision=self.precision, node_cap=self.node_cap)
        for hit in hits:
            mu = hit.element
            if not F.contains(mu) or not is_totally_real(mu):
                logger.info(f"Counterexample with H <= {height_cap}: {mu}")
                return len(hits), mu
        return len(hits), None


def structure_report(
    K: NumberField,
    height_cap: Rational = Rational(1),
    precision: Optional[int] = None,
    node_cap: Optional[int] = None,
) -> StructureReport:
    """Structure report of a totally complex or totally real field (see StructureAnalyzerAgent.analyze)."""
    return StructureAnalyzerAgent(precision, node_cap).analyze(K, height_cap)
