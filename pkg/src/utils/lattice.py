"""Minkowski lattices, LLL reduction and certified polydisc enumeration."""

import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union
import numpy as np
from loguru import logger
from pydantic import BaseModel, Field, field_validator
from flint import acb, arb, arb_mat, fmpz_mat
from .embeddings import (
    Place,
    PlaceSet,
    c_K_arb,
    compute_places,
    height,
    local_heights_product,
    modulus_equals,
)
from .errors import (
    BudgetExceeded,
    InternalInconsistency,
    NotFound,
    PreconditionError,
    Undecided,
)
from .intervals import Interval, arb_endpoints, escalate, fraction_to_arb, working_precision
from .number_field import FieldElement, NumberField
from .polynomials import IntPolynomial
from .settings import settings

Coords = Tuple[int, ...]
BoundValue = Union[int, Fraction]

#: Bits kept when rounding real bounds to rationals.
_ROUNDING_BITS = 64


def _int_rows(matrix: fmpz_mat) -> List[List[int]]:
    return [[int(v) for v in row] for row in matrix.tolist()]


def round_down(value: arb, bits: int = _ROUNDING_BITS) -> Fraction:
    lower, _ = arb_endpoints(value)
    return Fraction(math.floor(lower * (1 << bits)), 1 << bits)


def round_up(value: arb, bits: int = _ROUNDING_BITS) -> Fraction:
    _, upper = arb_endpoints(value)
    return Fraction(math.ceil(upper * (1 << bits)), 1 << bits)


class IdealSublattice(BaseModel):
    """Full-rank subgroup of O_K given by integral-basis coordinates of its generators."""

    coeff_matrix: List[List[int]] = Field(..., description="Rows generate the sublattice")

    @field_validator("coeff_matrix")
    @classmethod
    def _full_rank(cls, rows: List[List[int]]) -> List[List[int]]:
        if not rows or any(len(row) != len(rows) for row in rows):
            raise ValueError("Coefficient matrix must be square")
        if fmpz_mat(rows).det() == 0:
            raise ValueError("Coefficient matrix must have nonzero determinant")
        return rows

    @property
    def index(self) -> int:
        return abs(int(fmpz_mat(self.coeff_matrix).det()))

    @classmethod
    def maximal_order(cls, degree: int) -> "IdealSublattice":
        return cls(coeff_matrix=[[int(i == j) for j in range(degree)] for i in range(degree)])


class BoundsVector:
    """
    Positive per-place bounds b(tau), stored once per place so b(rho tau) = b(tau).

    ``embedding`` holds the Euclidean bounds on |sigma_v(xi)|; ``place_normalized``
    gives B_v = b_v^(d_v/d).
    """

    def __init__(self, places: PlaceSet, embedding: Sequence[BoundValue]):
        if len(embedding) != len(places):
            raise ValueError("One bound per archimedean place is required")
        values = [Fraction(b) for b in embedding]
        if any(b <= 0 for b in values):
            raise ValueError("Bounds must be positive")
        self.places = places
        self.embedding: List[Fraction] = values

    @classmethod
    def uniform(cls, places: PlaceSet, value: BoundValue) -> "BoundsVector":
        return cls(places, [value] * len(places))

    def place_normalized(self, v: Place) -> Interval:
        d = self.places.field.degree
        with working_precision(self.places.precision):
            return Interval.from_arb(fraction_to_arb(self.embedding[v.index]) ** (arb(v.local_degree) / arb(d)))

    def product(self) -> arb:
        """prod over Hom(K, C) of b(tau)."""
        total = arb(1)
        for v in self.places:
            total *= fraction_to_arb(self.embedding[v.index]) ** v.local_degree
        return total


class MinkowskiLattice:
    """Image of a sublattice of O_K under the Minkowski map K -> R^d."""

    def __init__(self, field: NumberField, sublattice: IdealSublattice, places: PlaceSet):
        self.field = field
        self.sublattice = sublattice
        self.places = places
        self.generators: List[Coords] = [tuple(row) for row in sublattice.coeff_matrix]
        with working_precision(places.precision):
            self.values: List[List[acb]] = [
                [places.embed_integral(g, v) for v in places] for g in self.generators
            ]
            self.embedding_rows: List[List[arb]] = [self._real_row(row) for row in self.values]
            matrix = arb_mat(self.embedding_rows)
            self.gram = matrix * matrix.transpose()
        self.reduction: fmpz_mat = self._lll(np.ones(len(places)))

    def _real_row(self, values: List[acb]) -> List[arb]:
        row = []
        for v, z in zip(self.places, values):
            row.append(z.real)
            if not v.is_real:
                row.append(z.imag)
        return row

    def scaled_rows(self, scale: np.ndarray) -> np.ndarray:
        """Float Minkowski coordinates with place v divided by scale[v]."""
        rows = []
        for values in self.values:
            row = []
            for v, z in zip(self.places, values):
                row.append(float(z.real.mid()) / scale[v.index])
                if not v.is_real:
                    row.append(float(z.imag.mid()) / scale[v.index])
            rows.append(row)
        return np.array(rows, dtype=float)

    def _lll(self, scale: np.ndarray) -> fmpz_mat:
        rows = self.scaled_rows(scale)
        factor = 2.0 ** 40 / max(1.0, float(np.abs(rows).max()))
        integer_rows = [[int(round(value * factor)) for value in row] for row in rows]
        _, transform = fmpz_mat(integer_rows).lll(transform=True, delta=0.99)
        if abs(int(transform.det())) != 1:
            raise InternalInconsistency("LLL transform is not unimodular")
        return transform

    def covolume_squared(self) -> Interval:
        with working_precision(self.places.precision):
            return Interval.from_arb(self.gram.det())

    def reduced_covolume_squared(self) -> Interval:
        """Gram determinant of the LLL-reduced basis."""
        with working_precision(self.places.precision):
            reduced = arb_mat(_int_rows(self.reduction)) * arb_mat(self.embedding_rows)
            return Interval.from_arb((reduced * reduced.transpose()).det())

    def verify_covolume(self) -> bool:
        """covolume^2 contains |Delta_K| index^2 / 4^s."""
        expected = Fraction(abs(self.field.discriminant) * self.sublattice.index ** 2, 4 ** self.field.s)
        return self.covolume_squared().contains(expected)


def build_lattice(
    K: NumberField,
    A: Optional[IdealSublattice] = None,
    places: Optional[PlaceSet] = None,
) -> MinkowskiLattice:
    """
    Minkowski lattice of A (default O_K), with the covolume self-check.

    Raises:
        InternalInconsistency: If the covolume identity fails
    """
    A = A or IdealSublattice.maximal_order(K.degree)
    places = places or compute_places(K)
    lattice = MinkowskiLattice(K, A, places)
    if not lattice.verify_covolume():
        raise InternalInconsistency(
            f"Covolume check failed: {lattice.covolume_squared()} vs |Delta| index^2 / 4^s"
        )
    return lattice


def _fincke_pohst(basis: np.ndarray, bound: float, node_cap: int) -> List[Coords]:
    """All integer x with |x B|^2 <= bound (B rows), by Fincke-Pohst."""
    n = basis.shape[0]
    upper = np.linalg.cholesky(basis @ basis.T).T
    diag = np.diag(upper) ** 2
    mu = upper / np.diag(upper)[:, None]
    x = [0] * n
    found: List[Coords] = []
    nodes = 0
    tolerance = 1e-9 * max(bound, 1.0)

    def search(i: int, remaining: float) -> None:
        nonlocal nodes
        center = -sum(mu[i, j] * x[j] for j in range(i + 1, n))
        radius = math.sqrt(max(remaining, 0.0) / diag[i])
        for xi in range(math.ceil(center - radius - 1e-9), math.floor(center + radius + 1e-9) + 1):
            nodes += 1
            if nodes > node_cap:
                raise BudgetExceeded(f"Enumeration exceeded the node cap of {node_cap}")
            rest = remaining - diag[i] * (xi - center) ** 2
            if rest < -tolerance:
                continue
            x[i] = xi
            if i == 0:
                found.append(tuple(x))
            else:
                search(i - 1, rest)
        x[i] = 0

    search(n - 1, bound)
    return found


class LatticePoint:
    """Certified lattice point: integral-basis coordinates plus its embeddings."""

    __slots__ = ("coords", "values", "t2")

    def __init__(self, coords: Coords, values: List[acb]):
        self.coords = coords
        self.values = values
        self.t2 = sum(float(abs(z).mid()) ** 2 for z in values)

    def sort_key(self):
        return (round(self.t2, 9), self.coords)


def box_points(
    lattice: MinkowskiLattice,
    b: BoundsVector,
    node_cap: Optional[int] = None,
) -> List[LatticePoint]:
    """
    Nonzero lattice points with |sigma_v(xi)| < b_v at every place, each certified.

    Raises:
        Undecided: If some candidate cannot be classified at the lattice precision
        BudgetExceeded: If the node cap is exceeded
    """
    places = lattice.places
    K = lattice.field
    scale = np.array([float(bound) for bound in b.embedding])
    transform = lattice._lll(scale)
    change_rows = _int_rows(transform)
    reduced_rows = np.array(change_rows, dtype=float) @ lattice.scaled_rows(scale)
    slack_bound = (len(places)) * (1 + 1e-6) + 1e-9
    raw = _fincke_pohst(reduced_rows, slack_bound, node_cap or settings.node_cap)
    logger.debug(f"Fincke-Pohst produced {len(raw)} candidates")

    generators = np.array(lattice.generators, dtype=object)
    change = np.array(change_rows, dtype=object)
    points: List[LatticePoint] = []
    with working_precision(places.precision):
        bounds = [fraction_to_arb(value) for value in b.embedding]
        for candidate in raw:
            if not any(candidate):
                continue
            coords = tuple(int(c) for c in np.array(candidate, dtype=object) @ change @ generators)
            values = [places.embed_integral(coords, v) for v in places]
            inside = True
            for v, z in zip(places, values):
                modulus = abs(z)
                if modulus < bounds[v.index]:
                    continue
                if modulus >= bounds[v.index]:
                    inside = False
                    break
                # a rational bound can be met exactly; the box is open
                if modulus_equals(K.from_integral(coords), v, places, b.embedding[v.index]):
                    inside = False
                    break
                raise Undecided(f"|sigma_{v.index}| of {coords} straddles its bound")
            if inside:
                points.append(LatticePoint(coords, values))
    points.sort(key=LatticePoint.sort_key)
    return points


def enumerate_box(
    lattice: MinkowskiLattice,
    b: BoundsVector,
    node_cap: Optional[int] = None,
) -> List[FieldElement]:
    """
    Exactly the nonzero lattice points with |tau xi| < b(tau), ordered by T2 norm then coordinates.

    Args:
        lattice: Minkowski lattice
        b: Per-place bounds
        node_cap: Enumeration node budget

    Returns:
        Field elements, each certified inside the polydisc
    """
    K = lattice.field

    def run(bits: int) -> List[LatticePoint]:
        current = lattice
        if bits != lattice.places.precision:
            places = compute_places(K, bits)
            current = MinkowskiLattice(K, lattice.sublattice, places)
            b_current = BoundsVector(places, b.embedding)
        else:
            b_current = b
        return box_points(current, b_current, node_cap)

    points = escalate(run, start=lattice.places.precision, what="enumerate_box")
    return [K.from_integral(p.coords) for p in points]


def minkowski_hypothesis(K: NumberField, A: IdealSublattice, b: BoundsVector) -> bool:
    """(c_K)^d [O_K : A] < prod b(tau), certified."""
    with working_precision(b.places.precision):
        lhs = c_K_arb(K) ** K.degree * A.index
        return Interval.from_arb(lhs).less_than(Interval.from_arb(b.product()))


def minkowski_solve(
    K: NumberField,
    A: Optional[IdealSublattice],
    b: BoundsVector,
    node_cap: Optional[int] = None,
) -> FieldElement:
    """
    A nonzero xi in A with every |tau xi| < b(tau).

    Raises:
        NotFound: If enumeration is empty (only legal when the Minkowski hypothesis fails)
        InternalInconsistency: If enumeration is empty although the hypothesis holds
    """
    A = A or IdealSublattice.maximal_order(K.degree)
    lattice = build_lattice(K, A, b.places)
    hypothesis = minkowski_hypothesis(K, A, b)
    points = enumerate_box(lattice, b, node_cap)
    if points:
        return points[0]
    if hypothesis:
        raise InternalInconsistency("Minkowski hypothesis holds but no lattice point was found")
    raise NotFound("No nonzero lattice point in the polydisc")


def _sign_normalized(coords: Coords) -> Coords:
    for c in coords:
        if c:
            return coords if c > 0 else tuple(-v for v in coords)
    return coords


class SmallElement:
    """Result of the one-large-place construction."""

    def __init__(self, element: FieldElement, coords: Coords, value_at_w: Interval, bound: Interval, height: Interval):
        self.element = element
        self.coords = coords
        self.value_at_w = value_at_w
        self.bound = bound
        self.height = height

    @property
    def within_bound(self) -> bool:
        return not self.value_at_w.greater_than(self.bound)


def small_at_all_but_one(
    K: NumberField,
    w: Place,
    B: Optional[Dict[int, Union[BoundValue, Interval]]] = None,
    precision: Optional[int] = None,
    node_cap: Optional[int] = None,
) -> SmallElement:
    """
    Nonzero integral xi with |xi|_v < B_v for every archimedean v != w and |xi|_w minimal.

    Args:
        K: Field with at least two archimedean places
        w: Distinguished place
        B: Place index -> bound in (0, 1]; missing entries default to 1
        precision: Starting precision
        node_cap: Enumeration node budget

    Returns:
        SmallElement with |xi|_w <= c_K prod B_v^-1 and H(xi) = |xi|_w

    Raises:
        PreconditionError: If K has a single archimedean place or a bound is outside (0, 1]
        InternalInconsistency: If the envelope enumeration is empty
    """
    B = dict(B or {})
    if K.r + K.s < 2:
        raise PreconditionError(f"{K.label} has only one archimedean place")

    def run(bits: int) -> SmallElement:
        places = compute_places(K, bits)
        d = K.degree
        embedding: List[Fraction] = []
        inverse = arb(1)
        for v in places:
            if v.index == w.index:
                embedding.append(Fraction(0))
                continue
            bound = B.get(v.index, 1)
            if isinstance(bound, Interval):
                # enclosures of max{1, |mu|_v}^-1 may poke above 1
                lower = min(bound.lower, Fraction(1))
            else:
                lower = Fraction(bound)
                if lower > 1:
                    raise PreconditionError(f"B_{v.index} = {lower} exceeds 1")
            if lower <= 0:
                raise PreconditionError(f"B_{v.index} must be positive")
            if lower == 1:
                b_v = Fraction(1)
            else:
                b_v = round_down(fraction_to_arb(lower) ** (arb(d) / arb(v.local_degree)))
            embedding.append(b_v)
            inverse /= fraction_to_arb(b_v) ** (arb(v.local_degree) / arb(d))
        target = c_K_arb(K) * inverse
        envelope = 2 * target
        embedding[w.index] = round_up(envelope ** (arb(d) / arb(w.local_degree)))
        bounds = BoundsVector(places, embedding)

        lattice = build_lattice(K, None, places)
        points = box_points(lattice, bounds, node_cap)
        if not points:
            raise InternalInconsistency("Envelope enumeration found no lattice point")

        with working_precision(places.precision):
            scored = [
                (Interval.from_arb(abs(p.values[w.index]) ** (arb(w.local_degree) / arb(d))), p)
                for p in points
            ]
        lowest, lowest_point = min(scored, key=lambda item: (item[0].upper, _sign_normalized(item[1].coords)))
        anchor = K.from_integral(lowest_point.coords)
        tied = []
        for value, point in scored:
            if not value.overlaps(lowest):
                continue
            # overlapping candidates must share |xi|_w exactly before coordinates decide
            if point is not lowest_point:
                ratio = K.from_integral(point.coords) / anchor
                if not modulus_equals(ratio, w, places, 1):
                    raise Undecided(f"|xi|_w of {point.coords} and {lowest_point.coords} not separated")
            tied.append((value, point))
        value, point = min(tied, key=lambda item: _sign_normalized(item[1].coords))
        coords = _sign_normalized(point.coords)
        element = K.from_integral(coords)
        h = height(element, places)
        if not h.overlaps(value):
            raise InternalInconsistency(f"H(xi) = {h} differs from |xi|_w = {value}")
        result = SmallElement(element, coords, value, Interval.from_arb(target), h)
        if not result.within_bound:
            raise InternalInconsistency(f"|xi|_w = {value} exceeds c_K prod B_v^-1 = {result.bound}")
        return result

    return escalate(run, start=precision, what="small_at_all_but_one")


class HeightPoint:
    """Lattice point of bounded height with its height interval."""

    __slots__ = ("coords", "height")

    def __init__(self, coords: Coords, height: Interval):
        self.coords = coords
        self.height = height


def bounded_height_points(
    K: NumberField,
    bound: Fraction,
    places: PlaceSet,
    node_cap: Optional[int] = None,
) -> List[HeightPoint]:
    """
    Integral lattice points whose embeddings satisfy the Northcott box |sigma_v| <= bound^(d/d_v).

    Heights are attached but not compared against ``bound``; callers decide ties.
    """
    d = K.degree
    with working_precision(places.precision):
        embedding = [
            round_up(fraction_to_arb(bound) ** (arb(d) / arb(v.local_degree)) * (1 + arb(2) ** -30))
            for v in places
        ]
    lattice = build_lattice(K, None, places)
    points = box_points(lattice, BoundsVector(places, embedding), node_cap)
    result = []
    with working_precision(places.precision):
        for point in points:
            product = local_heights_product([(z, v.local_degree) for z, v in zip(point.values, places)])
            result.append(HeightPoint(point.coords, Interval.from_arb(product ** (arb(1) / arb(d)))))
    return result


def roots_in_field(K: NumberField, g: IntPolynomial, precision: Optional[int] = None) -> List[FieldElement]:
    """
    All roots of a monic integer polynomial that lie in K, each verified by g(beta) = 0 exactly.

    Roots of a monic g are integral, and every conjugate of a root is a root of g, so the
    search runs over the polydisc whose radius is the largest root modulus of g.

    Args:
        K: Number field
        g: Monic integer polynomial
        precision: Starting precision

    Returns:
        Roots sorted by integral-basis coordinates
    """
    if not g.monic:
        raise PreconditionError(f"{g} is not monic")

    def run(bits: int) -> List[FieldElement]:
        places = compute_places(K, bits)
        radius = Fraction(0)
        for root, _ in g.to_flint().complex_roots():
            radius = max(radius, round_up(abs(root)))
        bound = radius * (1 + Fraction(1, 1 << 20)) + Fraction(1, 1 << 20)
        lattice = build_lattice(K, None, places)
        points = box_points(lattice, BoundsVector.uniform(places, bound))
        return [
            beta for beta in (K.from_integral(p.coords) for p in points)
            if beta.evaluate_poly(g).is_zero()
        ]

    roots = escalate(run, start=precision, what=f"roots of {g} in {K.label}")
    if g.coefficients[0] == 0:
        roots.append(K.zero())
    roots.sort(key=lambda beta: tuple(beta.integral_coords()))
    logger.debug(f"{len(roots)} roots of {g} in {K.label}")
    return roots
