"""Exact arithmetic in number fields Q[x]/(f) with integral bases and subfield linear algebra."""

from math import gcd, lcm
from typing import Iterable, List, Optional, Sequence, Tuple, Union
from loguru import logger
from sympy import Matrix, Poly, QQ, Rational, eye, factorint, zeros
from .errors import (
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
from .polynomials import IntPolynomial, count_real_roots, cyclotomic, is_irreducible, power_basis_is_maximal, x
from .settings import settings

Scalar = Union[int, Rational]


def _rational(value) -> Rational:
    if isinstance(value, str):
        return Rational(value.strip())
    return Rational(value)


class NumberField:
    """
    A number field K = Q[x]/(f) together with an integral basis of O_K.

    Instances are immutable; every derived quantity is computed at construction.
    """

    def __init__(
        self,
        min_poly: IntPolynomial,
        integral_basis: Matrix,
        label: str = "",
    ):
        self.min_poly = min_poly
        self.degree = min_poly.degree
        self.label = label or f"Q[x]/({min_poly})"
        self._modulus = Poly(list(reversed(min_poly.coefficients)), x, domain=QQ)
        self.integral_basis = Matrix(integral_basis)
        self._basis_inverse = self.integral_basis.inv()
        self._power_traces = self._compute_power_traces()
        real = count_real_roots(min_poly)
        self.signature: Tuple[int, int] = (real, (self.degree - real) // 2)
        self.discriminant = int(self.trace_matrix().det())

    # construction helpers
    @property
    def r(self) -> int:
        return self.signature[0]

    @property
    def s(self) -> int:
        return self.signature[1]

    def _compute_power_traces(self) -> List[Rational]:
        companion = self.mul_matrix_of_coords(self.gen().coords)
        traces = []
        power = eye(self.degree)
        for _ in range(self.degree):
            traces.append(power.trace())
            power = power * companion
        return traces

    def element(self, coords: Iterable[Scalar]) -> "FieldElement":
        return FieldElement(self, coords)

    def __call__(self, value: Scalar) -> "FieldElement":
        return self.element([value] + [0] * (self.degree - 1))

    def zero(self) -> "FieldElement":
        return self(0)

    def one(self) -> "FieldElement":
        return self(1)

    def gen(self) -> "FieldElement":
        if self.degree == 1:
            return self(-self.min_poly.coefficients[0])
        return self.element([0, 1] + [0] * (self.degree - 2))

    def from_integral(self, coords: Sequence[Scalar]) -> "FieldElement":
        """Element with the given integral-basis coordinates."""
        row = Matrix([[_rational(c) for c in coords]]) * self.integral_basis
        return self.element(list(row))

    def basis_elements(self) -> List["FieldElement"]:
        return [self.element(list(self.integral_basis.row(i))) for i in range(self.degree)]

    # linear algebra
    def mul_matrix_of_coords(self, coords: Sequence[Scalar]) -> Matrix:
        """Rows are the power-basis coordinates of a * theta^k."""
        a = FieldElement(self, coords)
        theta = self.gen()
        rows, current = [], a
        for _ in range(self.degree):
            rows.append(list(current.coords))
            current = current * theta
        return Matrix(rows)

    def trace(self, a: "FieldElement") -> Rational:
        return sum((c * t for c, t in zip(a.coords, self._power_traces)), Rational(0))

    def trace_matrix(self) -> Matrix:
        basis = self.basis_elements()
        d = self.degree
        matrix = zeros(d, d)
        for i in range(d):
            for j in range(i, d):
                matrix[i, j] = matrix[j, i] = self.trace(basis[i] * basis[j])
        return matrix

    def integral_coords(self, a: "FieldElement") -> List[Rational]:
        return list(Matrix([list(a.coords)]) * self._basis_inverse)

    def as_subfield(self) -> "SubfieldDescription":
        return SubfieldDescription(self, eye(self.degree).tolist())

    def rational_subfield(self) -> "SubfieldDescription":
        return SubfieldDescription(self, [[1] + [0] * (self.degree - 1)])

    def __repr__(self) -> str:
        return f"NumberField({self.label}, d={self.degree}, sig={self.signature}, disc={self.discriminant})"


class FieldElement:
    """Element of a NumberField, stored by exact power-basis coordinates."""

    __slots__ = ("field", "coords")

    def __init__(self, field: NumberField, coords: Iterable[Scalar]):
        coords = [_rational(c) for c in coords]
        if len(coords) != field.degree:
            raise DimensionMismatch(f"Expected {field.degree} coordinates, got {len(coords)}")
        self.field = field
        self.coords: Tuple[Rational, ...] = tuple(coords)

    @classmethod
    def _from_poly(cls, field: NumberField, poly: Poly) -> "FieldElement":
        coeffs = list(reversed(poly.rem(field._modulus).all_coeffs()))
        coeffs += [0] * (field.degree - len(coeffs))
        return cls(field, coeffs[: field.degree])

    def to_poly(self) -> Poly:
        return Poly(list(reversed(self.coords)), x, domain=QQ)

    def _check(self, other: "FieldElement") -> "FieldElement":
        if not isinstance(other, FieldElement):
            return self.field(other)
        if other.field is not self.field:
            raise FieldMismatch("Elements belong to different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FieldElement(self.field, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.field, [-a for a in self.coords])

    def __sub__(self, other):
        other = self._check(other)
        return FieldElement(self.field, [a - b for a, b in zip(self.coords, other.coords)])

    def __rsub__(self, other):
        return -(self - other)

    def __mul__(self, other):
        other = self._check(other)
        return FieldElement._from_poly(self.field, self.to_poly() * other.to_poly())

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise DivisionByZero("Cannot invert zero")
        return FieldElement._from_poly(self.field, self.to_poly().invert(self.field._modulus))

    def __truediv__(self, other):
        return self * self._check(other).inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result, base = self.field.one(), self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, FieldElement):
            try:
                other = self.field(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.field is other.field and self.coords == other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coords[1:])

    def integral_coords(self) -> List[Rational]:
        return self.field.integral_coords(self)

    def as_strings(self) -> List[str]:
        """Power-basis coordinates as lowest-terms 'p/q' strings."""
        return [str(c) for c in self.coords]

    def evaluate_poly(self, poly: IntPolynomial) -> "FieldElement":
        """Horner evaluation of an integer polynomial at this element."""
        result = self.field.zero()
        for c in reversed(poly.coefficients):
            result = result * self + c
        return result

    def __repr__(self) -> str:
        return f"FieldElement({self.to_poly().as_expr()})"


class SubfieldDescription:
    """A Q-subspace of K closed under multiplication, stored as a reduced row basis."""

    def __init__(self, field: NumberField, rows: Sequence[Sequence[Scalar]]):
        self.field = field
        matrix = Matrix([[_rational(c) for c in row] for row in rows]) if rows else zeros(0, field.degree)
        if matrix.rows:
            reduced, pivots = matrix.rref()
            matrix = reduced[: len(pivots), :]
        self.basis: Matrix = matrix
        self.dim: int = matrix.rows

    def elements(self) -> List[FieldElement]:
        return [self.field.element(list(self.basis.row(i))) for i in range(self.dim)]

    def contains(self, a: FieldElement) -> bool:
        """Exact membership by rank."""
        if a.is_zero():
            return True
        stacked = self.basis.col_join(Matrix([list(a.coords)]))
        return stacked.rank() == self.dim

    def is_contained_in(self, other: "SubfieldDescription") -> bool:
        return all(other.contains(e) for e in self.elements())

    def verify_invariants(self) -> bool:
        """Contains 1, closed under multiplication on basis pairs, dim divides d."""
        if self.field.degree % self.dim:
            return False
        if not self.contains(self.field.one()):
            return False
        basis = self.elements()
        return all(
            self.contains(basis[i] * basis[j])
            for i in range(len(basis))
            for j in range(i, len(basis))
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, SubfieldDescription) and other.field is self.field and self.basis == other.basis

    def __hash__(self) -> int:
        return hash(tuple(self.basis))

    def __repr__(self) -> str:
        return f"SubfieldDescription(dim={self.dim} in {self.field.label})"


# operations

def make_field(
    f: Union[IntPolynomial, Sequence[int]],
    basis: Optional[Sequence[Sequence[Scalar]]] = None,
    assert_irreducible: bool = False,
    label: str = "",
) -> NumberField:
    """
    Build a number field from a monic polynomial and an optional integral basis.

    Args:
        f: Monic defining polynomial (or its ascending coefficient list)
        basis: Rows of rational power-basis coordinates of omega_1..omega_d
        assert_irreducible: Skip the irreducibility check
        label: Display label

    Returns:
        The number field

    Raises:
        NotMonic, ReducibleOrUndecided, BasisRequired, BasisNotIntegral, BasisNotARing
    """
    if not isinstance(f, IntPolynomial):
        f = IntPolynomial(coefficients=list(f))
    if not f.monic or f.degree < 1:
        raise NotMonic(f"Defining polynomial {f} must be monic of degree >= 1")
    if not assert_irreducible and not is_irreducible(f, settings.sieve_primes):
        raise ReducibleOrUndecided(f"{f} is reducible over Q")

    d = f.degree
    if basis is None:
        if not power_basis_is_maximal(f):
            raise BasisRequired(f"Z[theta] is not certified maximal for {f}; supply an integral basis")
        matrix = eye(d)
    else:
        matrix = Matrix([[_rational(c) for c in row] for row in basis])
        if matrix.shape != (d, d):
            raise DimensionMismatch(f"Basis has shape {matrix.shape}, expected {(d, d)}")
        if matrix.det() == 0:
            raise BasisNotARing("Basis matrix is singular")
        if list(matrix.row(0)) != [1] + [0] * (d - 1):
            raise BasisNotARing("First basis element must be 1")

    field = NumberField(f, matrix, label=label)
    _verify_basis(field)
    logger.debug(f"Built {field!r}")
    return field


def _verify_basis(field: NumberField) -> None:
    basis = field.basis_elements()
    for omega in basis:
        charpoly = field.mul_matrix_of_coords(omega.coords).charpoly().all_coeffs()
        if any(not Rational(c).is_integer for c in charpoly):
            raise BasisNotIntegral(f"Basis element {omega} is not an algebraic integer")
    for i in range(len(basis)):
        for j in range(i, len(basis)):
            if not is_integral(basis[i] * basis[j]):
                raise BasisNotARing(f"omega_{i} * omega_{j} leaves the Z-span of the basis")


def rational_field() -> NumberField:
    return make_field([-1, 1], label="Q")


def is_squarefree(m: int) -> bool:
    return all(e == 1 for e in factorint(abs(m)).values())


def quadratic_field(m: int) -> NumberField:
    """
    Q(sqrt(m)) with the classical integral basis.

    Args:
        m: Squarefree integer outside {0, 1}

    Returns:
        Field defined by x^2 - m with basis {1, (1 + sqrt m)/2} or {1, sqrt m}
    """
    if m in (0, 1) or not is_squarefree(m):
        raise NotSquarefree(f"{m} is not a squarefree integer outside {{0, 1}}")
    if m % 4 == 1:
        basis = [[1, 0], [Rational(1, 2), Rational(1, 2)]]
    else:
        basis = [[1, 0], [0, 1]]
    return make_field([-m, 0, 1], basis, assert_irreducible=True, label=f"Q(sqrt({m}))")


def quadratic_discriminant(m: int) -> int:
    return m if m % 4 == 1 else 4 * m


def cyclotomic_field(m: int) -> NumberField:
    """Q(zeta_m) with the power basis of the m-th cyclotomic polynomial."""
    poly = cyclotomic(m)
    if poly.degree == 1:
        return rational_field()
    return make_field(poly, eye(poly.degree).tolist(), assert_irreducible=True, label=f"Q(zeta_{m})")


class _Pair:
    """a + b*eta with a, b in F and eta^2 = -n."""

    __slots__ = ("a", "b", "n")

    def __init__(self, a: FieldElement, b: FieldElement, n: int):
        self.a, self.b, self.n = a, b, n

    def __mul__(self, other: "_Pair") -> "_Pair":
        return _Pair(
            self.a * other.a - self.b * other.b * self.n,
            self.a * other.b + self.b * other.a,
            self.n,
        )

    def coords(self) -> List[Rational]:
        return list(self.a.coords) + list(self.b.coords)


def cm_composite(F: NumberField, n: int) -> NumberField:
    """
    K = F(sqrt(-n)) with the product basis {omega_i, omega_i * xi}.

    Args:
        F: Totally real field with known integral basis
        n: Positive squarefree integer

    Returns:
        The composite field of degree 2N

    Raises:
        FNotTotallyReal, NotSquarefree, DiscriminantsNotCoprime
        InternalInconsistency: If the product basis does not have discriminant Delta_F^2 |Delta_M|^N
    """
    if F.s != 0:
        raise FNotTotallyReal(f"{F.label} has complex places")
    if n <= 0 or not is_squarefree(n):
        raise NotSquarefree(f"{n} must be a positive squarefree integer")
    disc_m = quadratic_discriminant(-n)
    if gcd(F.discriminant, disc_m) != 1:
        raise DiscriminantsNotCoprime(f"gcd({F.discriminant}, {disc_m}) != 1")

    N = F.degree
    zero, one = F.zero(), F.one()
    y = F.gen()
    # xi spans O_M together with 1
    xi = _Pair(F(Rational(1, 2)), F(Rational(1, 2)), n) if (-n) % 4 == 1 else _Pair(zero, one, n)

    k = 1
    while True:
        theta = _Pair(y, F(k), n)
        powers, current = [], _Pair(one, zero, n)
        for _ in range(2 * N + 1):
            powers.append(current.coords())
            current = current * theta
        change = Matrix(powers[: 2 * N])
        if change.det() != 0:
            break
        k += 1

    inverse = change.inv()
    relation = Matrix([powers[2 * N]]) * inverse
    coefficients = [-c for c in relation] + [1]
    if any(not Rational(c).is_integer for c in coefficients):
        raise BasisNotIntegral("Primitive element of the composite is not integral")
    min_poly = IntPolynomial(coefficients=[int(c) for c in coefficients])

    rows = []
    for omega in F.basis_elements():
        rows.append(list(Matrix([_Pair(omega, zero, n).coords()]) * inverse))
    for omega in F.basis_elements():
        rows.append(list(Matrix([(_Pair(omega, zero, n) * xi).coords()]) * inverse))

    label = f"{F.label}(sqrt(-{n}))" if N > 1 else f"Q(sqrt(-{n}))"
    K = make_field(min_poly, rows, assert_irreducible=True, label=label)
    expected = F.discriminant ** 2 * abs(disc_m) ** N
    if abs(K.discriminant) != expected:
        raise InternalInconsistency(f"|disc| {abs(K.discriminant)} differs from Delta_F^2 |Delta_M|^N = {expected}")
    return K


def minimal_polynomial(a: FieldElement) -> IntPolynomial:
    """
    Primitive integer minimal polynomial of a, from the exact kernel of its power matrix.

    Args:
        a: Field element

    Returns:
        Irreducible primitive polynomial with positive leading coefficient
    """
    columns = [a.field.one()]
    while True:
        nxt = columns[-1] * a
        matrix = Matrix([list(c.coords) for c in columns + [nxt]]).T
        kernel = matrix.nullspace()
        if kernel:
            vector = kernel[0]
            break
        columns.append(nxt)
    vector = vector / vector[len(columns)]
    denominator = lcm(*[int(Rational(c).q) for c in vector])
    integers = [int(c * denominator) for c in vector]
    content = 0
    for c in integers:
        content = gcd(content, c)
    return IntPolynomial(coefficients=[c // content for c in integers])


def degree_of(a: FieldElement) -> int:
    return minimal_polynomial(a).degree


def generates(a: FieldElement) -> bool:
    return degree_of(a) == a.field.degree


def is_integral(a: FieldElement) -> bool:
    return all(Rational(c).is_integer for c in a.integral_coords())


def subfield_generated(a: FieldElement) -> SubfieldDescription:
    """Row basis of Q(a) = span{1, a, ..., a^(m-1)}."""
    m = degree_of(a)
    rows, current = [], a.field.one()
    for _ in range(m):
        rows.append(list(current.coords))
        current = current * a
    return SubfieldDescription(a.field, rows)


def intersect_subfields(subfields: Sequence[SubfieldDescription]) -> SubfieldDescription:
    """
    Exact intersection of subspaces via orthogonal complements.

    Args:
        subfields: Nonempty list of subfields of one field

    Returns:
        The intersection
    """
    if not subfields:
        raise ValueError("intersect_subfields needs at least one subfield")
    field = subfields[0].field
    if any(sub.field is not field for sub in subfields):
        raise FieldMismatch("Subfields of different fields")
    complements = []
    for sub in subfields:
        complements.extend(v.T for v in sub.basis.nullspace())
    if not complements:
        return field.as_subfield()
    stacked = Matrix.vstack(*complements)
    return SubfieldDescription(field, [list(v.T) for v in stacked.nullspace()])
