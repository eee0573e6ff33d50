"""Integer polynomial utilities: Sturm counts, irreducibility sieve, Dedekind test, Mahler measure."""

from typing import Dict, List, Optional, Set
from pydantic import BaseModel, ConfigDict, Field, field_validator
from loguru import logger
from sympy import Poly, Symbol, ZZ, cyclotomic_poly, factorint, nextprime, sturm
from flint import arb, fmpz_poly
from .intervals import arb_max

x = Symbol("x")


class IntPolynomial(BaseModel):
    """Polynomial with integer coefficients, stored in ascending degree."""

    model_config = ConfigDict(frozen=True)

    coefficients: List[int] = Field(..., description="Coefficients c_0, c_1, ..., c_n")

    @field_validator("coefficients")
    @classmethod
    def _strip_leading_zeros(cls, coefficients: List[int]) -> List[int]:
        coefficients = [int(c) for c in coefficients]
        while len(coefficients) > 1 and coefficients[-1] == 0:
            coefficients.pop()
        if not coefficients or coefficients[-1] == 0:
            raise ValueError("Leading coefficient must be nonzero")
        return coefficients

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def leading(self) -> int:
        return self.coefficients[-1]

    @property
    def monic(self) -> bool:
        return self.leading == 1

    def to_sympy(self) -> Poly:
        return Poly(list(reversed(self.coefficients)), x, domain=ZZ)

    def to_flint(self) -> fmpz_poly:
        return fmpz_poly(self.coefficients)

    @classmethod
    def from_sympy(cls, poly: Poly) -> "IntPolynomial":
        return cls(coefficients=[int(c) for c in reversed(poly.all_coeffs())])

    def discriminant(self) -> int:
        if self.degree == 1:
            return 1
        return int(self.to_sympy().discriminant())

    def __str__(self) -> str:
        return str(self.to_sympy().as_expr())


def cyclotomic(m: int) -> IntPolynomial:
    """The m-th cyclotomic polynomial."""
    return IntPolynomial.from_sympy(cyclotomic_poly(m, x, polys=True))


def _sign_changes(values: List[int]) -> int:
    """Count sign changes in a sequence, ignoring zeros."""
    nonzero = [v for v in values if v != 0]
    return sum(1 for a, b in zip(nonzero, nonzero[1:]) if (a > 0) != (b > 0))


def count_real_roots(poly: IntPolynomial) -> int:
    """
    Number of distinct real roots, by a Sturm sequence evaluated at -oo and +oo.

    Args:
        poly: Integer polynomial

    Returns:
        Exact count of distinct real roots
    """
    if poly.degree == 0:
        return 0
    sequence = sturm(poly.to_sympy())
    at_plus = [1 if p.LC().is_positive else -1 for p in sequence]
    at_minus = [s * (-1) ** p.degree() for s, p in zip(at_plus, sequence)]
    return _sign_changes(at_minus) - _sign_changes(at_plus)


def _factor_degrees_mod(poly: IntPolynomial, p: int) -> List[int]:
    reduced = Poly(poly.to_sympy().as_expr(), x, modulus=p)
    _, factors = reduced.factor_list()
    degrees = []
    for factor, exponent in factors:
        degrees.extend([factor.degree()] * exponent)
    return degrees


def _subset_sums(degrees: List[int]) -> Set[int]:
    sums = {0}
    for deg in degrees:
        sums |= {s + deg for s in sums}
    return sums


def sieve_irreducible(poly: IntPolynomial, n_primes: int = 25) -> Optional[bool]:
    """
    Factor-pattern sieve over the first primes not dividing the discriminant.

    Returns:
        True when the patterns exclude every proper factorization, None otherwise
    """
    d = poly.degree
    if d <= 1:
        return True
    disc = poly.discriminant()
    if disc == 0:
        return None
    possible = set(range(1, d))
    p, used = 1, 0
    while used < n_primes and possible:
        p = nextprime(p)
        if disc % p == 0 or poly.leading % p == 0:
            continue
        used += 1
        possible &= _subset_sums(_factor_degrees_mod(poly, p))
    if not possible:
        logger.debug(f"Irreducibility of {poly} certified by the sieve after {used} primes")
        return True
    return None


def is_irreducible(poly: IntPolynomial, n_primes: int = 25) -> bool:
    """Sieve first; fall back to exact factorization over Z when the sieve is inconclusive."""
    if sieve_irreducible(poly, n_primes):
        return True
    logger.debug(f"Sieve inconclusive for {poly}; factoring over Z")
    return bool(poly.to_sympy().is_irreducible)


def dedekind_is_p_maximal(poly: IntPolynomial, p: int) -> bool:
    """
    Dedekind's criterion: is Z[x]/(f) maximal at the prime p.

    Args:
        poly: Monic irreducible integer polynomial
        p: Prime

    Returns:
        True iff p does not divide the index [O_K : Z[theta]]
    """
    f = poly.to_sympy()
    reduced = Poly(f.as_expr(), x, modulus=p)
    _, factors = reduced.factor_list()
    g = Poly(1, x, modulus=p)
    h = Poly(1, x, modulus=p)
    for factor, exponent in factors:
        g = g * factor
        h = h * factor ** (exponent - 1)
    g_lift = Poly(g.as_expr(), x, domain=ZZ)
    h_lift = Poly(h.as_expr(), x, domain=ZZ)
    remainder = (g_lift * h_lift - f).exquo_ground(p)
    remainder_p = Poly(remainder.as_expr(), x, modulus=p)
    if remainder_p.is_zero:
        return g.degree() == 0 or h.degree() == 0
    common = remainder_p.gcd(g).gcd(h)
    return common.degree() <= 0


def power_basis_is_maximal(poly: IntPolynomial) -> bool:
    """True if Z[theta] is the maximal order: squarefree discriminant or Dedekind at every p^2 | disc."""
    disc = poly.discriminant()
    if disc in (1, -1):
        return True
    exponents: Dict[int, int] = factorint(abs(disc))
    for p, e in exponents.items():
        if e >= 2 and not dedekind_is_p_maximal(poly, p):
            logger.debug(f"Z[theta] is not {p}-maximal for {poly}")
            return False
    return True


def root_modulus_bound(poly: IntPolynomial) -> int:
    """Cauchy bound: every complex root has modulus at most 1 + max |c_i / c_n|."""
    lead = abs(poly.leading)
    top = max((abs(c) for c in poly.coefficients[:-1]), default=0)
    return 1 + -(-top // lead)


def mahler_measure(poly: IntPolynomial) -> arb:
    """
    Ball containing M(f) = |lead| * prod max(1, |root|) at the current precision.

    Args:
        poly: Integer polynomial

    Returns:
        arb enclosure of the Mahler measure
    """
    measure = arb(abs(poly.leading))
    for root, multiplicity in poly.to_flint().complex_roots():
        measure *= arb_max(arb(1), abs(root)) ** multiplicity
    return measure
