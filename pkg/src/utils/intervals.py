"""Certified interval helpers on top of flint arb balls."""

import threading
from contextlib import contextmanager
from fractions import Fraction
from typing import Callable, Iterator, Optional, TypeVar, Union
from loguru import logger
from flint import arb, ctx
from .errors import PrecisionExhausted, Undecided
from .settings import settings

T = TypeVar("T")
Rational = Union[int, Fraction]

_PRECISION_LOCK = threading.RLock()


@contextmanager
def working_precision(bits: int) -> Iterator[int]:
    """Run a block with flint's global working precision set to ``bits``."""
    with _PRECISION_LOCK:
        saved = ctx.prec
        ctx.prec = bits
        try:
            yield bits
        finally:
            ctx.prec = saved


def precision_ladder(start: Optional[int] = None, cap: Optional[int] = None) -> Iterator[int]:
    """Yield 128, 256, 512, ... (from ``start``) up to the hard cap."""
    bits = max(64, start or settings.precision)
    cap = cap or settings.precision_cap
    while bits <= cap:
        yield bits
        bits *= 2


def escalate(compute: Callable[[int], T], start: Optional[int] = None, what: str = "computation") -> T:
    """
    Run ``compute(bits)`` along the precision ladder until it stops raising Undecided.

    Args:
        compute: Callable receiving the working precision in bits
        start: First rung of the ladder
        what: Label used in log and error messages

    Returns:
        Whatever ``compute`` returns at the first decisive precision

    Raises:
        PrecisionExhausted: If the cap is reached without a decision
    """
    last: Optional[Undecided] = None
    for bits in precision_ladder(start):
        try:
            with working_precision(bits):
                return compute(bits)
        except Undecided as exc:
            last = exc
            logger.debug(f"{what}: undecided at {bits} bits ({exc}); escalating")
    raise PrecisionExhausted(f"{what}: no decision below the precision cap ({last})")


def arb_to_fraction(x: arb) -> Fraction:
    """Exact value of an exact arb (midpoints and radii are exact)."""
    mantissa, exponent = x.man_exp()
    mantissa, exponent = int(mantissa), int(exponent)
    if exponent >= 0:
        return Fraction(mantissa * (1 << exponent))
    return Fraction(mantissa, 1 << (-exponent))


def arb_endpoints(x: arb):
    """Exact (lower, upper) endpoints of a ball."""
    mid = arb_to_fraction(x.mid())
    rad = arb_to_fraction(x.rad())
    return mid - rad, mid + rad


def fraction_to_arb(value: Rational) -> arb:
    """Ball containing a rational number."""
    value = Fraction(value)
    if value.denominator == 1:
        return arb(value.numerator)
    return arb(value.numerator) / arb(value.denominator)


def arb_max(a: arb, b: arb) -> arb:
    """Enclosure of max(a, b) via (a + b + |a - b|) / 2."""
    return (a + b + abs(a - b)) / 2


class Interval:
    """Closed real interval with exact rational endpoints."""

    __slots__ = ("lower", "upper", "precision")

    def __init__(self, lower: Rational, upper: Rational, precision: int = 0):
        lower, upper = Fraction(lower), Fraction(upper)
        if lower > upper:
            raise ValueError(f"Empty interval [{lower}, {upper}]")
        self.lower = lower
        self.upper = upper
        self.precision = precision

    @classmethod
    def from_arb(cls, ball: arb, precision: Optional[int] = None) -> "Interval":
        lower, upper = arb_endpoints(ball)
        return cls(lower, upper, precision if precision is not None else ctx.prec)

    @classmethod
    def exact(cls, value: Rational) -> "Interval":
        return cls(value, value, 0)

    def to_arb(self) -> arb:
        mid = (self.lower + self.upper) / 2
        half = (self.upper - self.lower) / 2
        ball = fraction_to_arb(mid)
        if half:
            ball = ball + fraction_to_arb(half) * arb(0, 1)
        return ball

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def mid(self) -> float:
        return float((self.lower + self.upper) / 2)

    def is_exact(self) -> bool:
        return self.lower == self.upper

    def contains(self, value: Union[Rational, "Interval"]) -> bool:
        if isinstance(value, Interval):
            return self.lower <= value.lower and value.upper <= self.upper
        return self.lower <= Fraction(value) <= self.upper

    def overlaps(self, other: "Interval") -> bool:
        return not (self.upper < other.lower or other.upper < self.lower)

    def less_than(self, other: Union[Rational, "Interval"]) -> bool:
        """Certified strict inequality; False means 'not certified', not 'greater'."""
        other_lower = other.lower if isinstance(other, Interval) else Fraction(other)
        return self.upper < other_lower

    def greater_than(self, other: Union[Rational, "Interval"]) -> bool:
        other_upper = other.upper if isinstance(other, Interval) else Fraction(other)
        return self.lower > other_upper

    def decide_less(self, other: Union[Rational, "Interval"]) -> bool:
        """Decide self < other, raising Undecided when the intervals overlap."""
        if self.less_than(other):
            return True
        if isinstance(other, Interval):
            if self.lower >= other.upper:
                return False
        elif self.lower >= Fraction(other):
            return False
        raise Undecided(f"cannot order {self} against {other}")

    def decimal(self, digits: int = 30) -> tuple:
        """Outward-rounded decimal endpoints as strings."""
        scale = 10 ** digits
        low = (self.lower * scale).__floor__()
        high = (self.upper * scale).__ceil__()
        return _decimal_string(low, digits), _decimal_string(high, digits)

    def display(self, digits: int = 30) -> str:
        """Longest common decimal prefix of both endpoints, with an uncertainty marker."""
        low, high = self.decimal(digits)
        if low == high:
            return low.rstrip("0").rstrip(".") if "." in low else low
        prefix = []
        for a, b in zip(low, high):
            if a != b:
                break
            prefix.append(a)
        shown = "".join(prefix)
        if not shown or shown in ("-", "0", "-0"):
            return f"[{self.mid:.6g} ± {float(self.width) / 2:.1e}]"
        return f"{shown.rstrip('.')}…"

    def __repr__(self) -> str:
        return f"Interval({self.display(20)})"


def _decimal_string(scaled: int, digits: int) -> str:
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    whole, frac = divmod(scaled, 10 ** digits)
    return f"{sign}{whole}.{frac:0{digits}d}"
