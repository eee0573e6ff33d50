"""Certificate models for intervals and generators."""

from fractions import Fraction
from typing import List, Literal, Optional
from pydantic import BaseModel, Field
from ..utils.intervals import Interval


class IntervalRecord(BaseModel):
    """Machine form of a certified real interval."""

    lower: str = Field(..., description="Lower endpoint, rounded down to 30 decimals")
    upper: str = Field(..., description="Upper endpoint, rounded up to 30 decimals")
    display: str = Field(..., description="Common decimal prefix of both endpoints")
    precision: int = Field(0, description="Working precision in bits (0 for exact values)")

    @classmethod
    def from_interval(cls, interval: Interval, digits: int = 30) -> "IntervalRecord":
        lower, upper = interval.decimal(digits)
        return cls(lower=lower, upper=upper, display=interval.display(digits), precision=interval.precision)

    def to_interval(self) -> Interval:
        return Interval(Fraction(self.lower), Fraction(self.upper), self.precision)

    class Config:
        json_schema_extra = {
            "example": {
                "lower": "1.128379167095512573896158903121",
                "upper": "1.128379167095512573896158903122",
                "display": "1.12837916709551257389615890312…",
                "precision": 128
            }
        }


class GeneratorCertificate(BaseModel):
    """Model certifying an integral generator alpha with H(alpha) below a bound."""

    generator: List[str] = Field(..., description="Power-basis coordinates of alpha")
    minimal_polynomial: List[int] = Field(..., description="Minimal polynomial of alpha, ascending")
    height: IntervalRecord = Field(..., description="Enclosure of H(alpha)")
    bound: IntervalRecord = Field(..., description="Enclosure of c_K or H(mu) c_K")
    branch: Literal["real-place", "quadratic", "xi-generates", "mu-times-xi", "torsion"] = Field(
        ..., description="Construction that produced alpha"
    )
    strict: bool = Field(False, description="Whether H(alpha) < bound is certified strictly")
    place: Optional[int] = Field(None, description="Index of the distinguished place w")
    xi: Optional[List[str]] = Field(None, description="Power-basis coordinates of xi^(w)")
    mu: Optional[List[str]] = Field(None, description="Power-basis coordinates of mu")

    class Config:
        json_schema_extra = {
            "example": {
                "generator": ["0", "1"],
                "minimal_polynomial": [5, 0, 1],
                "height": {"lower": "2.2360679774", "upper": "2.2360679775", "display": "2.236067977…", "precision": 128},
                "bound": {"lower": "3.7712", "upper": "3.7713", "display": "3.771…", "precision": 128},
                "branch": "quadratic",
                "strict": True,
                "place": 0,
                "xi": None,
                "mu": ["0", "1"]
            }
        }
