"""Report models for structure analysis and command output."""

from typing import Any, Dict, List, Optional
from pydantic import BaseModel, Field
from .certificate import GeneratorCertificate, IntervalRecord
from .descriptor import FieldDescriptor


class PlaceRecord(BaseModel):
    """Per-place data: xi^(w), the subfield it generates and the conjugation at w."""

    index: int = Field(..., description="Place index in canonical order")
    kind: str = Field(..., description="'real' or 'complex'")
    xi: Optional[List[str]] = Field(None, description="Power-basis coordinates of xi^(w)")
    xi_height: Optional[IntervalRecord] = Field(None, description="H(xi^(w)) = |xi^(w)|_w")
    subfield_dim: Optional[int] = Field(None, description="Dimension of k^(w) = Q(xi^(w))")
    full: Optional[bool] = Field(None, description="Whether xi^(w) generates K")
    real_at_w: Optional[bool] = Field(None, description="Whether every basis element of k^(w) is real at w")
    fixed_by_conjugation: Optional[bool] = Field(None, description="Whether tau_w fixes k^(w) pointwise")
    conjugation: Optional[List[str]] = Field(None, description="Image of theta under tau_w")
    recognition_error: Optional[str] = Field(None, description="Why conjugation at w is not an automorphism")


class StructureReport(BaseModel):
    """Model summarizing the subfield and Galois structure of a field."""

    places: List[PlaceRecord] = Field(default_factory=list, description="Per-place records")
    subfield_basis: List[List[str]] = Field(..., description="Row basis of the maximal totally real subfield F")
    subfield_dim: int = Field(..., description="Dimension of F")
    totally_real: bool = Field(..., description="Every basis element of F is totally real")
    intersection_dim: Optional[int] = Field(None, description="Dimension of the intersection of all k^(w)")
    intersection_totally_real: Optional[bool] = Field(
        None, description="Whether the intersection of all k^(w) is totally real (then it equals F)"
    )
    matches_fixed_field: bool = Field(..., description="Intersection equals the fixed field of all tau_w")
    galois: bool = Field(..., description="Whether K over F is Galois")
    galois_group_order: int = Field(..., description="Order of the group generated by the recognized tau_w")
    group: Dict[str, Any] = Field(default_factory=dict, description="Cayley graph statistics of that group")
    cayley_graph: Optional[Dict[str, Any]] = Field(None, description="Nodes and edges of the Cayley graph")
    automorphism_generators: List[List[str]] = Field(default_factory=list, description="Images of theta")
    torsion_order: int = Field(..., description="Order 2 q_K of the torsion subgroup")
    torsion_generator: List[str] = Field(..., description="Generating root of unity")
    q_divides_discriminant: bool = Field(..., description="Whether q_K divides Delta_K")
    cm: bool = Field(..., description="Whether K is a CM field")
    height_cap: str = Field("1", description="Cap used for the small-height check")
    elements_checked: int = Field(0, description="Integral elements with H <= cap examined")
    all_small_in_subfield: bool = Field(True, description="Every checked element lies in the subfield")
    counterexample: Optional[List[str]] = Field(None, description="An element with H <= cap outside the subfield")

    class Config:
        json_schema_extra = {
            "example": {
                "places": [{"index": 0, "kind": "complex", "subfield_dim": 2, "full": False}],
                "subfield_basis": [["1", "0", "0", "0"], ["0", "0", "1", "0"]],
                "subfield_dim": 2,
                "totally_real": True,
                "intersection_dim": 2,
                "intersection_totally_real": True,
                "matches_fixed_field": True,
                "galois": True,
                "galois_group_order": 2,
                "automorphism_generators": [["0", "-1", "0", "0"]],
                "torsion_order": 2,
                "torsion_generator": ["-1", "0", "0", "0"],
                "q_divides_discriminant": True,
                "cm": True,
                "height_cap": "1",
                "elements_checked": 2,
                "all_small_in_subfield": True,
                "counterexample": None
            }
        }


class FieldSummary(BaseModel):
    """Field invariants printed with every report."""

    label: str = Field(..., description="Display label")
    min_poly: List[int] = Field(..., description="Defining polynomial, ascending")
    degree: int = Field(..., description="d = [K : Q]")
    signature: List[int] = Field(..., description="(r, s)")
    discriminant: int = Field(..., description="Delta_K")
    c_K: IntervalRecord = Field(..., description="(2/pi)^(s/d) |Delta_K|^(1/2d)")


class Report(BaseModel):
    """Model for the machine-readable output of one command."""

    command: str = Field(..., description="Subcommand that produced the report")
    field: Optional[FieldSummary] = Field(None, description="Invariants of the field")
    descriptor: Optional[FieldDescriptor] = Field(None, description="Descriptor of the field")
    results: Dict[str, Any] = Field(default_factory=dict, description="Operation results")
    certificates: List[GeneratorCertificate] = Field(default_factory=list, description="Generator certificates")
    structure: Optional[StructureReport] = Field(None, description="Structure analysis")
    rows: List[Dict[str, Any]] = Field(default_factory=list, description="Tabular rows (sweeps)")
    precision: int = Field(128, description="Starting precision in bits")
    elapsed_seconds: float = Field(0.0, description="Wall-clock time")
    exit_code: int = Field(0, description="Process exit code")
