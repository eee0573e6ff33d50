"""Field descriptor model: the on-disk presentation of a number field."""

from typing import List, Optional
from pydantic import BaseModel, Field, model_validator


class FieldDescriptor(BaseModel):
    """Model describing a number field by its defining polynomial and integral basis."""

    min_poly: List[int] = Field(..., description="Defining polynomial, ascending coefficients")
    integral_basis: Optional[List[List[str]]] = Field(
        None, description="Rows of power-basis coordinates of omega_1..omega_d as 'p/q' strings"
    )
    label: str = Field("", description="Display label")
    assert_irreducible: Optional[bool] = Field(
        None, description="Skip the irreducibility check when the caller vouches for it"
    )

    @model_validator(mode="after")
    def _basis_shape(self) -> "FieldDescriptor":
        if len(self.min_poly) < 2:
            raise ValueError("min_poly must have degree at least 1")
        return self

    @property
    def degree(self) -> int:
        return len(self.min_poly) - 1

    class Config:
        json_schema_extra = {
            "example": {
                "min_poly": [1, 0, 4, 0, 1],
                "integral_basis": [
                    ["1", "0", "0", "0"],
                    ["0", "1", "0", "0"],
                    ["0", "0", "1", "0"],
                    ["0", "0", "0", "1"]
                ],
                "label": "quartic-paper",
                "assert_irreducible": None
            }
        }
