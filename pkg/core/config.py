import re
from typing import List, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from sympy import isprime

from .types import OutputFormat

FIELD_PATTERN = re.compile(r"^(q|fp:(\d+))$")


def check_field_name(value: str) -> str:
    """Accepts 'q' or 'fp:<p>' with p prime."""
    match = FIELD_PATTERN.match(value.strip().lower())
    if not match:
        raise ValueError("field must be 'q' or 'fp:<prime>'")
    if match.group(2) is not None and not isprime(int(match.group(2))):
        raise ValueError(f"{match.group(2)} is not prime")
    return match.group(0)


class FanSpec(BaseModel):
    """Fan file model, using Pydantic for validation."""

    model_config = ConfigDict(extra="forbid")

    lattice_rank: int = Field(..., gt=0)
    rays: List[List[int]] = Field(..., min_length=1)
    max_cones: List[List[int]] = Field(..., min_length=1)

    @model_validator(mode="after")
    def check_shapes(self):
        """Ensures every ray has lattice_rank coordinates and every cone index names a ray."""
        for index, ray in enumerate(self.rays):
            if len(ray) != self.lattice_rank:
                raise ValueError(f"ray {index} has {len(ray)} coordinates, expected {self.lattice_rank}")
        for index, cone in enumerate(self.max_cones):
            if not cone:
                raise ValueError(f"cone {index} is empty")
            if len(set(cone)) != len(cone):
                raise ValueError(f"cone {index} repeats a ray")
            for ray in cone:
                if not 0 <= ray < len(self.rays):
                    raise ValueError(f"cone {index} refers to missing ray {ray}")
        return self


class AlgebraSpec(BaseModel):
    """Algebra file model: structure constants with mu(e_i, e_j) = sum_k c[i][j][k] e_k."""

    model_config = ConfigDict(extra="forbid")

    dim: int = Field(..., gt=0)
    unit: List[Union[int, str]]
    structure_constants: List[List[List[Union[int, str]]]]
    field: Optional[str] = None

    @field_validator("field")
    @classmethod
    def check_field(cls, value):
        return None if value is None else check_field_name(value)

    @model_validator(mode="after")
    def check_shapes(self):
        """Ensures the unit and the structure constants have the advertised dimension."""
        d = self.dim
        if len(self.unit) != d:
            raise ValueError(f"unit has {len(self.unit)} entries, expected {d}")
        if len(self.structure_constants) != d:
            raise ValueError(f"structure_constants has {len(self.structure_constants)} rows, expected {d}")
        for i, row in enumerate(self.structure_constants):
            if len(row) != d or any(len(entry) != d for entry in row):
                raise ValueError(f"structure_constants[{i}] is not a {d}x{d} block")
        return self


class RunConfig(BaseModel):
    """Per-invocation settings assembled from the command line and settings.json."""

    field: str = "q"
    output_format: OutputFormat = OutputFormat.TEXT
    seed: int = Field(0, ge=0)
    svg_path: Optional[str] = None
    sampled_denominator: int = Field(60, ge=2)

    @field_validator("field")
    @classmethod
    def check_field(cls, value):
        return check_field_name(value)

    @property
    def prime(self) -> int:
        """The field characteristic, 0 for the rationals."""
        return 0 if self.field == "q" else int(self.field.split(":")[1])


class MatrixSpec(BaseModel):
    """Matrix file model: rows of exact scalars, for the linear maps passed to rescale."""

    model_config = ConfigDict(extra="forbid")

    rows: List[List[Union[int, str]]] = Field(..., min_length=1)

    @model_validator(mode="after")
    def check_shape(self):
        widths = {len(row) for row in self.rows}
        if len(widths) != 1 or 0 in widths:
            raise ValueError("rows must be non-empty and of equal length")
        return self
