"""Request and response models for the HTTP service.

The CLI shares these models: its local mode calls the service handlers
directly with the same payloads it would otherwise POST.
"""

from __future__ import annotations

from typing import Any, Literal

import numpy as np
from pydantic import BaseModel, Field, field_validator


class MatrixLiteral(BaseModel):
    """Dense complex square matrix as row-major [re, im] pairs."""

    dim: int = Field(ge=1)
    entries: list[tuple[float, float]]

    @field_validator("entries")
    @classmethod
    def _length_matches(cls, v, info):
        dim = info.data.get("dim")
        if dim is not None and len(v) != dim * dim:
            raise ValueError(f"expected {dim * dim} entries for dim {dim}, got {len(v)}")
        return v

    def to_array(self) -> np.ndarray:
        flat = np.array([re + 1j * im for re, im in self.entries], dtype=complex)
        return flat.reshape(self.dim, self.dim)

    @classmethod
    def from_array(cls, m: np.ndarray) -> "MatrixLiteral":
        flat = np.asarray(m, dtype=complex).ravel()
        return cls(dim=int(np.sqrt(flat.size)),
                   entries=[(float(z.real), float(z.imag)) for z in flat])


class AnalyzeRequest(BaseModel):
    descriptor: str | None = None
    matrix: MatrixLiteral | None = None
    dims: list[int] | None = None
    criteria: list[str] | None = None
    seed: int = 0
    restarts: int = Field(default=20, ge=0)
    tol: float = Field(default=1e-10, gt=0)
    cut: str = "12:3"


class CriterionResult(BaseModel):
    criterion: str
    detected: bool
    cut: str | None = None
    omega: float | None = None
    omega_tilde0: float | None = None
    self_overlap: float | None = None
    lhs: float | None = None
    rhs: float | None = None
    min_eigenvalue: float | None = None
    corr_diag_sum: float | None = None
    generator: str | None = None
    meaning: str | None = None


class AnalyzeResponse(BaseModel):
    descriptor: str
    dims: list[int]
    seed: int
    restarts: int
    tol: float
    wall_time_s: float
    results: list[CriterionResult]
    conventions: dict[str, Any]


class ScanRequest(BaseModel):
    family: str
    resolution: int = Field(default=51, ge=2)
    ranges: dict[str, tuple[float, float]] | None = None
    criteria: list[str] | None = None
    seed: int = 0
    restarts: int = Field(default=20, ge=0)
    tol: float = Field(default=1e-10, gt=0)
    beta: float | None = None
    cut: str = "12:3"
    format: Literal["csv", "json"] = "csv"


class ScanResponse(BaseModel):
    family: str
    resolution: int
    criteria: list[str]
    points: int
    elapsed_s: float
    format: Literal["csv", "json"]
    content: str


class ThresholdRequest(BaseModel):
    family: str
    criterion: str
    lo: float = 0.0
    hi: float = 1.0
    tol: float = Field(default=1e-4, gt=0)
    seed: int = 0
    restarts: int = Field(default=20, ge=0)
    cut: str = "12:3"


class ThresholdResponse(BaseModel):
    family: str
    criterion: str
    threshold: float
    tol: float
    lo: float
    hi: float
    cut: str | None = None


class VerifyRequest(BaseModel):
    seed: int = 0
    counts: dict[str, int] | None = None
    corrupt_basis: bool = False


class CheckResultModel(BaseModel):
    name: str
    passed: bool
    max_error: float
    tolerance: float
    count: int
    detail: str = ""


class VerifyResponse(BaseModel):
    seed: int
    passed: bool
    elapsed_s: float
    checks: list[CheckResultModel]
