"""Pydantic schemas for relative-equilibrium reports."""

import io
from typing import Any

import pandas as pd
from pydantic import BaseModel, Field, computed_field, field_validator, model_validator

LINEAR_IDENTITY_TOL = 1e-12


class ResidualReport(BaseModel):
    """Equation-of-motion defects of a candidate relative-equilibrium orbit."""

    per_body_residual: list[float] = Field(..., description="Max-norm defect per body over the sampled times")
    times: list[float] = Field(default_factory=list, description="Sampled times")
    signed_z_defect: list[float] | None = Field(
        None, description="z-component of each body's defect at the last sampled time (hyperboloid orbits)"
    )
    zsum: float | None = Field(None, description="Sum S of the n-gon case")
    term_signs: list[float] | None = Field(None, description="Bracket terms of S (n-gon case)")
    distance_drift: float | None = Field(None, description="Max deviation of pairwise distances along the integrated orbit")
    printed_equation_gap: float | None = Field(
        None, description="Max hyperbolic-norm gap between the printed and canonical half-plane accelerations"
    )

    @field_validator("per_body_residual")
    @classmethod
    def validate_residuals(cls, v: list[float]) -> list[float]:
        if any(r < 0 for r in v):
            raise ValueError("Residuals must be non-negative")
        return v

    @property
    def max_residual(self) -> float:
        return max(self.per_body_residual, default=0.0)


class CollinearSolution(BaseModel):
    """A point of the five-body collinear family with balanced masses."""

    alpha: float
    beta: float
    m: float = Field(..., gt=0, description="Mass of bodies 4 and 5")
    M: float = Field(..., gt=0, description="Mass of the central body 3")
    mu: float = Field(..., gt=0, description="Mass of bodies 1 and 2")
    omega_sq: float
    f1: float
    f2: float
    f3: float
    system: str = Field("geodesic", description="Coefficient system the masses were balanced with")
    residual_max: float | None = Field(None, description="Max residual from verification, when run")

    @model_validator(mode="after")
    def check_balance(self) -> "CollinearSolution":
        terms = (self.f1 * self.M, self.f2 * self.m, self.f3 * self.mu)
        scale = max(1.0, *(abs(t) for t in terms))
        if abs(sum(terms)) > LINEAR_IDENTITY_TOL * scale:
            raise ValueError(f"Masses do not balance: f1·M + f2·m + f3·μ = {sum(terms)!r}")
        return self

    @property
    def masses(self) -> list[float]:
        """Body masses in order 1..5: μ, μ, M, m, m."""
        return [self.mu, self.mu, self.M, self.m, self.m]


class ScanCell(BaseModel):
    n: int
    r: float
    omega: float
    t: float
    S: float
    max_term_gap: float = Field(..., description="max_j (term_j − (z_j − z_1)); negative when the chain holds")
    max_z_gap: float = Field(..., description="max_j (z_j − z_1)")


class ScanReport(BaseModel):
    """Result of the hyperbolic n-gon non-existence scan."""

    grid: dict[str, Any]
    max_S: float
    min_margin: float
    max_S_by_n: dict[int, float]
    chain_holds: bool = Field(..., description="term_j < z_j − z_1 ≤ 0 on every cell, strict where ωt > 0")
    printed_product_gap: float = Field(
        ..., description="Max gap between the displayed cos²-form of q_1⊙q_j and the coordinate value"
    )
    cells: list[ScanCell]

    @model_validator(mode="after")
    def check_max(self) -> "ScanReport":
        if self.cells and self.max_S != max(c.S for c in self.cells):
            raise ValueError("max_S must equal the maximum over cells")
        return self

    @computed_field  # type: ignore[prop-decorator]
    @property
    def certified(self) -> bool:
        return self.max_S < 0 and self.chain_holds


class RegionCell(BaseModel):
    alpha: float
    beta: float
    f1: float
    f2: float
    f3: float
    omega_sq_at_solution: float | None = None


class RegionMap(BaseModel):
    """Sign map of f2 over the admissible (α, β) triangle."""

    alpha_steps: int
    beta_steps: int
    system: str
    cells: list[RegionCell]

    @property
    def negative_count(self) -> int:
        return sum(1 for c in self.cells if c.f2 < 0)

    @property
    def positive_count(self) -> int:
        return sum(1 for c in self.cells if c.f2 > 0)

    def to_frame(self) -> pd.DataFrame:
        columns = ["alpha", "beta", "f1", "f2", "f3", "omega_sq_at_solution"]
        return pd.DataFrame([c.model_dump() for c in self.cells], columns=columns)

    def to_csv(self, float_format: str = "%.17g") -> str:
        buffer = io.StringIO()
        self.to_frame().to_csv(buffer, index=False, float_format=float_format, na_rep="")
        return buffer.getvalue()


class BoundaryReport(BaseModel):
    """f2 on the line β = π/2 − α against the closed form P/Q."""

    alpha: float
    limit_f2: float = Field(..., description="f2(α, π/2 − α − ε) extrapolated to ε → 0")
    leading_coefficient: float = Field(..., description="lim f2 / cos²(α + β) at the line")
    P: float
    Q: float
    closed_form: float = Field(..., description="P / Q")
    gap: float
    agrees: bool


class PbarRoot(BaseModel):
    x0: float
    alpha1: float
    pbar_at_x0: float


class SystemComparison(BaseModel):
    """ω₁², ω₂² under both coefficient systems for one (α, β, masses)."""

    alpha: float
    beta: float
    masses: list[float]
    printed: tuple[float, float]
    geodesic: tuple[float, float]
    printed_solution_residual: float | None = Field(
        None, description="Canonical residual of the printed-system balance, when it has one"
    )


class CheckResult(BaseModel):
    """Outcome of one certificate check."""

    check_name: str = Field(..., description="Check identifier")
    check_description: str | None = Field(None, description="Human-readable description")
    status: str = Field(..., description="passed, failed or warning")
    value: float | None = Field(None, description="Measured quantity")
    threshold: float | None = Field(None, description="Bound the quantity was held to")
    message: str | None = Field(None, description="Details, including reported findings")

    @field_validator("status")
    @classmethod
    def validate_status(cls, v: str) -> str:
        if v not in {"passed", "failed", "warning"}:
            raise ValueError("Status must be one of: passed, failed, warning")
        return v
