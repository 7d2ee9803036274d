"""Pydantic schemas for command-line configuration files."""

from typing import Literal

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from dynamics.state import State, StateH2, StateL2
from hypergeom.minkowski import minkowski_dot, normalize_to_sheet, project_tangent

POSITION_TOL = 1e-9


class BodyConfig(BaseModel):
    """One body: mass, position and velocity in the declared model's coordinates."""

    mass: float = Field(..., gt=0, description="Body mass")
    position: list[float] = Field(..., description="3-vector (L2) or [re, im] (H2)")
    velocity: list[float] = Field(..., description="3-vector (L2) or [re, im] (H2)")

    @field_validator("position", "velocity")
    @classmethod
    def validate_finite(cls, v: list[float]) -> list[float]:
        if not all(np.isfinite(v)):
            raise ValueError("Coordinates must be finite")
        return v


class IntegratorConfig(BaseModel):
    dt: float = Field(..., gt=0, description="Requested step size")
    t_end: float = Field(..., gt=0, description="Final time")


class RunConfig(BaseModel):
    """Initial state for ``simulate``."""

    model: Literal["L2", "H2"] = Field(..., description="Coordinate model of positions and velocities")
    bodies: list[BodyConfig] = Field(..., min_length=1)
    integrator: IntegratorConfig | None = None

    @model_validator(mode="after")
    def check_positions(self) -> "RunConfig":
        width = 3 if self.model == "L2" else 2
        for k, body in enumerate(self.bodies):
            if len(body.position) != width or len(body.velocity) != width:
                raise ValueError(f"Body {k}: {self.model} positions and velocities need {width} components")
            if self.model == "L2":
                q = np.array(body.position)
                defect = abs(minkowski_dot(q, q) + 1.0)
                if defect > POSITION_TOL * max(1.0, q[2] * q[2]) or q[2] <= 0.0:
                    raise ValueError(f"Body {k}: position is not on the upper sheet (|q⊙q + 1| = {defect:.3e})")
            elif body.position[1] <= 0.0:
                raise ValueError(f"Body {k}: position must have positive imaginary part")
        return self

    def to_state(self) -> State:
        """Build the state, snapping positions to the sheet and projecting velocities to the tangent plane."""
        masses = np.array([b.mass for b in self.bodies])
        if self.model == "H2":
            W = np.array([complex(*b.position) for b in self.bodies])
            Wd = np.array([complex(*b.velocity) for b in self.bodies])
            return StateH2(masses, W, Wd)
        Q = normalize_to_sheet(np.array([b.position for b in self.bodies]))
        V = project_tangent(Q, np.array([b.velocity for b in self.bodies]))
        return StateL2(masses, Q, V)
