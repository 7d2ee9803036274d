"""Minkowski space ℝ^{2,1} and the Weierstrass (hyperboloid) model of the hyperbolic plane.

Points of the model are the upper sheet of x² + y² − z² = −1. All functions
accept either the dataclass types below or plain arrays whose last axis has
length 3, so the dynamics layer can work on (n, 3) position arrays directly.
"""

from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from core.config import settings
from core.errors import DomainError, GeometryError
from core.logging import get_logger

logger = get_logger(__name__)

# Lorentz metric, signature (+, +, −)
J = np.diag([1.0, 1.0, -1.0])
APEX = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class MinkowskiVec:
    """A vector of ℝ^{2,1}."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        if not np.all(np.isfinite([self.x, self.y, self.z])):
            raise GeometryError(f"Minkowski vector has non-finite components: {self}")

    @classmethod
    def from_array(cls, a: ArrayLike) -> "MinkowskiVec":
        x, y, z = (float(c) for c in np.asarray(a, dtype=float).reshape(3))
        return cls(x, y, z)

    def as_array(self) -> NDArray[np.float64]:
        return np.array([self.x, self.y, self.z])


@dataclass(frozen=True)
class HyperboloidPoint:
    """A point on the upper sheet of the hyperboloid."""

    v: MinkowskiVec

    def __post_init__(self) -> None:
        q = self.v.as_array()
        defect = abs(minkowski_dot(q, q) + 1.0)
        if defect > settings.CONSTRAINT_TOL * max(1.0, q[2] * q[2]) or q[2] < 1.0 - settings.CONSTRAINT_TOL:
            raise GeometryError(
                f"Point {tuple(q)} is not on the upper sheet (|q⊙q + 1| = {defect:.3e})"
            )

    @classmethod
    def from_array(cls, a: ArrayLike) -> "HyperboloidPoint":
        return cls(MinkowskiVec.from_array(a))

    @classmethod
    def from_xy(cls, x: float, y: float) -> "HyperboloidPoint":
        """Lift (x, y) to the upper sheet."""
        return cls(MinkowskiVec(x, y, float(np.sqrt(1.0 + x * x + y * y))))

    def as_array(self) -> NDArray[np.float64]:
        return self.v.as_array()


@dataclass(frozen=True)
class TangentVec:
    """A velocity vector attached to a hyperboloid point."""

    base: HyperboloidPoint
    v: MinkowskiVec

    def __post_init__(self) -> None:
        q = self.base.as_array()
        w = self.v.as_array()
        scale = max(1.0, float(np.linalg.norm(q)) * float(np.linalg.norm(w)))
        if abs(minkowski_dot(q, w)) > settings.TANGENCY_TOL * scale:
            raise GeometryError(f"Vector {tuple(w)} is not tangent at {tuple(q)}")

    def as_array(self) -> NDArray[np.float64]:
        return self.v.as_array()


VecLike = Union[MinkowskiVec, HyperboloidPoint, TangentVec, ArrayLike]


def as_coords(a: VecLike) -> NDArray[np.float64]:
    """Coordinates of a model object or array, last axis of length 3."""
    if isinstance(a, (MinkowskiVec, HyperboloidPoint, TangentVec)):
        return a.as_array()
    arr = np.asarray(a, dtype=float)
    if arr.shape[-1:] != (3,):
        raise GeometryError(f"Expected a trailing axis of length 3, got shape {arr.shape}")
    return arr


def minkowski_dot(a: VecLike, b: VecLike) -> float | NDArray[np.float64]:
    """Lorentz product a_x b_x + a_y b_y − a_z b_z, broadcast over leading axes."""
    u = as_coords(a)
    w = as_coords(b)
    result = u[..., 0] * w[..., 0] + u[..., 1] * w[..., 1] - u[..., 2] * w[..., 2]
    if np.ndim(result) == 0:
        return float(result)
    return result


def cosh_dist_minus_one(p: VecLike, q: VecLike) -> float | NDArray[np.float64]:
    """cosh d(p, q) − 1, accurate for nearby points.

    Uses −p⊙q − 1 = ½ (p − q)⊙(p − q) when the points are close, which avoids
    cancellation between two large numbers.
    """
    a = as_coords(p)
    b = as_coords(q)
    c = -np.asarray(minkowski_dot(a, b))
    diff = a - b
    near = 0.5 * np.asarray(minkowski_dot(diff, diff))
    result = np.where(c <= 2.0, near, c - 1.0)
    if np.ndim(result) == 0:
        return float(result)
    return result


def dist_hyperboloid(p: VecLike, q: VecLike) -> float | NDArray[np.float64]:
    """Hyperbolic distance arccosh(−p⊙q).

    Raises:
        DomainError: if −p⊙q falls below 1 by more than the clamp tolerance.
    """
    cm1 = np.asarray(cosh_dist_minus_one(p, q))
    tol = settings.DISTANCE_CLAMP_TOL * np.maximum(1.0, cm1 + 1.0)
    if np.any(cm1 < -tol):
        logger.error("Lorentz product out of range", cosh_minus_one=np.min(cm1))
        raise DomainError(f"−p⊙q = {1.0 + float(np.min(cm1))!r} is below 1; points are not on the hyperboloid")
    cm1 = np.maximum(cm1, 0.0)
    # 2·asinh(√(½(c−1))) near the diagonal, arccosh(c) elsewhere
    result = np.where(cm1 <= 1.0, 2.0 * np.arcsinh(np.sqrt(0.5 * cm1)), np.arccosh(cm1 + 1.0))
    if np.ndim(result) == 0:
        return float(result)
    return result


def project_tangent(base: VecLike, v: VecLike) -> NDArray[np.float64]:
    """Orthogonal projection of v onto the tangent plane at base."""
    q = as_coords(base)
    w = as_coords(v)
    return w + np.asarray(minkowski_dot(q, w))[..., None] * q


def normalize_to_sheet(q: VecLike) -> NDArray[np.float64]:
    """Rescale q onto the hyperboloid, q / √(−q⊙q)."""
    a = as_coords(q)
    return a / np.sqrt(-np.asarray(minkowski_dot(a, a)))[..., None]
