"""Isometries of the hyperboloid model: the orthochronous Lorentz group SO⁺(2,1)."""

from dataclasses import dataclass, field

import numpy as np
from numpy.typing import ArrayLike, NDArray

from core.errors import GeometryError
from hypergeom.minkowski import J, HyperboloidPoint, MinkowskiVec, TangentVec, as_coords

LORENTZ_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class LorentzTransform:
    """A 3×3 matrix preserving ⊙, with det 1 and m[2][2] > 0."""

    m: NDArray[np.float64] = field(repr=False)

    def __post_init__(self) -> None:
        m = np.array(self.m, dtype=float)
        if m.shape != (3, 3) or not np.all(np.isfinite(m)):
            raise GeometryError(f"Lorentz matrix must be a finite 3×3 array, got shape {m.shape}")
        scale = max(1.0, float(np.max(np.abs(m))) ** 2)
        if np.max(np.abs(m.T @ J @ m - J)) > LORENTZ_TOL * scale:
            raise GeometryError("Matrix does not preserve the Lorentz product")
        if abs(np.linalg.det(m) - 1.0) > LORENTZ_TOL * scale or m[2, 2] <= 0.0:
            raise GeometryError("Matrix is not in the orthochronous special Lorentz group")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    @classmethod
    def identity(cls) -> "LorentzTransform":
        return cls(np.eye(3))

    def __matmul__(self, other: "LorentzTransform") -> "LorentzTransform":
        return LorentzTransform(self.m @ other.m)

    def inverse(self) -> "LorentzTransform":
        """J mᵀ J, exact for Lorentz matrices."""
        return LorentzTransform(J @ self.m.T @ J)

    def conjugate(self, p: "LorentzTransform") -> "LorentzTransform":
        """P m P⁻¹: the same one-parameter subgroup expressed in another basis."""
        return p @ self @ p.inverse()

    def apply(self, a: MinkowskiVec | HyperboloidPoint | TangentVec | ArrayLike):
        """Apply to a model object, or to an array with trailing axis 3."""
        if isinstance(a, HyperboloidPoint):
            return HyperboloidPoint(MinkowskiVec.from_array(self.m @ a.as_array()))
        if isinstance(a, TangentVec):
            return TangentVec(self.apply(a.base), MinkowskiVec.from_array(self.m @ a.as_array()))
        if isinstance(a, MinkowskiVec):
            return MinkowskiVec.from_array(self.m @ a.as_array())
        return as_coords(a) @ self.m.T


def elliptic_matrix(theta: float) -> LorentzTransform:
    """Rotation by θ about the z axis."""
    c, s = np.cos(theta), np.sin(theta)
    return LorentzTransform(np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]))


def boost_matrix(s: float) -> LorentzTransform:
    """Hyperbolic translation along the geodesic x = 0 by arclength s."""
    ch, sh = np.cosh(s), np.sinh(s)
    return LorentzTransform(np.array([[1.0, 0.0, 0.0], [0.0, ch, sh], [0.0, sh, ch]]))


def parabolic_matrix(t: float) -> LorentzTransform:
    """Horocyclic motion fixing the light-like direction (0, 1, 1)."""
    h = 0.5 * t * t
    return LorentzTransform(
        np.array([[1.0, -t, t], [t, 1.0 - h, h], [t, -h, 1.0 + h]])
    )
