"""Poincaré upper half plane: points, distance and the SL(2, ℝ) Möbius action."""

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike, NDArray

from core.errors import GeometryError

DET_TOL = 1e-12


@dataclass(frozen=True)
class HalfPlanePoint:
    """w = re + i·im with im > 0."""

    re: float
    im: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.re) and np.isfinite(self.im)):
            raise GeometryError(f"Half-plane point has non-finite coordinates: {self}")
        if self.im <= 0.0:
            raise GeometryError(f"Point {self.re} + {self.im}i is not in the upper half plane")

    @classmethod
    def from_complex(cls, w: complex) -> "HalfPlanePoint":
        return cls(float(np.real(w)), float(np.imag(w)))

    @property
    def w(self) -> complex:
        return complex(self.re, self.im)


def as_complex(w: HalfPlanePoint | complex | ArrayLike) -> complex | NDArray[np.complex128]:
    if isinstance(w, HalfPlanePoint):
        return w.w
    arr = np.asarray(w, dtype=complex)
    if arr.ndim == 0:
        return complex(arr)
    return arr


def dist_halfplane(w1: HalfPlanePoint | complex | ArrayLike, w2: HalfPlanePoint | complex | ArrayLike):
    """Hyperbolic distance, from cosh d = 1 + |w1 − w2|² / (2 Im w1 Im w2).

    Evaluated as 2 asinh(|w1 − w2| / (2 √(Im w1 Im w2))) to keep precision
    for nearby points.
    """
    a = np.asarray(as_complex(w1))
    b = np.asarray(as_complex(w2))
    result = 2.0 * np.arcsinh(np.abs(a - b) / (2.0 * np.sqrt(a.imag * b.imag)))
    if np.ndim(result) == 0:
        return float(result)
    return result


@dataclass(frozen=True)
class MoebiusTransform:
    """w ↦ (a w + b) / (c w + d) with ad − bc = 1."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self) -> None:
        entries = np.array([self.a, self.b, self.c, self.d], dtype=float)
        if not np.all(np.isfinite(entries)):
            raise GeometryError(f"Möbius transform has non-finite entries: {self}")
        det = self.a * self.d - self.b * self.c
        if abs(det - 1.0) > DET_TOL * max(1.0, float(np.max(np.abs(entries))) ** 2):
            raise GeometryError(f"Möbius transform has determinant {det!r}, expected 1")

    @classmethod
    def identity(cls) -> "MoebiusTransform":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def from_matrix(cls, g: ArrayLike) -> "MoebiusTransform":
        (a, b), (c, d) = np.asarray(g, dtype=float)
        return cls(float(a), float(b), float(c), float(d))

    def as_matrix(self) -> NDArray[np.float64]:
        return np.array([[self.a, self.b], [self.c, self.d]])

    def __matmul__(self, other: "MoebiusTransform") -> "MoebiusTransform":
        return MoebiusTransform.from_matrix(self.as_matrix() @ other.as_matrix())

    def inverse(self) -> "MoebiusTransform":
        return MoebiusTransform(self.d, -self.b, -self.c, self.a)

    def same_isometry(self, other: "MoebiusTransform", tol: float = 1e-12) -> bool:
        """True when the matrices agree up to the global sign ±1."""
        g, h = self.as_matrix(), other.as_matrix()
        return bool(min(np.max(np.abs(g - h)), np.max(np.abs(g + h))) <= tol)


def moebius_apply(g: MoebiusTransform, w: HalfPlanePoint | complex | ArrayLike):
    """Möbius action; returns a HalfPlanePoint for point input, complex values otherwise."""
    z = as_complex(w)
    image = (g.a * z + g.b) / (g.c * z + g.d)
    if isinstance(w, HalfPlanePoint):
        return HalfPlanePoint.from_complex(complex(image))
    return image


def moebius_velocity(g: MoebiusTransform, w: complex | ArrayLike, wdot: complex | ArrayLike):
    """Image of a velocity under g: ẇ / (c w + d)²."""
    z = np.asarray(w, dtype=complex)
    return np.asarray(wdot, dtype=complex) / (g.c * z + g.d) ** 2


def moebius_acceleration(
    g: MoebiusTransform, w: complex | ArrayLike, wdot: complex | ArrayLike, wddot: complex | ArrayLike
):
    """Second time derivative of g(w(t)) given the 2-jet of w."""
    z = np.asarray(w, dtype=complex)
    den = g.c * z + g.d
    wd = np.asarray(wdot, dtype=complex)
    return np.asarray(wddot, dtype=complex) / den**2 - 2.0 * g.c * wd * wd / den**3


class GeneratorKind(str, Enum):
    """Conjugacy classes of one-parameter subgroups of SL(2, ℝ)."""

    ELLIPTIC = "elliptic"
    HYPERBOLIC = "hyperbolic"
    PARABOLIC_PLUS = "parabolic+"
    PARABOLIC_MINUS = "parabolic-"


@dataclass(frozen=True)
class Sl2Generator:
    """Canonical representative ω ξ of a one-parameter subgroup.

    omega is ignored for the parabolic kinds.
    """

    kind: GeneratorKind
    omega: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", GeneratorKind(self.kind))
        if self.kind in (GeneratorKind.ELLIPTIC, GeneratorKind.HYPERBOLIC) and not self.omega > 0.0:
            raise GeometryError(f"{self.kind.value} generator needs omega > 0, got {self.omega}")

    def matrix(self) -> NDArray[np.float64]:
        """The Lie-algebra element as a traceless 2×2 matrix."""
        if self.kind is GeneratorKind.ELLIPTIC:
            return self.omega * np.array([[0.0, -0.5], [0.5, 0.0]])
        if self.kind is GeneratorKind.HYPERBOLIC:
            return self.omega * np.array([[0.5, 0.0], [0.0, -0.5]])
        sign = 1.0 if self.kind is GeneratorKind.PARABOLIC_PLUS else -1.0
        return np.array([[0.0, sign], [0.0, 0.0]])


def exp_generator(g: Sl2Generator, t: float) -> MoebiusTransform:
    """Closed-form exp(ω ξ t)."""
    if g.kind is GeneratorKind.ELLIPTIC:
        half = 0.5 * g.omega * t
        c, s = np.cos(half), np.sin(half)
        return MoebiusTransform(float(c), float(-s), float(s), float(c))
    if g.kind is GeneratorKind.HYPERBOLIC:
        half = 0.5 * g.omega * t
        return MoebiusTransform(float(np.exp(half)), 0.0, 0.0, float(np.exp(-half)))
    sign = 1.0 if g.kind is GeneratorKind.PARABOLIC_PLUS else -1.0
    return MoebiusTransform(1.0, sign * t, 0.0, 1.0)
