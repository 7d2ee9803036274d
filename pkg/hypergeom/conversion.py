"""Isometric conversion between the hyperboloid and the upper half plane.

The chart is the composition of stereographic projection to the Poincaré disk,
ζ = (x + iy) / (1 + z), with the Cayley map w = i(1 + ζ) / (1 − ζ). In closed
form, for w = u + iv and ρ = u² + v²:

    x = (ρ − 1) / (2v),   y = −u / v,   z = (ρ + 1) / (2v)
    v = 1 / (z − x),      u = −y / (z − x)

The apex (0, 0, 1) goes to i and the geodesic x = 0 goes to the unit half circle.
"""

from enum import Enum
from typing import Callable

import numpy as np
from numpy.typing import ArrayLike, NDArray

from core.config import settings
from core.errors import GeometryError, NumericalRangeError
from core.logging import get_logger
from hypergeom.halfplane import HalfPlanePoint, MoebiusTransform, as_complex, moebius_apply
from hypergeom.lorentz import LorentzTransform
from hypergeom.minkowski import HyperboloidPoint, MinkowskiVec, TangentVec, as_coords

logger = get_logger(__name__)


class MapDirection(str, Enum):
    TO_L2 = "to_L2"
    TO_H2 = "to_H2"


class Differentiation(str, Enum):
    RICHARDSON = "richardson"
    EXACT = "exact"


def _to_hyperboloid_coords(w: NDArray[np.complex128]) -> NDArray[np.float64]:
    u, v = w.real, w.imag
    rho = u * u + v * v
    return np.stack([(rho - 1.0) / (2.0 * v), -u / v, (rho + 1.0) / (2.0 * v)], axis=-1)


def _z_minus_x(q: NDArray[np.float64], stable: bool = True) -> NDArray[np.float64]:
    x, y, z = q[..., 0], q[..., 1], q[..., 2]
    if not stable:
        return z - x
    # on the sheet z² − x² = 1 + y², which avoids cancellation when x ≈ z
    return np.where(x > 0.0, (1.0 + y * y) / (z + np.abs(x)), z - x)


def _to_halfplane_coords(q: NDArray[np.float64], stable: bool = True) -> NDArray[np.complex128]:
    s = _z_minus_x(q, stable)
    return (-q[..., 1] + 1j) / s


def halfplane_to_hyperboloid(w: HalfPlanePoint | complex | ArrayLike):
    """Half plane → hyperboloid; HalfPlanePoint in, HyperboloidPoint out, arrays map to (..., 3)."""
    z = np.asarray(as_complex(w))
    if np.any(z.imag <= 0.0):
        raise GeometryError("Half-plane coordinates must have positive imaginary part")
    q = _to_hyperboloid_coords(z)
    if isinstance(w, HalfPlanePoint):
        return HyperboloidPoint.from_array(q)
    return q


def hyperboloid_to_halfplane(p: HyperboloidPoint | ArrayLike):
    """Hyperboloid → half plane; HyperboloidPoint in, HalfPlanePoint out, arrays map to complex."""
    q = as_coords(p)
    if np.any(q[..., 2] < 1.0 - settings.CONSTRAINT_TOL):
        raise GeometryError("Hyperboloid coordinates must lie on the upper sheet")
    w = _to_halfplane_coords(q)
    if isinstance(p, HyperboloidPoint):
        return HalfPlanePoint.from_complex(complex(w))
    if np.ndim(w) == 0:
        return complex(w)
    return w


def halfplane_velocity_to_hyperboloid(w: ArrayLike, wdot: ArrayLike) -> NDArray[np.float64]:
    """Exact differential of the chart half plane → hyperboloid."""
    z = np.asarray(w, dtype=complex)
    zd = np.asarray(wdot, dtype=complex)
    u, v = z.real, z.imag
    ud, vd = zd.real, zd.imag
    rho = u * u + v * v
    rho_dot = 2.0 * (u * ud + v * vd)
    xd = rho_dot / (2.0 * v) - (rho - 1.0) * vd / (2.0 * v * v)
    yd = -ud / v + u * vd / (v * v)
    zdd = rho_dot / (2.0 * v) - (rho + 1.0) * vd / (2.0 * v * v)
    return np.stack([xd, yd, zdd], axis=-1)


def hyperboloid_jet_to_halfplane(
    q: ArrayLike, qdot: ArrayLike, qddot: ArrayLike | None = None
) -> tuple[NDArray[np.complex128], NDArray[np.complex128], NDArray[np.complex128] | None]:
    """Position, velocity and (optionally) acceleration of a curve, carried to the half plane.

    Exact chain rule through v = 1/s, u = −y v with s = z − x.
    """
    Q = as_coords(q)
    V = as_coords(qdot)
    s = _z_minus_x(Q)
    y = Q[..., 1]
    v = 1.0 / s
    sd = V[..., 2] - V[..., 0]
    yd = V[..., 1]
    vd = -sd * v * v
    ud = -yd * v - y * vd
    w = -y * v + 1j * v
    wdot = ud + 1j * vd
    if qddot is None:
        return w, wdot, None
    A = as_coords(qddot)
    sdd = A[..., 2] - A[..., 0]
    ydd = A[..., 1]
    vdd = -sdd * v * v + 2.0 * sd * sd * v**3
    udd = -ydd * v - 2.0 * yd * vd - y * vdd
    return w, wdot, udd + 1j * vdd


def _central_difference(f: Callable, p, d, tau: float):
    return (f(p + tau * d) - f(p - tau * d)) / (2.0 * tau)


def _richardson(f: Callable, p, d, tau: float):
    coarse = _central_difference(f, p, d, tau)
    fine = _central_difference(f, p, d, 0.5 * tau)
    return (4.0 * fine - coarse) / 3.0


def pushforward_velocity(
    direction: MapDirection | str,
    point,
    velocity,
    method: Differentiation | str = Differentiation.RICHARDSON,
):
    """Carry a velocity through the chart in the given direction.

    Args:
        direction: MapDirection.TO_L2 (half plane → hyperboloid) or TO_H2.
        point: base point in the source model (model type or raw coordinates).
        velocity: complex ẇ for TO_L2; tangent 3-vector for TO_H2.
        method: Richardson-extrapolated central differences of the chart
            (default) or its closed-form differential.

    Returns:
        TangentVec / complex for model-typed input, raw coordinates otherwise.

    Raises:
        NumericalRangeError: if the base point has |z| beyond PUSHFORWARD_MAX_Z.
    """
    direction = MapDirection(direction)
    method = Differentiation(method)

    if direction is MapDirection.TO_L2:
        w = complex(as_complex(point))
        wdot = complex(as_complex(velocity))
        if method is Differentiation.EXACT:
            result = halfplane_velocity_to_hyperboloid(w, wdot)
        elif wdot == 0:
            result = np.zeros(3)
        else:
            q = _to_hyperboloid_coords(np.asarray(w))
            if abs(q[2]) > settings.PUSHFORWARD_MAX_Z:
                raise NumericalRangeError(f"Point {w} maps to z = {q[2]:.3e}, beyond the differentiation range")
            tau = settings.PUSHFORWARD_STEP * w.imag / abs(wdot)
            result = _richardson(lambda c: _to_hyperboloid_coords(np.asarray(c)), w, wdot, tau)
        if isinstance(point, HalfPlanePoint):
            base = HyperboloidPoint.from_array(_to_hyperboloid_coords(np.asarray(w)))
            return TangentVec(base, MinkowskiVec.from_array(result))
        return result

    q = as_coords(point)
    v = as_coords(velocity)
    if abs(q[2]) > settings.PUSHFORWARD_MAX_Z:
        logger.warning("Pushforward refused", z=q[2])
        raise NumericalRangeError(f"|z| = {abs(q[2]):.3e} exceeds {settings.PUSHFORWARD_MAX_Z:.0e}")
    if method is Differentiation.EXACT:
        _, wdot, _ = hyperboloid_jet_to_halfplane(q, v)
        result = complex(wdot)
    elif not np.any(v):
        result = 0j
    else:
        scale = min(float(q[2]), float(_z_minus_x(q)))
        tau = settings.PUSHFORWARD_STEP * scale / float(np.linalg.norm(v))
        result = complex(_richardson(lambda c: _to_halfplane_coords(c, stable=False), q, v, tau))
    return result


def moebius_to_lorentz(g: MoebiusTransform) -> LorentzTransform:
    """The Lorentz matrix acting on the hyperboloid as g acts on the half plane.

    The chart is linear-compatible, so the matrix is determined by the images
    of three linearly independent points.
    """
    basis = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, np.sqrt(2.0)], [0.0, 1.0, np.sqrt(2.0)]])
    images = _to_hyperboloid_coords(np.asarray(moebius_apply(g, _to_halfplane_coords(basis))))
    # M · basisᵀ = imagesᵀ
    m = np.linalg.solve(basis, images).T
    return LorentzTransform(m)
