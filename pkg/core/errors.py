"""Error hierarchy shared by the geometry, dynamics and relative-equilibrium layers.

Each error carries the exit code the command-line front end reports for it:
1 for usage or configuration problems, 2 for mathematical failures.
"""

from typing import Any


class CurvedNBodyError(Exception):
    """Base class for all package errors."""

    exit_code: int = 2
    reason: str = "error"
    trajectory: Any = None  # partial trajectory when raised mid-integration


class GeometryError(CurvedNBodyError, ValueError):
    """A point, vector or transform violates its model invariants."""

    exit_code = 1
    reason = "invalid-geometry"


class DomainError(CurvedNBodyError, ValueError):
    """Distance requested for points whose Lorentz product is out of range."""

    reason = "domain"


class NumericalRangeError(CurvedNBodyError, ArithmeticError):
    """Finite-difference step would underflow relative to the point size."""

    reason = "numerical-range"


class CollisionError(CurvedNBodyError):
    """Two bodies came closer than the collision distance."""

    reason = "collision"

    def __init__(
        self,
        message: str,
        *,
        pair: tuple[int, int] | None = None,
        distance: float | None = None,
        trajectory: Any = None,
    ):
        super().__init__(message)
        self.pair = pair
        self.distance = distance
        self.trajectory = trajectory


class NoSolutionError(CurvedNBodyError):
    """The mass balance has no positive solution (f2 >= 0)."""

    reason = "f2>=0"


class NonpositiveMassError(CurvedNBodyError):
    """The balanced mass m is not positive."""

    reason = "mass<=0"


class NonpositiveOmegaSqError(CurvedNBodyError):
    """The balanced configuration has ω² <= 0, so no rotation rate exists."""

    reason = "omega_sq<=0"

    def __init__(self, message: str, *, omega_sq: float | None = None, masses: Any = None):
        super().__init__(message)
        self.omega_sq = omega_sq
        self.masses = masses


class ConfigError(CurvedNBodyError, ValueError):
    """Invalid run configuration or command-line flags."""

    exit_code = 1
    reason = "config"
