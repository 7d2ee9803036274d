"""System states for the curved n-body problem in both models."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from core.config import settings
from core.errors import CollisionError, GeometryError
from core.logging import get_logger
from hypergeom.halfplane import HalfPlanePoint, dist_halfplane
from hypergeom.minkowski import (
    HyperboloidPoint,
    MinkowskiVec,
    TangentVec,
    dist_hyperboloid,
    minkowski_dot,
)

logger = get_logger(__name__)


class Model(str, Enum):
    L2 = "L2"
    H2 = "H2"


@dataclass(frozen=True)
class Body:
    mass: float

    def __post_init__(self) -> None:
        if not (np.isfinite(self.mass) and self.mass > 0.0):
            raise GeometryError(f"Body mass must be positive and finite, got {self.mass}")


def _validated_masses(masses: ArrayLike) -> NDArray[np.float64]:
    m = np.array(masses, dtype=float).reshape(-1)
    if m.size == 0:
        raise GeometryError("A state needs at least one body")
    if not np.all(np.isfinite(m)) or np.any(m <= 0.0):
        raise GeometryError(f"Masses must be positive and finite, got {m.tolist()}")
    return m


def check_collisions(distances: NDArray[np.float64]) -> None:
    """Raise CollisionError if any off-diagonal distance is below the collision epsilon."""
    n = distances.shape[0]
    if n < 2:
        return
    iu = np.triu_indices(n, k=1)
    pair_d = distances[iu]
    k = int(np.argmin(pair_d))
    if pair_d[k] < settings.COLLISION_EPSILON:
        pair = (int(iu[0][k]), int(iu[1][k]))
        logger.warning("Collision detected", pair=pair, distance=pair_d[k])
        raise CollisionError(
            f"Bodies {pair[0]} and {pair[1]} are {pair_d[k]:.3e} apart (< {settings.COLLISION_EPSILON:.0e})",
            pair=pair,
            distance=float(pair_d[k]),
        )


def hyperboloid_distance_matrix(positions: NDArray[np.float64]) -> NDArray[np.float64]:
    return np.asarray(dist_hyperboloid(positions[:, None, :], positions[None, :, :]))


def halfplane_distance_matrix(positions: NDArray[np.complex128]) -> NDArray[np.float64]:
    return np.asarray(dist_halfplane(positions[:, None], positions[None, :]))


@dataclass(frozen=True, eq=False)
class StateL2:
    """Masses, positions and velocities of n bodies on the hyperboloid.

    positions and velocities are (n, 3) arrays; each row of velocities is
    tangent at the matching position.
    """

    masses: NDArray[np.float64]
    positions: NDArray[np.float64]
    velocities: NDArray[np.float64]
    model: Model = field(default=Model.L2, init=False)

    def __post_init__(self) -> None:
        m = _validated_masses(self.masses)
        q = np.array(self.positions, dtype=float).reshape(-1, 3)
        v = np.array(self.velocities, dtype=float).reshape(-1, 3)
        if not (len(m) == len(q) == len(v)):
            raise GeometryError(f"State has {len(m)} masses, {len(q)} positions, {len(v)} velocities")
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(v))):
            raise GeometryError("State contains non-finite coordinates")

        constraint = np.abs(np.asarray(minkowski_dot(q, q)) + 1.0)
        if np.any(constraint > settings.CONSTRAINT_TOL * np.maximum(1.0, q[:, 2] ** 2)) or np.any(q[:, 2] < 1.0 - settings.CONSTRAINT_TOL):
            raise GeometryError("State positions are not on the upper sheet of the hyperboloid")
        tangency = np.abs(np.asarray(minkowski_dot(q, v)))
        scale = np.maximum(1.0, np.linalg.norm(q, axis=1) * np.linalg.norm(v, axis=1))
        if np.any(tangency > settings.TANGENCY_TOL * scale):
            raise GeometryError("State velocities are not tangent to the hyperboloid")

        check_collisions(hyperboloid_distance_matrix(q))
        for a in (m, q, v):
            a.setflags(write=False)
        object.__setattr__(self, "masses", m)
        object.__setattr__(self, "positions", q)
        object.__setattr__(self, "velocities", v)

    @classmethod
    def from_bodies(
        cls,
        bodies: Sequence[Body],
        positions: Sequence[HyperboloidPoint],
        velocities: Sequence[TangentVec],
    ) -> "StateL2":
        return cls(
            np.array([b.mass for b in bodies]),
            np.array([p.as_array() for p in positions]),
            np.array([t.as_array() for t in velocities]),
        )

    @property
    def n(self) -> int:
        return len(self.masses)

    @property
    def bodies(self) -> list[Body]:
        return [Body(float(m)) for m in self.masses]

    def points(self) -> list[HyperboloidPoint]:
        return [HyperboloidPoint.from_array(q) for q in self.positions]

    def tangent_vectors(self) -> list[TangentVec]:
        return [
            TangentVec(HyperboloidPoint.from_array(q), MinkowskiVec.from_array(v))
            for q, v in zip(self.positions, self.velocities)
        ]


@dataclass(frozen=True, eq=False)
class StateH2:
    """Masses, complex positions (Im > 0) and complex velocities of n bodies."""

    masses: NDArray[np.float64]
    positions: NDArray[np.complex128]
    velocities: NDArray[np.complex128]
    model: Model = field(default=Model.H2, init=False)

    def __post_init__(self) -> None:
        m = _validated_masses(self.masses)
        w = np.array(self.positions, dtype=complex).reshape(-1)
        wd = np.array(self.velocities, dtype=complex).reshape(-1)
        if not (len(m) == len(w) == len(wd)):
            raise GeometryError(f"State has {len(m)} masses, {len(w)} positions, {len(wd)} velocities")
        if not (np.all(np.isfinite(w)) and np.all(np.isfinite(wd))):
            raise GeometryError("State contains non-finite coordinates")
        if np.any(w.imag <= 0.0):
            raise GeometryError("State positions must lie in the upper half plane")

        check_collisions(halfplane_distance_matrix(w))
        for a in (m, w, wd):
            a.setflags(write=False)
        object.__setattr__(self, "masses", m)
        object.__setattr__(self, "positions", w)
        object.__setattr__(self, "velocities", wd)

    @classmethod
    def from_bodies(
        cls,
        bodies: Sequence[Body],
        positions: Sequence[HalfPlanePoint],
        velocities: Sequence[complex],
    ) -> "StateH2":
        return cls(
            np.array([b.mass for b in bodies]),
            np.array([p.w for p in positions]),
            np.array(velocities, dtype=complex),
        )

    @property
    def n(self) -> int:
        return len(self.masses)

    @property
    def bodies(self) -> list[Body]:
        return [Body(float(m)) for m in self.masses]

    def points(self) -> list[HalfPlanePoint]:
        return [HalfPlanePoint.from_complex(w) for w in self.positions]


State = StateL2 | StateH2


@dataclass(frozen=True)
class TrajectoryDiagnostics:
    """Drift of the conserved quantities over a trajectory (max |value − initial|)."""

    energy_drift: float
    constraint_drift: float
    lxy_drift: float
    lxz_drift: float
    lyz_drift: float
    repair_displacement: float
    steps: int

    @property
    def first_integral_drift(self) -> float:
        return max(self.lxy_drift, self.lxz_drift, self.lyz_drift)


@dataclass
class Trajectory:
    times: NDArray[np.float64]
    states: list[State]
    diagnostics: TrajectoryDiagnostics | None = None

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=float)
        if len(self.times) != len(self.states):
            raise ValueError("Trajectory needs one state per time")
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("Trajectory times must be strictly increasing")

    def __len__(self) -> int:
        return len(self.states)

    @property
    def final(self) -> State:
        return self.states[-1]
