"""Equation-of-motion residuals of closed-form candidate orbits."""

from typing import Callable, Sequence

import numpy as np
from numpy.typing import NDArray

from core.logging import get_logger
from dynamics.forces import accel_arrays
from releq.schemas import ResidualReport

logger = get_logger(__name__)

OrbitFn = Callable[[float], tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]]


def re_defect_L2(
    Q: NDArray[np.float64], V: NDArray[np.float64], A: NDArray[np.float64], masses: Sequence[float]
) -> NDArray[np.float64]:
    """R_i = q̈_i − (right side of the hyperboloid equations) for each body, shape (n, 3)."""
    m = np.asarray(masses, dtype=float)
    return np.asarray(A, dtype=float) - accel_arrays(m, np.asarray(Q, dtype=float), np.asarray(V, dtype=float))


def full_re_residual_L2(orbit: OrbitFn, masses: Sequence[float], times: Sequence[float]) -> ResidualReport:
    """Max-norm defect per body of a closed-form orbit over the sampled times.

    Args:
        orbit: t ↦ (positions, velocities, accelerations), each (n, 3).
        masses: Body masses.
        times: Sample times.

    Raises:
        CollisionError: if the orbit degenerates at a sampled time.
    """
    if not len(times):
        raise ValueError("At least one sample time is required")
    worst: NDArray[np.float64] | None = None
    last: NDArray[np.float64] | None = None
    for t in times:
        Q, V, A = orbit(float(t))
        defect = re_defect_L2(Q, V, A, masses)
        per_body = np.max(np.abs(defect), axis=1)
        worst = per_body if worst is None else np.maximum(worst, per_body)
        last = defect
    assert worst is not None and last is not None
    logger.debug("Residual evaluated", times=len(times), max_residual=float(np.max(worst)))
    return ResidualReport(
        per_body_residual=worst.tolist(),
        times=[float(t) for t in times],
        signed_z_defect=last[:, 2].tolist(),
    )
