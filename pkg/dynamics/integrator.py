"""Fixed-step RK4 integration on the hyperboloid with projection back to the manifold."""

import math

import numpy as np
from numpy.typing import NDArray

from core.errors import CollisionError, GeometryError
from core.logging import get_logger
from dynamics.forces import accel_arrays, constraint_defect, first_integrals, to_halfplane_state, to_hyperboloid_state, total_energy
from dynamics.state import State, StateH2, StateL2, Trajectory, TrajectoryDiagnostics
from hypergeom.minkowski import minkowski_dot, normalize_to_sheet

logger = get_logger(__name__)


def _repair(Q: NDArray[np.float64], V: NDArray[np.float64]) -> tuple[NDArray, NDArray, float]:
    """q ← q/√(−q⊙q), then v ← v + (q⊙v) q; returns the largest coordinate change."""
    Qr = normalize_to_sheet(Q)
    Vr = V + np.asarray(minkowski_dot(Qr, V))[:, None] * Qr
    moved = max(float(np.max(np.abs(Qr - Q))), float(np.max(np.abs(Vr - V))))
    return Qr, Vr, moved


def _rk4_arrays(
    masses: NDArray[np.float64], Q: NDArray[np.float64], V: NDArray[np.float64], h: float
) -> tuple[NDArray, NDArray, float]:
    k1q, k1v = V, accel_arrays(masses, Q, V)
    q2, v2 = Q + 0.5 * h * k1q, V + 0.5 * h * k1v
    k2q, k2v = v2, accel_arrays(masses, q2, v2)
    q3, v3 = Q + 0.5 * h * k2q, V + 0.5 * h * k2v
    k3q, k3v = v3, accel_arrays(masses, q3, v3)
    q4, v4 = Q + h * k3q, V + h * k3v
    k4q, k4v = v4, accel_arrays(masses, q4, v4)
    Qn = Q + (h / 6.0) * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
    Vn = V + (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v)
    return _repair(Qn, Vn)


def step_rk4(state: StateL2, h: float) -> StateL2:
    """One classical RK4 step followed by manifold repair.

    Raises:
        ValueError: if h is not positive.
        CollisionError: if bodies collide during the step.
    """
    if not h > 0.0:
        raise ValueError(f"Step size must be positive, got {h}")
    Q, V, _ = _rk4_arrays(state.masses, state.positions, state.velocities, h)
    return StateL2(state.masses, Q, V)


def integrate(state: State, t_end: float, h: float, record_every: int = 1) -> Trajectory:
    """Integrate from t = 0 to t_end with a uniform step no larger than h.

    Half-plane states are integrated on the hyperboloid and converted back,
    so the trajectory is reported in the model it was given in.

    Args:
        state: Initial state in either model.
        t_end: Final time (> 0).
        h: Requested step; the effective step is t_end / ceil(t_end / h).
        record_every: Keep every k-th state (the final state is always kept).

    Returns:
        Trajectory with drift diagnostics of energy, constraint and the three
        Lorentz first integrals.

    Raises:
        CollisionError: on collision.
        GeometryError: if a step leaves the manifold beyond repair.
        Either error carries ``error.trajectory``, the states computed up to
        that point.
    """
    if not (t_end > 0.0 and h > 0.0):
        raise ValueError(f"t_end and h must be positive, got t_end={t_end}, h={h}")
    if record_every < 1:
        raise ValueError("record_every must be at least 1")

    as_halfplane = isinstance(state, StateH2)
    current = to_hyperboloid_state(state) if as_halfplane else state

    n_steps = max(1, math.ceil(t_end / h - 1e-9))
    step = t_end / n_steps

    energy0 = total_energy(current)
    integrals0 = np.array(first_integrals(current))
    energy_drift = 0.0
    integral_drift = np.zeros(3)
    constraint_drift = constraint_defect(current)
    repair = 0.0

    times = [0.0]
    states: list[State] = [state]
    masses = current.masses
    Q, V = current.positions, current.velocities

    def _snapshot(steps_done: int) -> Trajectory:
        diagnostics = TrajectoryDiagnostics(
            energy_drift=energy_drift,
            constraint_drift=constraint_drift,
            lxy_drift=float(integral_drift[0]),
            lxz_drift=float(integral_drift[1]),
            lyz_drift=float(integral_drift[2]),
            repair_displacement=repair,
            steps=steps_done,
        )
        return Trajectory(times=list(times), states=list(states), diagnostics=diagnostics)

    logger.debug("Integration started", bodies=len(masses), steps=n_steps, step=step)
    for k in range(1, n_steps + 1):
        try:
            Q, V, moved = _rk4_arrays(masses, Q, V, step)
            current = StateL2(masses, Q, V)
        except (CollisionError, GeometryError) as exc:
            logger.warning("Integration aborted", step=k, time=k * step, error=str(exc))
            exc.trajectory = _snapshot(k - 1)
            raise

        repair = max(repair, moved)
        constraint_drift = max(constraint_drift, constraint_defect(current))
        energy_drift = max(energy_drift, abs(total_energy(current) - energy0))
        integral_drift = np.maximum(integral_drift, np.abs(np.array(first_integrals(current)) - integrals0))

        if k % record_every == 0 or k == n_steps:
            times.append(k * step if k < n_steps else t_end)
            states.append(to_halfplane_state(current) if as_halfplane else current)

    trajectory = _snapshot(n_steps)
    logger.info(
        "Integration finished",
        steps=n_steps,
        energy_drift=energy_drift,
        first_integral_drift=trajectory.diagnostics.first_integral_drift,
        constraint_drift=constraint_drift,
    )
    return trajectory
