"""Forces, energies and first integrals of the curved n-body problem.

The hyperboloid model is canonical. The body-i acceleration is

    q̈_i = Σ_{j≠i} m_j (q_j + (q_i⊙q_j) q_i) / ((q_i⊙q_j)² − 1)^{3/2} + (q̇_i⊙q̇_i) q_i

which is the Euler–Lagrange flow of T + U with U = Σ_{i<j} m_i m_j coth d_ij,
so E = T − U is conserved. The half-plane right side is the same vector field
carried through the chart.
"""

import numpy as np
from numpy.typing import NDArray

from core.config import settings
from core.errors import CollisionError
from core.logging import get_logger
from dynamics.state import State, StateH2, StateL2, halfplane_distance_matrix, hyperboloid_distance_matrix
from hypergeom.conversion import (
    halfplane_to_hyperboloid,
    halfplane_velocity_to_hyperboloid,
    hyperboloid_jet_to_halfplane,
)
from hypergeom.minkowski import minkowski_dot

logger = get_logger(__name__)


def _pair_cosh_minus_one(Q: NDArray[np.float64]) -> NDArray[np.float64]:
    """(n, n) matrix of cosh d_ij − 1 with the diagonal set to 0."""
    c = -np.asarray(minkowski_dot(Q[:, None, :], Q[None, :, :]))
    diff = Q[:, None, :] - Q[None, :, :]
    near = 0.5 * np.asarray(minkowski_dot(diff, diff))
    cm1 = np.where(c <= 2.0, near, c - 1.0)
    np.fill_diagonal(cm1, 0.0)
    return cm1


def _raise_on_collision(cm1: NDArray[np.float64]) -> None:
    n = cm1.shape[0]
    if n < 2:
        return
    iu = np.triu_indices(n, k=1)
    d = 2.0 * np.arcsinh(np.sqrt(0.5 * np.maximum(cm1[iu], 0.0)))
    k = int(np.argmin(d))
    if d[k] < settings.COLLISION_EPSILON:
        pair = (int(iu[0][k]), int(iu[1][k]))
        raise CollisionError(
            f"Bodies {pair[0]} and {pair[1]} are {d[k]:.3e} apart (< {settings.COLLISION_EPSILON:.0e})",
            pair=pair,
            distance=float(d[k]),
        )


def gravitational_field(masses: NDArray[np.float64], Q: NDArray[np.float64]) -> NDArray[np.float64]:
    """Σ_j m_j (q_j + (q_i⊙q_j) q_i) / sinh³ d_ij for each body, projected to the tangent plane.

    Raises:
        CollisionError: if two positions are closer than the collision epsilon.
    """
    n = len(masses)
    if n < 2:
        return np.zeros_like(Q)
    cm1 = _pair_cosh_minus_one(Q)
    _raise_on_collision(cm1)
    sinh_sq = cm1 * (cm1 + 2.0)
    np.fill_diagonal(sinh_sq, 1.0)
    weight = masses[None, :] / sinh_sq**1.5
    np.fill_diagonal(weight, 0.0)
    # q_j + (q_i⊙q_j) q_i = (q_j − q_i) − (cosh d − 1) q_i
    direction = (Q[None, :, :] - Q[:, None, :]) - cm1[:, :, None] * Q[:, None, :]
    field = np.einsum("ij,ijk->ik", weight, direction)
    return field + np.asarray(minkowski_dot(Q, field))[:, None] * Q


def accel_arrays(masses: NDArray[np.float64], Q: NDArray[np.float64], V: NDArray[np.float64]) -> NDArray[np.float64]:
    """Hyperboloid accelerations for raw (n, 3) position and velocity arrays."""
    speed_sq = np.asarray(minkowski_dot(V, V)).reshape(-1)
    return gravitational_field(masses, Q) + speed_sq[:, None] * Q


def accel_L2(state: StateL2) -> NDArray[np.float64]:
    """Accelerations (n, 3) of a hyperboloid state; q_i⊙q̈_i = −q̇_i⊙q̇_i holds to rounding."""
    return accel_arrays(state.masses, state.positions, state.velocities)


def _recentre(W: NDArray[np.complex128]) -> tuple[float, float]:
    """Shift a and scale λ of the isometry w ↦ (w − a)/λ that centres the configuration."""
    shift = float(np.mean(W.real))
    scale = float(np.exp(np.mean(np.log(W.imag))))
    return shift, scale


def accel_H2(state: StateH2) -> NDArray[np.complex128]:
    """Half-plane accelerations, defined by conjugating accel_L2 through the chart.

    The configuration is first moved by the isometry w ↦ (w − a)/λ so that its
    hyperboloid image stays near the apex; accelerations scale back by λ.
    """
    shift, scale = _recentre(state.positions)
    W = (state.positions - shift) / scale
    Wd = state.velocities / scale
    Q = np.asarray(halfplane_to_hyperboloid(W))
    V = halfplane_velocity_to_hyperboloid(W, Wd)
    A = accel_arrays(state.masses, Q, V)
    _, _, Wdd = hyperboloid_jet_to_halfplane(Q, V, A)
    return scale * Wdd


def _printed_t(W: NDArray[np.complex128]) -> NDArray[np.float64]:
    d_re = W.real[:, None] - W.real[None, :]
    im_sq = W.imag**2
    return np.sqrt(
        4.0 * d_re**2 * (d_re**2 + 2.0 * (im_sq[:, None] + im_sq[None, :]))
        + 4.0 * (im_sq[:, None] - im_sq[None, :]) ** 2
    )


def accel_H2_printed(state: StateH2) -> NDArray[np.complex128]:
    """Literal transcription of the published half-plane equations of motion.

    ẅ_k = −(w_k − w̄_k)²/2 · Σ_{j≠k} m_j (w̄_k − w_k)(w̄_j − w_j)²(w_k − w_j)(w̄_j − w_k) / T_{j,k}³
          + 2ẇ_k² / (w_k − w̄_k)

    Kept for comparison with accel_H2; see printed_equation_gap.
    """
    W = state.positions
    Wb = np.conj(W)
    m = state.masses
    T = _printed_t(W)
    np.fill_diagonal(T, 1.0)
    k_part = (Wb - W)[:, None]
    terms = m[None, :] * k_part * ((Wb - W) ** 2)[None, :] * (W[:, None] - W[None, :]) * (Wb[None, :] - W[:, None])
    terms = terms / T**3
    np.fill_diagonal(terms, 0.0)
    total = terms.sum(axis=1)
    return -0.5 * (W - Wb) ** 2 * total + 2.0 * state.velocities**2 / (W - Wb)


def printed_equation_gap(state: StateH2) -> NDArray[np.float64]:
    """Per-body |ẅ_printed − ẅ_canonical| / Im w (hyperbolic norm of the difference)."""
    gap = np.abs(accel_H2_printed(state) - accel_H2(state)) / state.positions.imag
    logger.info("Printed half-plane equations compared", max_gap=float(np.max(gap)))
    return gap


def acceleration(state: State) -> NDArray:
    if isinstance(state, StateH2):
        return accel_H2(state)
    return accel_L2(state)


def to_hyperboloid_state(state: StateH2) -> StateL2:
    Q = np.asarray(halfplane_to_hyperboloid(state.positions))
    V = halfplane_velocity_to_hyperboloid(state.positions, state.velocities)
    return StateL2(state.masses, Q, V)


def to_halfplane_state(state: StateL2) -> StateH2:
    W, Wd, _ = hyperboloid_jet_to_halfplane(state.positions, state.velocities)
    return StateH2(state.masses, W, Wd)


def pairwise_distances(state: State) -> NDArray[np.float64]:
    """(n, n) matrix of hyperbolic distances."""
    if isinstance(state, StateH2):
        return halfplane_distance_matrix(state.positions)
    return hyperboloid_distance_matrix(state.positions)


def _coth_matrix(state: State) -> NDArray[np.float64]:
    if isinstance(state, StateH2):
        W = state.positions
        # cosh d − 1 = |w_i − w_j|² / (2 Im w_i Im w_j)
        cm1 = np.abs(W[:, None] - W[None, :]) ** 2 / (2.0 * W.imag[:, None] * W.imag[None, :])
    else:
        cm1 = _pair_cosh_minus_one(state.positions)
    _raise_on_collision(cm1)
    sinh_sq = cm1 * (cm1 + 2.0)
    np.fill_diagonal(sinh_sq, 1.0)
    return (cm1 + 1.0) / np.sqrt(sinh_sq)


def potential(state: State) -> float:
    """Force function U = Σ_{i<j} m_i m_j coth d_ij."""
    coth = _coth_matrix(state)
    mm = state.masses[:, None] * state.masses[None, :]
    iu = np.triu_indices(state.n, k=1)
    return float(np.sum(mm[iu] * coth[iu]))


def halfplane_potential_printed(state: StateH2) -> float:
    """Literal transcription of the published half-plane force function.

    Σ_{k<j} m_k m_j ((w̄_k − w_k)(w̄_j − w_j) − 2(|w_k|² + |w_j|²)) / T_{k,j}
    """
    W = state.positions
    Wb = np.conj(W)
    T = _printed_t(W)
    np.fill_diagonal(T, 1.0)
    num = ((Wb - W)[:, None] * (Wb - W)[None, :]).real - 2.0 * (np.abs(W)[:, None] ** 2 + np.abs(W)[None, :] ** 2)
    mm = state.masses[:, None] * state.masses[None, :]
    iu = np.triu_indices(state.n, k=1)
    return float(np.sum(mm[iu] * num[iu] / T[iu]))


def kinetic(state: State) -> float:
    """T = ½ Σ m_i q̇_i⊙q̇_i (equivalently ½ Σ m_k |ẇ_k|² / Im² w_k)."""
    if isinstance(state, StateH2):
        speed_sq = np.abs(state.velocities) ** 2 / state.positions.imag**2
    else:
        speed_sq = np.asarray(minkowski_dot(state.velocities, state.velocities)).reshape(-1)
    return float(0.5 * np.sum(state.masses * speed_sq))


def total_energy(state: State) -> float:
    """E = T − U."""
    return kinetic(state) - potential(state)


def first_integrals(state: State) -> tuple[float, float, float]:
    """Lorentz angular momenta (L_xy, L_xz, L_yz)."""
    if isinstance(state, StateH2):
        state = to_hyperboloid_state(state)
    m = state.masses
    x, y, z = state.positions.T
    vx, vy, vz = state.velocities.T
    return (
        float(np.sum(m * (x * vy - y * vx))),
        float(np.sum(m * (x * vz - z * vx))),
        float(np.sum(m * (y * vz - z * vy))),
    )


def constraint_defect(state: StateL2) -> float:
    """max_i |q_i⊙q_i + 1|."""
    return float(np.max(np.abs(np.asarray(minkowski_dot(state.positions, state.positions)) + 1.0)))
