"""Regular n-gon orbits and the hyperbolic (boost) non-existence certificate.

A regular n-gon of circumradius r centred at the apex is moved by the boost
B(ωt) along the geodesic x = 0. Such an orbit solves the equations of motion
only if the sum

    S = Σ_{j≥2} m_j [z_j + (q_1⊙q_j) z_1] / ((q_1⊙q_j)² − 1)^{3/2}

vanishes, and every bracket is strictly below z_j − z_1 ≤ 0, so S < 0.
The orbit depends on ω and t only through ωt.
"""

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numpy.typing import NDArray

from core.errors import GeometryError, NoSolutionError
from core.logging import get_logger
from dynamics.forces import gravitational_field
from hypergeom.lorentz import boost_matrix, elliptic_matrix
from hypergeom.minkowski import HyperboloidPoint, minkowski_dot
from releq.schemas import ScanCell, ScanReport

logger = get_logger(__name__)

Orbit = tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]


@dataclass(frozen=True)
class NGonParams:
    n: int
    r: float
    omega: float = 1.0

    def __post_init__(self) -> None:
        if self.n < 2:
            raise GeometryError(f"An n-gon needs n >= 2, got {self.n}")
        if not self.r > 0.0:
            raise GeometryError(f"Circumradius parameter r must be positive, got {self.r}")
        if self.omega == 0.0:
            raise GeometryError("omega must be non-zero")

    @property
    def z(self) -> float:
        return float(np.sqrt(1.0 + self.r * self.r))


def ngon_angles(n: int) -> NDArray[np.float64]:
    """θ_i = 2π(i − 1)/n for i = 1..n."""
    return 2.0 * np.pi * np.arange(n) / n


def ngon_positions(n: int, r: float) -> NDArray[np.float64]:
    theta = ngon_angles(n)
    z = np.sqrt(1.0 + r * r)
    return np.stack([-r * np.sin(theta), r * np.cos(theta), np.full(n, z)], axis=1)


def ngon_initial(n: int, r: float) -> list[HyperboloidPoint]:
    """Vertices (−r sin θ_i, r cos θ_i, √(1 + r²)) of the regular n-gon about the apex."""
    NGonParams(n, r)
    return [HyperboloidPoint.from_array(q) for q in ngon_positions(n, r)]


def ngon_orbit(n: int, r: float, omega: float, t: float) -> Orbit:
    """Positions, velocities and accelerations of the boosted n-gon at time t.

    q(t) = B(ωt) q(0), q̇ = ω (0, z, y), q̈ = ω² (0, y, z).
    """
    NGonParams(n, r, omega)
    Q = boost_matrix(omega * t).apply(ngon_positions(n, r))
    zeros = np.zeros(n)
    V = omega * np.stack([zeros, Q[:, 2], Q[:, 1]], axis=1)
    A = omega**2 * np.stack([zeros, Q[:, 1], Q[:, 2]], axis=1)
    return Q, V, A


def elliptic_ngon_orbit(n: int, r: float, omega: float, t: float) -> Orbit:
    """The n-gon rotated about the apex: q(t) = A(ωt) q(0)."""
    NGonParams(n, r, omega)
    Q = elliptic_matrix(omega * t).apply(ngon_positions(n, r))
    zeros = np.zeros(n)
    V = omega * np.stack([-Q[:, 1], Q[:, 0], zeros], axis=1)
    A = -(omega**2) * np.stack([Q[:, 0], Q[:, 1], zeros], axis=1)
    return Q, V, A


def _zsum_terms(
    Q: NDArray[np.float64], masses: NDArray[np.float64]
) -> tuple[float, NDArray[np.float64], NDArray[np.float64]]:
    q1 = Q[0]
    others = Q[1:]
    c = -np.asarray(minkowski_dot(others, q1))
    diff = others - q1
    near = 0.5 * np.asarray(minkowski_dot(diff, diff))
    cm1 = np.where(c <= 2.0, near, c - 1.0)
    z_gap = others[:, 2] - q1[2]
    # z_j + (q_1⊙q_j) z_1 = (z_j − z_1) − (cosh d − 1) z_1
    terms = z_gap - cm1 * q1[2]
    sinh_sq = cm1 * (cm1 + 2.0)
    S = float(np.sum(masses[1:] * terms / sinh_sq**1.5))
    return S, terms, z_gap


def _masses(n: int, masses: Sequence[float] | float | None) -> NDArray[np.float64]:
    if masses is None:
        return np.ones(n)
    m = np.broadcast_to(np.asarray(masses, dtype=float), (n,)).copy()
    if np.any(m <= 0.0):
        raise GeometryError("Masses must be positive")
    return m


def zsum_residual(
    n: int, r: float, omega: float, t: float, masses: Sequence[float] | float | None = None
) -> tuple[float, list[float]]:
    """The sum S and its bracket terms z_j + (q_1⊙q_j) z_1 for j = 2..n.

    Equal unit masses by default.
    """
    Q, _, _ = ngon_orbit(n, r, omega, t)
    S, terms, _ = _zsum_terms(Q, _masses(n, masses))
    return S, terms.tolist()


def ngon_product_gap(n: int, r: float) -> float:
    """Largest difference between cos²(θ_j) r² − z² and the coordinate value of q_1⊙q_j."""
    Q = ngon_positions(n, r)
    theta = ngon_angles(n)[1:]
    z = np.sqrt(1.0 + r * r)
    displayed = np.cos(theta) ** 2 * r * r - z * z
    actual = np.asarray(minkowski_dot(Q[1:], Q[0]))
    return float(np.max(np.abs(displayed - actual)))


def ngon_nonexistence_scan(
    n_range: Iterable[int],
    r_grid: Sequence[float],
    omega_grid: Sequence[float],
    wt_grid: Sequence[float] | None = None,
    t_grid: Sequence[float] | None = None,
    mass: float = 1.0,
) -> ScanReport:
    """Evaluate S over a grid of equal-mass boosted n-gons.

    Exactly one of wt_grid (values of ωt, t = wt/ω) or t_grid (times) is used.
    Pairs with ω·t < 0 are evaluated at t → −t, since the orbit depends on ωt only.
    """
    n_values = sorted(set(int(n) for n in n_range))
    if not n_values or not len(r_grid) or not len(omega_grid):
        raise ValueError("Scan grids must be non-empty")
    if (wt_grid is None) == (t_grid is None):
        raise ValueError("Provide exactly one of wt_grid or t_grid")
    time_values = list(wt_grid if wt_grid is not None else t_grid)  # type: ignore[arg-type]
    if not time_values:
        raise ValueError("Scan grids must be non-empty")

    cells: list[ScanCell] = []
    chain_holds = True
    flipped = 0
    product_gap = 0.0
    for n in n_values:
        masses = _masses(n, mass)
        for r in r_grid:
            product_gap = max(product_gap, ngon_product_gap(n, r))
            for omega in omega_grid:
                for value in time_values:
                    t = value / omega if wt_grid is not None else value
                    if omega * t < 0:
                        t = -t
                        flipped += 1
                    Q, _, _ = ngon_orbit(n, r, omega, t)
                    S, terms, z_gap = _zsum_terms(Q, masses)
                    strict = omega * t > 0
                    ok = bool(np.all(terms < z_gap)) and (
                        bool(np.all(z_gap < 0)) if strict else bool(np.all(z_gap <= 0))
                    )
                    chain_holds = chain_holds and ok
                    cells.append(
                        ScanCell(
                            n=n,
                            r=float(r),
                            omega=float(omega),
                            t=float(t),
                            S=S,
                            max_term_gap=float(np.max(terms - z_gap)),
                            max_z_gap=float(np.max(z_gap)),
                        )
                    )

    max_S = max(c.S for c in cells)
    min_margin = min(abs(c.S) for c in cells)
    by_n = {n: max(c.S for c in cells if c.n == n) for n in n_values}
    if flipped:
        logger.info("Negative ωt pairs evaluated at t → −t", count=flipped)
    if product_gap > 1e-12:
        logger.warning(
            "Displayed cos² form of q_1⊙q_j differs from the coordinate value",
            max_gap=product_gap,
        )
    report = ScanReport(
        grid={
            "n": n_values,
            "r": [float(r) for r in r_grid],
            "omega": [float(w) for w in omega_grid],
            "wt" if wt_grid is not None else "t": [float(v) for v in time_values],
            "mass": mass,
        },
        max_S=max_S,
        min_margin=min_margin,
        max_S_by_n=by_n,
        chain_holds=chain_holds,
        printed_product_gap=product_gap,
        cells=cells,
    )
    logger.info("Scan finished", cells=len(cells), max_S=max_S, certified=report.certified)
    return report


def elliptic_ngon_omega(n: int, mass: float, r: float) -> float:
    """ω² making the rotating n-gon of equal masses a relative equilibrium.

    Balancing the z-component of body 1 at t = 0 gives ω² = −F_z / (r² z),
    where F is the gravitational field on body 1.

    Raises:
        GeometryError: if n < 3.
        NoSolutionError: if the balance gives ω² <= 0.
    """
    if n < 3:
        raise GeometryError("The elliptic n-gon balance needs n >= 3")
    params = NGonParams(n, r)
    Q = ngon_positions(n, r)
    field = gravitational_field(np.full(n, float(mass)), Q)
    omega_sq = float(-field[0, 2] / (r * r * params.z))
    if omega_sq <= 0.0:
        raise NoSolutionError(f"Elliptic {n}-gon balance gives ω² = {omega_sq!r}")
    return omega_sq
