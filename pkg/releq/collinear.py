"""The five-body collinear family on the unit half circle.

Bodies 1, 2 (mass μ) sit at angle α from the imaginary axis, body 3 (mass M)
at i, and bodies 4, 5 (mass m) at angle α + β. The homothety w ↦ e^{ωt} w
moves them as a relative equilibrium when the two balance conditions give the
same ω², i.e. when f1·M + f2·m + f3·μ = 0.

Two coefficient systems are available:

PRINTED
    The published balance formulas, transcribed literally. The region map uses them by
    default; they do not follow from the equations of motion
    (for μ = m = 0 they give ω² = M cos⁴α instead of M cos⁴α / sin³α).
GEODESIC
    The balance derived from the hyperboloid equations: a body at signed
    arclength u along the configuration geodesic needs tangential force
    −ω² sinh u cosh u, with tanh u = ±sin(angle). Masses balanced with this
    system give true relative equilibria.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray

from core.config import settings
from core.errors import GeometryError, NonpositiveMassError, NonpositiveOmegaSqError, NoSolutionError
from core.logging import get_logger
from dynamics.forces import accel_H2, pairwise_distances, printed_equation_gap
from dynamics.integrator import integrate
from dynamics.state import StateH2
from hypergeom.halfplane import HalfPlanePoint
from releq.schemas import CollinearSolution, RegionCell, RegionMap, ResidualReport, SystemComparison

logger = get_logger(__name__)


class CoefficientSystem(str, Enum):
    PRINTED = "printed"
    GEODESIC = "geodesic"


@dataclass(frozen=True)
class CollinearParams:
    alpha: float
    beta: float
    m: float = 1.0
    M: float = 1.0
    mu: float = 1.0

    def __post_init__(self) -> None:
        check_angles(self.alpha, self.beta)
        if min(self.m, self.M, self.mu) <= 0.0:
            raise GeometryError("Collinear masses must be positive")

    @property
    def masses(self) -> list[float]:
        return [self.mu, self.mu, self.M, self.m, self.m]


def check_angles(alpha: float, beta: float) -> None:
    """Require 0 < α < α + β < π/2."""
    if not (0.0 < alpha and 0.0 < beta and alpha + beta < 0.5 * np.pi):
        raise GeometryError(f"Angles must satisfy 0 < α < α + β < π/2, got α={alpha}, β={beta}")


def collinear_positions(alpha: float, beta: float) -> NDArray[np.complex128]:
    check_angles(alpha, beta)
    a, b = alpha, alpha + beta
    return np.array(
        [
            complex(np.sin(a), np.cos(a)),
            complex(-np.sin(a), np.cos(a)),
            1j,
            complex(np.sin(b), np.cos(b)),
            complex(-np.sin(b), np.cos(b)),
        ]
    )


def collinear_initial(alpha: float, beta: float) -> list[HalfPlanePoint]:
    """Initial positions of bodies 1..5 on the unit half circle."""
    return [HalfPlanePoint.from_complex(w) for w in collinear_positions(alpha, beta)]


def _trig(alpha: ArrayLike, beta: ArrayLike):
    a = np.asarray(alpha, dtype=float)
    b = a + np.asarray(beta, dtype=float)
    return np.sin(a), np.cos(a), np.sin(b), np.cos(b)


def _printed_omega_sq(alpha, beta, m, M, mu):
    sa, ca, sb, cb = _trig(alpha, beta)
    w1 = -(ca**4 / sa) * (
        -2.0 * mu * sa * ca**2 / (1.0 + sa**2) ** 3
        - M * sa
        + m * cb**2 * (sb - sa) / (1.0 - sa * sb) ** 3
        - m * cb**2 * (sb + sa) / (sa * sb + 1.0) ** 3
    )
    w2 = -(cb**4 / sb) * (
        -mu * ca**2 * (sb - sa) / (1.0 - sa * sb) ** 3
        - mu * ca**2 * (sb + sa) / (sa * sb + 1.0) ** 3
        - M * sb
        - 2.0 * m * cb**2 * sb / (sb**2 + 1.0) ** 3
    )
    return w1, w2


def _geodesic_omega_sq(alpha, beta, m, M, mu):
    sa, ca, sb, cb = _trig(alpha, beta)
    near = ca**2 * cb**2 / (sb - sa) ** 2
    far = ca**2 * cb**2 / (sb + sa) ** 2
    w1 = (ca**2 / sa) * (mu * ca**4 / (4.0 * sa**2) + M * ca**2 / sa**2 + m * far - m * near)
    w2 = (cb**2 / sb) * (m * cb**4 / (4.0 * sb**2) + M * cb**2 / sb**2 + mu * far + mu * near)
    return w1, w2


_SYSTEMS = {
    CoefficientSystem.PRINTED: _printed_omega_sq,
    CoefficientSystem.GEODESIC: _geodesic_omega_sq,
}


def omega_sq_pair(alpha, beta, m, M, mu, system: CoefficientSystem | str = CoefficientSystem.PRINTED):
    """(ω₁², ω₂²) from the balance of body 1 and of body 4; broadcasts over arrays."""
    return _SYSTEMS[CoefficientSystem(system)](alpha, beta, m, M, mu)


def omega1_sq(alpha, beta, m, M, mu, system: CoefficientSystem | str = CoefficientSystem.PRINTED) -> float:
    """ω² required by the balance of bodies 1 and 2."""
    return float(omega_sq_pair(alpha, beta, m, M, mu, system)[0])


def omega2_sq(alpha, beta, m, M, mu, system: CoefficientSystem | str = CoefficientSystem.PRINTED) -> float:
    """ω² required by the balance of bodies 4 and 5."""
    return float(omega_sq_pair(alpha, beta, m, M, mu, system)[1])


def f_coeffs_array(alpha, beta, system: CoefficientSystem | str = CoefficientSystem.PRINTED):
    """f1, f2, f3 by evaluating ω₁² − ω₂² on the mass basis (M, m, μ); broadcasts."""

    def diff(m, M, mu):
        w1, w2 = omega_sq_pair(alpha, beta, m, M, mu, system)
        return w1 - w2

    return diff(0.0, 1.0, 0.0), diff(1.0, 0.0, 0.0), diff(0.0, 0.0, 1.0)


def f_coeffs(alpha: float, beta: float, system: CoefficientSystem | str = CoefficientSystem.PRINTED):
    """(f1, f2, f3) with ω₁² − ω₂² = f1·M + f2·m + f3·μ."""
    check_angles(alpha, beta)
    f1, f2, f3 = f_coeffs_array(alpha, beta, system)
    return float(f1), float(f2), float(f3)


def printed_h_coeffs(alpha: float, beta: float) -> tuple[float, float, float]:
    """f1, f2, f3 read off the published expansion of ω₁² − ω₂².

    That expansion has sin(α)·sin(α − β) in two denominators where the
    balance formulas have sin(α)·sin(α + β).
    """
    check_angles(alpha, beta)
    sa, ca, sb, cb = _trig(alpha, beta)
    sd = np.sin(alpha - beta)
    x_minus = cb**2 * ca**2 * (sb - sa) / (1.0 - sa * sd) ** 3
    x_plus = cb**2 * ca**2 * (sb + sa) / (1.0 + sa * sd) ** 3
    f1 = ca**4 - cb**4
    f2 = -x_minus * ca**2 / sa + x_plus * ca**2 / sa - 2.0 * cb**6 / (1.0 + sb**2) ** 3
    f3 = -x_minus * cb**2 / sb - x_plus * cb**2 / sb + 2.0 * ca**6 / (1.0 + sa**2) ** 3
    return float(f1), float(f2), float(f3)


def h_transcription_gap(alpha: float, beta: float) -> float:
    """Largest difference between the published expansion and the printed-system coefficients."""
    h = np.array(printed_h_coeffs(alpha, beta))
    f = np.array(f_coeffs(alpha, beta, CoefficientSystem.PRINTED))
    return float(np.max(np.abs(h - f)))


def balance_mass(
    alpha: float,
    beta: float,
    system: CoefficientSystem | str = CoefficientSystem.GEODESIC,
    M: float = 1.0,
    mu: float = 1.0,
) -> tuple[float, tuple[float, float, float]]:
    """The mass m solving f1·M + f2·m + f3·μ = 0.

    Returns:
        (m, (f1, f2, f3))

    Raises:
        NoSolutionError: if f2 >= 0.
        NonpositiveMassError: if the balanced m is not positive.
    """
    f1, f2, f3 = f_coeffs(alpha, beta, system)
    if f2 >= 0.0:
        raise NoSolutionError(f"f2({alpha}, {beta}) = {f2!r} is not negative")
    m = (f1 * M + f3 * mu) / (-f2)
    if m <= 0.0:
        raise NonpositiveMassError(f"Balanced mass m = {m!r} is not positive at α={alpha}, β={beta}")
    return m, (f1, f2, f3)


def solve_masses(
    alpha: float, beta: float, system: CoefficientSystem | str = CoefficientSystem.GEODESIC
) -> CollinearSolution:
    """Balance the masses with M = μ = 1 and return the resulting solution.

    Raises:
        NoSolutionError: if f2 >= 0.
        NonpositiveMassError: if m <= 0.
        NonpositiveOmegaSqError: if ω² <= 0 at the balanced masses.
    """
    system = CoefficientSystem(system)
    m, (f1, f2, f3) = balance_mass(alpha, beta, system)
    omega_sq = omega1_sq(alpha, beta, m, 1.0, 1.0, system)
    if omega_sq <= 0.0:
        logger.warning("Balanced masses give no rotation rate", alpha=alpha, beta=beta, omega_sq=omega_sq)
        raise NonpositiveOmegaSqError(
            f"ω² = {omega_sq!r} at α={alpha}, β={beta}", omega_sq=omega_sq, masses=[1.0, 1.0, 1.0, m, m]
        )
    return CollinearSolution(
        alpha=alpha,
        beta=beta,
        m=m,
        M=1.0,
        mu=1.0,
        omega_sq=omega_sq,
        f1=f1,
        f2=f2,
        f3=f3,
        system=system.value,
    )


def homothetic_state(sol: CollinearSolution, t: float) -> StateH2:
    """State of the orbit w_j(t) = e^{ωt} w_j(0) at time t."""
    omega = float(np.sqrt(sol.omega_sq))
    W = np.exp(omega * t) * collinear_positions(sol.alpha, sol.beta)
    return StateH2(sol.masses, W, omega * W)


def verify_collinear_re(
    sol: CollinearSolution,
    times: Sequence[float] = (0.0, 0.5, 1.0),
    t_end: float | None = 1.0,
    h: float = 1e-4,
) -> ResidualReport:
    """Check a solution against the canonical half-plane dynamics.

    Residuals are |ẅ_orbit − ẅ_dynamics| / Im w per body, maximised over the
    sample times. When t_end is given the initial state is also integrated
    and the largest deviation of the ten pairwise distances is reported.

    Raises:
        NonpositiveOmegaSqError: if sol.omega_sq <= 0.
        CollisionError: propagated from the dynamics.
    """
    if sol.omega_sq <= 0.0:
        raise NonpositiveOmegaSqError("Verification needs ω² > 0", omega_sq=sol.omega_sq)
    omega_sq = sol.omega_sq

    worst = np.zeros(5)
    for t in times:
        state = homothetic_state(sol, float(t))
        expected = omega_sq * state.positions
        residual = np.abs(expected - accel_H2(state)) / state.positions.imag
        worst = np.maximum(worst, residual)

    initial = homothetic_state(sol, 0.0)
    gap = float(np.max(printed_equation_gap(initial)))

    drift = None
    if t_end is not None:
        trajectory = integrate(initial, t_end, h, record_every=max(1, int(round(0.01 / h))))
        d0 = pairwise_distances(initial)
        drift = max(float(np.max(np.abs(pairwise_distances(s) - d0))) for s in trajectory.states)

    report = ResidualReport(
        per_body_residual=worst.tolist(),
        times=[float(t) for t in times],
        distance_drift=drift,
        printed_equation_gap=gap,
    )
    logger.info(
        "Collinear orbit verified",
        alpha=sol.alpha,
        beta=sol.beta,
        max_residual=report.max_residual,
        distance_drift=drift,
        printed_equation_gap=gap,
    )
    if report.max_residual > settings.RESIDUAL_TOL:
        logger.warning("Residual above tolerance", max_residual=report.max_residual, tol=settings.RESIDUAL_TOL)
    return report


def f2_region(
    alpha_steps: int, beta_steps: int, system: CoefficientSystem | str = CoefficientSystem.PRINTED
) -> RegionMap:
    """Cell-centred grid over 0 < α < π/2, 0 < β < π/2 − α with f1, f2, f3 per cell.

    omega_sq_at_solution is filled where the balance gives m > 0 (with M = μ = 1)
    and records ω₁² there, whatever its sign.
    """
    if alpha_steps < 2 or beta_steps < 2:
        raise ValueError("Region map needs at least 2 steps per axis")
    system = CoefficientSystem(system)
    i = (np.arange(alpha_steps) + 0.5) / alpha_steps
    j = (np.arange(beta_steps) + 0.5) / beta_steps
    alpha = np.repeat(i * 0.5 * np.pi, beta_steps)
    beta = np.tile(j, alpha_steps) * (0.5 * np.pi - alpha)

    f1, f2, f3 = f_coeffs_array(alpha, beta, system)
    with np.errstate(divide="ignore", invalid="ignore"):
        m = np.where(f2 < 0, (f1 + f3) / -f2, np.nan)
    solvable = np.isfinite(m) & (m > 0)
    w1, _ = omega_sq_pair(alpha, beta, np.where(solvable, m, 0.0), 1.0, 1.0, system)

    cells = [
        RegionCell(
            alpha=float(alpha[k]),
            beta=float(beta[k]),
            f1=float(f1[k]),
            f2=float(f2[k]),
            f3=float(f3[k]),
            omega_sq_at_solution=float(w1[k]) if solvable[k] else None,
        )
        for k in range(alpha.size)
    ]
    region = RegionMap(alpha_steps=alpha_steps, beta_steps=beta_steps, system=system.value, cells=cells)

    f3_violations = int(np.sum(f3 <= 0))
    if f3_violations:
        logger.warning("f3 is not positive on part of the grid", cells=f3_violations, min_f3=float(np.min(f3)))
    logger.info(
        "Region map computed",
        system=system.value,
        negative=region.negative_count,
        positive=region.positive_count,
        solvable=int(np.sum(solvable)),
        rotating=int(np.sum(solvable & (w1 > 0))),
    )
    return region


def compare_systems(alpha: float, beta: float, m: float, M: float, mu: float) -> SystemComparison:
    """ω₁², ω₂² under both systems, and how the printed balance fares in the dynamics."""
    check_angles(alpha, beta)
    printed = omega_sq_pair(alpha, beta, m, M, mu, CoefficientSystem.PRINTED)
    geodesic = omega_sq_pair(alpha, beta, m, M, mu, CoefficientSystem.GEODESIC)
    residual = None
    try:
        sol = solve_masses(alpha, beta, CoefficientSystem.PRINTED)
        residual = verify_collinear_re(sol, times=(0.0,), t_end=None).max_residual
    except (NoSolutionError, NonpositiveMassError, NonpositiveOmegaSqError) as exc:
        logger.info("Printed system has no balanced solution here", reason=exc.reason)
    return SystemComparison(
        alpha=alpha,
        beta=beta,
        masses=[mu, mu, M, m, m],
        printed=(float(printed[0]), float(printed[1])),
        geodesic=(float(geodesic[0]), float(geodesic[1])),
        printed_solution_residual=residual,
    )
