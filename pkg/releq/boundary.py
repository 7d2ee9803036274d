"""f2 on the boundary line β = π/2 − α and the cubic that governs its sign.

With x = cos²α the closed form P/Q has numerator P = P̄(x), where
P̄(x) = −(4x³ − 4x² − 3x + 1).
"""

import numpy as np
from scipy.optimize import bisect

from core.config import settings
from core.logging import get_logger
from releq.collinear import CoefficientSystem, f_coeffs
from releq.schemas import BoundaryReport, PbarRoot

logger = get_logger(__name__)

PBAR = np.polynomial.Polynomial([-1.0, 3.0, 4.0, -4.0])
BOUNDARY_EPSILON = 1e-3
AGREEMENT_TOL = 1e-8


def pbar(x: float) -> float:
    return float(PBAR(x))


def pbar_derivative(x: float) -> float:
    return float(PBAR.deriv()(x))


def pbar_critical_points() -> tuple[float, float]:
    """x = 1/3 ∓ √13/6."""
    root13 = np.sqrt(13.0) / 6.0
    return 1.0 / 3.0 - root13, 1.0 / 3.0 + root13


def pbar_root() -> float:
    """The unique root of P̄ in (0, 1), by bisection."""
    x0 = float(bisect(PBAR, 0.0, 1.0, xtol=settings.PBAR_XTOL))
    logger.debug("Cubic root bracketed", x0=x0, value=pbar(x0))
    return x0


def alpha1() -> float:
    """The angle arccos(√x₀) where the boundary closed form changes sign."""
    return float(np.arccos(np.sqrt(pbar_root())))


def pbar_root_report() -> PbarRoot:
    x0 = pbar_root()
    return PbarRoot(x0=x0, alpha1=float(np.arccos(np.sqrt(x0))), pbar_at_x0=pbar(x0))


def p_of_alpha(alpha: float) -> float:
    """P(α) = −(4cos⁶α − 4cos⁴α − 3cos²α + 1)."""
    return pbar(np.cos(alpha) ** 2)


def q_of_alpha(alpha: float) -> float:
    """Q(α) = (4cos⁴α − 8cos²α + 5)³, positive for every α."""
    c2 = np.cos(alpha) ** 2
    return float((4.0 * c2 * c2 - 8.0 * c2 + 5.0) ** 3)


def _f2_near_line(alpha: float, eps: float, system: CoefficientSystem) -> float:
    return f_coeffs(alpha, 0.5 * np.pi - alpha - eps, system)[1]


def _richardson_sq(f, eps: float) -> float:
    """Limit at ε → 0 of a function even in ε: (4 f(ε/2) − f(ε)) / 3."""
    return (4.0 * f(0.5 * eps) - f(eps)) / 3.0


def boundary_f2(
    alpha: float,
    system: CoefficientSystem | str = CoefficientSystem.PRINTED,
    eps: float = BOUNDARY_EPSILON,
) -> BoundaryReport:
    """Limit of f2 on the line β = π/2 − α compared with the closed form P/Q.

    The limit is extrapolated from f2(α, π/2 − α − ε) at ε and ε/2. The
    leading coefficient is the limit of f2 / cos²(α + β), the factor every
    m-term of the printed balance carries.

    Raises:
        GeometryError: if α is outside (0, π/2) or ε leaves the triangle.
    """
    system = CoefficientSystem(system)
    limit = _richardson_sq(lambda e: _f2_near_line(alpha, e, system), eps)
    leading = _richardson_sq(lambda e: _f2_near_line(alpha, e, system) / np.sin(e) ** 2, eps)
    P, Q = p_of_alpha(alpha), q_of_alpha(alpha)
    closed_form = P / Q
    gap = abs(limit - closed_form)
    report = BoundaryReport(
        alpha=alpha,
        limit_f2=limit,
        leading_coefficient=leading,
        P=P,
        Q=Q,
        closed_form=closed_form,
        gap=gap,
        agrees=gap <= AGREEMENT_TOL,
    )
    if not report.agrees:
        logger.warning(
            "Boundary limit of f2 differs from P/Q",
            alpha=alpha,
            system=system.value,
            limit_f2=limit,
            closed_form=closed_form,
            leading_coefficient=leading,
        )
    return report
