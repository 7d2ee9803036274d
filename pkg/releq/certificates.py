"""Numerical certificate checks for the relative-equilibrium claims."""

from typing import Sequence

import numpy as np

from core.config import settings
from core.errors import CurvedNBodyError
from core.logging import get_logger
from releq.boundary import (
    alpha1,
    boundary_f2,
    p_of_alpha,
    pbar,
    pbar_critical_points,
    pbar_derivative,
    pbar_root,
)
from releq.collinear import CoefficientSystem, f2_region, f_coeffs, solve_masses, verify_collinear_re
from releq.ngon import elliptic_ngon_omega, elliptic_ngon_orbit, ngon_nonexistence_scan, ngon_orbit, zsum_residual
from releq.residual import full_re_residual_L2
from releq.schemas import CheckResult

logger = get_logger(__name__)

DEFAULT_N_RANGE = range(3, 9)
DEFAULT_R_GRID = tuple(float(r) for r in np.logspace(np.log10(0.1), np.log10(5.0), 20))
DEFAULT_OMEGA_GRID = (0.1, 1.0, 2.0)
DEFAULT_WT_GRID = tuple(float(v) for v in np.linspace(0.0, 5.0, 20))
REGION_STEPS = 200


class CertificateCheck:
    """Base class for certificate checks."""

    def __init__(self, name: str, description: str | None = None):
        """Initialize certificate check.

        Args:
            name: Check identifier
            description: Human-readable description
        """
        self.name = name
        self.description = description

    def run(self) -> CheckResult:
        """Evaluate the check.

        Returns:
            CheckResult with status passed, failed or warning
        """
        raise NotImplementedError("Subclasses must implement run method")

    def _result(self, status: str, **kwargs) -> CheckResult:
        return CheckResult(check_name=self.name, check_description=self.description, status=status, **kwargs)


class NGonNonexistenceCheck(CertificateCheck):
    """S < 0 and the bracket chain on every cell of the boosted n-gon grid."""

    def __init__(
        self,
        n_range: Sequence[int] = DEFAULT_N_RANGE,
        name: str = "ngon_nonexistence",
        description: str = "Boosted regular n-gons give S < 0 on the whole grid",
    ):
        super().__init__(name=name, description=description)
        self.n_range = list(n_range)

    def run(self) -> CheckResult:
        report = ngon_nonexistence_scan(self.n_range, DEFAULT_R_GRID, DEFAULT_OMEGA_GRID, wt_grid=DEFAULT_WT_GRID)
        status = "passed" if report.certified else "failed"
        message = f"{len(report.cells)} cells, chain_holds={report.chain_holds}"
        if report.printed_product_gap > 1e-12:
            message += f"; displayed cos² product form off by up to {report.printed_product_gap:.3g}"
        return self._result(status, value=report.max_S, threshold=0.0, message=message)


class LagrangianCorollaryCheck(NGonNonexistenceCheck):
    def __init__(self):
        super().__init__(
            n_range=[3],
            name="lagrangian_corollary",
            description="Equilateral triangles admit no hyperbolic relative equilibrium",
        )


class NGonResidualIdentityCheck(CertificateCheck):
    """Body-1 z-defect of the boosted n-gon equals −S."""

    def __init__(self, samples: int = 100, seed: int = 7):
        super().__init__(
            name="ngon_residual_identity",
            description="z-component of the body-1 defect equals −S on boosted n-gons",
        )
        self.samples = samples
        self.seed = seed

    def run(self) -> CheckResult:
        rng = np.random.default_rng(self.seed)
        worst = 0.0
        for _ in range(self.samples):
            n = int(rng.integers(3, 7))
            r = float(rng.uniform(0.3, 1.5))
            omega = float(rng.uniform(0.1, 2.0))
            t = float(rng.uniform(0.0, 1.0))
            report = full_re_residual_L2(lambda s: ngon_orbit(n, r, omega, s), np.ones(n), [t])
            S, _ = zsum_residual(n, r, omega, t)
            assert report.signed_z_defect is not None
            worst = max(worst, abs(report.signed_z_defect[0] + S))
        status = "passed" if worst <= 1e-12 else "failed"
        return self._result(status, value=worst, threshold=1e-12)


class PrintedValuesCheck(CertificateCheck):
    def __init__(self):
        super().__init__(
            name="printed_values",
            description="P(0) = 2, P(π/2) = −1, P̄(1) = 2, critical points and the unique root of P̄",
        )

    def run(self) -> CheckResult:
        failures = []
        if p_of_alpha(0.0) != 2.0:
            failures.append(f"P(0) = {p_of_alpha(0.0)!r}")
        if p_of_alpha(0.5 * np.pi) != -1.0:
            failures.append(f"P(π/2) = {p_of_alpha(0.5 * np.pi)!r}")
        if pbar(1.0) != 2.0:
            failures.append(f"P̄(1) = {pbar(1.0)!r}")
        slope = max(abs(pbar_derivative(x)) for x in pbar_critical_points())
        if slope > 1e-12:
            failures.append(f"P̄′ at critical points = {slope!r}")
        x0 = pbar_root()
        if not 0.0 < x0 < 1.0 or abs(pbar(x0)) > 1e-13:
            failures.append(f"P̄({x0!r}) = {pbar(x0)!r}")
        grid = np.linspace(0.0, 1.0, 10001)
        sign_changes = int(np.sum(np.diff(np.sign(np.array([pbar(x) for x in grid]))) != 0))
        if sign_changes != 1:
            failures.append(f"P̄ changes sign {sign_changes} times on [0, 1]")
        return self._result(
            "failed" if failures else "passed",
            value=abs(pbar(x0)),
            threshold=1e-13,
            message="; ".join(failures) or None,
        )


class RegionMapCheck(CertificateCheck):
    """Both signs of f2 occur and the cells next to the boundary line are negative beyond α₁."""

    def __init__(self, steps: int = REGION_STEPS):
        super().__init__(name="region_map", description="f2 < 0 and f2 > 0 regions are both non-empty")
        self.steps = steps

    def run(self) -> CheckResult:
        region = f2_region(self.steps, self.steps, CoefficientSystem.PRINTED)
        a1 = alpha1()
        alphas = np.linspace(a1, 0.5 * np.pi, 52)[1:-1]
        near_line = [f_coeffs(a, 0.5 * np.pi - a - 1e-3)[1] for a in alphas]
        problems = []
        if region.negative_count == 0:
            problems.append("no f2 < 0 cell")
        if region.positive_count == 0:
            problems.append("no f2 > 0 cell")
        if max(near_line) >= 0.0:
            problems.append(f"f2 near the boundary line reaches {max(near_line)!r} for α > α₁")
        return self._result(
            "failed" if problems else "passed",
            value=float(region.negative_count),
            message="; ".join(problems) or f"{region.negative_count} negative, {region.positive_count} positive cells",
        )


class CoefficientPositivityCheck(CertificateCheck):
    """f1 (or f3) positive on the region grid; a violation fails or warns."""

    def __init__(self, index: int, fail_on_violation: bool, steps: int = REGION_STEPS):
        label = f"f{index}"
        super().__init__(name=f"{label}_positivity", description=f"{label} > 0 on the admissible triangle")
        self.index = index
        self.fail_on_violation = fail_on_violation
        self.steps = steps

    def run(self) -> CheckResult:
        region = f2_region(self.steps, self.steps, CoefficientSystem.PRINTED)
        values = np.array([getattr(c, f"f{self.index}") for c in region.cells])
        violations = int(np.sum(values <= 0.0))
        if not violations:
            return self._result("passed", value=float(values.min()), threshold=0.0)
        return self._result(
            "failed" if self.fail_on_violation else "warning",
            value=float(values.min()),
            threshold=0.0,
            message=f"{violations} of {values.size} cells have f{self.index} <= 0",
        )


class BoundaryClosedFormCheck(CertificateCheck):
    """Extrapolated f2 on β = π/2 − α against P/Q; disagreement is a finding."""

    def __init__(self, samples: int = 9):
        super().__init__(name="boundary_closed_form", description="lim f2(α, π/2 − α) equals P/Q")
        self.samples = samples

    def run(self) -> CheckResult:
        alphas = np.linspace(0.0, 0.5 * np.pi, self.samples + 2)[1:-1]
        reports = [boundary_f2(float(a)) for a in alphas]
        worst = max(r.gap for r in reports)
        if all(r.agrees for r in reports):
            return self._result("passed", value=worst, threshold=1e-8)
        leading = [round(r.leading_coefficient, 6) for r in reports]
        return self._result(
            "warning",
            value=worst,
            threshold=1e-8,
            message=f"f2 vanishes on the line with leading coefficients {leading}; P/Q does not",
        )


class EllipticControlCheck(CertificateCheck):
    """Rotating equal-mass n-gons are relative equilibria the residual accepts."""

    def __init__(self, n_values: Sequence[int] = (3, 4, 5, 6), r: float = 1.0, mass: float = 1.0):
        super().__init__(name="elliptic_control", description="Rotating regular n-gons have residual <= 1e-9")
        self.n_values = list(n_values)
        self.r = r
        self.mass = mass

    def run(self) -> CheckResult:
        worst = 0.0
        for n in self.n_values:
            omega = float(np.sqrt(elliptic_ngon_omega(n, self.mass, self.r)))
            report = full_re_residual_L2(
                lambda t: elliptic_ngon_orbit(n, self.r, omega, t), np.full(n, self.mass), [0.0, 0.5, 1.0]
            )
            worst = max(worst, report.max_residual)
        return self._result("passed" if worst <= 1e-9 else "failed", value=worst, threshold=1e-9)


class CollinearEndToEndCheck(CertificateCheck):
    """Solve, substitute and integrate at several points with positive masses and ω² > 0."""

    def __init__(self, candidates: Sequence[tuple[float, float]] | None = None, required: int = 5):
        super().__init__(
            name="collinear_end_to_end",
            description="Balanced collinear configurations move as relative equilibria",
        )
        self.candidates = list(candidates) if candidates is not None else [
            (a, b) for a in (0.3, 0.5, 0.7, 0.2, 0.4) for b in (0.4, 0.5, 0.6) if a + b < 0.5 * np.pi
        ]
        self.required = required

    def run(self) -> CheckResult:
        solved = 0
        worst_residual = 0.0
        worst_drift = 0.0
        for alpha, beta in self.candidates:
            if solved >= self.required:
                break
            try:
                sol = solve_masses(alpha, beta, CoefficientSystem.GEODESIC)
            except CurvedNBodyError as exc:
                logger.debug("Candidate skipped", alpha=alpha, beta=beta, reason=exc.reason)
                continue
            report = verify_collinear_re(sol)
            solved += 1
            worst_residual = max(worst_residual, report.max_residual)
            worst_drift = max(worst_drift, report.distance_drift or 0.0)
        ok = (
            solved >= self.required
            and worst_residual <= settings.RESIDUAL_TOL
            and worst_drift <= settings.DISTANCE_DRIFT_TOL
        )
        return self._result(
            "passed" if ok else "failed",
            value=worst_residual,
            threshold=settings.RESIDUAL_TOL,
            message=f"{solved} points solved, max distance drift {worst_drift:.3g}",
        )


class CertificateSuite:
    """Runs certificate checks and collects their results."""

    def __init__(self, checks: list[CertificateCheck] | None = None):
        self.checks: list[CertificateCheck] = checks if checks is not None else [
            NGonNonexistenceCheck(),
            LagrangianCorollaryCheck(),
            NGonResidualIdentityCheck(),
            PrintedValuesCheck(),
            RegionMapCheck(),
            CoefficientPositivityCheck(1, fail_on_violation=True),
            CoefficientPositivityCheck(3, fail_on_violation=False),
            BoundaryClosedFormCheck(),
            EllipticControlCheck(),
            CollinearEndToEndCheck(),
        ]

    def add_check(self, check: CertificateCheck) -> None:
        self.checks.append(check)
        logger.info("Certificate check added", check_name=check.name)

    def run(self) -> list[CheckResult]:
        """Run every check; a check that raises is recorded as failed."""
        results = []
        for check in self.checks:
            try:
                result = check.run()
                logger.debug("Certificate check executed", check_name=check.name, status=result.status)
            except Exception as e:
                logger.error("Certificate check raised", check_name=check.name, error=str(e))
                result = CheckResult(
                    check_name=check.name,
                    check_description=check.description,
                    status="failed",
                    message=f"Check execution failed: {e}",
                )
            if result.status == "warning":
                logger.warning("Certificate finding", check_name=check.name, message=result.message)
            results.append(result)
        return results


_certificate_suite: CertificateSuite | None = None


def get_certificate_suite() -> CertificateSuite:
    """Get the global certificate suite instance."""
    global _certificate_suite
    if _certificate_suite is None:
        _certificate_suite = CertificateSuite()
    return _certificate_suite
