"""Unit tests for the collinear five-body family."""

import numpy as np
import pytest

from core.errors import GeometryError, NoSolutionError, NonpositiveOmegaSqError
from dynamics.forces import accel_H2
from dynamics.state import StateH2
from hypergeom.conversion import halfplane_to_hyperboloid
from releq.boundary import alpha1
from releq.collinear import (
    CoefficientSystem,
    CollinearParams,
    balance_mass,
    collinear_initial,
    collinear_positions,
    compare_systems,
    f2_region,
    f_coeffs,
    h_transcription_gap,
    homothetic_state,
    omega1_sq,
    omega2_sq,
    omega_sq_pair,
    printed_h_coeffs,
    solve_masses,
    verify_collinear_re,
)
from releq.schemas import CollinearSolution

SYSTEMS = list(CoefficientSystem)


def test_initial_positions():
    """Test body 3 sits at i and bodies 1, 2 at (±1/2, √3/2) for α = π/6."""
    points = collinear_initial(np.pi / 6, 0.3)
    assert points[2].w == pytest.approx(1j, abs=1e-15)
    assert points[0].w == pytest.approx(0.5 + 0.5j * np.sqrt(3.0), abs=1e-15)
    assert points[1].w == pytest.approx(-0.5 + 0.5j * np.sqrt(3.0), abs=1e-15)
    np.testing.assert_allclose([abs(p.w) for p in points], 1.0, atol=1e-15)


def test_initial_positions_lie_on_one_geodesic():
    """Test the five points map into the plane x = 0 of the hyperboloid."""
    Q = halfplane_to_hyperboloid(collinear_positions(0.4, 0.7))
    np.testing.assert_allclose(Q[:, 0], 0.0, atol=1e-12)


@pytest.mark.parametrize("alpha,beta", [(0.0, 0.3), (0.5, 0.0), (2.0, 0.1), (1.0, 0.6)])
def test_angles_outside_the_triangle_rejected(alpha, beta):
    """Test 0 < α < α + β < π/2 is enforced."""
    with pytest.raises(GeometryError):
        collinear_initial(alpha, beta)


def test_params_need_positive_masses():
    """Test CollinearParams rejects a zero mass."""
    with pytest.raises(GeometryError):
        CollinearParams(0.3, 0.3, m=0.0)
    assert CollinearParams(0.3, 0.3, m=2.0, M=3.0, mu=4.0).masses == [4.0, 4.0, 3.0, 2.0, 2.0]


@pytest.mark.parametrize("system", SYSTEMS)
def test_zero_masses_give_zero(system):
    """Test both balance rates vanish with all masses zero."""
    assert omega1_sq(0.4, 0.5, 0.0, 0.0, 0.0, system) == 0.0
    assert omega2_sq(0.4, 0.5, 0.0, 0.0, 0.0, system) == 0.0


def test_central_mass_only_reductions():
    """Test the single-term reductions cos⁴α (printed) and cos⁴α / sin³α (geodesic)."""
    alpha = 0.6
    assert omega1_sq(alpha, 0.3, 0.0, 1.0, 0.0) == pytest.approx(np.cos(alpha) ** 4, rel=1e-14)
    assert omega1_sq(alpha, 0.3, 0.0, 1.0, 0.0, "geodesic") == pytest.approx(
        np.cos(alpha) ** 4 / np.sin(alpha) ** 3, rel=1e-14
    )


@pytest.mark.parametrize("system", SYSTEMS)
def test_linearity_identity(system, rng):
    """Test ω₁² − ω₂² = f1·M + f2·m + f3·μ on 1000 random samples."""
    for _ in range(1000):
        alpha = rng.uniform(0.05, 1.4)
        beta = rng.uniform(0.05, 0.95) * (0.5 * np.pi - alpha)
        m, M, mu = rng.uniform(0.1, 5.0, size=3)
        w1, w2 = omega_sq_pair(alpha, beta, m, M, mu, system)
        f1, f2, f3 = f_coeffs(alpha, beta, system)
        terms = [w1, w2, f1 * M, f2 * m, f3 * mu]
        scale = max(1.0, *(abs(t) for t in terms))
        assert abs((w1 - w2) - (f1 * M + f2 * m + f3 * mu)) <= 1e-12 * scale


def test_linearity_at_the_reference_point():
    """Test the identity at (α, β) = (0.5, 0.3) with (M, m, μ) = (3, 2, 5)."""
    f1, f2, f3 = f_coeffs(0.5, 0.3)
    diff = omega1_sq(0.5, 0.3, 2.0, 3.0, 5.0) - omega2_sq(0.5, 0.3, 2.0, 3.0, 5.0)
    assert diff == pytest.approx(3.0 * f1 + 2.0 * f2 + 5.0 * f3, abs=1e-12)


def test_f1_limit_as_alpha_vanishes():
    """Test f1(α → 0⁺, β) → 1 − cos⁴β."""
    assert f_coeffs(1e-9, 0.7)[0] == pytest.approx(1.0 - np.cos(0.7) ** 4, abs=1e-8)


def test_printed_expansion_differs_only_through_the_angle_typo():
    """Test the literal expansion shares f1 and disagrees elsewhere."""
    h = printed_h_coeffs(0.5, 0.3)
    f = f_coeffs(0.5, 0.3, CoefficientSystem.PRINTED)
    assert h[0] == pytest.approx(f[0], rel=1e-14)
    assert h_transcription_gap(0.5, 0.3) > 1e-6


def test_printed_f2_is_positive_near_the_origin():
    """Test no balance exists near (0, 0) under the printed system."""
    assert f_coeffs(0.1, 0.1)[1] > 0.0
    with pytest.raises(NoSolutionError):
        solve_masses(0.1, 0.1, CoefficientSystem.PRINTED)


def test_geodesic_f2_is_negative():
    """Test the geodesic m-coefficient is negative on sampled points."""
    for alpha, beta in [(0.1, 0.1), (0.5, 0.5), (1.2, 0.3), (0.05, 1.4)]:
        assert f_coeffs(alpha, beta, "geodesic")[1] < 0.0


def test_balance_near_the_boundary_line():
    """Test m > 0 and the linear identity at (α₁ + 0.1, π/2 − α − 0.01)."""
    alpha = alpha1() + 0.1
    beta = 0.5 * np.pi - alpha - 0.01
    m, (f1, f2, f3) = balance_mass(alpha, beta)
    assert m > 0.0
    assert abs(f1 + f2 * m + f3) <= 1e-12 * max(1.0, abs(f1), abs(f2 * m), abs(f3))


def test_solve_masses_reference_point(collinear_solution):
    """Test the balanced masses at α = β = 0.5."""
    sol = collinear_solution
    assert sol.system == "geodesic"
    assert (sol.M, sol.mu) == (1.0, 1.0)
    assert sol.m == pytest.approx(2.203, abs=5e-3)
    assert sol.omega_sq == pytest.approx(0.808, abs=5e-3)
    assert sol.omega_sq == pytest.approx(omega2_sq(0.5, 0.5, sol.m, 1.0, 1.0, "geodesic"), rel=1e-10)


def test_solution_schema_enforces_the_balance(collinear_solution):
    """Test a CollinearSolution whose masses do not balance is rejected."""
    data = collinear_solution.model_dump()
    data["m"] = data["m"] * 1.1
    with pytest.raises(ValueError):
        CollinearSolution(**data)


def test_homothetic_orbit_satisfies_the_dynamics(collinear_solution):
    """Test per-body residuals stay below 1e-8 at t = 0, 0.5, 1."""
    report = verify_collinear_re(collinear_solution, t_end=None)
    assert report.max_residual <= 1e-8
    assert report.distance_drift is None
    assert report.printed_equation_gap is not None


def test_mirror_symmetry_of_residuals():
    """Test body 3 is force-free and mirrored bodies have equal residuals for any masses."""
    omega = 1.3
    W = collinear_positions(0.35, 0.6)
    state = StateH2([2.0, 2.0, 3.0, 0.7, 0.7], W, omega * W)
    residual = np.abs(omega**2 * W - accel_H2(state)) / W.imag
    assert residual[2] <= 1e-12
    assert residual[0] == pytest.approx(residual[1], abs=1e-12)
    assert residual[3] == pytest.approx(residual[4], abs=1e-12)


def test_pairwise_distances_are_constant_along_the_homothety(collinear_solution):
    """Test the closed-form orbit keeps all ten distances."""
    from dynamics.forces import pairwise_distances

    d0 = pairwise_distances(homothetic_state(collinear_solution, 0.0))
    d1 = pairwise_distances(homothetic_state(collinear_solution, 1.0))
    np.testing.assert_allclose(d1, d0, atol=1e-12)


def test_verification_needs_positive_omega_sq(collinear_solution):
    """Test ω² <= 0 is refused."""
    bad = collinear_solution.model_copy(update={"omega_sq": -1.0})
    with pytest.raises(NonpositiveOmegaSqError):
        verify_collinear_re(bad)


def test_region_map_shape_and_signs():
    """Test cell count, both signs of f2 and determinism on a 50×50 grid."""
    region = f2_region(50, 50)
    assert len(region.cells) == 2500
    assert region.negative_count > 0
    assert region.positive_count > 0
    assert region.to_csv() == f2_region(50, 50).to_csv()


def test_region_map_csv_layout():
    """Test the 2×2 CSV has a header and four rows."""
    lines = f2_region(2, 2).to_csv().splitlines()
    assert lines[0] == "alpha,beta,f1,f2,f3,omega_sq_at_solution"
    assert len(lines) == 5
    assert all(len(line.split(",")) == 6 for line in lines)


def test_region_map_needs_two_steps():
    """Test fewer than two steps per axis raises ValueError."""
    with pytest.raises(ValueError):
        f2_region(1, 5)


def test_compare_systems_reports_both_rates():
    """Test the comparison carries both systems' values."""
    cmp = compare_systems(0.5, 0.5, 2.0, 1.0, 1.0)
    assert cmp.printed == pytest.approx(omega_sq_pair(0.5, 0.5, 2.0, 1.0, 1.0, "printed"))
    assert cmp.geodesic == pytest.approx(omega_sq_pair(0.5, 0.5, 2.0, 1.0, 1.0, "geodesic"))
    assert cmp.masses == [1.0, 1.0, 1.0, 2.0, 2.0]
