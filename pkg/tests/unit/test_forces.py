"""Unit tests for forces, energies and first integrals."""

import numpy as np
import pytest

from core.errors import CollisionError, GeometryError
from dynamics.forces import (
    accel_H2,
    accel_H2_printed,
    accel_L2,
    acceleration,
    first_integrals,
    gravitational_field,
    halfplane_potential_printed,
    kinetic,
    pairwise_distances,
    potential,
    printed_equation_gap,
    to_halfplane_state,
    to_hyperboloid_state,
    total_energy,
)
from dynamics.state import StateH2, StateL2
from hypergeom.conversion import hyperboloid_jet_to_halfplane
from hypergeom.lorentz import boost_matrix, elliptic_matrix, parabolic_matrix
from hypergeom.minkowski import APEX, minkowski_dot
from tests.conftest import random_l2_state


def test_acceleration_stays_on_the_constraint(rng):
    """Test q_i⊙q̈_i = −q̇_i⊙q̇_i on 1000 random states."""
    for _ in range(1000):
        state = random_l2_state(rng, int(rng.integers(2, 6)), spread=0.7)
        A = accel_L2(state)
        lhs = np.asarray(minkowski_dot(state.positions, A))
        rhs = -np.asarray(minkowski_dot(state.velocities, state.velocities))
        scale = np.maximum(1.0, np.linalg.norm(A, axis=1) * np.linalg.norm(state.positions, axis=1) ** 2)
        assert np.all(np.abs(lhs - rhs) <= 1e-12 * scale)


def test_single_body_moves_on_a_geodesic():
    """Test a free body only feels the constraint force (v⊙v) q."""
    q = boost_matrix(0.4).apply(APEX)
    v = np.array([0.7, 0.0, 0.0])
    state = StateL2([2.0], q[None, :], v[None, :])
    np.testing.assert_allclose(accel_L2(state)[0], 0.49 * q, atol=1e-15)


def test_two_equal_masses_attract_symmetrically(two_body_state):
    """Test mirror-image bodies get mirror-image accelerations."""
    A = accel_L2(two_body_state)
    np.testing.assert_allclose(A[1], A[0] * [-1.0, -1.0, 1.0], atol=1e-14)


@pytest.mark.parametrize("d", [0.1, 1.0, 3.0])
def test_potential_of_two_unit_masses_is_coth(d):
    """Test U = coth d for two unit masses at distance d."""
    Q = np.array([[0.0, np.sinh(-0.5 * d), np.cosh(0.5 * d)], [0.0, np.sinh(0.5 * d), np.cosh(0.5 * d)]])
    state = StateL2(np.ones(2), Q, np.zeros((2, 3)))
    assert potential(state) == pytest.approx(1.0 / np.tanh(d), rel=1e-12)
    assert pairwise_distances(state)[0, 1] == pytest.approx(d, rel=1e-12)


def test_energy_and_integrals_agree_across_models(halfplane_state):
    """Test T, U and the Lorentz momenta are model independent."""
    l2 = to_hyperboloid_state(halfplane_state)
    assert kinetic(halfplane_state) == pytest.approx(kinetic(l2), rel=1e-12)
    assert potential(halfplane_state) == pytest.approx(potential(l2), rel=1e-12)
    assert total_energy(halfplane_state) == pytest.approx(total_energy(l2), rel=1e-12)
    np.testing.assert_allclose(first_integrals(halfplane_state), first_integrals(l2), atol=1e-12)
    np.testing.assert_allclose(pairwise_distances(halfplane_state), pairwise_distances(l2), atol=1e-12)


def test_state_conversion_round_trip(halfplane_state):
    """Test H2 → L2 → H2 restores positions and velocities."""
    back = to_halfplane_state(to_hyperboloid_state(halfplane_state))
    np.testing.assert_allclose(back.positions, halfplane_state.positions, rtol=1e-13)
    np.testing.assert_allclose(back.velocities, halfplane_state.velocities, rtol=1e-12, atol=1e-15)
    np.testing.assert_array_equal(back.masses, halfplane_state.masses)


def test_halfplane_acceleration_is_the_conjugated_field(halfplane_state):
    """Test accel_H2 equals the hyperboloid field carried through the chart."""
    l2 = to_hyperboloid_state(halfplane_state)
    _, _, expected = hyperboloid_jet_to_halfplane(l2.positions, l2.velocities, accel_L2(l2))
    np.testing.assert_allclose(accel_H2(halfplane_state), expected, rtol=1e-10, atol=1e-12)
    np.testing.assert_array_equal(acceleration(halfplane_state), accel_H2(halfplane_state))


def test_halfplane_acceleration_is_moebius_equivariant(halfplane_state):
    """Test accel_H2 commutes with the isometry w ↦ λ w + a."""
    lam, a = 3.0, -1.25
    moved = StateH2(halfplane_state.masses, lam * halfplane_state.positions + a, lam * halfplane_state.velocities)
    np.testing.assert_allclose(accel_H2(moved), lam * accel_H2(halfplane_state), rtol=1e-10, atol=1e-12)


def test_printed_halfplane_forms_are_evaluable(halfplane_state):
    """Test the literal half-plane transcriptions return finite values of the right shape."""
    assert accel_H2_printed(halfplane_state).shape == (3,)
    gap = printed_equation_gap(halfplane_state)
    assert gap.shape == (3,) and np.all(np.isfinite(gap)) and np.all(gap >= 0.0)
    assert np.isfinite(halfplane_potential_printed(halfplane_state))


def test_rotating_pair_carries_only_lxy(two_body_state):
    """Test L_xy of the rotating pair is non-zero and the others vanish."""
    lxy, lxz, lyz = first_integrals(two_body_state)
    assert lxy > 0.0
    assert lxz == pytest.approx(0.0, abs=1e-15)
    assert lyz == pytest.approx(0.0, abs=1e-15)


def test_coincident_bodies_collide():
    """Test a state with two bodies within the collision distance raises CollisionError."""
    q = boost_matrix(1e-10).apply(APEX)
    with pytest.raises(CollisionError) as exc_info:
        StateL2(np.ones(2), np.stack([APEX, q]), np.zeros((2, 3)))
    assert exc_info.value.pair == (0, 1)


def test_field_raises_on_collision_for_raw_arrays():
    """Test the force kernel refuses colliding positions."""
    with pytest.raises(CollisionError):
        gravitational_field(np.ones(2), np.stack([APEX, APEX]))


def test_state_rejects_non_tangent_velocity():
    """Test velocities must be tangent to the hyperboloid."""
    with pytest.raises(GeometryError):
        StateL2([1.0], APEX[None, :], np.array([[0.0, 0.0, 1.0]]))


def test_state_rejects_nonpositive_mass():
    """Test masses must be positive."""
    with pytest.raises(GeometryError):
        StateH2([0.0], [1j], [0j])


def _transform():
    return boost_matrix(0.7) @ elliptic_matrix(0.4) @ parabolic_matrix(0.3)


def test_acceleration_is_lorentz_equivariant(rng):
    """Test accel_L2(G·s) = G·accel_L2(s) on random states."""
    G = _transform()
    for _ in range(200):
        state = random_l2_state(rng, int(rng.integers(2, 6)), spread=0.7)
        moved = StateL2(state.masses, G.apply(state.positions), G.apply(state.velocities))
        expected = G.apply(accel_L2(state))
        scale = max(1.0, float(np.max(np.abs(expected))))
        assert np.max(np.abs(accel_L2(moved) - expected)) <= 1e-8 * scale


def test_potential_and_distances_are_lorentz_invariant(rng):
    """Test a simultaneous isometry leaves U and every pairwise distance unchanged."""
    G = _transform()
    for _ in range(200):
        state = random_l2_state(rng, int(rng.integers(2, 6)), spread=0.7)
        moved = StateL2(state.masses, G.apply(state.positions), G.apply(state.velocities))
        assert potential(moved) == pytest.approx(potential(state), rel=1e-9)
        np.testing.assert_allclose(pairwise_distances(moved), pairwise_distances(state), atol=1e-9)
        assert kinetic(moved) == pytest.approx(kinetic(state), rel=1e-9)


def test_state_from_bodies_matches_array_constructor(two_body_state):
    """Test building a hyperboloid state from model objects and reading them back."""
    rebuilt = StateL2.from_bodies(two_body_state.bodies, two_body_state.points(), two_body_state.tangent_vectors())
    np.testing.assert_array_equal(rebuilt.positions, two_body_state.positions)
    np.testing.assert_array_equal(rebuilt.velocities, two_body_state.velocities)
    np.testing.assert_array_equal(rebuilt.masses, two_body_state.masses)
    assert [b.mass for b in rebuilt.bodies] == [1.0, 1.0]


def test_halfplane_state_from_bodies(halfplane_state):
    """Test building a half-plane state from points and complex velocities."""
    rebuilt = StateH2.from_bodies(halfplane_state.bodies, halfplane_state.points(), list(halfplane_state.velocities))
    np.testing.assert_array_equal(rebuilt.positions, halfplane_state.positions)
    np.testing.assert_array_equal(rebuilt.velocities, halfplane_state.velocities)
    assert [p.im for p in rebuilt.points()] == [1.2, 0.7, 2.0]
