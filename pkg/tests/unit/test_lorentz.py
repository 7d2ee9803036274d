"""Unit tests for Lorentz isometries of the hyperboloid."""

import numpy as np
import pytest

from core.errors import GeometryError
from hypergeom.lorentz import LorentzTransform, boost_matrix, elliptic_matrix, parabolic_matrix
from hypergeom.minkowski import APEX, HyperboloidPoint, MinkowskiVec, TangentVec, minkowski_dot
from tests.conftest import random_hyperboloid_points

FAMILIES = [elliptic_matrix, boost_matrix, parabolic_matrix]


@pytest.mark.parametrize("family", FAMILIES)
def test_one_parameter_group_law(family, rng):
    """Test M(s) M(t) = M(s + t) for each one-parameter family."""
    for s, t in rng.uniform(-2.0, 2.0, size=(200, 2)):
        product = (family(s) @ family(t)).m
        expected = family(s + t).m
        scale = max(1.0, float(np.max(np.abs(expected))))
        assert np.max(np.abs(product - expected)) <= 1e-12 * scale


@pytest.mark.parametrize("family", FAMILIES)
def test_families_preserve_the_lorentz_product(family, rng):
    """Test ⊙ is preserved on 1000 random point pairs."""
    P = random_hyperboloid_points(rng, 1000)
    Q = random_hyperboloid_points(rng, 1000)
    params = rng.uniform(-1.0, 1.0, size=1000)
    for p, q, s in zip(P, Q, params):
        g = family(s)
        before = minkowski_dot(p, q)
        after = minkowski_dot(g.apply(p), g.apply(q))
        scale = max(1.0, np.linalg.norm(g.apply(p)) * np.linalg.norm(g.apply(q)))
        assert abs(after - before) <= 1e-12 * scale


def test_inverse_composes_to_identity():
    """Test J mᵀ J inverts a composite transform."""
    g = boost_matrix(0.7) @ elliptic_matrix(1.3) @ parabolic_matrix(-0.4)
    np.testing.assert_allclose((g @ g.inverse()).m, np.eye(3), atol=1e-12)


def test_conjugate_of_rotation_fixes_the_image_of_the_apex():
    """Test P A(θ) P⁻¹ fixes P(apex)."""
    p = boost_matrix(0.8)
    rotation = elliptic_matrix(0.9).conjugate(p)
    centre = p.apply(APEX)
    np.testing.assert_allclose(rotation.apply(centre), centre, atol=1e-12)


def test_boost_moves_along_the_geodesic_x_zero():
    """Test B(s) sends the apex to (0, sinh s, cosh s)."""
    np.testing.assert_allclose(boost_matrix(1.5).apply(APEX), [0.0, np.sinh(1.5), np.cosh(1.5)], atol=1e-15)


def test_parabolic_fixes_its_light_like_direction():
    """Test C(t) fixes (0, 1, 1)."""
    np.testing.assert_allclose(parabolic_matrix(2.5).apply(np.array([0.0, 1.0, 1.0])), [0.0, 1.0, 1.0], atol=1e-12)


def test_apply_keeps_model_types():
    """Test points map to points and tangent vectors to tangent vectors."""
    g = boost_matrix(0.3)
    p = HyperboloidPoint.from_xy(0.2, -0.1)
    image = g.apply(p)
    assert isinstance(image, HyperboloidPoint)
    v = TangentVec(HyperboloidPoint.from_xy(0.0, 0.0), MinkowskiVec(1.0, 0.0, 0.0))
    assert isinstance(g.apply(v), TangentVec)


@pytest.mark.parametrize(
    "matrix",
    [
        np.diag([1.0, 1.0, 2.0]),
        np.diag([-1.0, 1.0, 1.0]),
        np.diag([-1.0, 1.0, -1.0]),
        np.eye(2),
    ],
)
def test_invalid_matrices_rejected(matrix):
    """Test non-Lorentz, orientation-reversing and time-reversing matrices raise."""
    with pytest.raises(GeometryError):
        LorentzTransform(matrix)


def test_matrix_is_read_only():
    """Test the stored matrix cannot be mutated."""
    g = LorentzTransform.identity()
    with pytest.raises(ValueError):
        g.m[0, 0] = 2.0
