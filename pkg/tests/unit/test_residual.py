"""Unit tests for equation-of-motion residuals."""

import numpy as np
import pytest

from hypergeom.lorentz import boost_matrix
from hypergeom.minkowski import APEX
from releq.residual import full_re_residual_L2, re_defect_L2


def test_geodesic_has_zero_defect():
    """Test a single body on q(t) = B(t) apex satisfies the equations exactly."""

    def orbit(t):
        q = boost_matrix(t).apply(APEX)
        v = np.array([0.0, np.cosh(t), np.sinh(t)])
        return q[None, :], v[None, :], q[None, :]

    report = full_re_residual_L2(orbit, [1.0], [0.0, 0.5, 1.0])
    assert report.max_residual <= 1e-14
    assert report.times == [0.0, 0.5, 1.0]
    assert len(report.signed_z_defect) == 1


def test_defect_detects_wrong_acceleration():
    """Test a static body with a spurious acceleration shows up in the defect."""
    Q = APEX[None, :]
    V = np.zeros((1, 3))
    A = np.array([[0.1, 0.0, 0.0]])
    np.testing.assert_allclose(re_defect_L2(Q, V, A, [1.0]), A)


def test_sample_times_required():
    """Test an empty time list raises ValueError."""
    with pytest.raises(ValueError):
        full_re_residual_L2(lambda t: (APEX[None, :], np.zeros((1, 3)), np.zeros((1, 3))), [1.0], [])
