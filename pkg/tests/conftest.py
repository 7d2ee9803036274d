"""Shared test fixtures for all tests."""

import numpy as np
import pytest
from dotenv import load_dotenv

from core.logging import configure_logging
from dynamics.state import StateH2, StateL2
from hypergeom.minkowski import project_tangent
from releq.collinear import solve_masses

load_dotenv()
configure_logging("WARNING")


def random_hyperboloid_points(rng: np.random.Generator, n: int, spread: float = 1.0) -> np.ndarray:
    """n points lifted from normally distributed (x, y)."""
    xy = rng.normal(scale=spread, size=(n, 2))
    z = np.sqrt(1.0 + np.sum(xy**2, axis=1))
    return np.column_stack([xy, z])


def random_l2_state(rng: np.random.Generator, n: int, spread: float = 1.0, speed: float = 0.5) -> StateL2:
    Q = random_hyperboloid_points(rng, n, spread)
    V = project_tangent(Q, rng.normal(scale=speed, size=(n, 3)))
    return StateL2(rng.uniform(0.5, 2.0, size=n), Q, V)


@pytest.fixture
def rng():
    """Seeded generator so sampled checks are reproducible."""
    return np.random.default_rng(20240611)


@pytest.fixture
def random_state(rng):
    """Factory for random hyperboloid states."""

    def _make(n: int = 4, spread: float = 1.0, speed: float = 0.5) -> StateL2:
        return random_l2_state(rng, n, spread, speed)

    return _make


@pytest.fixture
def two_body_state():
    """Two unit masses at distance 1 on a slightly sub-circular bound orbit about the apex."""
    r = np.sinh(0.5)
    z = np.cosh(0.5)
    omega = np.sqrt(2.0 / np.sinh(1.0) ** 3)
    Q = np.array([[0.0, r, z], [0.0, -r, z]])
    V = 0.9 * omega * np.array([[-r, 0.0, 0.0], [r, 0.0, 0.0]])
    return StateL2(np.ones(2), Q, V)


@pytest.fixture
def halfplane_state():
    """Three bodies in the half plane with generic velocities."""
    return StateH2(
        np.array([1.0, 2.0, 0.5]),
        np.array([0.3 + 1.2j, -0.8 + 0.7j, 1.1 + 2.0j]),
        np.array([0.1 - 0.2j, 0.05 + 0.3j, -0.4 + 0.1j]),
    )


@pytest.fixture(scope="session")
def collinear_solution():
    """Balanced collinear configuration at α = β = 0.5."""
    return solve_masses(0.5, 0.5)
