import math

import numpy as np
import pytest

from lmgmetric.curvature import christoffel, ricci_scalar_2d


def test_flat_plane():
    assert abs(ricci_scalar_2d(lambda x, y: np.eye(2), 0.3, -1.2)) < 1e-8


def test_flat_polar_coordinates():
    # ds^2 = dr^2 + r^2 dphi^2 is flat even though the components vary
    assert abs(ricci_scalar_2d(lambda r, p: np.diag([1.0, r * r]), 1.3, 0.2)) < 1e-6


@pytest.mark.parametrize("theta", [0.4, 1.0, 2.2])
def test_unit_sphere(theta):
    R = ricci_scalar_2d(lambda t, p: np.diag([1.0, math.sin(t) ** 2]), theta, 0.5)
    assert R == pytest.approx(2.0, rel=1e-6)


@pytest.mark.parametrize("y", [0.3, 1.0, 4.0])
def test_hyperbolic_half_plane(y):
    R = ricci_scalar_2d(lambda x, yy: np.eye(2) / yy**2, 0.1, y, step=1e-4 * y)
    assert R == pytest.approx(-2.0, rel=1e-6)


def test_non_diagonal_chart():
    # Euclidean metric in sheared coordinates u = x + y, v = y
    G = np.array([[1.0, -1.0], [-1.0, 2.0]])
    assert abs(ricci_scalar_2d(lambda u, v: G, 0.0, 0.0)) < 1e-8


def test_christoffel_polar():
    r = 1.7
    G = christoffel(lambda rr, p: np.diag([1.0, rr * rr]), r, 0.0)
    assert G[0, 1, 1] == pytest.approx(-r, rel=1e-8)
    assert G[1, 0, 1] == pytest.approx(1 / r, rel=1e-8)
    assert G[1, 1, 0] == pytest.approx(1 / r, rel=1e-8)
