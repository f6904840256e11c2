from __future__ import annotations

import numpy as np
import pytest

from dunkl import build_weighted_grid, make_parameter
from dunkl.errors import BoundaryPoint
from dunkl.measure import Profile, sample
from dunkl.operator import apply_D, apply_D_squared, dunkl_derivative, lambda_laplacian


def test_D_on_monomials(param):
    x = np.array([-1.3, -0.2, 0.4, 2.0])
    # D x = 1 + 2 lam, D x^2 = 2 x
    assert np.allclose(dunkl_derivative(param, lambda t: t, x), 1 + 2 * param.lam, atol=1e-10)
    assert np.allclose(dunkl_derivative(param, lambda t: t * t, x), 2 * x, atol=1e-9)


def test_D_of_gaussian_on_grid(param):
    # D e^{-x^2/2} = -x e^{-x^2/2} since the function is even
    g = build_weighted_grid(param, 10.0, 128)
    prof = Profile(lambda t: np.exp(-0.5 * t * t), extent=10.0)
    Df = apply_D(param, sample(g, prof))
    assert np.max(np.abs(Df.values + g.nodes * np.exp(-0.5 * g.nodes**2))) < 1e-10


def test_D_squared_of_odd_function(param):
    # D^2 x = D(1 + 2 lam) = 0
    g = build_weighted_grid(param, 4.0, 64)
    prof = Profile(lambda t: t, extent=4.0)
    assert np.max(np.abs(apply_D_squared(param, sample(g, prof)).values)) < 1e-6


def test_laplacian_rejects_axis():
    p = make_parameter(1.0)
    with pytest.raises(BoundaryPoint):
        lambda_laplacian(p, lambda x, y: x + y, 0.0, 1.0)
    with pytest.raises(BoundaryPoint):
        lambda_laplacian(p, lambda x, y: x + y, 1.0, 1e-4)


def test_laplacian_annihilates_y():
    # u = y is lam-harmonic
    p = make_parameter(0.5)
    assert abs(lambda_laplacian(p, lambda x, y: y + 0 * x, 0.7, 1.0)) < 1e-8
