from __future__ import annotations

import numpy as np
import pytest

from conftest import mp_poisson
from dunkl import make_parameter
from dunkl.errors import NonPositiveY
from dunkl.poisson import (
    HalfPlaneLattice,
    cauchy_riemann_residual,
    conjugate_poisson_integral,
    conjugate_poisson_kernel,
    conjugate_poisson_kernel_spectral,
    harmonic_residual,
    kernel_mass,
    poisson_integral,
    poisson_kernel,
    poisson_kernel_spectral,
)
from dunkl.profiles import conjugate_profile, gaussian, poisson_profile

# (lam, x, y, t, P, Q) frozen from mpmath quadrature of the angular form
FROZEN = [
    (0.5, 1.2, 0.7, -0.4, 0.18621445350927487, 0.42563303659262833),
    (1.5, -0.3, 0.2, 0.9, 0.66051193977017086, -3.9630716386210248),
]


@pytest.mark.parametrize("lam,x,y,t,P,Q", FROZEN)
def test_kernels_frozen(lam, x, y, t, P, Q):
    p = make_parameter(lam)
    assert float(poisson_kernel(p, x, y, t)) == pytest.approx(P, rel=1e-12)
    assert float(conjugate_poisson_kernel(p, x, y, t)) == pytest.approx(Q, rel=1e-12)


@pytest.mark.parametrize("x,y,t", [(0.4, 0.3, 2.1), (-2.2, 1.5, 0.6), (1.0, 0.05, 1.02)])
def test_kernels_live_oracle(param, x, y, t):
    assert float(poisson_kernel(param, x, y, t)) == pytest.approx(mp_poisson(param.lam, x, y, t), rel=1e-11)
    assert float(conjugate_poisson_kernel(param, x, y, t)) == pytest.approx(
        mp_poisson(param.lam, x, y, t, conjugate=True), rel=1e-11)


def test_kernel_at_origin_is_profile(param):
    # P_y(x, 0) = P_y(x) and Q_y(x, 0) = Q_y(x)
    x = np.array([-1.5, 0.3, 2.0])
    assert np.allclose(poisson_kernel(param, x, 0.8, 0.0), poisson_profile(param, 0.8)(x), rtol=1e-12)
    assert np.allclose(conjugate_poisson_kernel(param, x, 0.8, 0.0), conjugate_profile(param, 0.8)(x), rtol=1e-12)


def test_spectral_route(param):
    for x, y, t in [(0.7, 0.4, -1.1), (-2.0, 1.3, -0.5)]:
        assert poisson_kernel_spectral(param, x, y, t) == pytest.approx(float(poisson_kernel(param, x, y, t)), abs=1e-8)
        assert conjugate_poisson_kernel_spectral(param, x, y, t) == pytest.approx(
            float(conjugate_poisson_kernel(param, x, y, t)), abs=1e-8)


def test_kernel_mass_is_one(param):
    for x, y in [(0.0, 1.0), (1.3, 0.2), (-4.0, 2.0)]:
        assert kernel_mass(param, x, y) == pytest.approx(1.0, abs=1e-8)


def test_poisson_of_poisson_is_poisson(param):
    # P_{y} * P_1 = P_{1 + y} evaluated at t = x via the profile
    lat = HalfPlaneLattice(np.array([-1.5, 0.0, 1.5]), np.array([0.3, 1.0]))
    u = poisson_integral(param, poisson_profile(param, 1.0), lat)
    ref = np.array([poisson_profile(param, 1.0 + y)(lat.x_nodes) for y in lat.y_nodes])
    assert np.max(np.abs(u - ref)) < 1e-8
    v = conjugate_poisson_integral(param, poisson_profile(param, 1.0), lat)
    refq = np.array([conjugate_profile(param, 1.0 + y)(lat.x_nodes) for y in lat.y_nodes])
    assert np.max(np.abs(v - refq)) < 1e-8


def test_harmonic_and_cauchy_riemann(param):
    f = gaussian(1.0, 0.3)
    x = np.array([-0.8, 1.1])
    y = np.array([0.6, 0.6])
    assert np.max(np.abs(harmonic_residual(param, f, x, y))) < 1e-5
    assert np.max(np.abs(harmonic_residual(param, f, x, y, conjugate=True))) < 1e-5
    r1, r2 = cauchy_riemann_residual(param, f, x, y)
    assert max(np.abs(r1).max(), np.abs(r2).max()) < 1e-5


def test_lattice_validation():
    with pytest.raises(NonPositiveY):
        HalfPlaneLattice(np.array([-1.0, 1.0]), np.array([0.0, 1.0]))
    with pytest.raises(ValueError):
        HalfPlaneLattice(np.array([-1.0, 2.0]), np.array([1.0]))
