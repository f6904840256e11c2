from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import mp_normalized_j
from dunkl import make_parameter
from dunkl.errors import ArgumentTooLarge
from dunkl.special import bessel_j_normalized, dunkl_kernel, dunkl_kernel_eigen_residual, dunkl_kernel_values

# normalized Bessel values frozen from mpmath
FROZEN_J = [
    (-0.25, 3.7, -0.58508532394773059),
    (0.5, 12.0, -0.044714409833369581),
    (2.5, 0.3, 0.99358747810336962),
    (1.0, 25.0, -0.010028019966423192),
]


@pytest.mark.parametrize("alpha,z,ref", FROZEN_J)
def test_normalized_bessel_frozen(alpha, z, ref):
    assert bessel_j_normalized(alpha, z) == pytest.approx(ref, rel=1e-12, abs=1e-15)
    assert bessel_j_normalized(alpha, np.array([z]))[0] == pytest.approx(ref, rel=1e-12, abs=1e-15)


def test_normalized_bessel_at_zero():
    assert bessel_j_normalized(0.7, 0.0) == 1.0


@settings(max_examples=30, deadline=None)
@given(alpha=st.sampled_from([-0.25, 0.0, 0.25, 0.5, 1.0, 1.5, 2.5, 3.5]), z=st.floats(0.01, 60.0))
def test_array_route_matches_mpmath(alpha, z):
    val = bessel_j_normalized(alpha, np.array([z]))[0]
    assert val == pytest.approx(mp_normalized_j(alpha, z), abs=1e-13)


def test_series_radius_enforced():
    with pytest.raises(ArgumentTooLarge):
        bessel_j_normalized(0.5, 1e4, method="series", radius=50.0)


def test_kernel_frozen_value():
    # E_1(2.5 i), mpmath
    e = dunkl_kernel(make_parameter(1.0), 2.5)
    assert e.value.real == pytest.approx(0.2393888576415826, rel=1e-13)
    assert e.value.imag == pytest.approx(0.41621298927540654, rel=1e-13)


def test_kernel_routes_agree(param):
    for x in (0.5, 7.0, 30.0):
        s = dunkl_kernel(param, x, method="Series").value
        lap = dunkl_kernel(param, x, method="Laplace").value
        assert abs(s - lap) < 1e-10


def test_kernel_values_unimodular_bound(param):
    x = np.linspace(-40, 40, 2001)
    assert np.max(np.abs(dunkl_kernel_values(param, x))) <= 1.0 + 1e-12


def test_kernel_conjugate_symmetry(param):
    x = np.linspace(0.1, 20, 50)
    assert np.allclose(dunkl_kernel_values(param, -x), np.conj(dunkl_kernel_values(param, x)), atol=1e-15)


def test_kernel_is_eigenfunction(param):
    assert dunkl_kernel_eigen_residual(param, 0.8, 1.3, 1e-3) < 1e-5
