from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dunkl import make_parameter
from dunkl.errors import DegenerateArguments
from dunkl.measure import Profile
from dunkl.profiles import gaussian
from dunkl.translation import convolve_at, kernel_W, translate_at, translate_W


@settings(max_examples=25, deadline=None)
@given(lam=st.sampled_from([0.25, 0.5, 1.0, 3.0]), x=st.floats(-3, 3).filter(lambda v: abs(v) > 0.05),
       t=st.floats(-3, 3).filter(lambda v: abs(v) > 0.05))
def test_angular_and_kernel_forms_agree(lam, x, t):
    p = make_parameter(lam)
    f = gaussian(0.8, 0.3)
    assert translate_at(p, f, x, t) == pytest.approx(translate_W(p, f, x, t, n=96), abs=1e-8)


def test_translation_is_symmetric(param):
    f = gaussian(1.0, -0.4)
    x, t = 0.9, -1.6
    assert translate_at(param, f, x, t) == pytest.approx(translate_at(param, f, t, x), abs=1e-12)


def test_axis_conventions(param):
    f = gaussian(1.0, 0.5)
    assert translate_at(param, f, 0.0, 1.2) == pytest.approx(f(1.2))
    assert translate_at(param, f, 1.2, 0.0) == pytest.approx(f(1.2))


def test_W_has_unit_mass(param):
    # tau_t 1 = 1
    one = Profile(lambda z: np.ones_like(z), extent=10.0)
    assert translate_W(param, one, 1.3, -0.7, n=96) == pytest.approx(1.0, abs=1e-10)


def test_W_support_and_symmetry(param):
    z = np.linspace(-4, 4, 801)
    W = kernel_W(param, 1.0, 0.5, z)
    outside = (np.abs(z) <= 0.5) | (np.abs(z) >= 1.5)
    assert np.all(W[outside] == 0)
    assert np.allclose(W, kernel_W(param, 0.5, 1.0, z))


def test_W_rejects_axis():
    with pytest.raises(DegenerateArguments):
        kernel_W(make_parameter(1.0), 0.0, 1.0, np.array([0.5]))


def test_convolution_with_gaussian_heat_semigroup(param):
    # e^{-x^2/2} has transform e^{-xi^2/2}; the convolution square has transform e^{-xi^2},
    # i.e. 2^{-(lam + 1/2)} e^{-x^2/4}
    g = gaussian(1.0)
    x = np.array([-1.1, 0.0, 0.7, 2.3])
    ref = 2.0 ** -(param.lam + 0.5) * np.exp(-x * x / 4)
    assert np.max(np.abs(convolve_at(param, g, g, x) - ref)) < 1e-9
