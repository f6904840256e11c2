from __future__ import annotations

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from dunkl import build_weighted_grid, make_parameter
from dunkl.measure import sample
from dunkl.profiles import gaussian, poisson_profile, x_gaussian
from dunkl.transform import (
    derivative_multiplier_defect,
    forward,
    grids_for,
    inverse,
    plancherel_defect,
    roundtrip_error,
    transform_at,
)


def test_gaussian_is_fixed(param):
    # F e^{-x^2/2} = e^{-xi^2/2}
    g = build_weighted_grid(param, 14.0, 384)
    S = forward(param, sample(g, gaussian(1.0)), g)
    assert np.max(np.abs(S.values - np.exp(-0.5 * g.nodes**2))) < 1e-12


def test_odd_gaussian_spectrum(param):
    # x e^{-x^2/2} = -D e^{-x^2/2}, so its transform is -i xi e^{-xi^2/2}
    g = build_weighted_grid(param, 14.0, 384)
    S = forward(param, sample(g, x_gaussian(1.0)), g)
    ref = -1j * g.nodes * np.exp(-0.5 * g.nodes**2)
    assert np.max(np.abs(S.values - ref)) < 1e-12


def test_poisson_spectrum(param):
    # F P_y = e^{-y |xi|}, needs the tail correction
    prof = poisson_profile(param, 1.0)
    gx, gxi = grids_for(param, prof, 20.0)
    S = forward(param, sample(gx, prof), gxi)
    assert np.max(np.abs(S.values - np.exp(-np.abs(gxi.nodes)))) < 1e-6


@settings(max_examples=10, deadline=None)
@given(lam=st.sampled_from([0.25, 1.0, 3.0]), s=st.floats(0.5, 1.5), c=st.floats(-1.0, 1.0))
def test_plancherel_and_roundtrip(lam, s, c):
    p = make_parameter(lam)
    prof = gaussian(s, c)
    gx, gxi = grids_for(p, prof, 13.0 / s + 2 * abs(c))
    f = sample(gx, prof)
    assert plancherel_defect(p, f, gxi) < 1e-8
    assert roundtrip_error(p, f, gxi) < 1e-8


def test_inverse_matches_pointwise(param):
    g = build_weighted_grid(param, 14.0, 384)
    S = forward(param, sample(g, gaussian(1.0, 0.4)), g)
    back = inverse(param, S, g)
    x = np.array([-0.9, 0.0, 1.3])
    direct = transform_at(param, g, S.values, x, sign=1.0)
    assert np.max(np.abs(back.values - gaussian(1.0, 0.4)(g.nodes))) < 1e-10
    assert np.allclose(direct.real, gaussian(1.0, 0.4)(x), atol=1e-10)


def test_derivative_multiplier(param):
    g = build_weighted_grid(param, 14.0, 384)
    assert derivative_multiplier_defect(param, sample(g, gaussian(1.0, 0.3)), g) < 1e-8
