from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dunkl import build_jacobi_rule, build_weighted_grid, make_parameter
from dunkl.errors import NonPositiveLambda
from dunkl.measure import angular_integral, angular_integral_direct, interval_measure, lp_norm, sample
from dunkl.profiles import gaussian

# c_lam, c'_lam, m_lam frozen from mpmath at 30 digits
FROZEN = {
    0.5: (0.5, 0.31830988618379067, 1.0),
    1.5: (0.25, 0.63661977236758134, 3.0),
}


@pytest.mark.parametrize("lam", sorted(FROZEN))
def test_constants_match_frozen(lam):
    p = make_parameter(lam)
    c, cp, m = FROZEN[lam]
    assert p.c_lambda == pytest.approx(c, rel=1e-14)
    assert p.c_prime == pytest.approx(cp, rel=1e-14)
    assert p.m_lambda == pytest.approx(m, rel=1e-14)


def test_critical_exponent():
    p = make_parameter(0.5)
    assert p.p_critical == pytest.approx(4 / 5)


@pytest.mark.parametrize("lam", [0.0, -1.0, float("nan")])
def test_rejects_nonpositive_lambda(lam):
    with pytest.raises(NonPositiveLambda):
        make_parameter(lam)


def test_gaussian_has_unit_dunkl_mass(param):
    # c_lam int exp(-x^2/2) |x|^(2 lam) dx = 1
    g = build_weighted_grid(param, 14.0, 256)
    assert g.integrate(np.exp(-0.5 * g.nodes**2)) == pytest.approx(1.0, abs=1e-13)
    assert g.is_symmetric()


def test_jacobi_rule_mass(param):
    rule = build_jacobi_rule(param, 24)
    assert rule.mass == pytest.approx(1.0 / param.c_prime, rel=1e-13)
    # odd moments of (1 - s^2)^(lam - 1) vanish, so int s (1+s)(...) = int s^2 (...)
    s2 = rule.integrate(rule.nodes)
    assert s2 == pytest.approx(rule.mass / (2 * param.lam + 1), rel=1e-12)


def test_interval_measure_is_additive(param):
    whole = interval_measure(param, -0.7, 2.0)
    parts = interval_measure(param, -0.7, 0.0) + interval_measure(param, 0.0, 1.1) + interval_measure(param, 1.1, 2.0)
    assert whole == pytest.approx(parts, rel=1e-13)


def test_lp_norm_of_gaussian(param):
    # ||e^{-x^2/2}||_2^2 = c_lam int e^{-x^2} |x|^{2 lam} = 2^{-(lam + 1/2)}
    n2 = lp_norm(param, gaussian(1.0), 2) ** 2
    assert n2 == pytest.approx(2.0 ** -(param.lam + 0.5), rel=1e-12)


def test_sample_is_exact_on_nodes():
    p = make_parameter(1.0)
    g = build_weighted_grid(p, 10.0, 128)
    f = sample(g, gaussian(1.0, 0.2))
    assert np.array_equal(f.values, gaussian(1.0, 0.2)(g.nodes))


@settings(max_examples=40, deadline=None)
@given(lam=st.sampled_from([0.25, 0.5, 1.0, 3.0]), a=st.floats(1e-3, 5.0), b=st.floats(0.0, 5.0),
       sigma=st.sampled_from([1, -1]))
def test_angular_table_matches_direct(lam, a, b, sigma):
    p = make_parameter(lam)
    fast = float(angular_integral(p, a, b, sigma))
    ref = float(angular_integral_direct(lam, a, b, sigma))
    assert fast == pytest.approx(ref, rel=1e-9)


def test_angular_integral_at_b_zero(param):
    # I(a, 0, sigma) = a^(-lam-1) int (1 + sigma s)(1 - s^2)^(lam - 1) ds = a^(-lam-1) / c'
    for a in (0.3, 1.0, 4.0):
        assert float(angular_integral(param, a, 0.0, 1)) == pytest.approx(a ** (-param.lam - 1) / param.c_prime,
                                                                          rel=1e-12)


def test_weighted_grid_weights_positive():
    p = make_parameter(0.25)
    g = build_weighted_grid(p, 5.0, 64)
    assert np.all(g.weights > 0)
    assert math.isclose(g.truncation, 5.0)
