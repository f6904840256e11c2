from __future__ import annotations

import mpmath as mp
import pytest

from dunkl import make_parameter


@pytest.fixture(params=[0.25, 0.5, 1.0, 3.0], ids=lambda v: f"lam={v:g}")
def param(request):
    return make_parameter(request.param)


def mp_normalized_j(alpha, z):
    """j_alpha(z) = Gamma(alpha + 1) J_alpha(z) / (z/2)^alpha in extended precision."""
    with mp.workdps(30):
        a = mp.mpf(alpha)
        z = mp.mpf(z)
        return float(mp.gamma(a + 1) * mp.besselj(a, z) / (z / 2) ** a)


def mp_poisson(lam, x, y, t, conjugate=False):
    """P_y(x, t) (or Q_y) from the angular form, integrated by mpmath."""
    with mp.workdps(30):
        lam = mp.mpf(lam)
        cp = mp.gamma(lam + 0.5) / (mp.gamma(lam) * mp.sqrt(mp.pi))
        m = 2 ** (lam + 0.5) * mp.gamma(lam + 1) / mp.sqrt(mp.pi)
        x, y, t = mp.mpf(x), mp.mpf(y), mp.mpf(t)

        def q(s):
            return (y * y + x * x + t * t - 2 * x * t * s) ** (-lam - 1)

        # u = 1 -+ s = w^4 removes the endpoint singularities of (1 - s^2)^(lam - 1)
        def near_plus(w):
            u = w**4
            return (2 - u) ** lam * w ** (4 * lam - 1) * q(1 - u) * 4

        def near_minus(w):
            u = w**4
            return (2 - u) ** (lam - 1) * w ** (4 * lam + 3) * q(u - 1) * 4

        total = mp.quad(near_plus, [0, 1]) + mp.quad(near_minus, [0, 1])
        return float(cp * m * (x - t if conjugate else y) * total)
