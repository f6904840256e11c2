from __future__ import annotations

import numpy as np
import pytest

from dunkl import make_parameter
from dunkl.hilbert import PVSchedule, hilbert_kernel, hilbert_profile, hilbert_pv, pv_integral
from dunkl.profiles import conjugate_profile, gaussian, poisson_profile


def test_hilbert_of_poisson_is_conjugate(param):
    # H P_y = Q_y
    x = np.array([-2.5, -0.4, 0.0, 0.9, 4.0])
    got = pv_integral(param, poisson_profile(param, 1.0), x)
    assert np.max(np.abs(got - conjugate_profile(param, 1.0)(x))) < 1e-8


def test_kernel_is_limit_of_conjugate_kernel(param):
    from dunkl.poisson import conjugate_poisson_kernel

    x, t = 1.3, -0.6
    assert float(hilbert_kernel(param, x, t)) == pytest.approx(float(conjugate_poisson_kernel(param, x, 1e-7, t)),
                                                               rel=1e-6)


def test_kernel_reflection(param):
    # h(-x, -t) = -h(x, t)
    assert float(hilbert_kernel(param, -1.1, 0.4)) == pytest.approx(-float(hilbert_kernel(param, 1.1, -0.4)),
                                                                     rel=1e-13)


def test_excision_and_subtraction_routes_agree(param):
    f = gaussian(0.8, 0.2)
    x = np.array([-1.0, 0.3, 1.7])
    pv = np.array([r.value for r in hilbert_pv(param, f, x)])
    assert np.max(np.abs(pv - pv_integral(param, f, x))) < 1e-4


def test_profile_parity():
    p = make_parameter(1.0)
    Hf = hilbert_profile(p, gaussian(1.0))
    x = np.array([0.5, 1.5, 20.0])
    assert np.allclose(Hf(-x), -Hf(x), atol=1e-12)
    assert Hf.parity == "odd"


@pytest.mark.parametrize("eps", [(0.1, 0.05), (0.1, 0.09, 0.05), (0.1, 0.01, 0.001)])
def test_schedule_validation(eps):
    with pytest.raises(ValueError):
        PVSchedule(eps)
