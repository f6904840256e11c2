"""Analytic test functions used by the tests and the verification suites."""
from __future__ import annotations

import numpy as np

from .measure import Profile, _param

__all__ = [
    "gaussian",
    "x_gaussian",
    "poisson_profile",
    "conjugate_profile",
    "bump",
    "annulus_bump",
    "dilate",
    "scaled",
    "zero",
    "unit_mass_bump",
]


def gaussian(scale: float = 1.0, center: float = 0.0, amp: float = 1.0) -> Profile:
    """amp * exp(-(x - center)^2 / (2 scale^2))."""
    s = float(scale)
    c = float(center)

    def f(x):
        return amp * np.exp(-0.5 * ((x - c) / s) ** 2)

    parity = "even" if c == 0 else None
    return Profile(f, extent=abs(c) + 13.0 * s, scale=s, name=f"gaussian(s={s:g},c={c:g})", parity=parity)


def x_gaussian(scale: float = 1.0) -> Profile:
    s = float(scale)

    def f(x):
        return x / s * np.exp(-0.5 * (x / s) ** 2)

    return Profile(f, extent=13.0 * s, scale=s, name=f"x_gaussian(s={s:g})", parity="odd")


def poisson_profile(param, y: float) -> Profile:
    """P_y(x) = m_lam y (y^2 + x^2)^(-lam-1)."""
    param = _param(param)
    lam = param.lam
    m = param.m_lambda
    y = float(y)

    def f(x):
        return m * y * (y * y + x * x) ** (-lam - 1.0)

    return Profile(f, extent=20.0 * y, tail=2 * lam + 2, scale=y, name=f"P_{y:g}", parity="even")


def conjugate_profile(param, y: float) -> Profile:
    """Q_y(x) = m_lam x (y^2 + x^2)^(-lam-1)."""
    param = _param(param)
    lam = param.lam
    m = param.m_lambda
    y = float(y)

    def f(x):
        return m * x * (y * y + x * x) ** (-lam - 1.0)

    return Profile(f, extent=20.0 * y, tail=2 * lam + 1, scale=y, name=f"Q_{y:g}", parity="odd")


def _bump_shape(u):
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    out[inside] = np.exp(1.0 - 1.0 / (1.0 - u[inside] ** 2))
    return out


def bump(radius: float = 1.0, center: float = 0.0) -> Profile:
    """C-infinity bump exp(1 - 1/(1 - u^2)), u = (x - center)/radius, peak value 1."""
    r = float(radius)
    c = float(center)

    def f(x):
        return _bump_shape((x - c) / r)

    return Profile(f, extent=abs(c) + r, support=(c - r, c + r), scale=r / 4.0, name=f"bump(r={r:g},c={c:g})")


def annulus_bump(r1: float, r2: float) -> Profile:
    """Even smooth bump supported on r1 <= |x| <= r2."""
    mid = 0.5 * (r1 + r2)
    half = 0.5 * (r2 - r1)

    def f(x):
        return _bump_shape((np.abs(x) - mid) / half)

    return Profile(f, extent=r2, support=(-r2, r2), breaks=(-r1, r1) if r1 > 0 else (), scale=half / 4.0,
                   name=f"annulus({r1:g},{r2:g})", parity="even")


def dilate(param, prof: Profile, eps: float) -> Profile:
    """phi_eps(x) = eps^(-2 lam - 1) phi(x / eps), the mass-preserving dilation."""
    param = _param(param)
    k = eps ** (-2 * param.lam - 1.0)

    def f(x):
        return k * prof(x / eps)

    sup = None if prof.support is None else (prof.support[0] * eps, prof.support[1] * eps)
    return Profile(f, extent=prof.extent * eps, tail=prof.tail, breaks=tuple(b * eps for b in prof.breaks),
                   support=sup, scale=prof.scale * eps, name=f"{prof.name}@{eps:g}", parity=prof.parity)


def scaled(prof: Profile, c: float) -> Profile:
    def f(x):
        return c * prof(x)

    return Profile(f, prof.extent, prof.tail, prof.breaks, prof.support, prof.scale, f"{c:g}*{prof.name}", prof.parity)


def zero() -> Profile:
    return Profile(lambda x: np.zeros_like(x, dtype=float), extent=1.0, name="zero", parity="even")


def normalized_bump_mass(param) -> float:
    """c_lam int bump(x) |x|^(2 lam) dx for the unit bump, by quadrature."""
    from .measure import profile_rule

    prof = bump(1.0)
    nodes, weights = profile_rule(param, prof, hmax=0.05)
    return float(np.dot(weights, prof(nodes)))


def unit_mass_bump(param) -> Profile:
    """Bump on [-1, 1] normalized to unit weighted mass."""
    m = normalized_bump_mass(param)
    prof = bump(1.0)
    return Profile(lambda x: prof(x) / m, extent=1.0, support=(-1.0, 1.0), scale=0.25, name="unit_bump", parity="even")

