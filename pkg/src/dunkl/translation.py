"""lam-translation (angular form and kernel form) and lam-convolution."""
from __future__ import annotations

import math

import numpy as np

from .errors import DegenerateArguments, InterpolationOutOfRange, TruncationTooTight
from .measure import (
    Profile,
    SampledFunction,
    _param,
    as_callable,
    build_jacobi_rule,
    check_decay,
    profile_rule,
)
from .operator import dunkl_derivative
from .quadrature import gauss_jacobi, graded_edges, panel_rule

__all__ = [
    "kernel_W",
    "translate_at",
    "translate",
    "translate_W",
    "translated_profile",
    "convolve",
    "convolve_at",
    "inverse_D_translation",
]


def _angular_order(x, t, scale: float) -> int:
    span = (np.max(np.abs(x)) + np.max(np.abs(t))) / scale
    return int(min(1024, 64 + 16 * math.ceil(span)))


def translate_at(param, f, x, t, *, n: int | None = None, scale: float | None = None):
    """(tau_t f)(x) by the angular formula, broadcasting x against t.

    tau_t f(x) = c' int [f_e(r) + f_o(r)(x+t)/r] (1+s)(1-s^2)^(lam-1) ds,
    r = sqrt(x^2 + t^2 + 2xts).  Both terms are even in r, hence smooth in s.
    At x = 0 the value is f(t) and at t = 0 it is f(x).
    """
    param = _param(param)
    func = as_callable(f)
    x, t = np.broadcast_arrays(np.asarray(x, float), np.asarray(t, float))
    if n is None:
        sc = scale if scale is not None else getattr(f, "scale", 1.0) if isinstance(f, Profile) else 1.0
        n = _angular_order(x, t, sc)
    rule = build_jacobi_rule(param, n)
    s = rule.nodes
    xx = x[..., None]
    tt = t[..., None]
    r2 = np.maximum(xx * xx + tt * tt + 2.0 * xx * tt * s, 0.0)
    r = np.sqrt(r2)
    fp = func(r)
    fm = func(-r)
    safe = np.where(r > 0, r, 1.0)
    integrand = 0.5 * (fp + fm) + np.where(r > 0, 0.5 * (fp - fm) * (xx + tt) / safe, 0.0)
    out = param.c_prime * (integrand @ rule.weights)
    # exact conventions on the axes
    out = np.where(t == 0, func(x), out)
    out = np.where(x == 0, func(t), out)
    return out


def translated_profile(param, prof: Profile, t: float) -> Profile:
    """x -> (tau_t f)(x) as a Profile."""
    param = _param(param)

    def g(x):
        return translate_at(param, prof, x, t, scale=prof.scale)

    tail = prof.tail
    return Profile(g, prof.extent + abs(t), tail, (), None if prof.support is None else
                   (-(max(abs(prof.support[0]), abs(prof.support[1])) + abs(t)),
                    max(abs(prof.support[0]), abs(prof.support[1])) + abs(t)),
                   prof.scale, f"tau_{t:g}({prof.name})")


def translate(param, f: SampledFunction, t: float, *, n: int | None = None) -> SampledFunction:
    """tau_t f on the nodes of f's grid.

    Uses the analytic profile when present, otherwise panel interpolation,
    which raises InterpolationOutOfRange when |x| + |t| exceeds the grid.
    """
    param = _param(param)
    if f.profile is None and np.max(np.abs(f.grid.nodes)) + abs(t) > f.grid.truncation:
        raise InterpolationOutOfRange("translation needs values beyond the sampled range")
    if t == 0:
        return SampledFunction(f.grid, np.array(f.values, copy=True), f.profile)
    src = f.profile if f.profile is not None else f
    scale = f.profile.scale if f.profile is not None else (f.grid.truncation / (f.grid.size / f.grid.panel_order))
    vals = translate_at(param, src, f.grid.nodes, t, n=n, scale=scale)
    prof = translated_profile(param, f.profile, t) if f.profile is not None else None
    return SampledFunction(f.grid, vals, prof)


def kernel_W(param, x: float, t: float, z):
    """W_lam(x, t, z) = W0 (1 - s(x,t,z) + s(z,x,t) + s(z,t,x)), s(a,b,c) = (a^2+b^2-c^2)/(2ab)."""
    param = _param(param)
    lam = param.lam
    if x * t == 0:
        raise DegenerateArguments("W is defined for x t != 0; the axes use point masses")
    z = np.asarray(z, float)
    ax, at = abs(x), abs(t)
    lo, hi = abs(ax - at), ax + at
    az = np.abs(z)
    inside = (az > lo) & (az < hi)
    out = np.zeros_like(z)
    zi = z[inside]
    base = (hi * hi - zi * zi) * (zi * zi - lo * lo)
    W0 = param.c_dprime * np.abs(x * t * zi) ** (1 - 2 * lam) / base ** (1 - lam)

    def sig(a, b, c):
        return (a * a + b * b - c * c) / (2 * a * b)

    out[inside] = W0 * (1 - sig(x, t, zi) + sig(zi, x, t) + sig(zi, t, x))
    return out


def translate_W(param, f, x: float, t: float, *, n: int = 64):
    """(tau_t f)(x) = c_lam int f(z) W(x, t, z) |z|^(2 lam) dz.

    On each of the two support intervals ||x|-|t|| < |z| < |x|+|t| the
    endpoint factors with exponent lam - 1 go into a Gauss-Jacobi weight.
    """
    param = _param(param)
    lam = param.lam
    func = as_callable(f)
    if x * t == 0:
        raise DegenerateArguments("use translate_at on the axes")
    ax, at = abs(x), abs(t)
    a, b = abs(ax - at), ax + at
    r, w = gauss_jacobi(n, lam - 1.0, lam - 1.0)
    half = 0.5 * (b - a)
    zpos = 0.5 * (a + b) + half * r
    # remaining smooth factor after removing (b-z)^(lam-1)(z-a)^(lam-1)
    total = 0.0
    for sgn in (1.0, -1.0):
        z = sgn * zpos
        smooth = (b + zpos) ** (lam - 1) * (zpos + a) ** (lam - 1)
        W0 = param.c_dprime * np.abs(x * t * z) ** (1 - 2 * lam) * smooth

        def sig(p, q, c):
            return (p * p + q * q - c * c) / (2 * p * q)

        Wf = W0 * (1 - sig(x, t, z) + sig(z, x, t) + sig(z, t, x))
        total += np.sum(w * half ** (2 * lam - 1) * Wf * func(z) * np.abs(z) ** (2 * lam))
    return param.c_lambda * total


def convolve_at(param, f, g: Profile, x, *, n_ang: int | None = None, hmax: float | None = None):
    """(f *_lam g)(x) = c_lam int (tau_x f)(-t) g(t) |t|^(2 lam) dt at points x."""
    param = _param(param)
    fprof = f if isinstance(f, Profile) else f.profile
    nodes, weights = profile_rule(param, g, hmax=hmax)
    x = np.atleast_1d(np.asarray(x, float))
    out = np.empty(x.size)
    gv = g(nodes) * weights
    scale = min(fprof.scale if fprof is not None else 1.0, g.scale)
    for i, xi in enumerate(x):
        vals = translate_at(param, f, -nodes, xi, n=n_ang, scale=scale)
        out[i] = np.dot(vals, gv)
    return out


def convolve(param, f: SampledFunction, g: SampledFunction, *, n_ang: int | None = None) -> SampledFunction:
    """f *_lam g on f's grid, integrating over g's grid.

    Both inputs must decay within their truncation (TruncationTooTight).
    f needs an analytic profile or must be sampled on a range covering
    |x| + |t| (otherwise InterpolationOutOfRange).
    """
    param = _param(param)
    for h in (f, g):
        try:
            check_decay(h, 1e-12)
        except TruncationTooTight:
            raise TruncationTooTight("convolution inputs must decay inside the truncation")
    src = f.profile if f.profile is not None else f
    if f.profile is None and f.grid.truncation < np.max(np.abs(f.grid.nodes)) + g.grid.truncation:
        raise InterpolationOutOfRange("sampled f does not cover the translated arguments")
    t = g.grid.nodes
    gv = np.asarray(g.values) * g.grid.weights
    sc = min(f.profile.scale if f.profile else 1.0, g.profile.scale if g.profile else 1.0)
    xs = f.grid.nodes
    n = n_ang if n_ang is not None else _angular_order(xs, t, sc)
    out = np.empty(xs.size, dtype=np.result_type(gv, float))
    block = max(1, 2_000_000 // (t.size * n))
    for lo in range(0, xs.size, block):
        xb = xs[lo:lo + block]
        vals = translate_at(param, src, -t[None, :], xb[:, None], n=n)
        out[lo:lo + block] = vals @ gv
    return SampledFunction(f.grid, out)


def inverse_D_translation(param, prof: Profile, x, *, h: float = 1e-3):
    """f(x) = (1/2) int [tau_x (Df)](-t) sgn(t) dt for a rapidly decaying profile f."""
    param = _param(param)

    def Df(u):
        return dunkl_derivative(param, prof, u, h)

    x = np.atleast_1d(np.asarray(x, float))
    out = np.empty(x.size)
    for i, xi in enumerate(x):
        T = prof.extent + abs(xi)
        foci = [0.0, xi, -xi]
        edges = graded_edges(-T, T, foci=foci, breaks=[0.0], hmin=prof.scale / 8, hmax=prof.scale / 2)
        nodes, weights = panel_rule(edges, 16)
        vals = translate_at(param, Df, -nodes, xi, scale=prof.scale)
        out[i] = 0.5 * np.dot(weights, vals * np.sign(nodes))
    return out
