"""The lam-Hilbert transform: multiplier, principal value and boundary routes.

The kernel is h(x, t) = C (x - t) I(a, b, sigma) with a = (|x| - |t|)^2,
b = 2|xt|, sigma = sgn(xt), the conjugate Poisson kernel at y = 0.  Near
the diagonal c h(x, t) |t|^(2 lam) behaves like 1 / (pi (x - t)); at
t = -x it has an integrable logarithmic singularity.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import DiagonalPoint, NonConvergentBoundary, NonConvergentPV
from .measure import (
    Profile,
    SampledFunction,
    WeightedGrid,
    _param,
    angular_integral,
    build_weighted_grid,
    lp_norm,
    panel_interpolate,
    profile_rule,
    sample,
)
from .poisson import as_profile, conjugate_poisson_integral, HalfPlaneLattice
from .quadrature import graded_edges, panel_rule, richardson
from .transform import Spectrum, forward, inverse

__all__ = [
    "PVSchedule",
    "PVResult",
    "BoundaryResult",
    "DEFAULT_SCHEDULE",
    "hilbert_kernel",
    "hilbert_pv",
    "pv_integral",
    "hilbert_multiplier",
    "hilbert_boundary",
    "hilbert_profile",
    "involution_defect",
    "isometry_defect",
]


@dataclass(frozen=True)
class PVSchedule:
    epsilons: tuple = (1e-1, 5e-2, 2.5e-2, 1.25e-2)
    extrapolation_order: int = 2

    def __post_init__(self):
        e = np.asarray(self.epsilons, float)
        if e.size < 3:
            raise ValueError("at least three excision radii are needed")
        if np.any(e <= 0) or np.any(np.diff(e) >= 0):
            raise ValueError("excision radii must be positive and decreasing")
        r = e[:-1] / e[1:]
        if np.any(r < 2 - 1e-12) or np.any(r > 4 + 1e-12):
            raise ValueError("successive radius ratios must lie in [2, 4]")


DEFAULT_SCHEDULE = PVSchedule()

# innermost panel (relative to the profile scale) at the log singularity t = -x
_LOG_HMIN = 1e-12


@dataclass(frozen=True)
class PVResult:
    value: float
    error: float
    excised: np.ndarray


@dataclass(frozen=True)
class BoundaryResult:
    values: np.ndarray
    error: np.ndarray
    distances: np.ndarray
    y_sequence: tuple


def hilbert_kernel(param, x, t):
    """h(x, t), vectorized; raises DiagonalPoint where x == t."""
    param = _param(param)
    x, t = np.broadcast_arrays(np.asarray(x, float), np.asarray(t, float))
    if np.any(x == t):
        raise DiagonalPoint("h(x, t) is singular at t = x")
    a = (np.abs(x) - np.abs(t)) ** 2
    b = 2.0 * np.abs(x * t)
    sigma = np.where(x * t < 0, -1.0, 1.0)
    return param.poisson_const * (x - t) * angular_integral(param, a, b, sigma)


def _kernel_scaled(param, x, t):
    """c h(x, t) |t|^(2 lam) (x - t), finite on the diagonal."""
    x, t = np.broadcast_arrays(np.asarray(x, float), np.asarray(t, float))
    a = (np.abs(x) - np.abs(t)) ** 2
    b = 2.0 * np.abs(x * t)
    sigma = np.where(x * t < 0, -1.0, 1.0)
    # (x - t)^2 I = a I ((x - t)^2 / a); use the scaled integral where sigma = +1
    same = sigma > 0
    out = np.empty(x.shape)
    with np.errstate(divide="ignore", invalid="ignore"):
        Ia = angular_integral(param, a, b, sigma, scaled=True)
        out[same] = Ia[same]
        Ip = angular_integral(param, a[~same], b[~same], -1.0)
        out[~same] = Ip * (x[~same] - t[~same]) ** 2
    return param.c_lambda * param.poisson_const * out * np.abs(t) ** (2 * param.lam)


def _with_breaks(prof: Profile, extra) -> Profile:
    return dataclasses.replace(prof, breaks=tuple(prof.breaks) + tuple(float(b) for b in extra))


def _excised(param, prof: Profile, x: float, eps: float, hmin: float) -> float:
    """c int_{|t - x| > eps} f(t) h(x, t) |t|^(2 lam) dt."""
    p = _with_breaks(prof, (x - eps, x + eps))
    foci = (x - eps, x + eps, (-x, _LOG_HMIN * prof.scale)) if x != 0 else (-eps, eps)
    nodes, weights = profile_rule(param, p, foci=foci, hmin=hmin, hmax=prof.scale / 2)
    keep = np.abs(nodes - x) > eps
    t = nodes[keep]
    return float(np.dot(weights[keep] * prof(t), hilbert_kernel(param, x, t)))


def hilbert_pv(param, f, x, schedule: PVSchedule = DEFAULT_SCHEDULE, *, tol: float = 1e-3):
    """Principal value by symmetric excision and Richardson extrapolation in eps.

    The weight |t|^(2 lam) varies on the scale |x| / (2 lam), so for
    0 < |x| < 2 max(1, 2 lam) eps_0 the schedule is shrunk by that ratio.

    Returns a PVResult per point (a list for array x).  NonConvergentPV is
    raised when the two highest extrapolants differ by more than ``tol``.
    """
    param = _param(param)
    prof = as_profile(f)
    eps = np.asarray(schedule.epsilons, float)
    xs = np.atleast_1d(np.asarray(x, float))
    out = []
    for xi in xs:
        # the hole must stay clear of 0 and -x, where the kernel changes form
        e = eps if xi == 0 else eps * min(1.0, abs(xi) / (2 * max(1.0, 2 * param.lam) * eps[0]))
        vals = np.array([_excised(param, prof, float(xi), ek, ek / 8) for ek in e])
        k = schedule.extrapolation_order + 2
        est, err = richardson(e[-k:], vals[-k:])
        if not err <= tol:
            raise NonConvergentPV(f"extrapolants differ by {err:.2e} at x = {xi:g}")
        out.append(PVResult(float(est), float(err), vals))
    return out if np.ndim(x) else out[0]


def pv_integral(param, f, x, *, hmin: float = 1e-9):
    """Principal value by subtracting the diagonal singularity.

    Inside a window W = [x - d, x + d] that avoids 0 and -x the integrand
    f(t) c h |t|^(2 lam) - k f(x) / (x - t) is integrated, whose PV over W
    vanishes; k = 1/pi off the axis and c m_lam at x = 0.  Outside W the
    kernel is regular.  Accurate for piecewise smooth f with the
    discontinuities listed in the profile breaks.
    """
    param = _param(param)
    prof = as_profile(f)
    xs = np.atleast_1d(np.asarray(x, float))
    out = np.empty(xs.size)
    for i, xi in enumerate(xs):
        xi = float(xi)
        if xi == 0:
            d = prof.scale / 2
            k = param.c_lambda * param.m_lambda
        else:
            d = min(abs(xi) / 2, prof.scale / 2)
            k = 1.0 / math.pi
        fx = float(prof(np.array([xi]))[0])
        inside = [b for b in prof.breaks if xi - d < b < xi + d]
        w_edges = graded_edges(xi - d, xi + d, foci=[xi] + inside, breaks=[xi] + inside,
                               hmin=max(hmin, d * 1e-12), hmax=d / 2)
        tn, tw = panel_rule(w_edges, 16)
        u = xi - tn
        g = prof(tn) * _kernel_scaled(param, xi, tn) / u - k * fx / u
        win = float(np.dot(tw, g))
        # regular part: profile rule with the window removed
        p = _with_breaks(prof, (xi - d, xi + d))
        foci = (xi, (-xi, _LOG_HMIN * prof.scale)) if xi != 0 else (xi,)
        nodes, weights = profile_rule(param, p, foci=foci, hmin=d / 4, hmax=prof.scale / 2)
        keep = np.abs(nodes - xi) > d
        t = nodes[keep]
        outer = float(np.dot(weights[keep] * prof(t), hilbert_kernel(param, xi, t)))
        out[i] = win + outer
    return out if np.ndim(x) else float(out[0])


def hilbert_multiplier(param, f: SampledFunction, xi_grid: WeightedGrid | None = None, *,
                       x_grid: WeightedGrid | None = None) -> SampledFunction:
    """inverse( -i sgn(xi) forward(f) ), the reference route; returns the real part."""
    param = _param(param)
    xi_grid = f.grid if xi_grid is None else xi_grid
    x_grid = f.grid if x_grid is None else x_grid
    S = forward(param, f, xi_grid)
    HS = Spectrum(S.xi_grid, -1j * np.sign(S.xi_grid.nodes) * S.values)
    g = inverse(param, HS, x_grid)
    vals = np.asarray(g.values)
    if np.isrealobj(f.values) and np.iscomplexobj(vals):
        scale = max(np.abs(vals).max(), 1e-300)
        if np.abs(vals.imag).max() > 1e-10 * max(scale, 1.0):
            raise ValueError("imaginary residue in the Hilbert transform of real data")
        vals = vals.real
    return SampledFunction(x_grid, vals)


def hilbert_boundary(param, f, x, y_sequence=(0.2, 0.1, 0.05, 0.025), *, weights=None, p: float = 2.0):
    """lim_{y->0} (Qf)(x, y) by polynomial extrapolation over ``y_sequence``.

    ``weights`` (quadrature weights at x for the measure) turn the
    distances between successive Qf(., y) into L^p_lam distances; without
    them max-abs distances are used.  The distances must decrease,
    otherwise NonConvergentBoundary.
    """
    param = _param(param)
    ys = np.asarray(y_sequence, float)
    if np.any(np.diff(ys) >= 0):
        raise ValueError("y sequence must decrease")
    x = np.asarray(x, float)
    xs = np.concatenate((-x[::-1], x)) if not np.allclose(x, -x[::-1]) else x
    lat = HalfPlaneLattice(xs, ys[::-1])
    Q = conjugate_poisson_integral(param, f, lat)[::-1]
    if xs is not x:
        Q = Q[:, x.size:]
    diffs = np.abs(np.diff(Q, axis=0))
    if weights is None:
        dist = diffs.max(axis=1)
    else:
        dist = (diffs**p @ np.asarray(weights)) ** (1.0 / p)
    if np.any(np.diff(dist) >= 0):
        raise NonConvergentBoundary(f"successive distances do not decrease: {dist}")
    est, err = richardson(ys, Q)
    return BoundaryResult(est, err, dist, tuple(ys))


def _grids(param, f: Profile, X: float, n: int | None = None):
    # the spectrum of a profile varying on the scale s lives on |xi| < 12 / s
    Xi = max(X, 12.0 / f.scale)
    if n is None:
        n = 32 * int(math.ceil(X / min(f.scale / 2, 7.0 / Xi)))
    grid = build_weighted_grid(param, X, n)
    xi_grid = build_weighted_grid(param, Xi, 32 * int(math.ceil(Xi / (7.0 / X))))
    return grid, xi_grid


def hilbert_profile(param, f: Profile, *, X: float | None = None, n: int | None = None,
                    far_degree: int = 64) -> Profile:
    """H_lam f as a Profile: the multiplier route on [-X, X], principal values beyond.

    Beyond X the function |x|^(2 lam + 1) H_lam f(x) is smooth in u = X/|x|
    (an expansion in the moments of f), so it is sampled by principal
    values at Chebyshev points in u on each side and interpolated.  The
    declared tail exponent is 2 lam + 1.
    """
    param = _param(param)
    X = f.extent if X is None else X
    grid, xi_grid = _grids(param, f, X, n)
    Hf = hilbert_multiplier(param, sample(grid, f), xi_grid)
    q = 2 * param.lam + 1

    def far_side(sign):
        def phi(v):
            u = 0.5 * (v + 1.0)
            x = X / u
            return pv_integral(param, f, sign * x) * x**q

        return np.polynomial.chebyshev.chebinterpolate(phi, far_degree)

    coef = {1.0: far_side(1.0), -1.0: far_side(-1.0)}

    def g(t):
        t = np.asarray(t, float)
        out = np.empty(t.shape)
        inner = np.abs(t) <= X
        if np.any(inner):
            out[inner] = panel_interpolate(Hf, t[inner])
        for sign, c in coef.items():
            sel = ~inner & (np.sign(t) == sign)
            if np.any(sel):
                x = np.abs(t[sel])
                out[sel] = np.polynomial.chebyshev.chebval(2.0 * X / x - 1.0, c) * x ** (-q)
        return out

    parity = {"even": "odd", "odd": "even"}.get(f.parity)
    return Profile(g, X, q, (), None, f.scale, f"H({f.name})", parity)


def involution_defect(param, f: Profile, *, n: int | None = None) -> float:
    """max |H(H f) + f| on the grid nodes, the outer H by the multiplier route."""
    param = _param(param)
    Hf = hilbert_profile(param, f, n=n)
    grid, xi_grid = _grids(param, f, f.extent, n)
    HHf = hilbert_multiplier(param, sample(grid, Hf), xi_grid)
    return float(np.max(np.abs(HHf.values + f(grid.nodes))))


def isometry_defect(param, f: Profile, *, n: int | None = None) -> float:
    """| ||H f||_2 / ||f||_2 - 1 |, the norm of H f including its power tail."""
    param = _param(param)
    Hf = hilbert_profile(param, f, n=n)
    return abs(lp_norm(param, Hf, 2) / lp_norm(param, f, 2) - 1.0)
