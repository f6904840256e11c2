"""Forward and inverse Dunkl transform by direct quadrature.

For x > 0 write f = f_e + f_o.  Then

    F f(xi) = 2 c_lam int_0^inf [f_e(x) j0(x xi) - i f_o(x) x xi/(2 lam + 1) j1(x xi)] x^(2 lam) dx

with j0 = j_(lam-1/2), j1 = j_(lam+1/2).  Half-grid matrices of j0 and
the odd kernel are cached per (lam, grid pair).  Profiles with a power
tail get the part of the integral beyond the truncation from an
oscillatory tail quadrature accelerated by Wynn's epsilon algorithm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import TruncationTooTight, ZeroFunction
from .measure import (
    Profile,
    SampledFunction,
    WeightedGrid,
    _param,
    build_weighted_grid,
    check_decay,
    lp_norm,
)
from .operator import apply_D
from .quadrature import gauss_legendre, geometric_tail_edges, wynn_epsilon
from .special import _bessel_j_array

__all__ = [
    "Spectrum",
    "forward",
    "inverse",
    "inverse_at",
    "transform_at",
    "plancherel_defect",
    "roundtrip_error",
    "derivative_multiplier_defect",
    "hausdorff_young_ratio",
    "product_formula_defect",
    "grids_for",
]


@dataclass(frozen=True, eq=False)
class Spectrum:
    xi_grid: WeightedGrid
    values: np.ndarray

    def as_sampled(self) -> SampledFunction:
        return SampledFunction(self.xi_grid, self.values)


_CACHE: dict = {}
_CACHE_MAX = 6


def _kernel_blocks(lam: float, src: WeightedGrid, dst: WeightedGrid):
    """j0(x xi) and x xi/(2 lam+1) j1(x xi) on positive halves, shape (dst, src)."""
    key = (lam, id(src), id(dst))
    hit = _CACHE.get(key)
    if hit is not None and hit[0] is src and hit[1] is dst:
        return hit[2], hit[3]
    xs = src.nodes[src.size // 2:]
    xd = dst.nodes[dst.size // 2:]
    z = np.outer(xd, xs)
    A = _bessel_j_array(lam - 0.5, z)
    B = z / (2 * lam + 1) * _bessel_j_array(lam + 0.5, z)
    if len(_CACHE) >= _CACHE_MAX:
        _CACHE.pop(next(iter(_CACHE)))
    _CACHE[key] = (src, dst, A, B)
    return A, B


def _apply(lam, src: WeightedGrid, values, dst: WeightedGrid, sign: float):
    """sum_k w_k v_k E(sign * i x_k xi_j) for all dst nodes."""
    A, B = _kernel_blocks(lam, src, dst)
    h = src.size // 2
    v = np.asarray(values, dtype=complex)
    w = src.weights[h:]
    ve = 0.5 * (v[h:] + v[:h][::-1]) * w
    vo = 0.5 * (v[h:] - v[:h][::-1]) * w
    even = 2.0 * (A @ ve)
    odd = 2j * sign * (B @ vo)
    pos = even + odd
    neg = even - odd
    return np.concatenate((neg[::-1], pos))


def _tail_integrals(lam: float, c: float, prof: Profile, X: float, xi_pos: np.ndarray, n: int = 16, chunks: int = 32):
    """Tail pieces beyond X for xi >= 0, returned as (even, odd, err).

    even = 2c int_X^inf f_e(x) j0(x xi) x^(2 lam) dx
    odd  = -2ic int_X^inf f_o(x) x xi/(2 lam+1) j1(x xi) x^(2 lam) dx

    Each integral is summed over half-period chunks and the partial sums
    are extrapolated with Wynn's epsilon algorithm.
    """
    gx, gw = gauss_legendre(n)

    def integrand(x, xi):
        fp = prof(x)
        fm = prof(-x)
        z = x * xi
        wgt = x ** (2 * lam)
        k0 = _bessel_j_array(lam - 0.5, z)
        k1 = z / (2 * lam + 1) * _bessel_j_array(lam + 0.5, z)
        return 0.5 * (fp + fm) * k0 * wgt, -0.5j * (fp - fm) * k1 * wgt

    def panel_sums(left, right, xi):
        # left/right: (..., panels); xi broadcastable to (..., 1)
        half = 0.5 * (right - left)
        x = (0.5 * (left + right))[..., None] + half[..., None] * gx
        ev, od = integrand(x, xi[..., None])
        return (ev @ gw) * half, (od @ gw) * half

    xi_pos = np.asarray(xi_pos, float)
    even = np.zeros(xi_pos.size, dtype=complex)
    odd = np.zeros(xi_pos.size, dtype=complex)
    err = np.zeros(xi_pos.size)
    halfp = np.where(xi_pos > 0, math.pi / np.where(xi_pos > 0, xi_pos, 1.0), np.inf)
    head_start = np.full(xi_pos.size, float(X))
    # slow oscillation: geometric head until panels reach half a period
    slow = halfp > X
    for j in np.nonzero(slow)[0]:
        xi = xi_pos[j]
        if xi * X < 1e-12:
            edges = geometric_tail_edges(X, 1e8)
            ev, od = panel_sums(edges[:-1], edges[1:], np.array(xi))
            R = edges[-1]
            e_sum, o_sum = ev.sum(), od.sum()
            q = prof.tail
            if q is not None and q > 2 * lam + 1:
                er, orr = integrand(np.array([R]), np.array([xi]))
                e_sum = e_sum + er[0] * R / (q - 2 * lam - 1)
            even[j], odd[j] = e_sum, o_sum
            head_start[j] = np.nan
            continue
        edges = [X]
        while edges[-1] < halfp[j]:
            edges.append(min(2.0 * edges[-1], edges[-1] + halfp[j]))
        edges = np.asarray(edges)
        ev, od = panel_sums(edges[:-1], edges[1:], np.array(xi))
        even[j], odd[j] = ev.sum(), od.sum()
        head_start[j] = edges[-1]
    osc = ~np.isnan(head_start)
    if np.any(osc):
        idx = np.nonzero(osc)[0]
        start = head_start[idx][:, None]
        hp = halfp[idx][:, None]
        k = np.arange(2 * chunks + 1)
        edges = start + 0.5 * hp * k
        ev, od = panel_sums(edges[:, :-1], edges[:, 1:], xi_pos[idx][:, None])
        ev = ev.reshape(idx.size, chunks, 2).sum(axis=2)
        od = od.reshape(idx.size, chunks, 2).sum(axis=2)
        e_lim, e_err = wynn_epsilon(np.cumsum(ev, axis=1)[:, 2:])
        o_lim, o_err = wynn_epsilon(np.cumsum(od, axis=1)[:, 2:])
        even[idx] += e_lim
        odd[idx] += o_lim
        err[idx] = e_err + o_err
    return 2.0 * c * even, 2.0 * c * odd, 2.0 * c * err


_TAIL_CACHE: dict = {}


def _cached_tail(param, prof, X, xi_grid):
    key = (param.lam, id(prof), X, id(xi_grid))
    hit = _TAIL_CACHE.get(key)
    if hit is not None and hit[0] is prof and hit[1] is xi_grid:
        return hit[2], hit[3]
    h = xi_grid.size // 2
    te, to, _ = _tail_integrals(param.lam, param.c_lambda, prof, X, xi_grid.nodes[h:])
    if len(_TAIL_CACHE) >= 8:
        _TAIL_CACHE.pop(next(iter(_TAIL_CACHE)))
    _TAIL_CACHE[key] = (prof, xi_grid, te, to)
    return te, to


def forward(param, f, xi_grid: WeightedGrid, *, tail: str = "auto") -> Spectrum:
    """(F f)(xi) = c_lam int f(x) E_lam(-i x xi) |x|^(2 lam) dx on the nodes of ``xi_grid``.

    ``f`` is a SampledFunction.  If its profile declares a power tail the
    integral beyond the truncation is added; otherwise the samples must
    decay to 1e-12 of their peak at the boundary (TruncationTooTight).
    """
    param = _param(param)
    lam = param.lam
    grid = f.grid
    vals = _apply(lam, grid, f.values, xi_grid, -1.0)
    prof = f.profile
    use_tail = tail == "always" or (tail == "auto" and prof is not None and prof.tail is not None)
    if use_tail:
        if prof is None:
            raise TruncationTooTight("tail correction needs an analytic profile")
        te, to = _cached_tail(param, prof, grid.truncation, xi_grid)
        vals = vals + np.concatenate(((te - to)[::-1], te + to))
    elif tail != "never":
        check_decay(f)
    return Spectrum(xi_grid, vals)


def inverse(param, g: Spectrum, x_grid: WeightedGrid) -> SampledFunction:
    """(F^-1 g)(x) = (F g)(-x) = c_lam int g(xi) E_lam(i x xi) |xi|^(2 lam) dxi."""
    param = _param(param)
    vals = _apply(param.lam, g.xi_grid, g.values, x_grid, +1.0)
    return SampledFunction(x_grid, vals)


def transform_at(param, grid: WeightedGrid, values, points, sign: float = -1.0) -> np.ndarray:
    """c_lam sum_k w_k v_k E(sign * i x_k p) at arbitrary points p."""
    param = _param(param)
    lam = param.lam
    p = np.atleast_1d(np.asarray(points, float))
    h = grid.size // 2
    v = np.asarray(values, dtype=complex)
    w = grid.weights[h:]
    ve = 0.5 * (v[h:] + v[:h][::-1]) * w
    vo = 0.5 * (v[h:] - v[:h][::-1]) * w
    xs = grid.nodes[h:]
    out = np.empty(p.size, dtype=complex)
    for lo in range(0, p.size, 256):
        z = np.outer(p[lo:lo + 256], xs)
        A = _bessel_j_array(lam - 0.5, np.abs(z))
        B = z / (2 * lam + 1) * _bessel_j_array(lam + 0.5, np.abs(z))
        out[lo:lo + 256] = 2.0 * (A @ ve) + 2j * sign * (B @ vo)
    return out


def inverse_at(param, g: Spectrum, x) -> np.ndarray:
    return transform_at(param, g.xi_grid, g.values, x, +1.0)


# --------------------------------------------------------------------------
# grids


def grids_for(param, prof: Profile, spectral_extent: float, *, X: float | None = None, n_min: int = 64):
    """Space and frequency grids adequate for a profile.

    Panel lengths keep (frequency extent) * (panel length) / 2 <= 3.5 on
    both sides so 16-point panels resolve the kernel oscillation.
    """
    param = _param(param)
    if X is None:
        X = prof.extent
    Xi = float(spectral_extent)
    hx = min(prof.scale / 2.0, 7.0 / Xi)
    hxi = 7.0 / X
    nx = max(n_min, 32 * int(math.ceil(X / hx)))
    nxi = max(n_min, 32 * int(math.ceil(Xi / hxi)))
    return build_weighted_grid(param, X, nx), build_weighted_grid(param, Xi, nxi)


# --------------------------------------------------------------------------
# checks


def plancherel_defect(param, f: SampledFunction, xi_grid: WeightedGrid | None = None) -> float:
    param = _param(param)
    xi_grid = f.grid if xi_grid is None else xi_grid
    nf = lp_norm(param, f, 2)
    if nf == 0:
        raise ZeroFunction("Plancherel defect of the zero function is undefined")
    spec = forward(param, f, xi_grid)
    ns = float(np.sqrt(np.dot(xi_grid.weights, np.abs(spec.values) ** 2)))
    return abs(ns - nf) / nf


def roundtrip_error(param, f: SampledFunction, xi_grid: WeightedGrid | None = None) -> float:
    """Relative L2 error of inverse(forward(f)) on f's grid."""
    param = _param(param)
    xi_grid = f.grid if xi_grid is None else xi_grid
    back = inverse(param, forward(param, f, xi_grid), f.grid)
    w = f.grid.weights
    num = np.sqrt(np.dot(w, np.abs(back.values - f.values) ** 2))
    den = np.sqrt(np.dot(w, np.abs(f.values) ** 2))
    if den == 0:
        raise ZeroFunction("relative error of the zero function is undefined")
    return float(num / den)


def derivative_multiplier_defect(param, f: SampledFunction, xi_grid: WeightedGrid | None = None) -> float:
    """max |F(Df)(xi) - i xi F f(xi)| over the frequency grid."""
    param = _param(param)
    xi_grid = f.grid if xi_grid is None else xi_grid
    Df = apply_D(param, f)
    lhs = forward(param, Df, xi_grid).values
    rhs = 1j * xi_grid.nodes * forward(param, f, xi_grid).values
    return float(np.max(np.abs(lhs - rhs)))


def hausdorff_young_ratio(param, f: SampledFunction, p: float, xi_grid: WeightedGrid | None = None) -> float:
    """||F f||_p' / ||f||_p with 1/p + 1/p' = 1, p in [1, 2]."""
    param = _param(param)
    if not 1.0 <= p <= 2.0:
        raise ValueError("p must lie in [1, 2]")
    xi_grid = f.grid if xi_grid is None else xi_grid
    spec = forward(param, f, xi_grid)
    q = math.inf if p == 1.0 else p / (p - 1.0)
    num = lp_norm(param, spec.as_sampled(), q)
    den = lp_norm(param, f, p)
    if den == 0:
        raise ZeroFunction("ratio undefined for the zero function")
    return num / den


def product_formula_defect(param, f: SampledFunction, g: SampledFunction) -> float:
    """|<F f, g> - <f, F g>| for the bilinear pairing; f and g share a grid."""
    param = _param(param)
    grid = f.grid
    Ff = forward(param, f, grid).values
    Fg = forward(param, g, grid).values
    lhs = np.dot(grid.weights, Ff * g.values)
    rhs = np.dot(grid.weights, f.values * Fg)
    return float(abs(lhs - rhs))
