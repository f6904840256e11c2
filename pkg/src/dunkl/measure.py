"""The Dunkl parameter, the weighted measure c_lam |x|^(2 lam) dx and its quadratures.

Also home of the angular integral

    I(a, b, sigma) = int_{-1}^{1} (1 + sigma s) (1 - s^2)^(lam-1) (a + b (1 - s))^(-p) ds

which every kernel in the package reduces to (Poisson, conjugate Poisson,
Hilbert, and the kernel bound behind the atom estimates).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from .errors import BadResolution, NonPositiveLambda, TruncationTooTight
from .quadrature import (
    gauss_jacobi,
    gauss_legendre,
    geometric_tail_edges,
    graded_edges,
    panel_rule,
    power_weight_rule,
)

__all__ = [
    "DunklParameter",
    "make_parameter",
    "WeightedGrid",
    "build_weighted_grid",
    "build_graded_grid",
    "SampledFunction",
    "Profile",
    "sample",
    "JacobiRule",
    "build_jacobi_rule",
    "interval_measure",
    "profile_rule",
    "lp_norm",
    "inner",
    "angular_integral",
    "angular_integral_direct",
]


@dataclass(frozen=True)
class DunklParameter:
    """lam > 0 together with the constants derived from it."""

    lam: float
    c_lambda: float
    c_prime: float
    c_dprime: float
    m_lambda: float
    p0: float
    gamma_lambda: float
    p_critical: float

    @property
    def poisson_const(self) -> float:
        """c'_lam * m_lam, the prefactor of the angular form of the Poisson kernel."""
        return self.c_prime * self.m_lambda

    @property
    def jacobi_mass(self) -> float:
        return 1.0 / self.c_prime


def make_parameter(lam: float) -> DunklParameter:
    lam = float(lam)
    if not lam > 0 or not math.isfinite(lam):
        raise NonPositiveLambda(f"lambda must be positive, got {lam}")
    lg = math.lgamma
    c_lambda = math.exp(-((lam + 0.5) * math.log(2.0) + lg(lam + 0.5)))
    c_prime = math.exp(lg(lam + 0.5) - lg(lam) - 0.5 * math.log(math.pi))
    c_dprime = math.exp((1.5 - lam) * math.log(2.0) + 2 * lg(lam + 0.5) - 0.5 * math.log(math.pi) - lg(lam))
    m_lambda = math.exp((lam + 0.5) * math.log(2.0) + lg(lam + 1.0) - 0.5 * math.log(math.pi))
    gamma_lambda = 1.0 / (4.0 * lam + 2.0)
    return DunklParameter(
        lam=lam,
        c_lambda=c_lambda,
        c_prime=c_prime,
        c_dprime=c_dprime,
        m_lambda=m_lambda,
        p0=2.0 * lam / (2.0 * lam + 1.0),
        gamma_lambda=gamma_lambda,
        p_critical=1.0 / (1.0 + gamma_lambda),
    )


def _param(param) -> DunklParameter:
    return param if isinstance(param, DunklParameter) else make_parameter(param)


# --------------------------------------------------------------------------
# real-line grids


@dataclass(frozen=True, eq=False)
class WeightedGrid:
    """Symmetric nodes on [-X, X] with weights for c_lam |x|^(2 lam) dx.

    Nodes come in panels of ``panel_order`` consecutive entries; the node
    set is closed under negation, ``nodes[::-1] == -nodes``.
    """

    truncation: float
    nodes: np.ndarray
    weights: np.ndarray
    lam: float
    panel_order: int = 16

    @property
    def size(self) -> int:
        return self.nodes.size

    def integrate(self, values) -> complex | float:
        return np.dot(self.weights, values)

    def is_symmetric(self, tol: float = 1e-13) -> bool:
        scale = max(1.0, self.truncation)
        return bool(np.all(np.abs(self.nodes + self.nodes[::-1]) <= tol * scale)) and bool(
            np.allclose(self.weights, self.weights[::-1], rtol=1e-13, atol=0)
        )


def _mirror(pos_nodes, pos_weights):
    return np.concatenate((-pos_nodes[::-1], pos_nodes)), np.concatenate((pos_weights[::-1], pos_weights))


def build_weighted_grid(param, X: float, n: int, *, order: int = 16) -> WeightedGrid:
    """Composite Gauss rule with about ``n`` nodes on [-X, X].

    The panel touching the origin uses Gauss-Jacobi with weight x^(2 lam),
    so the weight's singular point is integrated exactly.
    """
    param = _param(param)
    n = int(n)
    if n < 16:
        raise BadResolution(f"grid needs at least 16 nodes, got {n}")
    if not X > 0:
        raise BadResolution("truncation must be positive")
    q = min(order, n // 2)
    panels = max(1, int(round(n / (2 * q))))
    edges = np.linspace(0.0, float(X), panels + 1)
    nodes, weights = power_weight_rule(edges, 2.0 * param.lam, q)
    nodes, weights = _mirror(nodes, weights * param.c_lambda)
    return WeightedGrid(float(X), nodes, weights, param.lam, q)


def build_graded_grid(param, X: float, *, breaks=(), foci=(), hmin=None, hmax=None, order: int = 16) -> WeightedGrid:
    """Symmetric composite grid refined toward |breaks| and |foci|."""
    param = _param(param)
    pos_breaks = sorted({abs(float(b)) for b in breaks if 0 < abs(b) < X})
    pos_foci = sorted({abs(float(z)) for z in foci if abs(z) <= X})
    edges = graded_edges(0.0, X, foci=pos_foci, breaks=pos_breaks, hmin=hmin, hmax=hmax)
    nodes, weights = power_weight_rule(edges, 2.0 * param.lam, order)
    nodes, weights = _mirror(nodes, weights * param.c_lambda)
    return WeightedGrid(float(X), nodes, weights, param.lam, order)


# --------------------------------------------------------------------------
# functions


@dataclass(frozen=True, eq=False)
class Profile:
    """An analytic test function with the metadata quadrature needs.

    ``extent``: beyond +-extent the function is negligible (``tail`` None)
    or decays like |x|^(-tail).  ``support`` marks compact support exactly.
    ``breaks`` lists points where the function is not smooth.  ``scale``
    is the smallest length on which it varies.
    """

    func: Callable[[np.ndarray], np.ndarray]
    extent: float
    tail: float | None = None
    breaks: tuple = ()
    support: tuple | None = None
    scale: float = 1.0
    name: str = ""
    parity: str | None = None

    def __call__(self, x):
        return self.func(np.asarray(x, dtype=float))

    @property
    def domain(self) -> tuple[float, float]:
        if self.support is not None:
            return float(self.support[0]), float(self.support[1])
        return -float(self.extent), float(self.extent)


@dataclass(frozen=True, eq=False)
class SampledFunction:
    grid: WeightedGrid
    values: np.ndarray
    profile: Profile | None = None

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != self.grid.nodes.shape:
            raise ValueError("values do not match grid")
        if not np.all(np.isfinite(v)):
            raise ValueError("non-finite sample values")

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes

    def reflected(self) -> np.ndarray:
        """Values of f(-x) at the grid nodes (exact by node symmetry)."""
        return np.asarray(self.values)[::-1]

    def even_part(self) -> np.ndarray:
        return 0.5 * (np.asarray(self.values) + self.reflected())

    def odd_part(self) -> np.ndarray:
        return 0.5 * (np.asarray(self.values) - self.reflected())


def sample(grid: WeightedGrid, profile: Profile) -> SampledFunction:
    return SampledFunction(grid, profile(grid.nodes), profile)


def interval_measure(param, lo: float, hi: float) -> float:
    """|(lo, hi)|_lam = c_lam * int_lo^hi |t|^(2 lam) dt in closed form."""
    param = _param(param)
    e = 2.0 * param.lam + 1.0

    if hi < 0:
        lo, hi = -hi, -lo
    if 0 < lo and hi < 2 * lo:
        # lo^e ((hi/lo)^e - 1) / e, free of cancellation for short intervals far from 0
        return param.c_lambda * lo**e * math.expm1(e * math.log1p((hi - lo) / lo)) / e

    def prim(t):
        return math.copysign(abs(t) ** e, t) / e

    return param.c_lambda * (prim(hi) - prim(lo))


def profile_rule(param, prof: Profile, *, foci=(), hmin=None, hmax=None, n: int = 16, tail_factor: float = 1e6):
    """Nodes and weights for c_lam * int g(t) |t|^(2 lam) dt over a profile's domain.

    The rule is split at 0 and at the profile breaks, refined toward
    ``foci`` and extended by geometric panels when the profile has a power
    tail.  The weights include c_lam |t|^(2 lam).
    """
    param = _param(param)
    lo, hi = prof.domain
    if hmax is None:
        hmax = prof.scale
    cuts = [b for b in prof.breaks if lo < b < hi]
    if lo < 0.0 < hi:
        cuts.append(0.0)
    foci = list(foci)
    if hmin is None:
        hmin = hmax
    if lo < 0.0 < hi:
        foci.append(0.0)
    edges = graded_edges(lo, hi, foci=foci, breaks=cuts, hmin=hmin, hmax=hmax)
    nodes, weights = power_weight_rule(edges, 2.0 * param.lam, n)
    if prof.tail is not None and prof.support is None:
        te = geometric_tail_edges(prof.extent, tail_factor)
        tn, tw = panel_rule(te, n)
        tw = tw * tn ** (2.0 * param.lam)
        nodes = np.concatenate((-tn[::-1], nodes, tn))
        weights = np.concatenate((tw[::-1], weights, tw))
    return nodes, weights * param.c_lambda


def lp_norm(param, f, p: float, *, tail: bool = True) -> float:
    """L^p norm for the measure c_lam |x|^(2 lam) dx.

    ``f`` is a SampledFunction or a Profile.  For sampled functions whose
    profile has a power tail, the part beyond the truncation is added by
    quadrature of the profile.
    """
    param = _param(param)
    if isinstance(f, Profile):
        nodes, weights = profile_rule(param, f)
        vals = np.abs(f(nodes))
        if math.isinf(p):
            return float(vals.max())
        return float(np.dot(weights, vals**p) ** (1.0 / p))
    vals = np.abs(np.asarray(f.values))
    if math.isinf(p):
        return float(vals.max())
    total = float(np.dot(f.grid.weights, vals**p))
    if tail and f.profile is not None and f.profile.tail is not None:
        X = f.grid.truncation
        if f.profile.extent > X:
            edges = np.concatenate((np.linspace(X, f.profile.extent, 9)[:-1], geometric_tail_edges(f.profile.extent, 1e6)))
        else:
            edges = geometric_tail_edges(X, 1e6)
        tn, tw = panel_rule(edges, 16)
        tw = tw * tn ** (2.0 * param.lam) * param.c_lambda
        total += float(np.dot(tw, np.abs(f.profile(tn)) ** p + np.abs(f.profile(-tn)) ** p))
    return total ** (1.0 / p)


def inner(f: SampledFunction, g: SampledFunction, *, conjugate: bool = True) -> complex:
    """<f, g> = c_lam int f conj(g) |x|^(2 lam) dx on a shared grid."""
    gv = np.conj(g.values) if conjugate else np.asarray(g.values)
    return complex(np.dot(f.grid.weights, np.asarray(f.values) * gv))


def check_decay(f: SampledFunction, rel: float = 1e-12) -> None:
    """Raise TruncationTooTight unless |f| at the edge panels is below rel * peak."""
    vals = np.abs(np.asarray(f.values))
    peak = vals.max()
    if peak == 0:
        return
    q = f.grid.panel_order
    edge = max(vals[:q].max(), vals[-q:].max())
    if edge > rel * peak:
        raise TruncationTooTight(
            f"function is {edge / peak:.2e} of its peak at |x| = {f.grid.truncation}"
        )


# --------------------------------------------------------------------------
# angular rule


@dataclass(frozen=True, eq=False)
class JacobiRule:
    """Gauss rule for int_{-1}^{1} g(s) (1+s)(1-s^2)^(lam-1) ds."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray
    lam: float

    @property
    def mass(self) -> float:
        return float(self.weights.sum())

    def integrate(self, values, axis: int = -1):
        return np.tensordot(values, self.weights, axes=([axis], [0]))


def build_jacobi_rule(param, n: int) -> JacobiRule:
    """The weight (1+s)(1-s^2)^(lam-1) equals (1-s)^(lam-1)(1+s)^lam, a Jacobi weight."""
    param = _param(param)
    n = int(n)
    if n < 8:
        raise BadResolution(f"angular rule needs at least 8 nodes, got {n}")
    s, w = gauss_jacobi(n, param.lam - 1.0, param.lam)
    return JacobiRule(n, s, w, param.lam)


def angular_integral_direct(lam: float, a, b, sigma=1, *, power=None, n_fixed: int = 64, n_panel: int = 16, eps0: float = 0.1):
    """Reference evaluation of I(a, b, sigma) by composite Gauss-Jacobi quadrature.

    With u = 1 - s the integrand is u^alpha (2-u)^beta (a + b u)^(-p), where
    (alpha, beta) = (lam-1, lam) for sigma = +1 and (lam, lam-1) for
    sigma = -1.  When e = a/b is small the factor (e + u)^(-p) is nearly
    singular at u = 0, so [0, 1] is cut into panels [0, e], [e, 2e], ...
    """
    a, b, sg = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float), np.asarray(sigma, float))
    shape = a.shape
    a = a.ravel()
    b = b.ravel()
    sg = sg.ravel()
    p = lam + 1.0 if power is None else float(power)
    out = np.empty(a.size)
    for s_val in (1.0, -1.0):
        sel_s = sg == s_val if s_val > 0 else sg < 0
        if not np.any(sel_s):
            continue
        al, be = (lam - 1.0, lam) if s_val > 0 else (lam, lam - 1.0)
        idx = np.nonzero(sel_s)[0]
        aa = a[idx]
        bb = b[idx]
        res = np.empty(idx.size)
        zero_b = bb <= 0.0
        if np.any(zero_b):
            res[zero_b] = aa[zero_b] ** (-p) * (2.0 ** (al + be + 1.0) * math.exp(math.lgamma(al + 1) + math.lgamma(be + 1) - math.lgamma(al + be + 2)))
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            e = np.where(zero_b, np.inf, aa / np.where(zero_b, 1.0, bb))
        far = ~zero_b & (e >= eps0)
        if np.any(far):
            s, w = gauss_jacobi(n_fixed, al, be)
            u = 1.0 - s
            # (a + b u)^(-p) = a^(-p) (1 + u / e)^(-p) stays finite for tiny b
            res[far] = ((1.0 + u / e[far, None]) ** (-p)) @ w * aa[far] ** (-p)
        near = ~zero_b & ~far
        if np.any(near):
            res[near] = _near_J(al, be, p, e[near], n_panel) * bb[near] ** (-p)
        out[idx] = res
    return out.reshape(shape)


def _near_J(al, be, p, e, n):
    """int_0^2 u^al (2-u)^be (e+u)^(-p) du for small e, vectorized over e."""
    gx, gw = gauss_legendre(n)
    j0x, j0w = gauss_jacobi(n, 0.0, al)  # weight (1+r)^al, for u in [0, e]
    j2x, j2w = gauss_jacobi(n, be, 0.0)  # weight (1-r)^be, for u in [1, 2]
    out = np.empty(e.size)
    levels = np.maximum(1, np.ceil(-np.log2(e)).astype(int))
    for L in np.unique(levels):
        sel = levels == L
        ee = e[sel][:, None]
        # [0, e]
        u0 = 0.5 * ee * (1.0 + j0x)
        total = (0.5 * ee[:, 0]) ** (al + 1.0) * (((2.0 - u0) ** be * (ee + u0) ** (-p)) @ j0w)
        # geometric panels [e 2^j, e 2^(j+1)], last one clipped at 1
        j = np.arange(L)
        left = ee * 2.0**j
        right = np.minimum(ee * 2.0 ** (j + 1), 1.0)
        half = 0.5 * (right - left)
        mid = 0.5 * (right + left)
        u = mid[..., None] + half[..., None] * gx
        f = u**al * (2.0 - u) ** be * (ee[..., None] + u) ** (-p)
        total += np.einsum("gjk,k,gj->g", f, gw, half)
        # [1, 2]
        u2 = 1.5 + 0.5 * j2x
        total += 0.5 ** (be + 1.0) * ((u2**al * (ee + u2) ** (-p)) @ j2w)
        out[sel] = total
    return out


# Tabulated fast path.  With e = a/b and l = log(e), the functions
#   H+(l) = e (1+e)^(p-1) J+(e),   H-(l) = (1+e)^p J-(e) / (1 + log(1 + 1/e))
# are smooth and bounded on the whole line (analytic in |Im l| < pi), so
# piecewise Chebyshev interpolation in l reproduces J to near rounding.

_L_LO = -40.0
_L_HI = 40.0
_CHEB_N = 16
_PIECE = 1.0


@dataclass(frozen=True, eq=False)
class _AngularTable:
    lam: float
    coef_plus: np.ndarray
    coef_minus: np.ndarray
    limit_plus: float
    log_const_minus: float


def _norm_plus(e, p):
    return 1.0 / (e * (1.0 + e) ** (p - 1.0))


def _norm_minus(e, p):
    return (1.0 + np.log1p(1.0 / e)) / (1.0 + e) ** p


@lru_cache(maxsize=32)
def _angular_table(lam: float) -> _AngularTable:
    p = lam + 1.0
    pieces = int(round((_L_HI - _L_LO) / _PIECE))
    k = np.arange(_CHEB_N)
    r = np.cos(np.pi * (k + 0.5) / _CHEB_N)
    left = _L_LO + _PIECE * np.arange(pieces)
    ell = left[:, None] + 0.5 * _PIECE * (1.0 + r)
    e = np.exp(ell).ravel()
    ones = np.ones_like(e)
    jp = angular_integral_direct(lam, e, ones, 1.0)
    jm = angular_integral_direct(lam, e, ones, -1.0)
    hp = (jp / _norm_plus(e, p)).reshape(pieces, _CHEB_N)
    hm = (jm / _norm_minus(e, p)).reshape(pieces, _CHEB_N)
    # Chebyshev coefficients by the discrete cosine sum
    T = np.cos(np.outer(np.arange(_CHEB_N), np.pi * (k + 0.5) / _CHEB_N))
    cp = (hp @ T.T) * (2.0 / _CHEB_N)
    cm = (hm @ T.T) * (2.0 / _CHEB_N)
    cp[:, 0] *= 0.5
    cm[:, 0] *= 0.5
    e_lo = math.exp(_L_LO)
    j_lo = float(angular_integral_direct(lam, e_lo, 1.0, -1.0))
    log_const = j_lo - 2.0 ** (lam - 1.0) * math.log(1.0 / e_lo)
    return _AngularTable(lam, np.ascontiguousarray(cp.T), np.ascontiguousarray(cm.T), 2.0**lam / lam, log_const)


def _table_H(table_coef, ell):
    """Clenshaw sum of the piecewise Chebyshev table; coefficients are stored (degree, piece)."""
    pos = (ell - _L_LO) / _PIECE
    idx = np.clip(np.floor(pos).astype(np.intp), 0, table_coef.shape[1] - 1)
    t2 = 4.0 * (pos - idx) - 2.0
    b1 = np.zeros_like(t2)
    b2 = np.zeros_like(t2)
    for j in range(table_coef.shape[0] - 1, 0, -1):
        b1, b2 = table_coef[j].take(idx) + t2 * b1 - b2, b1
    return table_coef[0].take(idx) + 0.5 * t2 * b1 - b2


def angular_integral(param, a, b, sigma=1, *, scaled: bool = False):
    """I(a, b, sigma) with exponent p = lam + 1, vectorized.

    a >= 0, b >= 0, sigma = sign(x t) in {+1, -1}.  With ``scaled`` the
    function returns a * I instead, which stays finite as a -> 0 for
    sigma = +1 (the Hilbert kernel's diagonal).
    """
    param = _param(param)
    lam = param.lam
    p = lam + 1.0
    tab = _angular_table(lam)
    a, b, sg = np.broadcast_arrays(np.asarray(a, float), np.asarray(b, float), np.asarray(sigma, float))
    shape = a.shape
    a = a.ravel()
    b = b.ravel()
    sg = sg.ravel()
    out = np.empty(a.size)
    zero_b = b <= 0.0
    if np.any(zero_b):
        az = a[zero_b]
        with np.errstate(divide="ignore"):
            out[zero_b] = (az ** (1.0 - p) if scaled else az ** (-p)) / param.c_prime
    pos = ~zero_b
    if np.any(pos):
        aa = a[pos]
        bb = b[pos]
        ss = sg[pos]
        with np.errstate(divide="ignore"):
            e = aa / bb
            ell = np.log(e)
        big = ell > _L_HI
        small = ell < _L_LO
        mid = ~big & ~small
        res = np.empty(aa.size)
        plus = ss > 0
        # interpolated range
        m = mid & plus
        if np.any(m):
            H = _table_H(tab.coef_plus, ell[m])
            em = e[m]
            if scaled:
                res[m] = bb[m] ** (1.0 - p) * H / (1.0 + em) ** (p - 1.0)
            else:
                res[m] = bb[m] ** (-p) * H * _norm_plus(em, p)
        m = mid & ~plus
        if np.any(m):
            H = _table_H(tab.coef_minus, ell[m])
            val = H * _norm_minus(e[m], p) * bb[m] ** (-p)
            res[m] = val * aa[m] if scaled else val
        # e -> 0: leading singular behaviour
        m = small & plus
        if np.any(m):
            res[m] = bb[m] ** (1.0 - p) * tab.limit_plus if scaled else bb[m] ** (-p) * tab.limit_plus / e[m]
        m = small & ~plus
        if np.any(m):
            with np.errstate(divide="ignore"):
                val = (2.0 ** (lam - 1.0) * -ell[m] + tab.log_const_minus) * bb[m] ** (-p)
            res[m] = np.where(aa[m] > 0, val * aa[m], 0.0) if scaled else val
        # e -> infinity: b negligible against a
        m = big
        if np.any(m):
            val = aa[m] ** (-p) / param.c_prime
            res[m] = val * aa[m] if scaled else val
        out[pos] = res
    return out.reshape(shape)


# --------------------------------------------------------------------------
# panel interpolation for sampled functions without an analytic profile


def _bary_weights(xs):
    d = xs[:, None] - xs[None, :]
    np.fill_diagonal(d, 1.0)
    w = 1.0 / np.prod(d, axis=1)
    return w / np.abs(w).max()


def panel_interpolate(f: SampledFunction, x) -> np.ndarray:
    """Barycentric Lagrange interpolation inside the panel containing x."""
    from .errors import InterpolationOutOfRange

    grid = f.grid
    x = np.asarray(x, float)
    X = grid.truncation
    if np.any(np.abs(x) > X * (1 + 1e-12)):
        raise InterpolationOutOfRange(f"evaluation point beyond truncation {X:g}")
    q = grid.panel_order
    nodes = grid.nodes.reshape(-1, q)
    vals = np.asarray(f.values).reshape(-1, q)
    bounds = 0.5 * (nodes[1:, 0] + nodes[:-1, -1])
    k = np.searchsorted(bounds, x.ravel())
    out = np.empty(x.size, dtype=vals.dtype)
    for kk in np.unique(k):
        sel = k == kk
        xs = nodes[kk]
        w = _bary_weights(xs)
        d = x.ravel()[sel][:, None] - xs[None, :]
        exact = d == 0
        d[exact] = 1.0
        c = w / d
        res = (c @ vals[kk]) / c.sum(axis=1)
        hit = exact.any(axis=1)
        if np.any(hit):
            res[hit] = vals[kk][np.argmax(exact[hit], axis=1)]
        out[sel] = res
    return out.reshape(x.shape)


def panel_derivative(f: SampledFunction) -> np.ndarray:
    """Derivative of the panel-wise interpolant at the grid nodes."""
    q = f.grid.panel_order
    nodes = f.grid.nodes.reshape(-1, q)
    vals = np.asarray(f.values).reshape(-1, q)
    out = np.empty_like(vals)
    for k in range(nodes.shape[0]):
        xs = nodes[k]
        w = _bary_weights(xs)
        d = xs[:, None] - xs[None, :]
        np.fill_diagonal(d, 1.0)
        Dm = (w[None, :] / w[:, None]) / d
        np.fill_diagonal(Dm, 0.0)
        np.fill_diagonal(Dm, -Dm.sum(axis=1))
        out[k] = Dm @ vals[k]
    return out.ravel()


def as_callable(f):
    """Evaluator for a Profile, a SampledFunction or a plain callable."""
    if isinstance(f, SampledFunction):
        if f.profile is not None:
            return f.profile
        return lambda x: panel_interpolate(f, x)
    return f
