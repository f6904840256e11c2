"""lam-Poisson and conjugate lam-Poisson kernels, integrals and maximal functions.

Both kernels reduce to the angular integral

    I(a, b, sigma) = int_{-1}^{1} (1 + sigma s)(1 - s^2)^(lam-1) (a + b(1-s))^(-lam-1) ds

with a = y^2 + (|x| - |t|)^2, b = 2|xt| and sigma = sgn(xt):

    (tau_x P_y)(-t) = C y I,    (tau_x Q_y)(-t) = C (x - t) I,

C = lam Gamma(lam + 1/2) 2^(lam + 1/2) / pi.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyCone, NonPositiveY
from .measure import (
    Profile,
    SampledFunction,
    _param,
    angular_integral,
    check_decay,
    lp_norm,
    panel_interpolate,
    profile_rule,
)
from .operator import dunkl_derivative, first_difference, lambda_laplacian
from .quadrature import power_weight_rule
from .special import dunkl_kernel_values

__all__ = [
    "HalfPlaneLattice",
    "ConjugatePair",
    "MaximalSample",
    "make_lattice",
    "poisson_kernel",
    "conjugate_poisson_kernel",
    "poisson_kernel_spectral",
    "conjugate_poisson_kernel_spectral",
    "kernel_mass",
    "as_profile",
    "Extension",
    "poisson_integral",
    "conjugate_poisson_integral",
    "conjugate_pair",
    "maximal",
    "harmonic_residual",
    "cauchy_riemann_residual",
    "semigroup_defect",
    "contraction_ratio",
    "boundary_distances",
]


@dataclass(frozen=True, eq=False)
class HalfPlaneLattice:
    x_nodes: np.ndarray
    y_nodes: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.x_nodes, float)
        y = np.asarray(self.y_nodes, float)
        if np.any(y <= 0):
            raise NonPositiveY("lattice heights must be positive")
        if np.any(np.diff(y) <= 0):
            raise ValueError("y nodes must increase strictly")
        if not np.allclose(x, -x[::-1], rtol=0, atol=1e-13 * max(1.0, np.abs(x).max())):
            raise ValueError("x nodes must be symmetric")
        object.__setattr__(self, "x_nodes", x)
        object.__setattr__(self, "y_nodes", y)

    @property
    def shape(self) -> tuple[int, int]:
        return self.y_nodes.size, self.x_nodes.size


def make_lattice(x_extent: float = 4.0, nx: int = 41, *, y_min: float = 1e-3, y_max: float = 10.0,
                 ny: int = 64) -> HalfPlaneLattice:
    """Uniform symmetric x nodes and log-spaced y levels."""
    return HalfPlaneLattice(np.linspace(-x_extent, x_extent, nx), np.geomspace(y_min, y_max, ny))


@dataclass(frozen=True, eq=False)
class ConjugatePair:
    u: np.ndarray
    v: np.ndarray
    boundary_f: object
    lattice: HalfPlaneLattice


@dataclass(frozen=True, eq=False)
class MaximalSample:
    kind: str  # "Radial" or "Nontangential"
    values: np.ndarray
    cone_samples: np.ndarray | None = None


# --------------------------------------------------------------------------
# kernels


def _check_y(y):
    if np.any(np.asarray(y) <= 0):
        raise NonPositiveY("y must be positive")


def _angular(param, x, y, t):
    x, y, t = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float), np.asarray(t, float))
    a = y * y + (np.abs(x) - np.abs(t)) ** 2
    b = 2.0 * np.abs(x * t)
    sigma = np.where(x * t < 0, -1.0, 1.0)
    return angular_integral(param, a, b, sigma)


def poisson_kernel(param, x, y, t):
    """(tau_x P_y)(-t), vectorized over broadcast x, y, t."""
    param = _param(param)
    _check_y(y)
    return param.poisson_const * np.asarray(y, float) * _angular(param, x, y, t)


def conjugate_poisson_kernel(param, x, y, t):
    """(tau_x Q_y)(-t), vectorized over broadcast x, y, t."""
    param = _param(param)
    _check_y(y)
    return param.poisson_const * (np.asarray(x, float) - np.asarray(t, float)) * _angular(param, x, y, t)


def _spectral(param, x, y, t):
    """c int_0^inf e^(-y xi) E(i x xi) conj(E(i t xi)) xi^(2 lam) d xi, as a complex number."""
    lam = param.lam
    hi = 45.0 / y
    w = abs(x) + abs(t)
    h = min(math.pi / w if w > 0 else hi, 2.0 / y, hi)
    k = int(math.ceil(hi / h))
    edges = np.linspace(0.0, hi, k + 1)
    xi, wt = power_weight_rule(edges, 2.0 * lam, 16)
    S = dunkl_kernel_values(param, x * xi) * np.conj(dunkl_kernel_values(param, t * xi))
    return param.c_lambda * np.dot(wt * np.exp(-y * xi), S)


def poisson_kernel_spectral(param, x: float, y: float, t: float) -> float:
    """c int e^(-y|xi|) E(i x xi) E(-i t xi) |xi|^(2 lam) d xi by quadrature in xi."""
    param = _param(param)
    _check_y(y)
    return float(2.0 * _spectral(param, float(x), float(y), float(t)).real)


def conjugate_poisson_kernel_spectral(param, x: float, y: float, t: float) -> float:
    """The same integral with the extra multiplier -i sgn(xi)."""
    param = _param(param)
    _check_y(y)
    return float(2.0 * _spectral(param, float(x), float(y), float(t)).imag)


# --------------------------------------------------------------------------
# integrals


def as_profile(f) -> Profile:
    """A Profile for quadrature: the analytic one, or the panel interpolant on [-X, X]."""
    if isinstance(f, Profile):
        return f
    if f.profile is not None:
        return f.profile
    check_decay(f, 1e-10)
    X = f.grid.truncation
    width = 2 * X / (f.grid.size / f.grid.panel_order)
    return Profile(lambda x: panel_interpolate(f, x), extent=X, support=(-X, X), scale=width, name="sampled")


def _rule(param, prof: Profile, x0: float, y_min: float, tail_factor: float = 1e6):
    """Rule in t for the kernel centred at x0, resolving heights down to y_min."""
    if prof.tail is not None and prof.support is None and 2 * abs(x0) > prof.extent:
        prof = dataclasses.replace(prof, extent=2 * abs(x0))
    hmin = min(y_min, prof.scale) / 4.0
    foci = (x0, -x0) if x0 != 0 else ()
    return profile_rule(param, prof, foci=foci, hmin=hmin, hmax=prof.scale / 2, tail_factor=tail_factor)


def kernel_mass(param, x: float, y: float) -> float:
    """c int (tau_x P_y)(-t) |t|^(2 lam) dt; the power tail beyond the rule is added in closed form."""
    param = _param(param)
    one = Profile(lambda t: np.ones_like(t), extent=max(1.0, 4 * abs(x)), tail=0.0, scale=max(y, 1e-3) * 4)
    nodes, weights = _rule(param, one, x, y, tail_factor=1e8)
    T = nodes.max()
    # far field: C y I ~ C y t^(-2 lam - 2) / c' on both sides
    far = 2.0 * param.c_lambda * param.poisson_const * y / param.c_prime / T
    return float(np.dot(weights, poisson_kernel(param, x, y, nodes)) + far)


class Extension:
    """Callable (x, y) -> (Pf)(x, y) or (Qf)(x, y) on a rule centred at x0.

    Using one rule for all evaluation points keeps quadrature error smooth
    in (x, y), which finite-difference checks need.
    """

    def __init__(self, param, f, x0: float, y_min: float, *, conjugate: bool = False):
        self.param = _param(param)
        self.prof = as_profile(f)
        self.nodes, self.weights = _rule(self.param, self.prof, x0, y_min)
        self.fw = self.prof(self.nodes) * self.weights
        self.kernel = conjugate_poisson_kernel if conjugate else poisson_kernel

    def __call__(self, x, y):
        x, y = np.broadcast_arrays(np.asarray(x, float), np.asarray(y, float))
        K = self.kernel(self.param, x[..., None], y[..., None], self.nodes)
        return K @ self.fw


def _integral(param, f, lattice: HalfPlaneLattice, conjugate: bool) -> np.ndarray:
    param = _param(param)
    prof = as_profile(f)
    y = lattice.y_nodes
    out = np.empty(lattice.shape)
    for j, x in enumerate(lattice.x_nodes):
        ext = Extension(param, prof, float(x), float(y.min()), conjugate=conjugate)
        out[:, j] = ext(np.full(y.shape, x), y)
    return out


def poisson_integral(param, f, lattice: HalfPlaneLattice) -> np.ndarray:
    """(Pf)(x, y) on the lattice, shape (len(y), len(x)).

    ``f`` is a Profile or a SampledFunction; sampled data without a profile
    must decay inside its truncation (TruncationTooTight).
    """
    return _integral(param, f, lattice, conjugate=False)


def conjugate_poisson_integral(param, f, lattice: HalfPlaneLattice) -> np.ndarray:
    """(Qf)(x, y) on the lattice, shape (len(y), len(x))."""
    return _integral(param, f, lattice, conjugate=True)


def conjugate_pair(param, f, lattice: HalfPlaneLattice) -> ConjugatePair:
    return ConjugatePair(poisson_integral(param, f, lattice), conjugate_poisson_integral(param, f, lattice), f, lattice)


def maximal(param, kind: str, data, lattice: HalfPlaneLattice, *, aperture: float = 1.0) -> MaximalSample:
    """Discrete radial or nontangential maximal function on the lattice.

    ``data`` is either lattice samples of shape (len(y), len(x)) or a
    function, whose Poisson integral is computed first.
    """
    if isinstance(data, (Profile, SampledFunction)):
        data = poisson_integral(param, data, lattice)
    vals = np.abs(np.asarray(data, float))
    if kind == "Radial":
        return MaximalSample("Radial", vals.max(axis=0))
    if kind != "Nontangential":
        raise ValueError(f"unknown kind {kind!r}")
    x = lattice.x_nodes
    y = lattice.y_nodes
    out = np.empty(x.size)
    counts = np.empty(x.size, dtype=int)
    for j, xj in enumerate(x):
        cone = np.abs(x[None, :] - xj) < aperture * y[:, None]
        counts[j] = int(cone.sum())
        if counts[j] == 0:
            raise EmptyCone(f"no lattice point in the cone at x = {xj:g}")
        out[j] = vals[cone].max()
    return MaximalSample("Nontangential", out, counts)


# --------------------------------------------------------------------------
# verification helpers


def harmonic_residual(param, f, x, y, *, h: float = 1e-3, order: int = 2, conjugate: bool = False) -> np.ndarray:
    """Delta_lam of Pf (or Qf) at interior points by central differences."""
    param = _param(param)
    x = np.atleast_1d(np.asarray(x, float))
    y = np.atleast_1d(np.asarray(y, float))
    out = np.empty(np.broadcast(x, y).shape)
    for k, (xi, yi) in enumerate(np.broadcast(x, y)):
        ext = Extension(param, f, xi, yi / 2, conjugate=conjugate)
        out.flat[k] = lambda_laplacian(param, ext, xi, yi, h, order)
    return out


def cauchy_riemann_residual(param, f, x, y, *, h: float = 1e-3, order: int = 2) -> tuple[np.ndarray, np.ndarray]:
    """(D_x u - d_y v, d_y u + D_x v) for u = Pf, v = Qf at the given points."""
    param = _param(param)
    x = np.atleast_1d(np.asarray(x, float))
    y = np.atleast_1d(np.asarray(y, float))
    shape = np.broadcast(x, y).shape
    r1 = np.empty(shape)
    r2 = np.empty(shape)
    for k, (xi, yi) in enumerate(np.broadcast(x, y)):
        u = Extension(param, f, xi, yi / 2)
        v = Extension(param, f, xi, yi / 2, conjugate=True)
        dxu = dunkl_derivative(param, lambda s: u(s, yi), xi, h, order)
        dxv = dunkl_derivative(param, lambda s: v(s, yi), xi, h, order)
        dyu = first_difference(lambda s: u(xi, s), yi, h, order)
        dyv = first_difference(lambda s: v(xi, s), yi, h, order)
        r1.flat[k] = dxu - dyv
        r2.flat[k] = dyu + dxv
    return r1, r2


def semigroup_defect(param, f: Profile, y0: float, lattice: HalfPlaneLattice) -> float:
    """max |P[(Pf)(., y0)](x, y) - (Pf)(x, y0 + y)| over the lattice."""
    param = _param(param)
    inner_ext = Profile(lambda t: _pointwise(param, f, t, y0), extent=f.extent + 20 * y0,
                        tail=2 * param.lam + 2, scale=f.scale, name="Pf(.,y0)")
    lhs = poisson_integral(param, inner_ext, lattice)
    shifted = HalfPlaneLattice(lattice.x_nodes, lattice.y_nodes + y0)
    rhs = poisson_integral(param, f, shifted)
    return float(np.max(np.abs(lhs - rhs)))


def _sym(t):
    t = np.asarray(t, float).ravel()
    return np.concatenate((-t[::-1], t))


def contraction_ratio(param, f: Profile, y, p: float) -> np.ndarray:
    """||Pf(., y)||_p / ||f||_p for each height y."""
    param = _param(param)
    y = np.atleast_1d(np.asarray(y, float))
    fn = lp_norm(param, f, p)
    out = np.empty(y.size)
    tail = f.tail if f.tail is not None else 2 * param.lam + 2
    for k, yk in enumerate(y):
        u = Profile(lambda t, yk=yk: _pointwise(param, f, t, yk), extent=f.extent + 20 * yk,
                    tail=min(tail, 2 * param.lam + 2), scale=f.scale, name="Pf")
        out[k] = lp_norm(param, u, p) / fn
    return out


def _pointwise(param, f, t, y):
    """(Pf)(t, y) at many points t and one height y on a single shared rule.

    Panels of length min(scale, y)/2 resolve the kernel for every t, so no
    per-point grading is needed.
    """
    prof = as_profile(f)
    t = np.asarray(t, float)
    reach = 2.0 * float(np.max(np.abs(t), initial=0.0))
    if prof.tail is not None and prof.support is None and reach > prof.extent:
        prof = dataclasses.replace(prof, extent=reach)
    nodes, weights = profile_rule(param, prof, hmax=min(prof.scale, y) / 2)
    fw = prof(nodes) * weights
    flat = t.ravel()
    out = np.empty(flat.size)
    block = max(1, 2_000_000 // nodes.size)
    for lo in range(0, flat.size, block):
        out[lo:lo + block] = poisson_kernel(param, flat[lo:lo + block, None], y, nodes) @ fw
    return out.reshape(t.shape)


def boundary_distances(param, f: Profile, y, *, p: float = 2.0) -> np.ndarray:
    """||Pf(., y) - f||_p for each height y."""
    param = _param(param)
    y = np.atleast_1d(np.asarray(y, float))
    out = np.empty(y.size)
    for k, yk in enumerate(y):
        d = Profile(lambda t, yk=yk: _pointwise(param, f, t, yk) - f(t), extent=f.extent + 20 * yk,
                    tail=2 * param.lam + 2, scale=f.scale, name="Pf-f")
        out[k] = lp_norm(param, d, p)
    return out
