"""p_lam-atoms, the discrete H^p_lam quasi-norm and atom sweeps.

Atoms are piecewise constant on a few pieces of I = (t0 - delta, t0 + delta),
so every integral against them splits into pieces with a smooth kernel.
The quasi-norm ||P* f||^p is the L^p_lam norm of the radial maximal
function sup_y |Pf(x, y)| sampled on an atom-adapted lattice; the part of
the x integral beyond the lattice is added from a fitted power law.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InfeasibleAtom, InsideExcludedRegion, PreconditionViolated, QuadratureUnstable
from .hilbert import hilbert_kernel, pv_integral
from .measure import Profile, _param, angular_integral, interval_measure
from .quadrature import gauss_jacobi, gauss_legendre, graded_edges, power_weight_rule

__all__ = [
    "Atom",
    "AtomicSum",
    "AtomLattice",
    "HpEstimate",
    "SHAPES",
    "make_atom",
    "atom_defects",
    "dilate_atom",
    "atom_lattice",
    "maximal_functions",
    "hp_quasinorm",
    "hp_pair",
    "hilbert_lp",
    "estimate_a_lhs",
    "estimate_a_check",
    "comparability_check",
    "atom_far_field_bound",
    "hilbert_atom_sweep",
]

SHAPES = ("SignSplit", "HaarLike", "RandomZeroMean")

# the implicit constant in the size condition
K_SIZE = 1.0


# --------------------------------------------------------------------------
# atoms


@dataclass(frozen=True, eq=False)
class Atom:
    """Piecewise constant p_lam-atom: ``heights[k]`` on (edges[k], edges[k+1])."""

    lam: float
    t0: float
    delta: float
    p: float
    edges: np.ndarray
    heights: np.ndarray
    shape: str = ""

    @property
    def support(self) -> tuple[float, float]:
        return self.t0 - self.delta, self.t0 + self.delta

    @property
    def measure(self) -> float:
        return interval_measure(self.lam, *self.support)

    @property
    def sup_bound(self) -> float:
        return K_SIZE * self.measure ** (-1.0 / self.p)

    def __call__(self, t):
        return _piecewise(self.edges, self.heights, t)

    def profile(self) -> Profile:
        return _piecewise_profile(self.edges, self.heights, f"{self.shape}({self.t0:g},{self.delta:g})")


@dataclass(frozen=True, eq=False)
class AtomicSum:
    """sum_n coefficients[n] * atoms[n]."""

    atoms: tuple
    coefficients: np.ndarray

    @property
    def lam(self) -> float:
        return self.atoms[0].lam

    def p_sum(self, p: float) -> float:
        return float(np.sum(np.abs(self.coefficients) ** p))

    def pieces(self) -> tuple[np.ndarray, np.ndarray]:
        edges = np.unique(np.concatenate([a.edges for a in self.atoms]))
        mid = 0.5 * (edges[:-1] + edges[1:])
        return edges, self(mid)

    def __call__(self, t):
        t = np.asarray(t, float)
        out = np.zeros(t.shape)
        for c, a in zip(self.coefficients, self.atoms):
            out = out + c * a(t)
        return out

    def profile(self) -> Profile:
        edges, heights = self.pieces()
        return _piecewise_profile(edges, heights, f"sum of {len(self.atoms)} atoms")


def _piecewise(edges, heights, t):
    t = np.asarray(t, float)
    k = np.searchsorted(edges, t, side="right") - 1
    inside = (k >= 0) & (k < heights.size) & (t < edges[-1])
    return np.where(inside, heights[np.clip(k, 0, heights.size - 1)], 0.0)


def _piecewise_profile(edges, heights, name) -> Profile:
    edges = np.asarray(edges, float)
    heights = np.asarray(heights, float)
    return Profile(lambda t: _piecewise(edges, heights, t), float(np.max(np.abs(edges))), None,
                   tuple(float(e) for e in edges), (float(edges[0]), float(edges[-1])),
                   float(np.min(np.diff(edges))), name)


def _pieces(f) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(f, Atom):
        return f.edges, f.heights
    if isinstance(f, AtomicSum):
        return f.pieces()
    raise TypeError("expected an Atom or an AtomicSum")


def _weighted_median(lam: float, lo: float, hi: float) -> float:
    e = 2.0 * lam + 1.0
    if hi < 0:
        return -_weighted_median(lam, -hi, -lo)
    if 0 < lo and hi < 2 * lo:
        # m = lo ((1 + (hi/lo)^e) / 2)^(1/e), written to keep m - lo accurate
        g = math.expm1(e * math.log1p((hi - lo) / lo))
        return lo + lo * math.expm1(math.log1p(0.5 * g) / e)

    def prim(t):
        return math.copysign(abs(t) ** e, t)

    v = 0.5 * (prim(lo) + prim(hi))
    return math.copysign(abs(v) ** (1.0 / e), v)


def _check_p(param, p: float):
    if not param.p_critical < p <= 1.0:
        raise PreconditionViolated(
            f"p = {p:g} outside (p_critical, 1] with p_critical = (4 lam + 2)/(4 lam + 3) = {param.p_critical:.6f}")


def make_atom(param, t0: float, delta: float, p: float, shape: str = "SignSplit", seed: int = 0) -> Atom:
    """A p_lam-atom on (t0 - delta, t0 + delta) with sup norm |I|_lam^(-1/p).

    SignSplit: -h / +h split at the weighted median.  HaarLike: split at
    t0, the smaller side's height solves the cancellation equation.
    RandomZeroMean: 8 equal pieces with seeded random heights, projected
    onto weighted mean zero and rescaled to the sup bound.
    """
    param = _param(param)
    _check_p(param, p)
    if not delta > 0:
        raise PreconditionViolated("delta must be positive")
    lam = param.lam
    lo, hi = t0 - delta, t0 + delta
    H = K_SIZE * interval_measure(param, lo, hi) ** (-1.0 / p)
    if shape == "SignSplit":
        m = _weighted_median(lam, lo, hi)
        edges = np.array([lo, m, hi])
        # rounding m to a float unbalances the halves by about eps |t0| / delta; shrink the larger one
        mu_l = interval_measure(param, lo, m)
        mu_r = interval_measure(param, m, hi)
        heights = np.array([-H * min(1.0, mu_r / mu_l), H * min(1.0, mu_l / mu_r)])
    elif shape == "HaarLike":
        edges = np.array([lo, t0, hi])
        mu_l = interval_measure(param, lo, t0)
        mu_r = interval_measure(param, t0, hi)
        if mu_l >= mu_r:
            heights = np.array([-H * mu_r / mu_l, H])
        else:
            heights = np.array([-H, H * mu_l / mu_r])
    elif shape == "RandomZeroMean":
        edges = np.linspace(lo, hi, 9)
        rng = np.random.default_rng(seed)
        v = rng.uniform(-1.0, 1.0, 8)
        mu = np.array([interval_measure(param, a, b) for a, b in zip(edges[:-1], edges[1:])])
        v = v - np.dot(v, mu) / mu.sum()
        top = np.max(np.abs(v))
        if not top > 0:
            raise InfeasibleAtom("projected profile vanishes")
        heights = v * (H / top)
    else:
        raise ValueError(f"unknown atom shape {shape!r}")
    atom = Atom(lam, float(t0), float(delta), float(p), edges, heights, shape)
    d = atom_defects(param, atom)
    if d["sup"] > 1e-12 or d["cancellation"] > 1e-12:
        raise InfeasibleAtom(f"atom invariants fail: {d}")
    return atom


def atom_defects(param, atom: Atom) -> dict:
    """Relative violations of the support, size and cancellation conditions (0 when satisfied)."""
    param = _param(param)
    lo, hi = atom.support
    mu = atom.measure
    e = atom.edges
    support = max(0.0, lo - e[0], e[-1] - hi) / atom.delta
    sup = max(0.0, np.max(np.abs(atom.heights)) / atom.sup_bound - 1.0)
    moment = sum(h * interval_measure(param, a, b) for h, a, b in zip(atom.heights, e[:-1], e[1:]))
    # the cancellation condition is stated for the bare weight |t|^(2 lam)
    cancel = abs(moment / param.c_lambda) / mu ** (1.0 - 1.0 / atom.p)
    return {"support": float(support), "sup": float(sup), "cancellation": float(cancel)}


def dilate_atom(param, atom: Atom, r: float) -> Atom:
    """a_r(x) = r^((2 lam + 1)/p) a(r x), an atom on I / r."""
    param = _param(param)
    s = r ** ((2 * param.lam + 1) / atom.p)
    return Atom(atom.lam, atom.t0 / r, atom.delta / r, atom.p, atom.edges / r, atom.heights * s,
                f"{atom.shape}/{r:g}")


# --------------------------------------------------------------------------
# lattice and maximal functions


@dataclass(frozen=True, eq=False)
class AtomLattice:
    """x nodes with weights for c_lam |x|^(2 lam) dx on [-R, R], and heights y."""

    x_nodes: np.ndarray
    x_weights: np.ndarray
    y_nodes: np.ndarray
    R: float
    level: int

    @property
    def shape(self) -> tuple[int, int]:
        return self.y_nodes.size, self.x_nodes.size


@dataclass(frozen=True)
class HpEstimate:
    p: float
    value: float
    interior: float
    tail: float
    tail_exponents: tuple
    nx: int
    ny: int
    level: int
    y_range: tuple


def atom_lattice(param, f, level: int = 0, *, reach: float = 128.0, y_per_decade: int = 4,
                 order: int = 8) -> AtomLattice:
    """Lattice adapted to an atom or atomic sum.

    x: panels graded toward +-(support ends) down to delta/16 and
    geometric outward to R = reach * max|support|.  y: geometric from
    delta/1000 to 4R.  Each level splits every x panel in two and doubles
    the y density, so the y nodes are nested.
    """
    param = _param(param)
    atoms = f.atoms if isinstance(f, AtomicSum) else (f,)
    delta = min(a.delta for a in atoms)
    L = max(max(abs(a.t0 - a.delta), abs(a.t0 + a.delta)) for a in atoms)
    R = reach * L
    foci = sorted({s * e for a in atoms for e in a.support for s in (1.0, -1.0)})
    edges = graded_edges(-R, R, foci=foci, breaks=[0.0] + foci, hmin=delta / 16)
    for _ in range(level):
        edges = np.sort(np.concatenate((edges, 0.5 * (edges[:-1] + edges[1:]))))
    x, w = power_weight_rule(edges, 2.0 * param.lam, order)
    y_min, y_max = delta * 1e-3, 4.0 * R
    n0 = int(math.ceil(y_per_decade * math.log10(y_max / y_min)))
    ny = n0 * 2**level + 1
    y = np.geomspace(y_min, y_max, ny)
    return AtomLattice(x, w * param.c_lambda, y, R, level)


def _t_rule(param, edges, x: float, y_min: float, n: int = 8):
    lo, hi = float(edges[0]), float(edges[-1])
    breaks = list(edges[1:-1])
    if lo < 0.0 < hi:
        breaks.append(0.0)
    foci = [z for z in (x, -x) if lo - (hi - lo) < z < hi + (hi - lo)]
    e = graded_edges(lo, hi, foci=foci, breaks=breaks, hmin=y_min / 4, hmax=(hi - lo) / 2)
    t, w = power_weight_rule(e, 2.0 * param.lam, n)
    return t, w * param.c_lambda


def maximal_functions(param, f, lattice: AtomLattice) -> tuple[np.ndarray, np.ndarray]:
    """sup_y |Pf(x, y)| and sup_y |Qf(x, y)| at the lattice x nodes.

    Qf = P(H f), so the second array is the maximal function of H_lam f.
    """
    param = _param(param)
    edges, heights = _pieces(f)
    y = lattice.y_nodes
    C = param.poisson_const
    Pm = np.empty(lattice.x_nodes.size)
    Qm = np.empty(lattice.x_nodes.size)
    for j, x in enumerate(lattice.x_nodes):
        t, w = _t_rule(param, edges, float(x), float(y[0]))
        aw = _piecewise(edges, heights, t) * w
        keep = aw != 0
        t, aw = t[keep], aw[keep]
        a = y[:, None] ** 2 + (abs(x) - np.abs(t)) ** 2
        b = np.broadcast_to(2.0 * np.abs(x * t), a.shape)
        sigma = np.broadcast_to(np.where(x * t < 0, -1.0, 1.0), a.shape)
        I = angular_integral(param, a, b, sigma)
        Pm[j] = np.max(np.abs(C * y * (I @ aw)))
        Qm[j] = np.max(np.abs(C * (I @ (aw * (x - t)))))
    return Pm, Qm


def _lp_with_tail(param, lattice: AtomLattice, m, p: float):
    """(sum of w |m|^p, fitted tail, exponents) with m ~ A |x|^(-q) fitted on each outer side."""
    x = lattice.x_nodes
    interior = float(np.dot(lattice.x_weights, np.abs(m) ** p))
    tail = 0.0
    exps = []
    e = 2.0 * param.lam + 1.0
    for side in (1.0, -1.0):
        sel = (side * x > lattice.R / 8) & (m != 0)
        if sel.sum() < 4:
            exps.append(float("nan"))
            continue
        lx = np.log(np.abs(x[sel]))
        lm = np.log(np.abs(m[sel]))
        slope, icpt = np.polyfit(lx, lm, 1)
        q = -slope
        exps.append(float(q))
        s = q * p - e
        if not s > 0:
            raise QuadratureUnstable(f"fitted decay |x|^-{q:.3f} is not p-integrable")
        tail += param.c_lambda * math.exp(p * icpt) * lattice.R ** (-s) / s
    return interior, tail, tuple(exps)


def _estimate(param, lattice, m, p) -> HpEstimate:
    interior, tail, exps = _lp_with_tail(param, lattice, m, p)
    ny, nx = lattice.shape
    return HpEstimate(p, interior + tail, interior, tail, exps, nx, ny, lattice.level,
                      (float(lattice.y_nodes[0]), float(lattice.y_nodes[-1])))


def hp_quasinorm(param, f, p: float, lattice: AtomLattice | None = None) -> HpEstimate:
    """||P* f||^p_{L^p_lam} for an atom or atomic sum on the lattice."""
    param = _param(param)
    lattice = atom_lattice(param, f) if lattice is None else lattice
    Pm, _ = maximal_functions(param, f, lattice)
    if not np.any(Pm):
        ny, nx = lattice.shape
        return HpEstimate(p, 0.0, 0.0, 0.0, (), nx, ny, lattice.level,
                          (float(lattice.y_nodes[0]), float(lattice.y_nodes[-1])))
    return _estimate(param, lattice, Pm, p)


def hp_pair(param, f, p_list, lattice: AtomLattice) -> dict:
    """{p: (||f||^p_{H^p}, ||H f||^p_{H^p})}, one maximal-function pass for all p."""
    param = _param(param)
    Pm, Qm = maximal_functions(param, f, lattice)
    return {p: (_estimate(param, lattice, Pm, p), _estimate(param, lattice, Qm, p)) for p in p_list}


def hilbert_lp(param, f, p_list, lattice: AtomLattice) -> dict:
    """{p: ||H_lam f||^p_{L^p_lam}} from principal values at the lattice x nodes."""
    param = _param(param)
    edges, heights = _pieces(f)
    lo, hi = float(edges[0]), float(edges[-1])
    x = lattice.x_nodes
    # principal values where x or -x is near the support, plain quadrature elsewhere
    reach = hi - lo
    near = ((x > lo - reach) & (x < hi + reach)) | ((-x > lo - reach) & (-x < hi + reach))
    H = np.empty(x.size)
    H[near] = pv_integral(param, f.profile(), x[near])
    t, w = _t_rule(param, edges, 0.0, reach)
    aw = _piecewise(edges, heights, t) * w
    keep = aw != 0
    H[~near] = hilbert_kernel(param, x[~near, None], t[keep]) @ aw[keep]
    return {p: _estimate(param, lattice, H, p) for p in p_list}


# --------------------------------------------------------------------------
# kernel estimates from the proof of the atom bound


def estimate_a_lhs(param, b, n: int = 32, *, b_max: float = 1.0 - 1e-4) -> float:
    """int_{-1}^{1} (1 - b s)^(-lam-1) (1 + s)(1 - s^2)^(lam-1) ds.

    Composite rule graded toward s = sgn(b), where the integrand peaks
    with width 1 - |b|; the end panels use Gauss-Jacobi for the endpoint
    factors.  ``n`` nodes per panel.
    """
    param = _param(param)
    lam = param.lam
    b = float(b)
    if not -1.0 < b < 1.0:
        raise PreconditionViolated("b must lie in (-1, 1)")
    if abs(b) > b_max:
        raise QuadratureUnstable(f"|b| = {abs(b):g} beyond {b_max:g}")
    width = 1.0 - abs(b)
    z = 1.0 if b >= 0 else -1.0
    foci = [(z, width / 4)] if width < 0.5 else []
    edges = graded_edges(-1.0, 1.0, foci=foci, breaks=[0.0], hmin=width / 4, hmax=0.5)
    lo, hi = edges[:-1], edges[1:]
    total = 0.0
    gx, gw = gauss_legendre(n)
    for a_, b_ in zip(lo, hi):
        half = 0.5 * (b_ - a_)
        if a_ == -1.0:
            # weight (1+s)^lam in Jacobi form, (1-s)^(lam-1) left smooth
            r, w = gauss_jacobi(n, 0.0, lam)
            s = a_ + half * (1.0 + r)
            g = (1.0 - s) ** (lam - 1.0) * (1.0 - b * s) ** (-lam - 1.0)
            total += half ** (lam + 1.0) * np.dot(w, g)
        elif b_ == 1.0:
            r, w = gauss_jacobi(n, lam - 1.0, 0.0)
            s = b_ - half * (1.0 - r)
            g = (1.0 + s) ** lam * (1.0 - b * s) ** (-lam - 1.0)
            total += half**lam * np.dot(w, g)
        else:
            s = 0.5 * (a_ + b_) + half * gx
            g = (1.0 + s) ** lam * (1.0 - s) ** (lam - 1.0) * (1.0 - b * s) ** (-lam - 1.0)
            total += half * np.dot(gw, g)
    return float(total)


def estimate_a_check(param, b_grid=(0.0, 0.5, 0.9, 0.99, -0.5, -0.9, -0.99), *, n: int = 32) -> dict:
    """Table of lhs(b) and lhs(b) (1 - |b|), with C_lam = max of the latter.

    C_lam is fitted at order n and at order 2n; ``stability`` is their
    relative difference.  Points with |b| > 1 - 1e-4 are listed under
    ``skipped``.
    """
    param = _param(param)
    rows, skipped = [], []
    for b in b_grid:
        try:
            lhs = estimate_a_lhs(param, b, n)
            lhs2 = estimate_a_lhs(param, b, 2 * n)
        except QuadratureUnstable:
            skipped.append(float(b))
            continue
        rows.append({"b": float(b), "lhs": lhs, "lhs_refined": lhs2, "scaled": lhs * (1.0 - abs(b)),
                     "scaled_refined": lhs2 * (1.0 - abs(b))})
    C = max(r["scaled"] for r in rows)
    C2 = max(r["scaled_refined"] for r in rows)
    for r in rows:
        r["rhs_ratio"] = r["scaled"] / C
    return {"lam": param.lam, "rows": rows, "C": C, "C_refined": C2,
            "stability": abs(C2 - C) / C, "skipped": skipped}


@dataclass(frozen=True)
class Comparability:
    ok: bool
    K: float

    def __bool__(self):
        return self.ok


def comparability_check(param, x: float, t: float, t_prime: float, delta: float, c: float = 2.0,
                        s_grid=None, K_max: float = 10.0) -> Comparability:
    """Ratio of x^2 + t^2 - 2xts to x^2 + t'^2 - 2xt's over s, within [1/K, K]."""
    if not abs(abs(x) - abs(t)) > c * delta:
        raise PreconditionViolated("need ||x| - |t|| > c delta")
    if not abs(t - t_prime) < delta:
        raise PreconditionViolated("need |t - t'| < delta")
    s = np.linspace(-1.0, 1.0, 201) if s_grid is None else np.asarray(s_grid, float)
    if np.any(np.abs(s) > 1):
        raise PreconditionViolated("need |s| <= 1")
    q1 = x * x + t * t - 2 * x * t * s
    q2 = x * x + t_prime * t_prime - 2 * x * t_prime * s
    r = q1 / q2
    K = float(max(r.max(), 1.0 / r.min()))
    return Comparability(K <= K_max, K)


def atom_far_field_bound(param, atom: Atom, x_samples, y_samples, *, c: float = 2.0) -> dict:
    """sup_y |(a *_lam P_y)(x)| against |I|^(1-1/p) delta / (||x|-|t0||^2 (|x|+|t0|)^(2 lam)).

    x must avoid I_c, its reflection and I_0 (InsideExcludedRegion).
    Returns the sup values, the bound, their ratios, and the slope of
    log(sup (|x|+|t0|)^(2 lam)) against log||x| - |t0||.
    """
    param = _param(param)
    x = np.asarray(x_samples, float)
    t0, d = atom.t0, atom.delta
    excluded = (np.abs(x - t0) < c * d) | (np.abs(x + t0) < c * d) | (np.abs(x) < c * d)
    if np.any(excluded):
        raise InsideExcludedRegion(f"x = {x[excluded][0]:g} lies in I_c, its reflection or I_0")
    y = np.asarray(y_samples, float)
    lat = AtomLattice(x, np.ones_like(x), np.sort(y), float(np.max(np.abs(x))), 0)
    sup, _ = maximal_functions(param, atom, lat)
    dist = np.abs(np.abs(x) - abs(t0))
    bound = atom.measure ** (1.0 - 1.0 / atom.p) * d / (dist**2 * (np.abs(x) + abs(t0)) ** (2 * param.lam))
    slope = float(np.polyfit(np.log(dist), np.log(sup * (np.abs(x) + abs(t0)) ** (2 * param.lam)), 1)[0])
    return {"sup": sup, "bound": bound, "ratio": sup / bound, "slope": slope}


# --------------------------------------------------------------------------
# sweeps


@dataclass
class SweepRecord:
    atom: Atom
    level: int
    hp: dict = field(default_factory=dict)
    r1: dict = field(default_factory=dict)
    r2: dict = field(default_factory=dict)


def hilbert_atom_sweep(param, atoms, p_list, levels=(0, 1), *, with_lp: bool = True) -> list:
    """r1 = ||H a||^p_{H^p} / ||a||^p_{H^p} and r2 = ||H a||^p_{L^p} / ||a||^p_{H^p} per atom and level."""
    param = _param(param)
    out = []
    for a in atoms:
        for level in levels:
            lat = atom_lattice(param, a, level)
            pairs = hp_pair(param, a, p_list, lat)
            lp = hilbert_lp(param, a, p_list, lat) if with_lp else {}
            rec = SweepRecord(a, level)
            for p in p_list:
                hp_a, hp_h = pairs[p]
                rec.hp[p] = hp_a.value
                rec.r1[p] = hp_h.value / hp_a.value
                if with_lp:
                    rec.r2[p] = lp[p].value / hp_a.value
            out.append(rec)
    return out
