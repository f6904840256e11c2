"""Low-level quadrature: cached Gauss rules, graded composite rules, tails.

All rules returned here integrate against plain ``dt`` unless a weight is
named explicitly.  Composite rules are built from panel edges so callers
can place breakpoints at kinks, discontinuities and near-singular points.
"""
from __future__ import annotations

import math
from functools import lru_cache

import numpy as np
from scipy import special

__all__ = [
    "gauss_legendre",
    "gauss_jacobi",
    "graded_edges",
    "panel_rule",
    "power_weight_rule",
    "geometric_tail_edges",
    "wynn_epsilon",
    "richardson",
]


def _frozen(*arrays):
    for a in arrays:
        a.flags.writeable = False
    return arrays


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(int(n))
    return _frozen(x, w)


@lru_cache(maxsize=None)
def gauss_jacobi(n: int, alpha: float, beta: float) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Jacobi rule for the weight (1-x)**alpha * (1+x)**beta on [-1, 1]."""
    if abs(alpha) < 1e-15 and abs(beta) < 1e-15:
        return gauss_legendre(n)
    x, w = special.roots_jacobi(int(n), float(alpha), float(beta))
    return _frozen(np.asarray(x, float), np.asarray(w, float))


def graded_edges(lo, hi, *, foci=(), breaks=(), hmin=None, hmax=None, ratio=2.0):
    """Panel edges on [lo, hi] refined geometrically toward ``foci``.

    Around each focus z the points z +- hmin * ratio**k are inserted, so a
    panel at distance d from a focus has length at most about d.  A focus
    given as a pair (z, h) uses its own innermost length h.  ``breaks``
    are inserted verbatim.  Panels longer than ``hmax`` are split evenly.
    """
    lo = float(lo)
    hi = float(hi)
    if not hi > lo:
        raise ValueError("empty interval")
    span = hi - lo
    pts = [lo, hi]
    pts.extend(b for b in breaks if lo < b < hi)
    for z in foci:
        # a focus is a point or a (point, own hmin) pair
        z, hz = (z, hmin) if np.ndim(z) == 0 else z
        if hz is None:
            raise ValueError("hmin required with foci")
        z = float(z)
        kmax = int(math.ceil(math.log(max(span, hz) / hz, ratio))) + 2
        steps = hz * ratio ** np.arange(kmax)
        cand = np.concatenate(([z], z - steps, z + steps))
        pts.extend(cand[(cand > lo) & (cand < hi)].tolist())
    edges = np.unique(np.asarray(pts, float))
    # merge slivers created by coincident foci and breaks
    tol = 1e-13 * max(span, abs(lo), abs(hi))
    keep = np.concatenate(([True], np.diff(edges) > tol))
    edges = edges[keep]
    edges[-1] = hi
    # a merge may have kept a neighbour instead of the exact break
    for b in breaks:
        if lo < b < hi:
            edges[np.argmin(np.abs(edges - b))] = b
    # an edge from one focus can land close to another, leaving a long panel
    # right next to that focus; grade such panels toward it
    extra = []
    for z in foci:
        z = float(z if np.ndim(z) == 0 else z[0])
        a, b = edges[:-1], edges[1:]
        dist = np.where(b < z, z - b, np.where(a > z, a - z, 0.0))
        bad = (dist > 0) & (b - a > ratio * dist)
        for aa, bb, dd in zip(a[bad], b[bad], dist[bad]):
            k = np.arange(1, int(math.ceil(math.log((bb - aa) / dd + 1.0, ratio))) + 2)
            cand = np.concatenate((z + dd * ratio**k, z - dd * ratio**k))
            extra.extend(cand[(cand > aa) & (cand < bb)].tolist())
    if extra:
        edges = np.unique(np.concatenate((edges, extra)))
    if hmax is not None:
        lengths = np.diff(edges)
        counts = np.maximum(1, np.ceil(lengths / hmax - 1e-12).astype(int))
        if np.any(counts > 1):
            owner = np.repeat(np.arange(counts.size), counts)
            start = np.cumsum(counts) - counts
            frac = (np.arange(owner.size) - start[owner]) / counts[owner]
            edges = np.concatenate((edges[owner] + frac * lengths[owner], edges[-1:]))
    return edges


def panel_rule(edges, n: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule with ``n`` nodes per panel."""
    edges = np.asarray(edges, float)
    x, w = gauss_legendre(n)
    a = edges[:-1, None]
    b = edges[1:, None]
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b) + half * x).ravel()
    weights = (half * w).ravel()
    return nodes, weights


def power_weight_rule(edges, power: float, n: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Composite rule for ``g(t) |t|**power dt`` with g smooth on each panel.

    Panels with an endpoint at 0 use Gauss-Jacobi so the power singularity
    lives in the weight.  Panels must not straddle 0.
    """
    edges = np.asarray(edges, float)
    a = edges[:-1]
    b = edges[1:]
    if np.any((a < 0) & (b > 0)):
        raise ValueError("panel straddles the origin")
    gx, gw = gauss_legendre(n)
    jx, jw = gauss_jacobi(n, 0.0, power)  # weight (1+r)**power
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    nodes = mid[:, None] + half[:, None] * gx
    weights = half[:, None] * gw * np.abs(nodes) ** power
    left0 = a == 0.0
    if np.any(left0):
        h = b[left0]
        nodes[left0] = 0.5 * h[:, None] * (1.0 + jx)
        weights[left0] = (0.5 * h[:, None]) ** (power + 1.0) * jw
    right0 = b == 0.0
    if np.any(right0):
        h = -a[right0]
        nodes[right0] = -0.5 * h[:, None] * (1.0 + jx)
        weights[right0] = (0.5 * h[:, None]) ** (power + 1.0) * jw
    order = np.argsort(nodes.ravel(), kind="stable")
    return nodes.ravel()[order], weights.ravel()[order]


def geometric_tail_edges(start: float, factor: float, *, ratio: float = 2.0) -> np.ndarray:
    """Edges start, start*ratio, ... covering [start, start*factor]."""
    k = max(1, int(math.ceil(math.log(factor, ratio))))
    return start * ratio ** np.arange(k + 1)


def wynn_epsilon(partial_sums, axis: int = -1):
    """Wynn epsilon extrapolation of partial sums along ``axis``.

    Returns (limit, error) arrays.  The limit is the last entry of the
    highest even column that stays finite; the error is its distance to the
    previous even column.
    """
    s = np.moveaxis(np.asarray(partial_sums), axis, -1)
    s = s.astype(complex if np.iscomplexobj(s) else float)
    n = s.shape[-1]
    best = s[..., -1].copy()
    prev_best = s[..., -2].copy() if n > 1 else np.full_like(best, np.inf)
    prev = np.zeros(s.shape[:-1] + (n + 1,), dtype=s.dtype)
    cur = s
    k = 0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        while cur.shape[-1] >= 2:
            nxt = prev[..., 1:-1] + 1.0 / np.diff(cur, axis=-1)
            prev, cur = cur, nxt
            k += 1
            if k % 2 == 0:
                cand = cur[..., -1]
                ok = np.isfinite(cand) & (np.abs(cand) < 1e200)
                prev_best = np.where(ok, best, prev_best)
                best = np.where(ok, cand, best)
    return best, np.abs(best - prev_best)


def richardson(h, values):
    """Polynomial (Neville) extrapolation of values(h) to h = 0.

    ``values`` has the samples along axis 0.  Returns (estimate, error):
    the full-degree extrapolant and its distance to the extrapolant that
    drops the coarsest sample.
    """
    h = np.asarray(h, float)
    v = np.asarray(values)
    if h.size < 2:
        raise ValueError("need at least two samples")

    def neville(hs, vs):
        p = np.array(vs, dtype=np.result_type(vs, float), copy=True)
        shape = (-1,) + (1,) * (p.ndim - 1)
        m = hs.size
        for k in range(1, m):
            hi = hs[k:].reshape(shape)
            lo = hs[: m - k].reshape(shape)
            p[: m - k] = (hi * p[: m - k] - lo * p[1 : m - k + 1]) / (hi - lo)
        return p[0]

    full = neville(h, v)
    part = neville(h[1:], v[1:])
    return full, np.abs(full - part)
