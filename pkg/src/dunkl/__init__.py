"""One-dimensional Dunkl harmonic analysis: transform, translation, Poisson
integrals, the lam-Hilbert transform and Hardy-space atoms."""
from .measure import (
    DunklParameter,
    JacobiRule,
    Profile,
    SampledFunction,
    WeightedGrid,
    build_jacobi_rule,
    build_weighted_grid,
    make_parameter,
    sample,
)

__version__ = "0.1.0"

__all__ = [
    "DunklParameter",
    "JacobiRule",
    "Profile",
    "SampledFunction",
    "WeightedGrid",
    "build_jacobi_rule",
    "build_weighted_grid",
    "make_parameter",
    "sample",
]
