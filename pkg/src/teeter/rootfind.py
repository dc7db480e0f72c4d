"""Bracketed scalar root finding used throughout the package.

Plain bisection: derivative-free, deterministic, and bit-reproducible,
which matters for the bifurcation locators.
"""
from __future__ import annotations

from typing import Callable


def bisect_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
    max_iter: int = 200,
) -> float:
    """Root of f on [lo, hi]; f(lo) and f(hi) must differ in sign."""
    flo = f(lo)
    fhi = f(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0.0 or hi - lo < tol:
            return mid
        if flo * fmid < 0.0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def bracket_roots(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    n: int = 1000,
    tol: float = 1e-12,
) -> list[float]:
    """All simple roots of f on [lo, hi] found by sign scanning on n cells."""
    roots: list[float] = []
    step = (hi - lo) / n
    x0 = lo
    f0 = f(x0)
    for i in range(1, n + 1):
        x1 = lo + i * step
        f1 = f(x1)
        if f0 == 0.0:
            roots.append(x0)
        elif f0 * f1 < 0.0:
            roots.append(bisect_root(f, x0, x1, tol=tol))
        x0, f0 = x1, f1
    if f0 == 0.0:
        roots.append(x0)
    return roots
