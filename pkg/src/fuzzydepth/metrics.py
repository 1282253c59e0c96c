"""L^r distances between fuzzy numbers through their support functions.

The distance integrates |s_a(u, .) - s_b(u, .)|^r over the level axis and
averages the two directions with weight 1/2 each -- the unique sphere
normalisation for which the distance between crisp points x and y is
|x - y|.  Differences of grid-represented numbers are piecewise linear,
so every grid cell is split at the sign crossing and integrated in closed
form; the result is exact for every r >= 1, not just r in {1, 2}.
"""

from __future__ import annotations

import numpy as np

from .core import DIRECTIONS, FuzzyNumber, GridMismatchError

__all__ = ["integrate_abs_power", "rho", "expected_rho"]


def _segment_power_integral(p: np.ndarray, q: np.ndarray, width: np.ndarray, r: float) -> np.ndarray:
    """Integral of a nonnegative linear ramp from p to q, raised to r.

    Uses the antiderivative of (linear)^r; falls back to the midpoint value
    where p and q are too close for the difference quotient to be stable.
    """
    near = np.abs(q - p) <= 1e-12 * np.maximum(np.maximum(p, q), 1.0)
    safe = np.where(near, 1.0, q - p)
    exact = width * (q ** (r + 1.0) - p ** (r + 1.0)) / ((r + 1.0) * safe)
    flat = width * ((0.5 * (p + q)) ** r)
    return np.where(near, flat, exact)


def integrate_abs_power(deltas: np.ndarray, levels: np.ndarray, r: float = 1.0) -> np.ndarray:
    """Row-wise exact integral of |delta(alpha)|^r over [0, 1].

    ``deltas`` holds the values of piecewise-linear functions at ``levels``
    and may be ``(n,)`` or ``(k, n)``; returns a scalar or ``(k,)`` array.
    """
    d = np.atleast_2d(np.asarray(deltas, dtype=float))
    d0, d1 = d[:, :-1], d[:, 1:]
    h = np.diff(levels)
    crossing = (d0 * d1) < 0.0
    a0, a1 = np.abs(d0), np.abs(d1)
    if r == 1.0:
        plain = 0.5 * h * (a0 + a1)
        denom = np.where(crossing, a0 + a1, 1.0)
        split = 0.5 * h * (d0 * d0 + d1 * d1) / denom
        cells = np.where(crossing, split, plain)
    elif r == 2.0:
        # the square of a linear function integrates exactly either way
        cells = h * (d0 * d0 + d0 * d1 + d1 * d1) / 3.0
    else:
        if r < 1.0:
            raise ValueError(f"metric order must be >= 1, got {r}")
        plain = _segment_power_integral(a0, a1, np.broadcast_to(h, a0.shape), r)
        total = np.where(crossing, a0 + a1, 1.0)
        t_star = h * a0 / total
        split = (t_star * a0**r + (h - t_star) * a1**r) / (r + 1.0)
        cells = np.where(crossing, split, plain)
    out = cells.sum(axis=1)
    return out if np.ndim(deltas) > 1 else float(out[0])


def rho(a: FuzzyNumber, b: FuzzyNumber, r: float = 1.0) -> float:
    """The L^r support-function distance between two fuzzy numbers."""
    if a.grid != b.grid:
        raise GridMismatchError("distance operands must share a grid")
    if r < 1.0:
        raise ValueError(f"metric order must be >= 1, got {r}")
    levels = a.grid.levels
    acc = 0.0
    for u in DIRECTIONS:
        acc += 0.5 * integrate_abs_power(a.support(u) - b.support(u), levels, r)
    return float(acc ** (1.0 / r))


def expected_rho(a: FuzzyNumber, sample, r: float = 1.0) -> float:
    """Weighted mean distance from ``a`` to the realizations of a fuzzy sample.

    ``sample`` is any object exposing ``grid``, ``weights`` and
    ``support_matrix(u)``; the per-item integrals run vectorised across
    the whole sample.
    """
    if a.grid != sample.grid:
        raise GridMismatchError("query and sample must share a grid")
    if r < 1.0:
        raise ValueError(f"metric order must be >= 1, got {r}")
    levels = a.grid.levels
    parts = []
    for u in DIRECTIONS:
        deltas = sample.support_matrix(u) - a.support(u)
        parts.append(integrate_abs_power(deltas, levels, r))
    dists = (0.5 * parts[0] + 0.5 * parts[1]) ** (1.0 / r)
    return float(sample.weights @ dists)
