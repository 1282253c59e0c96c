"""Fuzzy numbers represented by alpha-cut endpoints on a uniform level grid.

Cut endpoints are stored at the levels 0 = a_0 < ... < a_M = 1 and
interpolated linearly in between, so triangular and trapezoidal numbers
(and crisp points/intervals as their degenerate cases) are exact on any
grid.  Higher layers access a fuzzy number only through its support
function s(u, alpha) with u in {-1, +1}: s(+1, .) is the upper endpoint
of the alpha-cut and s(-1, .) the negated lower endpoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "DEFAULT_LEVEL_COUNT",
    "DIRECTIONS",
    "EQUALITY_TOL",
    "AlphaGrid",
    "FuzzyNumber",
    "GridMismatchError",
    "blend",
    "check_direction",
    "crisp_interval",
    "crisp_point",
    "interp_levels",
    "make_trapezoidal",
    "make_triangular",
    "support_value",
    "validate",
]

DEFAULT_LEVEL_COUNT = 101

#: The two directions of the zero-dimensional unit sphere.
DIRECTIONS = (1, -1)

#: Absolute slack used for array invariants and fuzzy-number equality.
EQUALITY_TOL = 1e-12


class GridMismatchError(ValueError):
    """Raised when operands live on different alpha grids."""


def check_direction(u: int) -> None:
    if u not in (1, -1):
        raise ValueError(f"direction must be +1 or -1, got {u!r}")


@dataclass(frozen=True)
class AlphaGrid:
    """Uniform membership-level grid i/M for i = 0..M."""

    level_count: int = DEFAULT_LEVEL_COUNT

    def __post_init__(self) -> None:
        if self.level_count < 2:
            raise ValueError(
                f"alpha grid needs at least 2 levels, got {self.level_count}"
            )

    @cached_property
    def levels(self) -> np.ndarray:
        m = self.level_count - 1
        levels = np.arange(self.level_count) / m
        levels.setflags(write=False)
        return levels


def interp_levels(values: np.ndarray, levels: np.ndarray, alphas) -> np.ndarray:
    """Evaluate per-level values piecewise-linearly at arbitrary alphas.

    ``values`` may be ``(n,)`` or ``(k, n)`` with ``n = len(levels)``; the
    result is exact (no interpolation error) at the grid levels themselves.
    """
    a = np.asarray(alphas, dtype=float)
    if a.size and (a.min() < 0.0 or a.max() > 1.0):
        raise ValueError("membership level outside [0, 1]")
    idx = np.searchsorted(levels, a, side="right") - 1
    idx = np.clip(idx, 0, len(levels) - 2)
    t = (a - levels[idx]) / (levels[idx + 1] - levels[idx])
    lo = values[..., idx]
    hi = values[..., idx + 1]
    return lo * (1.0 - t) + hi * t


@dataclass(frozen=True, eq=False)
class FuzzyNumber:
    """A fuzzy number with compact interval alpha-cuts [lower_i, upper_i].

    Instances are validated on construction and immutable afterwards:
    ``lower`` must be nondecreasing, ``upper`` nonincreasing (nested cuts),
    ``lower <= upper`` everywhere (nonempty cuts) and all entries finite
    (compact cuts).  Violations within ``EQUALITY_TOL`` are treated as ties.
    """

    grid: AlphaGrid
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self) -> None:
        lower = np.asarray(self.lower, dtype=float).copy()
        upper = np.asarray(self.upper, dtype=float).copy()
        n = self.grid.level_count
        if lower.shape != (n,) or upper.shape != (n,):
            raise ValueError(
                f"endpoint arrays must have length {n} to match the grid"
            )
        if not (np.isfinite(lower).all() and np.isfinite(upper).all()):
            raise ValueError("not compact: cut endpoints must be finite")
        if np.any(np.diff(lower) < -EQUALITY_TOL):
            raise ValueError("not nested: lower endpoints must be nondecreasing")
        if np.any(np.diff(upper) > EQUALITY_TOL):
            raise ValueError("not nested: upper endpoints must be nonincreasing")
        gap = lower - upper
        if np.any(gap > EQUALITY_TOL):
            i = int(np.argmax(gap))
            raise ValueError(f"empty cut at level index {i}: lower > upper")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    def support(self, u: int) -> np.ndarray:
        """Support values at all grid levels for direction u."""
        check_direction(u)
        return self.upper if u == 1 else -self.lower

    def support_at(self, u: int, alphas) -> np.ndarray:
        """Support function evaluated at arbitrary levels in [0, 1]."""
        return interp_levels(self.support(u), self.grid.levels, alphas)

    def cut(self, alpha: float) -> tuple[float, float]:
        """The alpha-cut as a (lower, upper) pair."""
        lo = interp_levels(self.lower, self.grid.levels, alpha)
        hi = interp_levels(self.upper, self.grid.levels, alpha)
        return float(lo), float(hi)

    def approx_equal(self, other: "FuzzyNumber", tol: float = EQUALITY_TOL) -> bool:
        """Componentwise equality of the grid arrays within ``tol``."""
        if self.grid != other.grid:
            return False
        return bool(
            np.max(np.abs(self.lower - other.lower)) <= tol
            and np.max(np.abs(self.upper - other.upper)) <= tol
        )


def validate(lower, upper, grid: AlphaGrid) -> FuzzyNumber:
    """Build a fuzzy number from raw endpoint arrays, enforcing all invariants."""
    return FuzzyNumber(grid, np.asarray(lower, dtype=float), np.asarray(upper, dtype=float))


def make_triangular(a: float, b: float, c: float, grid: AlphaGrid) -> FuzzyNumber:
    """Triangular fuzzy number with support [a, c] and peak b."""
    if not a <= b <= c:
        raise ValueError(f"triangular parameters must satisfy a <= b <= c, got {(a, b, c)}")
    al = grid.levels
    return FuzzyNumber(grid, a + al * (b - a), c - al * (c - b))


def make_trapezoidal(a: float, b: float, c: float, d: float, grid: AlphaGrid) -> FuzzyNumber:
    """Trapezoidal fuzzy number with support [a, d] and core [b, c]."""
    if not a <= b <= c <= d:
        raise ValueError(
            f"trapezoidal parameters must satisfy a <= b <= c <= d, got {(a, b, c, d)}"
        )
    al = grid.levels
    return FuzzyNumber(grid, a + al * (b - a), d - al * (d - c))


def crisp_point(x: float, grid: AlphaGrid) -> FuzzyNumber:
    """The indicator of the single point x."""
    return make_trapezoidal(x, x, x, x, grid)


def crisp_interval(a: float, b: float, grid: AlphaGrid) -> FuzzyNumber:
    """The indicator of the closed interval [a, b]."""
    return make_trapezoidal(a, a, b, b, grid)


def support_value(a: FuzzyNumber, u: int, alpha: float) -> float:
    """s_a(u, alpha): the signed cut endpoint in direction u at level alpha."""
    return float(a.support_at(u, alpha))


def blend(a: FuzzyNumber, b: FuzzyNumber, lam: float) -> FuzzyNumber:
    """Levelwise convex combination: s_c(u, .) = lam*s_a(u, .) + (1-lam)*s_b(u, .).

    The result lies on the metric segment between ``a`` and ``b``: for the
    L1 support distance, rho1(a, b) = rho1(a, c) + rho1(c, b).
    """
    if a.grid != b.grid:
        raise GridMismatchError("blend operands must share a grid")
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"blend weight must lie in [0, 1], got {lam}")
    lower = lam * a.lower + (1.0 - lam) * b.lower
    upper = lam * a.upper + (1.0 - lam) * b.upper
    return FuzzyNumber(a.grid, lower, upper)
