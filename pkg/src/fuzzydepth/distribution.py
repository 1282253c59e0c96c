"""Laws of the support values s(u, alpha) of a fuzzy random variable.

Two backends represent a fuzzy random variable through the univariate
distributions of its support function:

* :class:`FuzzySample` -- a weighted finite collection of fuzzy numbers
  (the empirical case).  At each (u, alpha) the law is discrete with
  atoms at the items' support values.
* :class:`CrispCdfBackend` -- an analytic piecewise-linear CDF with
  jumps, modelling the crisp fuzzy variable whose realizations are the
  points of a real random variable X.  At each (u, alpha) the law is
  that of u*X, independent of alpha.

Both law objects (:class:`DiscreteLaw`, :class:`ScalarCdf`) share one
informal interface: ``cdf``, ``cdf_left``, ``point_mass``,
``median_interval``, ``median_mid`` and ``mad``.  Median intervals follow
the convention [inf{t : F(t) >= 1/2}, sup{t : P(X >= t) >= 1/2}], with a
small mass tolerance so that weights such as 1/6 summing to 0.4999...99
still count as one half.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .core import (
    AlphaGrid,
    EQUALITY_TOL,
    FuzzyNumber,
    GridMismatchError,
    check_direction,
    interp_levels,
)

__all__ = [
    "BackendPreconditionError",
    "CrispCdfBackend",
    "DegenerateDistributionError",
    "DiscreteLaw",
    "FuzzySample",
    "ProjectionProfile",
    "ScalarCdf",
    "law_of",
    "law_of_crisp",
    "median_mid",
    "weighted_mad",
    "weighted_median_interval",
]

#: Slack on cumulative masses when locating medians.
MASS_TOL = 1e-12


class BackendPreconditionError(ValueError):
    """An operation was asked of a backend that cannot satisfy its premise."""


class DegenerateDistributionError(BackendPreconditionError):
    """The fuzzy random variable is almost surely a single fuzzy set."""


# ---------------------------------------------------------------------------
# weighted medians of finite real samples
# ---------------------------------------------------------------------------

def _check_weights(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    if values.size == 0:
        raise ValueError("median of an empty collection is undefined")
    if values.shape != weights.shape:
        raise ValueError("values and weights must have matching shapes")
    if np.any(weights <= 0.0):
        raise ValueError("weights must be strictly positive")
    total = weights.sum()
    if abs(total - 1.0) > 1e-9:
        raise ValueError(f"weights must sum to 1, got {total}")
    return weights / total


def weighted_median_interval(values, weights) -> tuple[float, float]:
    """The closed interval of all weighted medians of a finite sample."""
    v = np.asarray(values, dtype=float)
    w = _check_weights(v, np.asarray(weights, dtype=float))
    order = np.argsort(v, kind="stable")
    sv, sw = v[order], w[order]
    cw = np.cumsum(sw)
    lo = sv[np.searchsorted(cw, 0.5 - MASS_TOL, side="left")]
    hi = sv[np.searchsorted(cw, 0.5 + MASS_TOL, side="right")]
    return float(lo), float(hi)


def median_mid(values, weights) -> float:
    """Midpoint of the weighted median interval."""
    lo, hi = weighted_median_interval(values, weights)
    return 0.5 * (lo + hi)


def weighted_mad(values, weights) -> float:
    """Median absolute deviation about the midpoint median."""
    v = np.asarray(values, dtype=float)
    m = median_mid(v, weights)
    return median_mid(np.abs(v - m), weights)


def _median_interval_columns(values: np.ndarray, weights: np.ndarray):
    """Per-column weighted median intervals of a (k, m) atom matrix."""
    order = np.argsort(values, axis=0, kind="stable")
    sv = np.take_along_axis(values, order, axis=0)
    sw = np.take_along_axis(
        np.broadcast_to(weights[:, None], values.shape), order, axis=0
    )
    cw = np.cumsum(sw, axis=0)
    cols = np.arange(values.shape[1])
    lo = sv[np.argmax(cw >= 0.5 - MASS_TOL, axis=0), cols]
    hi = sv[np.sum(cw <= 0.5 + MASS_TOL, axis=0), cols]
    return lo, hi


def _cell_roots(f_left: np.ndarray, f_right: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    """Interior zeros of per-cell linear functions given their endpoint values.

    ``f_left``/``f_right`` hold the values at ``nodes[:-1]``/``nodes[1:]``
    and may be (c,) or (rows, c).  Exact zeros at cell ends are not
    reported; the ends are already nodes.
    """
    fl = np.atleast_2d(f_left)
    fr = np.atleast_2d(f_right)
    mask = (fl * fr) < 0.0
    if not mask.any():
        return np.empty(0)
    h = np.diff(nodes)
    t = fl / np.where(mask, fl - fr, 1.0)
    roots = nodes[:-1] + t * h
    return roots[mask]


# ---------------------------------------------------------------------------
# discrete laws
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DiscreteLaw:
    """A finitely supported law with sorted atoms and merged ties."""

    atoms: np.ndarray
    weights: np.ndarray

    @classmethod
    def from_values(cls, values, weights, merge_tol: float = MASS_TOL) -> "DiscreteLaw":
        v = np.asarray(values, dtype=float)
        w = _check_weights(v, np.asarray(weights, dtype=float))
        order = np.argsort(v, kind="stable")
        sv, sw = v[order], w[order]
        # ties closer than merge_tol collapse into one atom
        starts = np.concatenate(([True], np.diff(sv) > merge_tol))
        groups = np.cumsum(starts) - 1
        atoms = sv[starts]
        mass = np.zeros(atoms.size)
        np.add.at(mass, groups, sw)
        atoms.setflags(write=False)
        mass.setflags(write=False)
        return cls(atoms, mass)

    @cached_property
    def _cum(self) -> np.ndarray:
        return np.cumsum(self.weights)

    def cdf(self, t) -> np.ndarray:
        idx = np.searchsorted(self.atoms, np.asarray(t, dtype=float) + MASS_TOL, side="right")
        return np.where(idx > 0, self._cum[np.maximum(idx - 1, 0)], 0.0)

    def cdf_left(self, t) -> np.ndarray:
        idx = np.searchsorted(self.atoms, np.asarray(t, dtype=float) - MASS_TOL, side="left")
        return np.where(idx > 0, self._cum[np.maximum(idx - 1, 0)], 0.0)

    def point_mass(self, t) -> np.ndarray:
        return self.cdf(t) - self.cdf_left(t)

    def median_interval(self) -> tuple[float, float]:
        return weighted_median_interval(self.atoms, self.weights)

    def median_mid(self) -> float:
        lo, hi = self.median_interval()
        return 0.5 * (lo + hi)

    def mad(self) -> float:
        return weighted_mad(self.atoms, self.weights)


# ---------------------------------------------------------------------------
# piecewise-linear CDFs with jumps
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ScalarCdf:
    """A CDF that is linear between breakpoints and may jump at them.

    At breakpoint x_i the function has left limit ``f_left[i]`` and value
    ``f_right[i]``; between x_i and x_{i+1} it interpolates linearly from
    ``f_right[i]`` to ``f_left[i+1]``.  Below the first breakpoint F is 0,
    at and beyond the last it is 1.
    """

    xs: np.ndarray
    f_left: np.ndarray
    f_right: np.ndarray

    def __post_init__(self) -> None:
        xs = np.asarray(self.xs, dtype=float).copy()
        fl = np.asarray(self.f_left, dtype=float).copy()
        fr = np.asarray(self.f_right, dtype=float).copy()
        if not (xs.ndim == 1 and xs.shape == fl.shape == fr.shape and xs.size >= 1):
            raise ValueError("breakpoint arrays must be 1-d and of equal nonzero length")
        if np.any(np.diff(xs) <= 0.0):
            raise ValueError("breakpoint locations must be strictly increasing")
        interleaved = np.empty(2 * xs.size)
        interleaved[0::2], interleaved[1::2] = fl, fr
        if np.any(np.diff(interleaved) < -MASS_TOL):
            raise ValueError("CDF values must be nondecreasing")
        if interleaved.min() < -MASS_TOL or interleaved.max() > 1.0 + MASS_TOL:
            raise ValueError("CDF values must lie in [0, 1]")
        if abs(fl[0]) > 1e-9:
            raise ValueError("CDF must tend to 0 below the first breakpoint")
        if abs(fr[-1] - 1.0) > 1e-9:
            raise ValueError("CDF must reach 1 at the last breakpoint")
        for arr in (xs, fl, fr):
            arr.setflags(write=False)
        object.__setattr__(self, "xs", xs)
        object.__setattr__(self, "f_left", fl)
        object.__setattr__(self, "f_right", fr)

    @classmethod
    def from_breakpoints(cls, breakpoints) -> "ScalarCdf":
        """Build from an iterable of (x, F_left, F_right) triples."""
        pts = sorted(breakpoints)
        xs = np.array([p[0] for p in pts], dtype=float)
        fl = np.array([p[1] for p in pts], dtype=float)
        fr = np.array([p[2] for p in pts], dtype=float)
        return cls(xs, fl, fr)

    def breakpoints(self) -> list[tuple[float, float, float]]:
        return [
            (float(x), float(l), float(r))
            for x, l, r in zip(self.xs, self.f_left, self.f_right)
        ]

    def cdf(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        flat = np.atleast_1d(t).astype(float)
        out = np.empty(flat.shape)
        below = flat < self.xs[0]
        above = flat >= self.xs[-1]
        out[below] = 0.0
        out[above] = 1.0
        mid = ~(below | above)
        if mid.any():
            tm = flat[mid]
            i = np.searchsorted(self.xs, tm, side="right") - 1
            frac = (tm - self.xs[i]) / (self.xs[i + 1] - self.xs[i])
            out[mid] = self.f_right[i] + frac * (self.f_left[i + 1] - self.f_right[i])
        return out.reshape(t.shape) if t.ndim else float(out[0])

    def cdf_left(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        flat = np.atleast_1d(t).astype(float)
        out = np.empty(flat.shape)
        below = flat <= self.xs[0]
        above = flat > self.xs[-1]
        out[below] = np.where(flat[below] == self.xs[0], self.f_left[0], 0.0)
        out[above] = 1.0
        mid = ~(below | above)
        if mid.any():
            tm = flat[mid]
            j = np.searchsorted(self.xs, tm, side="left")
            at_node = self.xs[np.minimum(j, self.xs.size - 1)] == tm
            seg = np.maximum(j - 1, 0)
            frac = (tm - self.xs[seg]) / (self.xs[seg + 1] - self.xs[seg])
            lin = self.f_right[seg] + frac * (self.f_left[seg + 1] - self.f_right[seg])
            out[mid] = np.where(at_node, self.f_left[np.minimum(j, self.xs.size - 1)], lin)
        return out.reshape(t.shape) if t.ndim else float(out[0])

    def point_mass(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        flat = np.atleast_1d(t).astype(float)
        i = np.clip(np.searchsorted(self.xs, flat, side="left"), 0, self.xs.size - 1)
        j = np.maximum(i - 1, 0)
        jumps = self.f_right - self.f_left
        out = np.where(
            np.abs(self.xs[i] - flat) <= MASS_TOL,
            jumps[i],
            np.where(np.abs(self.xs[j] - flat) <= MASS_TOL, jumps[j], 0.0),
        )
        return out.reshape(t.shape) if t.ndim else float(out[0])

    def median_interval(self) -> tuple[float, float]:
        target = 0.5
        fr, fl, xs = self.f_right, self.f_left, self.xs
        # smallest t with F(t) >= 1/2
        i = int(np.argmax(fr >= target - MASS_TOL))
        if fl[i] >= target - MASS_TOL and i > 0:
            frac = (target - fr[i - 1]) / (fl[i] - fr[i - 1])
            lo = xs[i - 1] + frac * (xs[i] - xs[i - 1])
        else:
            lo = xs[i]
        # largest t with P(X >= t) >= 1/2, i.e. F_left(t) <= 1/2
        j = int(np.nonzero(fl <= target + MASS_TOL)[0][-1])
        if j + 1 < xs.size and fr[j] <= target + MASS_TOL:
            if fl[j + 1] > target + MASS_TOL:
                frac = (target - fr[j]) / (fl[j + 1] - fr[j])
                hi = xs[j] + frac * (xs[j + 1] - xs[j])
            else:  # flat at the target through the whole segment
                hi = xs[j + 1]
        else:
            hi = xs[j]
        return float(lo), float(hi)

    def median_mid(self) -> float:
        lo, hi = self.median_interval()
        return 0.5 * (lo + hi)

    def abs_deviation(self, center: float) -> "ScalarCdf":
        """The CDF of |X - center| for X distributed by this CDF."""
        ts = np.unique(np.concatenate([[0.0], np.abs(self.xs - center)]))
        fr = np.clip(self.cdf(center + ts) - self.cdf_left(center - ts), 0.0, 1.0)
        fl = np.clip(self.cdf_left(center + ts) - self.cdf(center - ts), 0.0, 1.0)
        fl = np.minimum(fl, fr)
        # enforce monotonicity against rounding noise in the differences
        fr = np.maximum.accumulate(fr)
        fl = np.maximum(fl, np.concatenate(([0.0], fr[:-1])))
        fl[0] = 0.0
        fr[-1] = 1.0
        return ScalarCdf(ts, fl, fr)

    def mad(self) -> float:
        return self.abs_deviation(self.median_mid()).median_mid()

    def reflected(self) -> "ScalarCdf":
        """The CDF of -X."""
        return ScalarCdf(
            -self.xs[::-1], (1.0 - self.f_right)[::-1], (1.0 - self.f_left)[::-1]
        )

    def support_range(self) -> tuple[float, float]:
        return float(self.xs[0]), float(self.xs[-1])

    def is_degenerate(self) -> bool:
        return bool(np.max(self.f_right - self.f_left) >= 1.0 - MASS_TOL)

    def is_continuous(self) -> bool:
        return bool(np.max(self.f_right - self.f_left) <= MASS_TOL)


# ---------------------------------------------------------------------------
# backends
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProjectionProfile:
    """Midpoint median and MAD of s(u, .) as piecewise-linear functions.

    Both arrays are exact at ``alphas`` and linear in between, so plain
    interpolation reproduces the true functions everywhere.
    """

    alphas: np.ndarray
    med: np.ndarray
    mad: np.ndarray

    def med_at(self, alphas) -> np.ndarray:
        return np.interp(alphas, self.alphas, self.med)

    def mad_at(self, alphas) -> np.ndarray:
        return np.interp(alphas, self.alphas, self.mad)


@dataclass(frozen=True, eq=False)
class FuzzySample:
    """A weighted finite collection of fuzzy numbers on a shared grid."""

    items: tuple[FuzzyNumber, ...]
    weights: np.ndarray = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        items = tuple(self.items)
        if not items:
            raise ValueError("a fuzzy sample needs at least one item")
        grid = items[0].grid
        for i, item in enumerate(items):
            if item.grid != grid:
                raise GridMismatchError(f"item {i} does not share the sample grid")
        if self.weights is None:
            w = np.full(len(items), 1.0 / len(items))
        else:
            w = np.asarray(self.weights, dtype=float).copy()
            if w.shape != (len(items),):
                raise ValueError("need exactly one weight per item")
            if np.any(w <= 0.0):
                raise ValueError("weights must be strictly positive")
            if abs(w.sum() - 1.0) > 1e-9:
                raise ValueError(f"weights must sum to 1, got {w.sum()}")
            w = w / w.sum()
        w.setflags(write=False)
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "weights", w)
        sup = {u: np.vstack([it.support(u) for it in items]) for u in (1, -1)}
        for m in sup.values():
            m.setflags(write=False)
        object.__setattr__(self, "_support", sup)
        object.__setattr__(self, "_cache", {})

    def __len__(self) -> int:
        return len(self.items)

    @property
    def grid(self) -> AlphaGrid:
        return self.items[0].grid

    def support_matrix(self, u: int) -> np.ndarray:
        """Item support values at the grid levels, one row per item."""
        check_direction(u)
        return self._support[u]

    def atoms_at(self, u: int, alphas) -> np.ndarray:
        """Support values of every item at arbitrary levels, shape (k, m)."""
        return interp_levels(self.support_matrix(u), self.grid.levels, alphas)

    def law(self, u: int, alpha: float) -> DiscreteLaw:
        """The discrete law of s(u, alpha) under this sample."""
        atoms = self.atoms_at(u, float(alpha))
        return DiscreteLaw.from_values(atoms, self.weights)

    def is_degenerate(self) -> bool:
        return all(it.approx_equal(self.items[0]) for it in self.items)

    def data_range(self) -> tuple[float, float]:
        lo = min(float(it.lower[0]) for it in self.items)
        hi = max(float(it.upper[0]) for it in self.items)
        return lo, hi

    def median_intervals_on_grid(self, u: int) -> tuple[np.ndarray, np.ndarray]:
        """Weighted median interval of s(u, alpha) at every grid level."""
        return _median_interval_columns(self.support_matrix(u), self.weights)

    def pair_crossings(self, u: int) -> np.ndarray:
        """Interior levels where any two item support functions cross."""
        key = ("pairs", u)
        if key not in self._cache:
            s = self.support_matrix(u)
            iu, ju = np.triu_indices(len(self.items), 1)
            if iu.size == 0:
                roots = np.empty(0)
            else:
                d = s[iu] - s[ju]
                roots = _cell_roots(d[:, :-1], d[:, 1:], self.grid.levels)
            self._cache[key] = np.unique(roots)
        return self._cache[key]

    def query_crossings(self, query: FuzzyNumber, u: int) -> np.ndarray:
        """Interior levels where the query's support crosses an item's."""
        d = self.support_matrix(u) - query.support(u)
        return _cell_roots(d[:, :-1], d[:, 1:], self.grid.levels)

    def projection_profile(self, u: int) -> ProjectionProfile:
        """Exact piecewise-linear profile of median and MAD over alpha.

        The node set refines the grid with all item-item crossings, then
        with the levels where an item's support meets the running median
        or where two deviations |s_i - med| can tie; between consecutive
        nodes both the median and the MAD are linear.
        """
        key = ("profile", u)
        if key not in self._cache:
            self._cache[key] = self._build_profile(u)
        return self._cache[key]

    def _build_profile(self, u: int) -> ProjectionProfile:
        levels = self.grid.levels
        w = self.weights
        k = len(self.items)
        base = np.unique(np.concatenate([levels, self.pair_crossings(u)]))
        cols = np.arange(base.size - 1)
        mids = 0.5 * (base[:-1] + base[1:])
        atoms_mid = self.atoms_at(u, mids)
        order = np.argsort(atoms_mid, axis=0, kind="stable")
        sw = np.take_along_axis(np.broadcast_to(w[:, None], atoms_mid.shape), order, axis=0)
        cw = np.cumsum(sw, axis=0)
        ia = order[np.argmax(cw >= 0.5 - MASS_TOL, axis=0), cols]
        ib = order[np.sum(cw <= 0.5 + MASS_TOL, axis=0), cols]
        node_vals = self.atoms_at(u, base)
        sl, sr = node_vals[:, :-1], node_vals[:, 1:]
        med_l = 0.5 * (sl[ia, cols] + sl[ib, cols])
        med_r = 0.5 * (sr[ia, cols] + sr[ib, cols])
        roots = [_cell_roots(sl - med_l, sr - med_r, base)]
        iu, ju = np.triu_indices(k, 1)
        if iu.size:
            roots.append(
                _cell_roots(
                    sl[iu] + sl[ju] - 2.0 * med_l, sr[iu] + sr[ju] - 2.0 * med_r, base
                )
            )
        nodes = np.unique(np.concatenate([base, *roots]))
        atoms = self.atoms_at(u, nodes)
        lo, hi = _median_interval_columns(atoms, w)
        med = 0.5 * (lo + hi)
        dlo, dhi = _median_interval_columns(np.abs(atoms - med[None, :]), w)
        return ProjectionProfile(nodes, med, 0.5 * (dlo + dhi))


@dataclass(frozen=True, eq=False)
class CrispCdfBackend:
    """Analytic backend for the crisp fuzzy variable built from a real CDF.

    Every realization is the indicator of a point, so s(u, alpha) = u*X
    for all alpha and the (u, alpha)-law is the CDF itself (u = +1) or its
    reflection (u = -1).  This backend serves the Tukey, projection and
    simplicial depths; the L1 depth needs full fuzzy realizations and is
    not available here.
    """

    cdf: ScalarCdf
    grid: AlphaGrid = field(default_factory=AlphaGrid)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_laws", {1: self.cdf, -1: self.cdf.reflected()})

    def law(self, u: int, alpha: float = 0.0) -> ScalarCdf:
        check_direction(u)
        return self._laws[u]

    def is_degenerate(self) -> bool:
        return self.cdf.is_degenerate()

    def is_continuous(self) -> bool:
        return self.cdf.is_continuous()

    def data_range(self) -> tuple[float, float]:
        return self.cdf.support_range()

    def median_intervals_on_grid(self, u: int) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self.law(u).median_interval()
        n = self.grid.level_count
        return np.full(n, lo), np.full(n, hi)

    def pair_crossings(self, u: int) -> np.ndarray:
        return np.empty(0)

    def query_crossings(self, query: FuzzyNumber, u: int) -> np.ndarray:
        d = query.support(u)[None, :] - self.law(u).xs[:, None]
        return _cell_roots(d[:, :-1], d[:, 1:], self.grid.levels)

    def projection_profile(self, u: int) -> ProjectionProfile:
        law = self.law(u)
        n = self.grid.level_count
        return ProjectionProfile(
            self.grid.levels,
            np.full(n, law.median_mid()),
            np.full(n, law.mad()),
        )


def law_of(sample: FuzzySample, u: int, alpha: float) -> DiscreteLaw:
    """The discrete law of s(u, alpha) under an empirical fuzzy sample."""
    return sample.law(u, alpha)


def law_of_crisp(cdf: ScalarCdf, u: int, alpha: float = 0.0) -> ScalarCdf:
    """The law of s(u, alpha) = u*X for the crisp variable with CDF ``cdf``."""
    check_direction(u)
    return cdf if u == 1 else cdf.reflected()
