"""Median constructions for fuzzy random variables and their certification.

The central object is the *median band*: for every direction u and grid
level alpha, the interval of univariate medians of s_X(u, alpha).  A fuzzy
number is a support median exactly when its support function stays inside
the band, and the band carries the two classical constructions: the
midpoint median (support equals the interval midpoint everywhere) and the
envelope median (cuts spanning the extreme medians of the cut endpoints).

``certify_medians`` stress-tests the equivalences that make these medians
interchangeable -- band members are precisely the minimizers of the mean
L1 support distance and the maximizers of the Tukey depth, the midpoint
median is the unique projection-depth maximizer, and under continuous
analytic laws the simplicial depths are maximized on the band as well --
using seeded in-band and out-of-band candidates with quantified margins.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import AlphaGrid, DIRECTIONS, EQUALITY_TOL, FuzzyNumber, GridMismatchError, blend, crisp_point
from .depth import depth_projection, depth_simplicial, depth_tukey
from .distribution import CrispCdfBackend, DegenerateDistributionError, FuzzySample
from .metrics import expected_rho

__all__ = [
    "BandMembership",
    "CandidatePool",
    "CertificationReport",
    "MedianBand",
    "OneMedianSearch",
    "PropertyResult",
    "band_contains",
    "brute_force_one_median",
    "build_candidate_pool",
    "certify_medians",
    "envelope_median",
    "midpoint_median",
    "random_in_band",
    "random_in_range",
    "random_out_of_band",
    "support_median_band",
]

#: Strictness margin for "strictly smaller/larger" certifications.
STRICT_MARGIN = 1e-10

#: Objective slack when collecting brute-force minimizers.
OBJECTIVE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class MedianBand:
    """Per-direction, per-level median intervals of the support values."""

    grid: AlphaGrid
    lo_plus: np.ndarray
    hi_plus: np.ndarray
    lo_minus: np.ndarray
    hi_minus: np.ndarray

    def interval(self, u: int) -> tuple[np.ndarray, np.ndarray]:
        if u == 1:
            return self.lo_plus, self.hi_plus
        if u == -1:
            return self.lo_minus, self.hi_minus
        raise ValueError(f"direction must be +1 or -1, got {u!r}")

    def mid(self, u: int) -> np.ndarray:
        lo, hi = self.interval(u)
        return 0.5 * (lo + hi)

    def max_width(self) -> float:
        return float(
            max(np.max(self.hi_plus - self.lo_plus), np.max(self.hi_minus - self.lo_minus))
        )


@dataclass(frozen=True)
class BandMembership:
    """Outcome of a band membership test with per-(u, alpha) violations."""

    ok: bool
    violations: tuple[tuple[int, float, float, float, float], ...]

    def __bool__(self) -> bool:
        return self.ok


def support_median_band(backend) -> MedianBand:
    """The median band of a sample or analytic backend on its grid."""
    lo_p, hi_p = backend.median_intervals_on_grid(1)
    lo_m, hi_m = backend.median_intervals_on_grid(-1)
    return MedianBand(backend.grid, lo_p, hi_p, lo_m, hi_m)


def band_contains(band: MedianBand, a: FuzzyNumber, tol: float = EQUALITY_TOL) -> BandMembership:
    """Whether the support function of ``a`` stays inside the band everywhere."""
    if a.grid != band.grid:
        raise GridMismatchError("band and query must share a grid")
    violations = []
    for u in DIRECTIONS:
        lo, hi = band.interval(u)
        s = a.support(u)
        bad = np.nonzero((s < lo - tol) | (s > hi + tol))[0]
        for i in bad:
            violations.append(
                (u, float(band.grid.levels[i]), float(s[i]), float(lo[i]), float(hi[i]))
            )
    return BandMembership(not violations, tuple(violations))


def midpoint_median(backend) -> FuzzyNumber:
    """The fuzzy number whose support is the band midpoint at every (u, alpha)."""
    band = support_median_band(backend)
    return FuzzyNumber(band.grid, -band.mid(-1), band.mid(1))


def envelope_median(backend) -> FuzzyNumber:
    """The widest support median: cuts span the extreme medians of the endpoints."""
    band = support_median_band(backend)
    return FuzzyNumber(band.grid, -band.hi_minus, band.hi_plus)


# ---------------------------------------------------------------------------
# candidate generation
# ---------------------------------------------------------------------------

def random_in_range(grid: AlphaGrid, lo: float, hi: float, rng: np.random.Generator) -> FuzzyNumber:
    """A random fuzzy number inside [lo, hi], built from sorted uniform draws."""
    n = grid.level_count
    core = np.sort(rng.uniform(lo, hi, size=2))
    lower = np.empty(n)
    upper = np.empty(n)
    lower[:-1] = np.sort(rng.uniform(lo, core[0], size=n - 1))
    lower[-1] = core[0]
    upper[:-1] = -np.sort(-rng.uniform(core[1], hi, size=n - 1))
    upper[-1] = core[1]
    return FuzzyNumber(grid, lower, upper)


def _draw(rng: np.random.Generator, lo: float, hi: float, snap: float) -> float:
    """Uniform draw in [lo, hi] that snaps to an endpoint with probability ``snap``."""
    roll = rng.random()
    if roll < snap / 2.0:
        return lo
    if roll < snap:
        return hi
    return rng.uniform(lo, hi)


def random_in_band(band: MedianBand, rng: np.random.Generator, snap: float = 0.25) -> FuzzyNumber:
    """A random valid band member, adversarially biased toward the boundary.

    The upper envelope is drawn level by level from alpha = 0 upward and
    the lower envelope from alpha = 1 downward, each constrained by the
    band, by monotonicity and by the other envelope; every such constraint
    set is nonempty because the band itself is monotone.
    """
    n = band.grid.level_count
    u_lo, u_hi = band.lo_plus, band.hi_plus
    l_lo, l_hi = -band.hi_minus, -band.lo_minus
    upper = np.empty(n)
    upper[0] = _draw(rng, u_lo[0], u_hi[0], snap)
    for i in range(1, n):
        upper[i] = _draw(rng, u_lo[i], min(upper[i - 1], u_hi[i]), snap)
    lower = np.empty(n)
    lower[-1] = _draw(rng, l_lo[-1], min(l_hi[-1], upper[-1]), snap)
    for i in range(n - 2, -1, -1):
        lower[i] = _draw(rng, l_lo[i], min(l_hi[i], lower[i + 1], upper[i]), snap)
    return FuzzyNumber(band.grid, lower, upper)


def random_out_of_band(
    band: MedianBand,
    rng: np.random.Generator,
    min_violation: float,
) -> FuzzyNumber:
    """A valid fuzzy number leaving the band by at least ``min_violation``.

    A random band member is pushed past one band edge over a random level
    window with a linear ramp, keeping both envelopes monotone and, where
    needed, repairing the other envelope so the result stays a valid fuzzy
    number.
    """
    base = random_in_band(band, rng)
    lower, upper = base.lower.copy(), base.upper.copy()
    n = band.grid.level_count
    window = rng.integers(max(2, n // 3), n + 1)
    v = min_violation * rng.uniform(1.0, 3.0)
    ramp_low = np.clip(1.0 - np.arange(n) / (window - 1.0), 0.0, 1.0)  # peaks at alpha=0
    ramp_high = ramp_low[::-1]  # peaks at alpha=1
    side = rng.integers(4)
    if side == 0:  # upper envelope above the band, widest at alpha = 0
        upper = np.maximum(upper, band.hi_plus + v * ramp_low)
    elif side == 1:  # upper envelope below the band, tightest at alpha = 1
        upper = np.minimum(upper, band.lo_plus - v * ramp_high)
        lower = np.minimum(lower, upper)
        lower = np.minimum.accumulate(lower[::-1])[::-1]
    elif side == 2:  # lower envelope below the band
        lower = np.minimum(lower, -band.hi_minus - v * ramp_low)
    else:  # lower envelope above the band
        lower = np.maximum(lower, -band.lo_minus + v * ramp_high)
        upper = np.maximum.accumulate(np.maximum(upper, lower)[::-1])[::-1]
    return FuzzyNumber(band.grid, lower, upper)


@dataclass(frozen=True)
class CandidatePool:
    """Labeled candidates for oracle comparisons and certification."""

    in_band: tuple[FuzzyNumber, ...]
    out_band: tuple[FuzzyNumber, ...]
    anchors: dict[str, FuzzyNumber]

    def all_candidates(self) -> list[FuzzyNumber]:
        return list(self.in_band) + list(self.out_band) + list(self.anchors.values())


def _band_corners(band: MedianBand) -> dict[str, FuzzyNumber]:
    corners = {}
    uppers = {"lo": band.lo_plus, "hi": band.hi_plus}
    lowers = {"lo": -band.hi_minus, "hi": -band.lo_minus}
    for nu, upper in uppers.items():
        for nl, lower in lowers.items():
            try:
                corners[f"corner_u{nu}_l{nl}"] = FuzzyNumber(band.grid, lower, upper)
            except ValueError:
                continue  # that corner combination is not a valid fuzzy number
    return corners


def build_candidate_pool(
    backend,
    n_in: int,
    n_out: int,
    rng: np.random.Generator,
    min_violation: float | None = None,
) -> CandidatePool:
    """Generate in-band and out-of-band candidates plus deterministic anchors."""
    band = support_median_band(backend)
    lo, hi = backend.data_range()
    if min_violation is None:
        min_violation = max(1e-3 * (hi - lo), 1e-6)
    anchors = {"midpoint_median": midpoint_median(backend), "envelope_median": envelope_median(backend)}
    anchors.update(_band_corners(band))
    in_band = tuple(random_in_band(band, rng) for _ in range(n_in))
    out_band = tuple(random_out_of_band(band, rng, min_violation) for _ in range(n_out))
    return CandidatePool(in_band, out_band, anchors)


# ---------------------------------------------------------------------------
# brute-force 1-median search
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class OneMedianSearch:
    """Result of minimizing the mean L1 support distance over a pool."""

    pool: tuple[FuzzyNumber, ...]
    objectives: np.ndarray
    minimum: float
    best_indices: tuple[int, ...]

    @property
    def minimizers(self) -> list[FuzzyNumber]:
        return [self.pool[i] for i in self.best_indices]


def brute_force_one_median(
    sample: FuzzySample,
    candidates=None,
    budget: int = 500,
    seed: int = 0,
    tol: float = OBJECTIVE_TOL,
) -> OneMedianSearch:
    """Minimize E[rho_1(U, X)] over an explicit or generated candidate pool.

    Without an explicit pool, ``budget`` random fuzzy numbers inside the
    sample's data range are generated, together with the band corners and
    the midpoint/envelope medians.  Every candidate whose objective lies
    within ``tol`` of the minimum is returned.
    """
    if budget < 1:
        raise ValueError("candidate budget must be at least 1")
    if candidates is None:
        rng = np.random.default_rng(seed)
        lo, hi = sample.data_range()
        band = support_median_band(sample)
        pool = [random_in_range(sample.grid, lo, hi, rng) for _ in range(budget)]
        pool.append(midpoint_median(sample))
        pool.append(envelope_median(sample))
        pool.extend(_band_corners(band).values())
    else:
        pool = list(candidates)
        if not pool:
            raise ValueError("candidate pool must not be empty")
    objectives = np.array([expected_rho(c, sample, 1.0) for c in pool])
    minimum = float(objectives.min())
    best = tuple(int(i) for i in np.nonzero(objectives <= minimum + tol)[0])
    return OneMedianSearch(tuple(pool), objectives, minimum, best)


# ---------------------------------------------------------------------------
# certification of the median equivalences
# ---------------------------------------------------------------------------

@dataclass
class PropertyResult:
    name: str
    status: str  # "pass" | "fail" | "skipped" | "flagged"
    detail: str = ""
    counterexample: dict | None = None

    def to_dict(self) -> dict:
        out = {"name": self.name, "status": self.status, "detail": self.detail}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


@dataclass
class CertificationReport:
    properties: list[PropertyResult]
    trials: int
    seed: int

    @property
    def passed(self) -> bool:
        return all(p.status != "fail" for p in self.properties)

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "seed": self.seed,
            "passed": self.passed,
            "properties": [p.to_dict() for p in self.properties],
        }


def _spread_result(name: str, values: np.ndarray, tol: float, detail: str) -> PropertyResult:
    spread = float(values.max() - values.min()) if values.size else 0.0
    if spread <= tol:
        return PropertyResult(name, "pass", f"{detail}; spread {spread:.3e}")
    worst = {"min": float(values.min()), "max": float(values.max()), "spread": spread}
    return PropertyResult(name, "fail", detail, worst)


def certify_medians(backend, trials: int = 200, seed: int = 0) -> CertificationReport:
    """Certify the depth/median equivalences on seeded random candidates.

    The generated report contains one entry per property.  Properties that
    do not apply to the backend (the L1 objective on analytic laws, the
    simplicial maximization on discrete laws, the unique-median collapse
    when pointwise medians are intervals) are reported as skipped; the
    known simplicial disagreement under discontinuous analytic laws is
    reported as "flagged" rather than as a failure.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    rng = np.random.default_rng(seed)
    props: list[PropertyResult] = []
    band = support_median_band(backend)
    med_mid = midpoint_median(backend)
    med_env = envelope_median(backend)
    is_sample = isinstance(backend, FuzzySample)
    lo, hi = backend.data_range()
    scale = max(hi - lo, 1e-9)

    for name, med in (("midpoint_median_in_band", med_mid), ("envelope_median_in_band", med_env)):
        member = band_contains(band, med, EQUALITY_TOL)
        props.append(
            PropertyResult(name, "pass" if member.ok else "fail",
                           "support median construction stays in the band",
                           None if member.ok else {"violations": list(member.violations[:3])})
        )

    pool = build_candidate_pool(backend, trials, trials, rng)
    in_candidates = list(pool.in_band) + [med_mid, med_env] + [
        c for k, c in pool.anchors.items() if k.startswith("corner")
    ]
    out_candidates = list(pool.out_band)

    # (a)/(b) Tukey depth: constant on the band, strictly smaller off it
    in_tukey = np.array([depth_tukey(c, backend).value for c in in_candidates])
    props.append(_spread_result(
        "tukey_constant_on_band", in_tukey, EQUALITY_TOL,
        "all band members share one Tukey depth"))
    out_tukey = np.array([depth_tukey(c, backend).value for c in out_candidates])
    ref = float(in_tukey.min())
    bad = np.nonzero(out_tukey > ref - STRICT_MARGIN)[0]
    props.append(PropertyResult(
        "tukey_separates_off_band",
        "pass" if bad.size == 0 else "fail",
        "every out-of-band candidate has strictly smaller Tukey depth",
        None if bad.size == 0 else {"index": int(bad[0]), "depth": float(out_tukey[bad[0]]), "band_depth": ref},
    ))

    # (a)/(b) for the L1 objective (sample backends only)
    if is_sample:
        in_obj = np.array([expected_rho(c, backend, 1.0) for c in in_candidates])
        props.append(_spread_result(
            "l1_objective_constant_on_band", in_obj, STRICT_MARGIN,
            "all band members share one mean L1 distance"))
        out_obj = np.array([expected_rho(c, backend, 1.0) for c in out_candidates])
        ref_obj = float(in_obj.max())
        bad = np.nonzero(out_obj < ref_obj + STRICT_MARGIN)[0]
        props.append(PropertyResult(
            "l1_objective_separates_off_band",
            "pass" if bad.size == 0 else "fail",
            "every out-of-band candidate has strictly larger mean L1 distance",
            None if bad.size == 0 else {"index": int(bad[0]), "objective": float(out_obj[bad[0]]), "band_objective": ref_obj},
        ))
    else:
        props.append(PropertyResult(
            "l1_objective_constant_on_band", "skipped",
            "analytic backend carries marginal laws only, no fuzzy realizations"))
        props.append(PropertyResult("l1_objective_separates_off_band", "skipped",
                                    "analytic backend carries marginal laws only"))

    # (c) the midpoint median is the unique projection-depth maximizer
    try:
        dp_med = depth_projection(med_mid, backend).value
        bad_case = None
        if dp_med < 1.0 - EQUALITY_TOL:
            bad_case = {"midpoint_median_depth": dp_med}
        else:
            for idx, c in enumerate(in_candidates + out_candidates):
                if c.approx_equal(med_mid):
                    continue
                d = depth_projection(c, backend).value
                if d >= 1.0 - EQUALITY_TOL:
                    bad_case = {"index": idx, "depth": d}
                    break
        props.append(PropertyResult(
            "projection_unique_maximizer",
            "pass" if bad_case is None else "fail",
            "projection depth is 1 at the midpoint median and below 1 elsewhere",
            bad_case,
        ))
    except DegenerateDistributionError:
        props.append(PropertyResult(
            "projection_unique_maximizer", "skipped", "degenerate distribution"))

    # (d) simplicial maximization; exact only for continuous analytic laws
    perturbed = []
    if not is_sample:
        m = backend.law(1).median_mid()
        delta = 0.1 * scale
        perturbed = [crisp_point(m - delta, backend.grid), crisp_point(m + delta, backend.grid)]
    if not is_sample and backend.is_continuous():
        lo_med, hi_med = backend.law(1).median_interval()
        if hi_med - lo_med > EQUALITY_TOL:
            props.append(PropertyResult(
                "simplicial_maximized_at_median", "skipped",
                "the pointwise median is not unique"))
        else:
            bad_case = None
            for variant in ("modified", "fuzzy"):
                ref_d = depth_simplicial(med_mid, backend, variant).value
                for idx, c in enumerate(in_candidates + out_candidates + perturbed):
                    d = depth_simplicial(c, backend, variant).value
                    if d > ref_d + EQUALITY_TOL:
                        bad_case = {"variant": variant, "index": idx, "depth": d, "median_depth": ref_d}
                        break
                for c in perturbed:
                    d = depth_simplicial(c, backend, variant).value
                    if d > ref_d - STRICT_MARGIN:
                        bad_case = {"variant": variant, "perturbed_depth": d, "median_depth": ref_d}
                        break
                if bad_case:
                    break
            props.append(PropertyResult(
                "simplicial_maximized_at_median",
                "pass" if bad_case is None else "fail",
                "both simplicial depths peak at the unique support median",
                bad_case,
            ))
    elif not is_sample:
        ref_d = depth_simplicial(med_mid, backend, "fuzzy").value
        best = ref_d
        best_case = None
        for idx, c in enumerate(in_candidates + out_candidates + perturbed):
            d = depth_simplicial(c, backend, "fuzzy").value
            if d > best + EQUALITY_TOL:
                best = d
                best_case = {"index": idx, "depth": d, "median_depth": ref_d}
        if best_case is None:
            props.append(PropertyResult(
                "simplicial_median_agreement", "pass",
                "no candidate beat the support median despite the discontinuous law"))
        else:
            props.append(PropertyResult(
                "simplicial_median_agreement", "flagged",
                "support medians do not maximize the fuzzy simplicial depth for "
                "this discontinuous law (documented exception)",
                best_case,
            ))
    else:
        props.append(PropertyResult(
            "simplicial_maximized_at_median", "skipped",
            "discrete laws have atoms; the maximization holds for continuous laws"))

    # (e) every band member's cuts sit inside the envelope median's cuts
    bad_case = None
    for idx, c in enumerate(in_candidates):
        if (np.any(c.lower < med_env.lower - EQUALITY_TOL)
                or np.any(c.upper > med_env.upper + EQUALITY_TOL)):
            bad_case = {"index": idx}
            break
    props.append(PropertyResult(
        "band_inside_envelope_median",
        "pass" if bad_case is None else "fail",
        "every in-band candidate's cuts are contained in the envelope median's",
        bad_case,
    ))

    # unique pointwise medians collapse every construction to one fuzzy number
    if band.max_width() <= EQUALITY_TOL:
        agree = med_mid.approx_equal(med_env)
        props.append(PropertyResult(
            "unique_median_collapse",
            "pass" if agree else "fail",
            "pointwise medians are unique, so the midpoint and envelope medians coincide",
            None if agree else {"max_gap": float(max(np.max(np.abs(med_mid.lower - med_env.lower)),
                                                     np.max(np.abs(med_mid.upper - med_env.upper))))},
        ))
    else:
        props.append(PropertyResult(
            "unique_median_collapse", "skipped",
            "pointwise medians are intervals for this backend"))

    return CertificationReport(props, trials, seed)
