"""Statistical depth functions and median sets for fuzzy-number data."""

from .core import (
    AlphaGrid,
    FuzzyNumber,
    GridMismatchError,
    blend,
    crisp_interval,
    crisp_point,
    make_trapezoidal,
    make_triangular,
    support_value,
    validate,
)
from .depth import (
    DepthReport,
    depth_batch,
    depth_l1,
    depth_projection,
    depth_simplicial,
    depth_tukey,
)
from .distribution import (
    BackendPreconditionError,
    CrispCdfBackend,
    DegenerateDistributionError,
    DiscreteLaw,
    FuzzySample,
    ScalarCdf,
    law_of,
    law_of_crisp,
    median_mid,
    weighted_mad,
    weighted_median_interval,
)
from .median import (
    MedianBand,
    band_contains,
    brute_force_one_median,
    build_candidate_pool,
    certify_medians,
    envelope_median,
    midpoint_median,
    random_in_band,
    random_in_range,
    random_out_of_band,
    support_median_band,
)
from .metrics import expected_rho, rho

__all__ = [
    "AlphaGrid",
    "BackendPreconditionError",
    "CrispCdfBackend",
    "DegenerateDistributionError",
    "DepthReport",
    "DiscreteLaw",
    "FuzzyNumber",
    "FuzzySample",
    "GridMismatchError",
    "MedianBand",
    "ScalarCdf",
    "band_contains",
    "blend",
    "brute_force_one_median",
    "build_candidate_pool",
    "certify_medians",
    "crisp_interval",
    "crisp_point",
    "depth_batch",
    "depth_l1",
    "depth_projection",
    "depth_simplicial",
    "depth_tukey",
    "envelope_median",
    "expected_rho",
    "law_of",
    "law_of_crisp",
    "make_trapezoidal",
    "make_triangular",
    "median_mid",
    "midpoint_median",
    "random_in_band",
    "random_in_range",
    "random_out_of_band",
    "rho",
    "support_median_band",
    "support_value",
    "validate",
    "weighted_mad",
    "weighted_median_interval",
]
