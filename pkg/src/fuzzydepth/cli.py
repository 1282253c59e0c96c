"""Command-line interface: depth evaluation, medians/bands, verification.

Datasets are JSON documents with an ``alpha_levels`` count and an ``items``
list; each item is one of the kinds triangular / trapezoidal / crisp_point /
crisp_interval / grid, with an optional positive weight (uniform weights
are assigned when absent).  Analytic laws are JSON documents of kind
``piecewise_linear_cdf`` with ``breakpoints`` = [{x, F_left, F_right}, ...].

Exit codes: 0 success, 1 certification property failure, 2 input error,
3 backend precondition error (degenerate law, or an operation the backend
cannot serve).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from pathlib import Path

import numpy as np

from .core import (
    AlphaGrid,
    FuzzyNumber,
    crisp_interval,
    crisp_point,
    make_trapezoidal,
    make_triangular,
    validate,
)
from .depth import depth_batch
from .distribution import (
    BackendPreconditionError,
    CrispCdfBackend,
    FuzzySample,
    ScalarCdf,
)
from .median import certify_medians, envelope_median, midpoint_median, support_median_band

BAND_HEADER = ["alpha", "u_plus_lo", "u_plus_hi", "u_minus_lo", "u_minus_hi"]


# ---------------------------------------------------------------------------
# document parsing
# ---------------------------------------------------------------------------

def _item_from_record(rec: dict, grid: AlphaGrid, index: int) -> FuzzyNumber:
    kind = rec.get("kind")
    try:
        if kind == "triangular":
            return make_triangular(rec["a"], rec["b"], rec["c"], grid)
        if kind == "trapezoidal":
            return make_trapezoidal(rec["a"], rec["b"], rec["c"], rec["d"], grid)
        if kind == "crisp_point":
            return crisp_point(rec["x"], grid)
        if kind == "crisp_interval":
            return crisp_interval(rec["a"], rec["b"], grid)
        if kind == "grid":
            return validate(rec["lower"], rec["upper"], grid)
    except KeyError as exc:
        raise ValueError(f"item {index}: missing field {exc} for kind {kind!r}") from None
    except ValueError as exc:
        raise ValueError(f"item {index}: {exc}") from None
    raise ValueError(f"item {index}: unknown kind {kind!r}")


def load_dataset(path: str, level_override: int | None = None) -> FuzzySample:
    with open(path) as fh:
        doc = json.load(fh)
    levels = level_override or doc.get("alpha_levels") or AlphaGrid().level_count
    grid = AlphaGrid(int(levels))
    records = doc.get("items")
    if not records:
        raise ValueError(f"{path}: dataset has no items")
    items = [_item_from_record(rec, grid, i) for i, rec in enumerate(records)]
    raw_weights = [rec.get("weight") for rec in records]
    if all(w is None for w in raw_weights):
        weights = None
    elif any(w is None for w in raw_weights):
        raise ValueError(f"{path}: weights must be given for all items or none")
    else:
        weights = np.asarray(raw_weights, dtype=float)
    return FuzzySample(tuple(items), weights)


def load_cdf(path: str) -> ScalarCdf:
    with open(path) as fh:
        doc = json.load(fh)
    if doc.get("kind") != "piecewise_linear_cdf":
        raise ValueError(f"{path}: expected kind 'piecewise_linear_cdf'")
    pts = doc.get("breakpoints")
    if not pts:
        raise ValueError(f"{path}: CDF document has no breakpoints")
    return ScalarCdf.from_breakpoints(
        (p["x"], p["F_left"], p["F_right"]) for p in pts
    )


def load_queries(path: str, grid: AlphaGrid) -> list[FuzzyNumber]:
    with open(path) as fh:
        doc = json.load(fh)
    declared = doc.get("alpha_levels")
    if declared is not None and int(declared) != grid.level_count:
        raise ValueError(
            f"{path}: query grid has {declared} levels but the data grid has "
            f"{grid.level_count}"
        )
    records = doc.get("items")
    if not records:
        raise ValueError(f"{path}: query document has no items")
    return [_item_from_record(rec, grid, i) for i, rec in enumerate(records)]


def grid_item_record(a: FuzzyNumber, weight: float = 1.0) -> dict:
    return {
        "kind": "grid",
        "lower": [float(x) for x in a.lower],
        "upper": [float(x) for x in a.upper],
        "weight": weight,
    }


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    target = Path(path)
    tmp = target.with_name(f".{target.name}.tmp")
    tmp.write_text(text)
    os.replace(tmp, target)


def _json_text(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def _csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(["" if v is None else repr(float(v)) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _load_backend(args):
    if getattr(args, "cdf", None):
        grid = AlphaGrid(args.alpha_levels or AlphaGrid().level_count)
        return CrispCdfBackend(load_cdf(args.cdf), grid)
    if getattr(args, "data", None):
        return load_dataset(args.data, args.alpha_levels)
    raise ValueError("either --data or --cdf is required")


def cmd_depth(args) -> int:
    backend = _load_backend(args)
    queries = load_queries(args.query, backend.grid)
    reports = depth_batch(queries, backend, args.method, args.r)
    records = [
        {
            "index": i,
            "method": rep.method,
            "depth": rep.value,
            "witness_u": rep.witness_u,
            "witness_alpha": rep.witness_alpha,
        }
        for i, rep in enumerate(reports)
    ]
    if args.format == "json":
        _write_text(args.out, _json_text(records))
    else:
        rows = [
            [r["index"], r["method"], float(r["depth"]),
             r["witness_u"], None if r["witness_alpha"] is None else float(r["witness_alpha"])]
            for r in records
        ]
        _write_text(args.out, _csv_text(["index", "method", "depth", "witness_u", "witness_alpha"], rows))
    return 0


def cmd_median(args) -> int:
    backend = _load_backend(args)
    if args.method == "band":
        band = support_median_band(backend)
        levels = backend.grid.levels
        rows = zip(levels, band.lo_plus, band.hi_plus, band.lo_minus, band.hi_minus)
        if args.format == "json":
            payload = [
                dict(zip(BAND_HEADER, (float(v) for v in row))) for row in rows
            ]
            _write_text(args.out, _json_text(payload))
        else:
            _write_text(args.out, _csv_text(BAND_HEADER, ([float(v) for v in row] for row in rows)))
        return 0
    median = midpoint_median(backend) if args.method == "si" else envelope_median(backend)
    if args.format == "json":
        payload = {
            "alpha_levels": backend.grid.level_count,
            "items": [grid_item_record(median)],
        }
        _write_text(args.out, _json_text(payload))
    else:
        rows = zip(backend.grid.levels, median.lower, median.upper)
        _write_text(args.out, _csv_text(["alpha", "lower", "upper"], ([float(v) for v in row] for row in rows)))
    return 0


def cmd_verify(args) -> int:
    backend = _load_backend(args)
    report = certify_medians(backend, trials=args.trials, seed=args.seed)
    _write_text(args.out, _json_text(report.to_dict()))
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzydepth",
        description="Depth functions and median sets for fuzzy-number data.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p, query=False):
        p.add_argument("--data", help="dataset JSON document")
        p.add_argument("--cdf", help="piecewise-linear CDF JSON document")
        p.add_argument("--alpha-levels", type=int, default=None,
                       help="override the membership grid size")
        if query:
            p.add_argument("--query", required=True, help="query items JSON document")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        p.add_argument("--format", choices=["json", "csv"], default="json")

    p_depth = sub.add_parser("depth", help="evaluate a depth function on query items")
    add_io(p_depth, query=True)
    p_depth.add_argument("--method", required=True,
                         choices=["l1", "tukey", "projection", "msimplicial", "fsimplicial"])
    p_depth.add_argument("--r", type=float, default=1.0, help="metric order for --method l1")
    p_depth.set_defaults(func=cmd_depth)

    p_median = sub.add_parser("median", help="compute median bands or named medians")
    add_io(p_median)
    p_median.add_argument("--method", required=True, choices=["band", "si", "gr"])
    p_median.set_defaults(func=cmd_median)

    p_band = sub.add_parser("band", help="shorthand for median --method band")
    add_io(p_band)
    p_band.set_defaults(func=cmd_median, method="band")

    p_verify = sub.add_parser("verify", help="certify the median/depth equivalences")
    add_io(p_verify)
    p_verify.add_argument("--trials", type=int, default=200)
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BackendPreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
