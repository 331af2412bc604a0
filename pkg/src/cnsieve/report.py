"""Empirical-vs-predicted series and their CSV / JSON serialisation."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

from .analytic import ConstantBundle, MODES, predict
from .base_primes import PrimeTable
from .errors import ValidationError
from .variants import ConstellationKind, count_from_sets, parse_kind, sieve_kind

CSV_FIELDS = ("x", "empirical", "predicted", "ratio", "kind", "mode")


@dataclass(frozen=True)
class ComparisonRow:
    x: int
    empirical: int
    predicted: float
    ratio: float
    kind: ConstellationKind
    mode: str


def make_row(kind, x, empirical, predicted, mode) -> ComparisonRow:
    ratio = empirical / predicted if predicted > 0 else math.nan
    return ComparisonRow(int(x), int(empirical), float(predicted), ratio, kind, mode)


def compare_series(
    kind: ConstellationKind,
    x_values,
    mode: str,
    table: PrimeTable,
    constants: ConstantBundle | None = None,
    workers: int = 1,
) -> list[ComparisonRow]:
    """One row per x; a single sieve run sized for max(x) serves every row."""
    xs = [int(x) for x in x_values]
    if not xs:
        return []
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValidationError("x values must be strictly increasing")
    if xs[0] < 4:
        raise ValidationError("x values must be >= 4")
    sets = sieve_kind(kind, xs[-1], table, workers)
    return [
        make_row(kind, x, count_from_sets(kind, sets, x), predict(kind, x, mode, constants), mode)
        for x in xs
    ]


@dataclass(frozen=True)
class DeltaTwinRow:
    n: int
    empirical: int
    estimate: float
    ratio: float


def delta_twin_series(n_min: int, n_max: int, table: PrimeTable, constants: ConstantBundle | None = None):
    """Twin counts (by center) in each (n^2, (n+1)^2] against delta_twin_estimate."""
    from .analytic import delta_twin_estimate
    from .variants import TWIN

    if n_min < 2 or n_max < n_min:
        raise ValidationError("need 2 <= n_min <= n_max")
    (sset,) = sieve_kind(TWIN, (n_max + 1) ** 2, table)
    rows = []
    for n in range(n_min, n_max + 1):
        emp = sset.count_below((n + 1) ** 2) - sset.count_below(n * n)
        est = delta_twin_estimate(n, constants)
        rows.append(DeltaTwinRow(n, emp, est, emp / est))
    return rows


def log_grid(x_max: int, points: int, per_decade: int = 10) -> list[int]:
    """The last `points` values of a log-spaced grid ending at x_max."""
    vals = {round(x_max * 10 ** (-i / per_decade)) for i in range(points)}
    return sorted(v for v in vals if v >= 4)


def _num(v: float) -> str:
    return format(v, ".10g")


def render_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_FIELDS)
    for r in rows:
        w.writerow([r.x, r.empirical, _num(r.predicted), _num(r.ratio), r.kind.name, r.mode])
    return buf.getvalue()


def parse_csv(text: str) -> list[ComparisonRow]:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header) != CSV_FIELDS:
        raise ValidationError(f"unexpected CSV header {header}")
    return [
        ComparisonRow(int(x), int(e), float(p), float(q), parse_kind(k), m)
        for x, e, p, q, k, m in reader
    ]


def render_json(rows, kind: ConstellationKind | None = None, mode: str | None = None) -> str:
    rows = list(rows)
    if rows:
        kind, mode = rows[0].kind, rows[0].mode
        if any(r.kind != kind or r.mode != mode for r in rows):
            raise ValidationError("JSON output holds a single kind and mode")
    doc = {
        "kind": kind.name if kind else None,
        "mode": mode,
        "rows": [
            {"x": r.x, "empirical": r.empirical, "predicted": float(_num(r.predicted)), "ratio": float(_num(r.ratio))}
            for r in rows
        ],
    }
    return json.dumps(doc)


def parse_json(text: str) -> list[ComparisonRow]:
    doc = json.loads(text)
    if not doc["rows"]:
        return []
    kind = parse_kind(doc["kind"])
    mode = doc["mode"]
    if mode not in MODES:
        raise ValidationError(f"unknown mode {mode!r}")
    return [
        ComparisonRow(int(r["x"]), int(r["empirical"]), float(r["predicted"]), float(r["ratio"]), kind, mode)
        for r in doc["rows"]
    ]
