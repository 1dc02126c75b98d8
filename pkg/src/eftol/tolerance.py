"""EF/MEF tolerance from a fault profile, the independence-number upper
bound, and its large-degree limit.

With every edge failing independently with probability p, the number of
failed edges is Binomial(m, p), so

    t(p) = sum_f C(m, f) * p_f * p**f * (1 - p)**(m - f).
"""

from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass
from typing import Sequence

from .faultsim import SAMPLED, FaultProfile

__all__ = [
    "BoundParams",
    "ToleranceRow",
    "ToleranceCurve",
    "binomial_weights",
    "combine",
    "standard_error",
    "upper_bound",
    "corollary_limit",
    "build_curve",
    "p_grid",
    "format_curve",
    "parse_curve",
]

log = logging.getLogger(__name__)

TOLERANCE_HEADER = ["p", "t_e", "t_e_sm", "upper_bound"]


@dataclass(frozen=True)
class BoundParams:
    d: int
    i: int
    alpha: float = 2.0
    c: float = 1.0

    def __post_init__(self):
        if self.d < 1 or self.i < 1:
            raise ValueError("need d >= 1 and i >= 1")
        if not self.alpha > 1 or not self.c > 0:
            raise ValueError("need alpha > 1 and c > 0")


@dataclass(frozen=True)
class ToleranceRow:
    p: float
    t_e: float
    t_e_sm: float
    bound: float | None = None


@dataclass(frozen=True)
class ToleranceCurve:
    graph_name: str
    rows: tuple[ToleranceRow, ...]

    @property
    def grid(self) -> list[float]:
        return [r.p for r in self.rows]


def _check_p(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")


def binomial_weights(m: int, p: float) -> list[float]:
    """Binomial(m, p) pmf, built term by term from log-gamma so large m cannot overflow."""
    _check_p(p)
    if p == 0.0:
        return [1.0] + [0.0] * m
    if p == 1.0:
        return [0.0] * m + [1.0]
    lp, lq = math.log(p), math.log1p(-p)
    lm = math.lgamma(m + 1)
    return [math.exp(lm - math.lgamma(f + 1) - math.lgamma(m - f + 1) + f * lp + (m - f) * lq) for f in range(m + 1)]


def _survival(profile: FaultProfile, which: str) -> list[float]:
    values = profile.p_conn() if which == "conn" else profile.p_sm()
    missing = [f for f in range(profile.m + 1) if f not in values]
    if missing:
        log.warning("profile %s lacks levels %s; treating them as 0", profile.graph_name, _ranges(missing))
    return [values.get(f, 0.0) for f in range(profile.m + 1)]


def _ranges(fs: Sequence[int]) -> str:
    spans, start, prev = [], fs[0], fs[0]
    for f in list(fs[1:]) + [None]:
        if f is not None and f == prev + 1:
            prev = f
            continue
        spans.append(str(start) if start == prev else f"{start}-{prev}")
        if f is not None:
            start = prev = f
    return ",".join(spans)


def combine(profile: FaultProfile, p: float) -> tuple[float, float]:
    """(t_e, t_e^M) at failure probability p."""
    w = binomial_weights(profile.m, p)
    conn = _survival(profile, "conn")
    sm = _survival(profile, "sm")
    t_e = math.fsum(a * b for a, b in zip(w, conn))
    t_sm = math.fsum(a * b for a, b in zip(w, sm))
    return min(t_e, 1.0), min(t_sm, 1.0)


def standard_error(profile: FaultProfile, p: float) -> tuple[float, float]:
    """Monte-Carlo standard errors of (t_e, t_e^M); exact levels contribute none."""
    w = binomial_weights(profile.m, p)
    var_c = var_m = 0.0
    for lv in profile.levels:
        if lv.mode != SAMPLED or lv.f > profile.m:
            continue
        wf = w[lv.f] ** 2 / lv.trials
        var_c += wf * lv.p_conn * (1 - lv.p_conn)
        var_m += wf * lv.p_sm * (1 - lv.p_sm)
    return math.sqrt(var_c), math.sqrt(var_m)


def upper_bound(d: int, i: int, p: float) -> float:
    """(1 - p**d)**i, an upper bound on t_e for d-regular graphs with independence number i."""
    if d < 1 or i < 1:
        raise ValueError("need d >= 1 and i >= 1")
    _check_p(p)
    return (1.0 - p**d) ** i


def corollary_limit(params: BoundParams, p: float) -> float:
    """Limit of the bound along graphs with i ~ c * alpha**d as d grows."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"limit needs 0 < p < 1, got {p}")
    threshold = 1.0 / params.alpha
    if math.isclose(p, threshold, rel_tol=1e-12, abs_tol=0.0):
        return math.exp(-params.c)
    return 1.0 if p < threshold else 0.0


def build_curve(
    profile: FaultProfile, grid: Sequence[float], bound_params: tuple[int, int] | None = None
) -> ToleranceCurve:
    for p in grid:
        _check_p(p)
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("p-grid must be strictly increasing")
    rows = []
    for p in grid:
        t_e, t_sm = combine(profile, p)
        bound = upper_bound(bound_params[0], bound_params[1], p) if bound_params else None
        rows.append(ToleranceRow(p, t_e, t_sm, bound))
    return ToleranceCurve(profile.graph_name, tuple(rows))


def p_grid(text: str) -> list[float]:
    """Parse ``start:stop:step`` (stop inclusive) into rounded grid points."""
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise ValueError(f"p-grid must look like start:stop:step, got {text!r}") from None
    if step <= 0:
        raise ValueError("p-grid step must be positive")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    if count < 1:
        raise ValueError(f"empty p-grid {text!r}")
    grid = [round(start + k * step, 10) for k in range(count)]
    for p in grid:
        _check_p(p)
    return grid


def _fmt(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def format_curve(curve: ToleranceCurve) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TOLERANCE_HEADER)
    for r in curve.rows:
        writer.writerow([_fmt(r.p), _fmt(r.t_e), _fmt(r.t_e_sm), "" if r.bound is None else _fmt(r.bound)])
    return buf.getvalue()


def parse_curve(text: str, source: str = "<curve>") -> ToleranceCurve:
    rows = []
    header_seen = False
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        row = next(csv.reader([line]))
        if not header_seen:
            if row != TOLERANCE_HEADER:
                raise ValueError(f"{source}:{lineno}: expected header {','.join(TOLERANCE_HEADER)}")
            header_seen = True
            continue
        try:
            p, t_e, t_sm = float(row[0]), float(row[1]), float(row[2])
            bound = float(row[3]) if len(row) > 3 and row[3] else None
        except (ValueError, IndexError):
            raise ValueError(f"{source}:{lineno}: malformed row {line!r}") from None
        rows.append(ToleranceRow(p, t_e, t_sm, bound))
    if not header_seen:
        raise ValueError(f"{source}: missing header line")
    return ToleranceCurve(source, tuple(rows))
