"""Fault-count profiles: how often f random edge faults leave a graph
connected, and how often they leave it strongly Menger edge-connected.

For each fault count f a level is either enumerated exactly (all C(m, f)
fault sets), sampled (independent uniform f-subsets), or forced to zero
(fewer than n - 1 edges survive, so nothing can be connected).
"""

from __future__ import annotations

import csv
import io
import itertools
import logging
import math
import random
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .graph import Graph, _connected_adj
from .menger import _first_violation
from .seeding import derive_seed, name_hash

__all__ = [
    "SimConfig",
    "Level",
    "FaultProfile",
    "BudgetError",
    "ProfileFormatError",
    "enumerate_level",
    "sample_level",
    "build_fault_profile",
    "format_profile",
    "parse_profile",
    "write_profile",
    "read_profile",
]

log = logging.getLogger(__name__)

EXACT, SAMPLED, ZERO = "exact", "sampled", "zero"
PROFILE_HEADER = ["f", "mode", "trials", "lambda_conn", "lambda_sm", "p_conn", "p_sm"]


class BudgetError(RuntimeError):
    """Exact enumeration refused: too many fault sets."""


class ProfileFormatError(ValueError):
    pass


@dataclass(frozen=True)
class SimConfig:
    trials: int = 2000
    master_seed: int = 0
    exact_threshold: int | None = None  # defaults to trials
    f_range: tuple[int, int] | None = None  # inclusive; defaults to (0, m)

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.exact_threshold is not None and self.exact_threshold < 1:
            raise ValueError(f"exact_threshold must be >= 1, got {self.exact_threshold}")

    @property
    def threshold(self) -> int:
        return self.trials if self.exact_threshold is None else self.exact_threshold


@dataclass(frozen=True)
class Level:
    f: int
    mode: str
    trials: int
    lambda_conn: int
    lambda_sm: int

    @property
    def p_conn(self) -> float:
        return self.lambda_conn / self.trials if self.trials else 0.0

    @property
    def p_sm(self) -> float:
        return self.lambda_sm / self.trials if self.trials else 0.0


@dataclass(frozen=True)
class FaultProfile:
    graph_name: str
    n: int
    m: int
    levels: tuple[Level, ...] = field(default=())

    def level(self, f: int) -> Level | None:
        for lv in self.levels:
            if lv.f == f:
                return lv
        return None

    def p_conn(self) -> dict[int, float]:
        return {lv.f: lv.p_conn for lv in self.levels}

    def p_sm(self) -> dict[int, float]:
        return {lv.f: lv.p_sm for lv in self.levels}


class _Evaluator:
    """Counts survivals for fault sets given as edge-index collections."""

    def __init__(self, g: Graph):
        self.n = g.n
        self.edges = g.edges

    def survive(self, removed: Iterable[int]) -> tuple[bool, bool]:
        n = self.n
        drop = set(removed)
        adj: list[list[int]] = [[] for _ in range(n)]
        for i, (u, v) in enumerate(self.edges):
            if i not in drop:
                adj[u].append(v)
                adj[v].append(u)
        if n > 1:
            for a in adj:
                if not a:
                    return False, False
        if not _connected_adj(n, adj):
            return False, False
        if n < 2:
            return True, True
        return True, _first_violation(n, adj) is None

    def count(self, fault_sets: Iterable[Iterable[int]]) -> tuple[int, int, int]:
        total = conn = sm = 0
        for removed in fault_sets:
            c, s = self.survive(removed)
            total += 1
            conn += c
            sm += s
        return total, conn, sm


def enumerate_level(g: Graph, f: int, budget: int | None = None) -> tuple[int, int, int]:
    """(lambda_f, lambda_f^M, C(m, f)) over every f-subset of edges, in lexicographic order."""
    m = g.m
    if not 0 <= f <= m:
        raise ValueError(f"fault count {f} outside [0, {m}]")
    total = math.comb(m, f)
    if budget is not None and total > budget:
        raise BudgetError(f"C({m}, {f}) = {total} fault sets exceed the budget of {budget}")
    n_sets, conn, sm = _Evaluator(g).count(itertools.combinations(range(m), f))
    assert n_sets == total
    return conn, sm, total


def _sampled_sets(m: int, f: int, trials: int, stream_seed: int) -> Iterator[list[int]]:
    population = range(m)
    for t in range(trials):
        yield random.Random(derive_seed(stream_seed, t)).sample(population, f)


def sample_level(g: Graph, f: int, trials: int, stream_seed: int) -> tuple[int, int, int]:
    """(lambda_f, lambda_f^M, trials) over ``trials`` independent uniform f-subsets.

    Trial t uses its own generator seeded from (stream_seed, t), so the counts
    do not depend on how trials are scheduled.
    """
    if not 0 <= f <= g.m:
        raise ValueError(f"fault count {f} outside [0, {g.m}]")
    _, conn, sm = _Evaluator(g).count(_sampled_sets(g.m, f, trials, stream_seed))
    return conn, sm, trials


def level_seed(master_seed: int, graph_name: str, f: int) -> int:
    return derive_seed(master_seed, name_hash(graph_name), f)


def build_fault_profile(g: Graph, cfg: SimConfig = SimConfig(), name: str = "G") -> FaultProfile:
    n, m = g.n, g.m
    lo, hi = cfg.f_range if cfg.f_range is not None else (0, m)
    if not 0 <= lo <= hi <= m:
        raise ValueError(f"f_range ({lo}, {hi}) not within [0, {m}]")
    connected = _connected_adj(n, g.adjacency)
    if not connected:
        log.warning("graph %s is disconnected; every level of its profile is zero", name)
    levels = []
    for f in range(lo, hi + 1):
        if m - f < n - 1 or not connected:
            levels.append(Level(f, ZERO, 0, 0, 0))
        elif math.comb(m, f) <= cfg.threshold:
            conn, sm, total = enumerate_level(g, f)
            levels.append(Level(f, EXACT, total, conn, sm))
        else:
            conn, sm, total = sample_level(g, f, cfg.trials, level_seed(cfg.master_seed, name, f))
            levels.append(Level(f, SAMPLED, total, conn, sm))
    return FaultProfile(name, n, m, tuple(levels))


def format_profile(profile: FaultProfile) -> str:
    buf = io.StringIO()
    buf.write(f"# graph={profile.graph_name}\n# n={profile.n}\n# m={profile.m}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(PROFILE_HEADER)
    for lv in profile.levels:
        writer.writerow(
            [lv.f, lv.mode, lv.trials, lv.lambda_conn, lv.lambda_sm, f"{lv.p_conn:.6f}", f"{lv.p_sm:.6f}"]
        )
    return buf.getvalue()


def parse_profile(text: str, source: str = "<profile>") -> FaultProfile:
    meta: dict[str, str] = {}
    header_seen = False
    levels: list[Level] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition("=")
            meta[key.strip()] = value.strip()
            continue
        row = next(csv.reader([line]))
        if not header_seen:
            if row != PROFILE_HEADER:
                raise ProfileFormatError(f"{source}:{lineno}: expected header {','.join(PROFILE_HEADER)}")
            header_seen = True
            continue
        if len(row) != len(PROFILE_HEADER):
            raise ProfileFormatError(f"{source}:{lineno}: expected {len(PROFILE_HEADER)} fields, got {len(row)}")
        try:
            f, trials, conn, sm = int(row[0]), int(row[2]), int(row[3]), int(row[4])
        except ValueError:
            raise ProfileFormatError(f"{source}:{lineno}: non-integer count field") from None
        mode = row[1]
        if mode not in (EXACT, SAMPLED, ZERO):
            raise ProfileFormatError(f"{source}:{lineno}: unknown mode {mode!r}")
        if not 0 <= sm <= conn <= trials:
            raise ProfileFormatError(f"{source}:{lineno}: counts violate 0 <= lambda_sm <= lambda_conn <= trials")
        if levels and f <= levels[-1].f:
            raise ProfileFormatError(f"{source}:{lineno}: fault counts must increase")
        levels.append(Level(f, mode, trials, conn, sm))
    if not header_seen:
        raise ProfileFormatError(f"{source}: missing header line")
    try:
        n = int(meta.get("n", -1))
        m = int(meta["m"]) if "m" in meta else (levels[-1].f if levels else 0)
    except ValueError:
        raise ProfileFormatError(f"{source}: malformed n/m metadata") from None
    return FaultProfile(meta.get("graph", source), n, m, tuple(levels))


def write_profile(profile: FaultProfile, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_profile(profile))


def read_profile(path) -> FaultProfile:
    with open(path, encoding="utf-8") as fh:
        return parse_profile(fh.read(), str(path))
