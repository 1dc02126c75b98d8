"""Batch experiments: many graphs, one simulation setup, averaged tables.

Config grammar (line oriented, ``#`` starts a comment)::

    [sim]
    trials = 2000
    seed = 2025
    exact_threshold = 2000     # optional, defaults to trials
    workers = 1

    [grid]
    p = 0.1:0.9:0.1

    [graph]
    name = Q4
    spec = hypercube:n=4
    bound = auto               # auto | none

    [graph]                    # ensemble: seeds 1000..1049, names R4_00..R4_49
    name = R4
    spec = random-regular:n=16,d=4,seed=1000
    count = 50

    [average]
    name = R4bar
    members = R4               # ensemble names, graph names or fnmatch patterns

``[graph]`` and ``[average]`` may repeat; ``[sim]`` and ``[grid]`` may not.
"""

from __future__ import annotations

import fnmatch
import os
import re
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from .faultsim import SimConfig, build_fault_profile, format_profile
from .graph import independence_number
from .tolerance import ToleranceCurve, ToleranceRow, build_curve, format_curve, p_grid
from .topologies import GraphSpec, materialize, parse_spec

__all__ = ["BatchConfig", "GraphEntry", "AverageEntry", "BatchConfigError", "BatchError", "parse_batch", "run_batch"]

_NAME_RE = re.compile(r"^[A-Za-z0-9._-]+$")
_SECTION_KEYS = {
    "sim": {"trials", "seed", "exact_threshold", "workers"},
    "grid": {"p"},
    "graph": {"name", "spec", "count", "bound"},
    "average": {"name", "members"},
}


class BatchConfigError(ValueError):
    pass


class BatchError(RuntimeError):
    pass


@dataclass(frozen=True)
class GraphEntry:
    name: str
    spec: GraphSpec
    bound: bool = True
    ensemble: str | None = None  # directive name when generated from a count


@dataclass(frozen=True)
class AverageEntry:
    name: str
    members: tuple[str, ...]


@dataclass(frozen=True)
class BatchConfig:
    graphs: tuple[GraphEntry, ...]
    sim: SimConfig
    grid: tuple[float, ...]
    averages: tuple[AverageEntry, ...] = ()
    workers: int = 1
    ensembles: dict[str, tuple[str, ...]] = field(default_factory=dict, compare=False)


def _sections(text: str, source: str) -> list[tuple[str, int, dict]]:
    sections: list[tuple[str, int, dict]] = []
    current = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            name = line[1:-1].strip()
            if name not in _SECTION_KEYS:
                raise BatchConfigError(f"{source}:{lineno}: unknown section [{name}]")
            current = (name, lineno, {})
            sections.append(current)
            continue
        if current is None:
            raise BatchConfigError(f"{source}:{lineno}: key outside of a section")
        key, eq, value = line.partition("=")
        key = key.strip()
        if not eq:
            raise BatchConfigError(f"{source}:{lineno}: expected 'key = value'")
        if key not in _SECTION_KEYS[current[0]]:
            raise BatchConfigError(f"{source}:{lineno}: unknown key {key!r} in [{current[0]}]")
        if key in current[2]:
            raise BatchConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        current[2][key] = (value.strip(), lineno)
    return sections


def parse_batch(text: str, source: str = "<batch>") -> BatchConfig:
    sim: dict = {}
    grid_text = "0.1:0.9:0.1"
    graphs: list[GraphEntry] = []
    ensembles: dict[str, tuple[str, ...]] = {}
    averages: list[AverageEntry] = []
    seen_single: set[str] = set()

    def as_int(item, key) -> int:
        value, lineno = item
        try:
            return int(value)
        except ValueError:
            raise BatchConfigError(f"{source}:{lineno}: {key} must be an integer, got {value!r}") from None

    for name, lineno, kv in _sections(text, source):
        where = f"{source}:{lineno}"
        if name in ("sim", "grid"):
            if name in seen_single:
                raise BatchConfigError(f"{where}: section [{name}] given twice")
            seen_single.add(name)
        if name == "sim":
            sim = {k: as_int(v, k) for k, v in kv.items()}
        elif name == "grid":
            if "p" in kv:
                grid_text = kv["p"][0]
        elif name == "graph":
            if "name" not in kv or "spec" not in kv:
                raise BatchConfigError(f"{where}: [graph] needs name and spec")
            gname = kv["name"][0]
            if not _NAME_RE.match(gname):
                raise BatchConfigError(f"{where}: graph name {gname!r} must match {_NAME_RE.pattern}")
            try:
                spec = parse_spec(kv["spec"][0])
            except ValueError as exc:
                raise BatchConfigError(f"{source}:{kv['spec'][1]}: {exc}") from None
            bound_mode = kv.get("bound", ("auto", 0))[0]
            if bound_mode not in ("auto", "none"):
                raise BatchConfigError(f"{where}: bound must be 'auto' or 'none'")
            if "count" in kv:
                count = as_int(kv["count"], "count")
                if spec.family != "random-regular" or count < 1:
                    raise BatchConfigError(f"{where}: count needs a random-regular spec and a positive value")
                n, d, seed = spec.parameters
                width = len(str(count - 1))
                names = []
                for k in range(count):
                    member = f"{gname}_{k:0{width}d}"
                    graphs.append(
                        GraphEntry(member, GraphSpec("random-regular", (n, d, seed + k)), bound_mode == "auto", gname)
                    )
                    names.append(member)
                ensembles[gname] = tuple(names)
            else:
                graphs.append(GraphEntry(gname, spec, bound_mode == "auto"))
        else:
            if "name" not in kv or "members" not in kv:
                raise BatchConfigError(f"{where}: [average] needs name and members")
            averages.append(AverageEntry(kv["name"][0], tuple(m.strip() for m in kv["members"][0].split(",") if m.strip())))

    names = [g.name for g in graphs]
    dupes = {x for x in names if names.count(x) > 1} | (set(ensembles) & set(names))
    if dupes:
        raise BatchConfigError(f"{source}: duplicate graph names {sorted(dupes)}")
    if not graphs:
        raise BatchConfigError(f"{source}: no [graph] sections")
    resolved = []
    for avg in averages:
        if not _NAME_RE.match(avg.name) or avg.name in names:
            raise BatchConfigError(f"{source}: bad or clashing average name {avg.name!r}")
        members: list[str] = []
        for ref in avg.members:
            if ref in ensembles:
                hits = list(ensembles[ref])
            else:
                hits = [x for x in names if fnmatch.fnmatchcase(x, ref)]
            if not hits:
                raise BatchConfigError(f"{source}: average {avg.name!r} references unknown graph {ref!r}")
            members.extend(h for h in hits if h not in members)
        resolved.append(AverageEntry(avg.name, tuple(members)))
    try:
        grid = tuple(p_grid(grid_text))
        cfg = SimConfig(
            trials=sim.get("trials", 2000),
            master_seed=sim.get("seed", 0),
            exact_threshold=sim.get("exact_threshold"),
        )
    except ValueError as exc:
        raise BatchConfigError(f"{source}: {exc}") from None
    workers = sim.get("workers", 1)
    if workers < 1:
        raise BatchConfigError(f"{source}: workers must be >= 1")
    return BatchConfig(tuple(graphs), cfg, grid, tuple(resolved), workers, ensembles)


def _run_member(entry: GraphEntry, cfg: SimConfig, grid: tuple[float, ...]) -> tuple[str, str, ToleranceCurve]:
    try:
        g = materialize(entry.spec)
        profile = build_fault_profile(g, cfg, entry.name)
        bound = None
        if entry.bound and g.is_regular() and g.min_degree >= 1 and g.n <= 64:
            bound = (g.min_degree, independence_number(g))
        curve = build_curve(profile, list(grid), bound)
    except Exception as exc:
        raise BatchError(f"graph {entry.name} ({entry.spec}): {exc}") from exc
    return format_profile(profile), format_curve(curve), curve


def average_curves(name: str, curves: list[ToleranceCurve]) -> ToleranceCurve:
    grid = curves[0].grid
    for c in curves:
        if c.grid != grid:
            raise BatchError(f"average {name}: member {c.graph_name} has a different p-grid")
    k = len(curves)
    rows = []
    for j, p in enumerate(grid):
        t_e = sum(c.rows[j].t_e for c in curves) / k
        t_sm = sum(c.rows[j].t_e_sm for c in curves) / k
        rows.append(ToleranceRow(p, t_e, t_sm))
    return ToleranceCurve(name, tuple(rows))


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _summary(columns: list[tuple[str, ToleranceCurve]], grid, attr: str) -> str:
    lines = [",".join(["p"] + [name for name, _ in columns])]
    for j, p in enumerate(grid):
        lines.append(",".join([f"{p:.6f}"] + [f"{getattr(c.rows[j], attr):.6f}" for _, c in columns]))
    means = [sum(getattr(r, attr) for r in c.rows) / len(c.rows) for _, c in columns]
    lines.append(",".join(["average"] + [f"{x:.6f}" for x in means]))
    return "\n".join(lines) + "\n"


def run_batch(config: BatchConfig, out_dir, workers: int | None = None, progress=None) -> dict[str, ToleranceCurve]:
    """Run every graph, write profiles, curves, averages and summaries under ``out_dir``.

    Output bytes depend only on the config, never on ``workers``.
    """
    out = Path(out_dir)
    workers = config.workers if workers is None else workers
    entries = config.graphs
    results: dict[str, tuple[str, str, ToleranceCurve]] = {}
    if workers <= 1:
        for entry in entries:
            results[entry.name] = _run_member(entry, config.sim, config.grid)
            if progress:
                progress(entry.name)
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [(e.name, pool.submit(_run_member, e, config.sim, config.grid)) for e in entries]
            for name, fut in futures:
                results[name] = fut.result()
                if progress:
                    progress(name)

    curves: dict[str, ToleranceCurve] = {}
    for entry in entries:
        profile_text, curve_text, curve = results[entry.name]
        _atomic_write(out / "profiles" / f"{entry.name}.csv", profile_text)
        _atomic_write(out / "tolerance" / f"{entry.name}.csv", curve_text)
        curves[entry.name] = curve
    for avg in config.averages:
        curve = average_curves(avg.name, [curves[m] for m in avg.members])
        _atomic_write(out / "averages" / f"{avg.name}.csv", format_curve(curve))
        curves[avg.name] = curve

    columns = [(e.name, curves[e.name]) for e in entries if e.ensemble is None]
    columns += [(a.name, curves[a.name]) for a in config.averages]
    _atomic_write(out / "summary_te.csv", _summary(columns, config.grid, "t_e"))
    _atomic_write(out / "summary_te_sm.csv", _summary(columns, config.grid, "t_e_sm"))
    return curves


def with_overrides(config: BatchConfig, **sim_changes) -> BatchConfig:
    return replace(config, sim=replace(config.sim, **sim_changes))
