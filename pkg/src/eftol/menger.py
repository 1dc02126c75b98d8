"""Strong Menger edge-connectivity checks.

A connected graph is strongly Menger edge-connected (SM) when every pair u, v
is joined by min(deg u, deg v) edge-disjoint paths. By max-flow/min-cut this
is the statement that no edge cut of size below min(deg u, deg v) separates
u from v. Two independent deciders live here: a flow method and an
exhaustive small-cut enumeration used as its oracle.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Sequence

from .graph import Edge, Graph, GraphError, _augment_capped, _connected_adj, build_graph
from .seeding import derive_seed

__all__ = [
    "MengerVerdict",
    "FaultVerdict",
    "is_strongly_menger",
    "is_strongly_menger_by_cut_enumeration",
    "is_f_strongly_menger",
    "DEFAULT_BUDGET",
]

DEFAULT_BUDGET = 2_000_000


@dataclass(frozen=True)
class MengerVerdict:
    holds: bool
    reason: str = ""  # "disconnected" or "cut" when holds is False
    pair: tuple[int, int] | None = None
    cut: tuple[Edge, ...] = ()
    demand: int = 0  # min(deg u, deg v) of the witness pair

    @property
    def cut_size(self) -> int:
        return len(self.cut)

    def __bool__(self) -> bool:
        return self.holds


def _components(n: int, adj: Sequence[Sequence[int]]) -> list[int]:
    comp = [-1] * n
    c = 0
    for s in range(n):
        if comp[s] >= 0:
            continue
        comp[s] = c
        stack = [s]
        while stack:
            for v in adj[stack.pop()]:
                if comp[v] < 0:
                    comp[v] = c
                    stack.append(v)
        c += 1
    return comp


def _disconnected_verdict(n: int, adj: Sequence[Sequence[int]]) -> MengerVerdict:
    comp = _components(n, adj)
    # Prefer a cross pair where both ends have edges, so the empty cut is a real witness.
    best: dict[int, int] = {}
    for v in range(n):
        c = comp[v]
        if c not in best or len(adj[v]) > len(adj[best[c]]):
            best[c] = v
    reps = sorted(best.values(), key=lambda v: (-len(adj[v]), v))
    u, v = sorted(reps[:2])
    return MengerVerdict(False, "disconnected", (u, v), (), min(len(adj[u]), len(adj[v])))


def _first_violation(n: int, adj: Sequence[Sequence[int]]) -> tuple[int, int, list[int]] | None:
    """Flow check on a connected graph; returns (hub, x, residual parents) or None.

    With a maximum-degree hub h, the graph is SM iff lambda(h, x) >= deg(x)
    for every x: pairwise edge connectivity satisfies
    lambda(u, v) >= min(lambda(u, h), lambda(h, v)), so the star of pairs at h
    certifies all other pairs. Degree-1 vertices are covered by connectivity.
    """
    deg = [len(a) for a in adj]
    hub = max(range(n), key=lambda v: (deg[v], -v))
    for x in sorted(range(n), key=lambda v: (-deg[v], v)):
        need = deg[x]
        if need < 2:
            break
        if x == hub:
            continue
        value, parent = _augment_capped(n, adj, hub, x, need)
        if value < need:
            return hub, x, parent
    return None


def _sm_fast(n: int, adj: Sequence[Sequence[int]]) -> bool:
    """Boolean SM test for the simulation loop; assumes n >= 2."""
    for a in adj:
        if not a:
            return False
    if not _connected_adj(n, adj):
        return False
    return _first_violation(n, adj) is None


def _verdict(g: Graph) -> MengerVerdict:
    n, adj = g.n, g.adjacency
    if not _connected_adj(n, adj):
        return _disconnected_verdict(n, adj)
    hit = _first_violation(n, adj)
    if hit is None:
        return MengerVerdict(True)
    hub, x, parent = hit
    side = [p >= 0 for p in parent]
    cut = tuple(e for e in g.edges if side[e[0]] != side[e[1]])
    pair = (min(hub, x), max(hub, x))
    return MengerVerdict(False, "cut", pair, cut, min(len(adj[hub]), len(adj[x])))


def is_strongly_menger(g: Graph) -> MengerVerdict:
    """Flow-based SM decision with a checkable witness on failure."""
    if g.n < 2:
        raise GraphError("strong Menger connectivity needs at least 2 vertices")
    verdict = _verdict(g)
    if verdict.holds:
        assert _connected_adj(g.n, g.adjacency)
    return verdict


def sound_cut_bound(g: Graph) -> int:
    """Smallest max_cut for which cut enumeration is a complete check.

    A violating cut is smaller than min(deg s, deg t), which never exceeds the
    second-largest degree.
    """
    degs = sorted(g.degrees, reverse=True)
    second = degs[1] if len(degs) > 1 else 0
    return max(second - 1, 0)


def is_strongly_menger_by_cut_enumeration(g: Graph, max_cut: int) -> MengerVerdict:
    """Decide SM by deleting every edge set of size <= max_cut.

    Deleting E violates the property iff two vertices of degree > |E| end up
    in different components. Adjacency is kept as bitmasks so each deletion
    costs one frontier search.
    """
    if g.n < 2:
        raise GraphError("strong Menger connectivity needs at least 2 vertices")
    bound = sound_cut_bound(g)
    if max_cut < bound:
        raise GraphError(f"max_cut={max_cut} is below the sound bound {bound} for this graph")
    n, edges = g.n, g.edges
    deg = g.degrees
    nbr = [0] * n
    for u, v in edges:
        nbr[u] |= 1 << v
        nbr[v] |= 1 << u

    def reach_from(s: int) -> int:
        reach = frontier = 1 << s
        while frontier:
            grown = 0
            while frontier:
                low = frontier & -frontier
                grown |= nbr[low.bit_length() - 1]
                frontier ^= low
            frontier = grown & ~reach
            reach |= frontier
        return reach

    if reach_from(0) != (1 << n) - 1:
        return _disconnected_verdict(n, g.adjacency)

    for size in range(1, min(max_cut, len(edges)) + 1):
        high = 0
        for v in range(n):
            if deg[v] > size:
                high |= 1 << v
        if high & (high - 1) == 0:
            continue  # fewer than two vertices can demand more than `size` paths
        start = (high & -high).bit_length() - 1
        for combo in itertools.combinations(range(len(edges)), size):
            for i in combo:
                a, b = edges[i]
                nbr[a] ^= 1 << b
                nbr[b] ^= 1 << a
            reach = reach_from(start)
            for i in combo:
                a, b = edges[i]
                nbr[a] ^= 1 << b
                nbr[b] ^= 1 << a
            if high & ~reach:
                outside = high & ~reach
                t = (outside & -outside).bit_length() - 1
                cut = tuple(edges[i] for i in combo)
                s, t = min(start, t), max(start, t)
                return MengerVerdict(False, "cut", (s, t), cut, min(deg[s], deg[t]))
    return MengerVerdict(True)


@dataclass(frozen=True)
class FaultVerdict:
    holds: bool
    counterexample: tuple[Edge, ...] | None
    checked: int
    exhaustive: bool

    def __bool__(self) -> bool:
        return self.holds


def _surviving_adj(n: int, edges: Sequence[Edge], removed: set[int]) -> list[list[int]]:
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, (u, v) in enumerate(edges):
        if i not in removed:
            adj[u].append(v)
            adj[v].append(u)
    return adj


def is_f_strongly_menger(
    g: Graph,
    f: int,
    mode: str = "exhaustive",
    trials: int = 2000,
    seed: int = 0,
    budget: int = DEFAULT_BUDGET,
) -> FaultVerdict:
    """Whether g - F stays SM for every edge set F with |F| <= f.

    ``exhaustive`` walks every such F and refuses (GraphError) when their
    number exceeds ``budget``. ``sampled`` draws ``trials`` uniform F of size
    exactly f and can only report the absence of a counterexample.
    """
    m, n, edges = g.m, g.n, g.edges
    if not 0 <= f <= m:
        raise GraphError(f"fault count {f} outside [0, {m}]")
    if n < 2:
        raise GraphError("strong Menger connectivity needs at least 2 vertices")
    if mode == "exhaustive":
        total = sum(math.comb(m, j) for j in range(f + 1))
        if total > budget:
            raise GraphError(f"exhaustive check needs {total} fault sets, over the budget of {budget}")
        checked = 0
        for size in range(f + 1):
            for combo in itertools.combinations(range(m), size):
                checked += 1
                if not _sm_fast(n, _surviving_adj(n, edges, set(combo))):
                    return FaultVerdict(False, tuple(edges[i] for i in combo), checked, True)
        return FaultVerdict(True, None, checked, True)
    if mode == "sampled":
        for t in range(trials):
            rng = random.Random(derive_seed(seed, f, t))
            combo = sorted(rng.sample(range(m), f))
            if not _sm_fast(n, _surviving_adj(n, edges, set(combo))):
                return FaultVerdict(False, tuple(edges[i] for i in combo), t + 1, False)
        return FaultVerdict(True, None, trials, False)
    raise GraphError(f"unknown mode {mode!r}; use 'exhaustive' or 'sampled'")


def faulty_graph(g: Graph, removed: Sequence[int]) -> Graph:
    """g minus the edges at the given indices of ``g.edges``."""
    drop = set(removed)
    return build_graph(g.n, [e for i, e in enumerate(g.edges) if i not in drop], g.labels)
