"""Simple undirected graphs and the primitives the fault analyses run on.

Vertices are the integers ``0..n-1``. A :class:`Graph` is immutable once
built; every operation here is a pure function of its arguments.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Graph",
    "GraphError",
    "build_graph",
    "is_connected",
    "connectivity_oracle_matrix",
    "min_edge_cut",
    "edge_connectivity",
    "independence_number",
    "remove_edges",
    "read_graph",
    "write_graph",
    "format_graph",
    "parse_graph",
]

Edge = tuple[int, int]


class GraphError(ValueError):
    """Invalid graph input (bad pair, bad argument, malformed file)."""


@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[Edge, ...]
    adjacency: tuple[tuple[int, ...], ...] = field(repr=False, compare=False)
    labels: tuple[str, ...] | None = field(default=None, repr=False, compare=False)

    @property
    def m(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    @property
    def degrees(self) -> list[int]:
        return [len(a) for a in self.adjacency]

    @property
    def min_degree(self) -> int:
        return min(self.degrees) if self.n else 0

    @property
    def max_degree(self) -> int:
        return max(self.degrees) if self.n else 0

    def is_regular(self) -> bool:
        return self.n == 0 or self.min_degree == self.max_degree

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adjacency[u]

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.int64)
        for u, v in self.edges:
            a[u, v] = a[v, u] = 1
        return a

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels else str(v)


def _normalize(n: int, pairs: Iterable[Sequence[int]]) -> tuple[Edge, ...]:
    seen: set[Edge] = set()
    for pair in pairs:
        u, v = int(pair[0]), int(pair[1])
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"edge ({u}, {v}) has an endpoint outside [0, {n})")
        if u == v:
            raise GraphError(f"edge ({u}, {v}) is a self-loop")
        seen.add((u, v) if u < v else (v, u))
    return tuple(sorted(seen))


def build_graph(n: int, edges: Iterable[Sequence[int]], labels: Sequence[str] | None = None) -> Graph:
    """Build a normalized graph; duplicate pairs collapse, self-loops are rejected."""
    if n < 0:
        raise GraphError(f"vertex count must be non-negative, got {n}")
    norm = _normalize(n, edges)
    adj: list[list[int]] = [[] for _ in range(n)]
    for u, v in norm:
        adj[u].append(v)
        adj[v].append(u)
    if labels is not None:
        labels = tuple(labels)
        if len(labels) != n:
            raise GraphError(f"expected {n} labels, got {len(labels)}")
    return Graph(n, norm, tuple(tuple(a) for a in adj), labels)


def _connected_adj(n: int, adj: Sequence[Sequence[int]]) -> bool:
    if n <= 1:
        return True
    seen = [False] * n
    seen[0] = True
    stack = [0]
    count = 1
    while stack:
        for v in adj[stack.pop()]:
            if not seen[v]:
                seen[v] = True
                count += 1
                stack.append(v)
    return count == n


def is_connected(g: Graph) -> bool:
    """True iff every vertex is reachable from vertex 0."""
    if g.n < 1:
        raise GraphError("connectivity is undefined for the empty graph")
    return _connected_adj(g.n, g.adjacency)


def connectivity_oracle_matrix(g: Graph) -> bool:
    """Connectivity via walk counts: ``A^(n-1) + A^(n-2)`` has no zero entry.

    Powers are taken in the boolean semiring, so nothing can overflow.
    Kept as an independent cross-check for :func:`is_connected`.
    """
    n = g.n
    if n < 2:
        raise GraphError("matrix criterion needs at least 2 vertices")
    a = g.adjacency_matrix().astype(bool)

    def bmul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return (x.astype(np.int64) @ y.astype(np.int64)) > 0

    def bpow(k: int) -> np.ndarray:
        result = np.eye(n, dtype=bool)
        base = a
        while k:
            if k & 1:
                result = bmul(result, base)
            base = bmul(base, base)
            k >>= 1
        return result

    low = bpow(n - 2)
    high = bmul(low, a)
    return bool(np.all(low | high))


def _augment_capped(
    n: int, adj: Sequence[Sequence[int]], s: int, t: int, cap: int
) -> tuple[int, list[int] | None]:
    """Unit-capacity shortest-augmenting-path flow from s to t, stopping at ``cap``.

    Each undirected edge is a pair of opposite arcs of capacity 1. Returns the
    flow value and, when the flow is below ``cap``, the BFS parent array of the
    final residual search (``parent[v] >= 0`` marks the source side of a
    minimum cut).
    """
    flow: dict[int, int] = {}
    get = flow.get
    value = 0
    while value < cap:
        parent = [-1] * n
        parent[s] = s
        queue = [s]
        found = False
        for u in queue:
            base = u * n
            for v in adj[u]:
                if parent[v] < 0 and get(base + v, 0) < 1:
                    parent[v] = u
                    if v == t:
                        found = True
                        break
                    queue.append(v)
            if found:
                break
        if not found:
            return value, parent
        v = t
        while v != s:
            u = parent[v]
            flow[u * n + v] = get(u * n + v, 0) + 1
            flow[v * n + u] = get(v * n + u, 0) - 1
            v = u
        value += 1
    return value, None


def min_edge_cut(g: Graph, u: int, v: int) -> int:
    """Size of a minimum (u, v)-edge cut, i.e. the number of edge-disjoint u-v paths."""
    if u == v:
        raise GraphError("min_edge_cut needs two distinct vertices")
    for x in (u, v):
        if not 0 <= x < g.n:
            raise GraphError(f"vertex {x} outside [0, {g.n})")
    cap = min(g.degree(u), g.degree(v))
    value, _ = _augment_capped(g.n, g.adjacency, u, v, cap)
    return value


def min_edge_cut_set(g: Graph, u: int, v: int) -> list[Edge]:
    """One minimum (u, v)-edge cut, read off the final residual reachability."""
    if u == v:
        raise GraphError("min_edge_cut_set needs two distinct vertices")
    value, parent = _augment_capped(g.n, g.adjacency, u, v, g.m + 1)
    assert parent is not None
    side = [p >= 0 for p in parent]
    cut = [(a, b) for a, b in g.edges if side[a] != side[b]]
    assert len(cut) == value
    return cut


def edge_connectivity(g: Graph) -> int:
    """Global edge connectivity; 0 for disconnected graphs."""
    if g.n < 2:
        raise GraphError("edge connectivity needs at least 2 vertices")
    if not is_connected(g):
        return 0
    best = g.min_degree
    for v in range(1, g.n):
        value, _ = _augment_capped(g.n, g.adjacency, 0, v, best)
        best = min(best, value)
    return best


def _two_coloring(g: Graph) -> list[int] | None:
    color = [-1] * g.n
    for start in range(g.n):
        if color[start] >= 0:
            continue
        color[start] = 0
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for v in g.adjacency[u]:
                if color[v] < 0:
                    color[v] = 1 - color[u]
                    queue.append(v)
                elif color[v] == color[u]:
                    return None
    return color


def _bipartite_mis(g: Graph, color: list[int]) -> set[int]:
    # Kuhn's matching; Konig turns it into a minimum vertex cover, whose complement is the MIS.
    left = [v for v in range(g.n) if color[v] == 0]
    match_r: dict[int, int] = {}
    match_l: dict[int, int] = {}

    def try_augment(u: int, seen: set[int]) -> bool:
        for v in g.adjacency[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match_r or try_augment(match_r[v], seen):
                match_r[v] = u
                match_l[u] = v
                return True
        return False

    for u in left:
        try_augment(u, set())

    # Alternating BFS from free left vertices gives Z; cover = (L \ Z) | (R & Z).
    z: set[int] = set()
    queue = deque(u for u in left if u not in match_l)
    z.update(queue)
    while queue:
        u = queue.popleft()
        for v in g.adjacency[u]:
            if v not in z and match_l.get(u) != v:
                z.add(v)
                w = match_r.get(v)
                if w is not None and w not in z:
                    z.add(w)
                    queue.append(w)
    cover = {u for u in left if u not in z} | {v for v in range(g.n) if color[v] == 1 and v in z}
    assert len(cover) == len(match_l)
    return set(range(g.n)) - cover


def _branch_and_bound_mis(g: Graph) -> set[int]:
    n = g.n
    nbr = [sum(1 << v for v in g.adjacency[u]) for u in range(n)]
    order = sorted(range(n), key=lambda v: -g.degree(v))
    best = [0, 0]  # size, mask

    def clique_cover_bound(cand: int) -> int:
        # Greedy coloring of the complement: each class is a clique of g.
        classes: list[int] = []
        for v in order:
            if not cand >> v & 1:
                continue
            for i, cls in enumerate(classes):
                if cls & nbr[v] == cls:
                    classes[i] = cls | 1 << v
                    break
            else:
                classes.append(1 << v)
        return len(classes)

    def search(cand: int, chosen: int, size: int) -> None:
        if not cand:
            if size > best[0]:
                best[0], best[1] = size, chosen
            return
        if size + clique_cover_bound(cand) <= best[0]:
            return
        v = max((u for u in order if cand >> u & 1), key=lambda u: (nbr[u] & cand).bit_count())
        if not nbr[v] & cand:
            search(cand & ~(1 << v), chosen | 1 << v, size + 1)
            return
        search(cand & ~(1 << v) & ~nbr[v], chosen | 1 << v, size + 1)
        search(cand & ~(1 << v), chosen, size)

    search((1 << n) - 1, 0, 0)
    return {v for v in range(n) if best[1] >> v & 1}


def independence_number(g: Graph, witness: bool = False, method: str = "auto"):
    """Exact independence number, optionally with one maximum independent set.

    ``method`` is ``"auto"`` (matching for bipartite graphs, otherwise
    branch-and-bound), ``"matching"`` or ``"bnb"``. Branch-and-bound is
    exponential in the worst case; it is meant for graphs up to ~64 vertices.
    """
    if g.n < 1:
        raise GraphError("independence number needs at least 1 vertex")
    color = _two_coloring(g) if method in ("auto", "matching") else None
    if method == "matching" and color is None:
        raise GraphError("matching method requires a bipartite graph")
    if method not in ("auto", "matching", "bnb"):
        raise GraphError(f"unknown method {method!r}")
    ind = _bipartite_mis(g, color) if color is not None else _branch_and_bound_mis(g)
    if witness:
        return len(ind), sorted(ind)
    return len(ind)


def remove_edges(g: Graph, f: Iterable[Sequence[int]]) -> Graph:
    """Return ``g`` without the edges in ``f``; ``g`` itself is untouched."""
    drop: set[Edge] = set()
    for pair in f:
        u, v = int(pair[0]), int(pair[1])
        e = (u, v) if u < v else (v, u)
        if not (0 <= e[0] < g.n and e[1] < g.n) or not g.has_edge(*e):
            raise GraphError(f"({u}, {v}) is not an edge of the graph")
        if e in drop:
            raise GraphError(f"edge ({u}, {v}) listed twice in the fault set")
        drop.add(e)
    return build_graph(g.n, [e for e in g.edges if e not in drop], g.labels)


def format_graph(g: Graph, comments: Sequence[str] = ()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"{g.n} {g.m}")
    lines.extend(f"{u} {v}" for u, v in sorted(g.edges))
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> Graph:
    data: list[tuple[int, str]] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if line.startswith("#") or not line.strip():
            continue
        data.append((lineno, line))
    if not data:
        raise GraphError("graph file has no header line")

    def ints(lineno: int, line: str) -> tuple[int, int]:
        parts = line.split()
        if len(parts) != 2:
            raise GraphError(f"line {lineno}: expected two integers, got {line!r}")
        try:
            return int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"line {lineno}: expected two integers, got {line!r}") from None

    n, m = ints(*data[0])
    body = data[1:]
    if len(body) != m:
        raise GraphError(f"header declares {m} edges but {len(body)} edge lines follow")
    pairs = []
    for lineno, line in body:
        u, v = ints(lineno, line)
        if not 0 <= u < v < n:
            raise GraphError(f"line {lineno}: edge ({u}, {v}) violates 0 <= u < v < {n}")
        pairs.append((u, v))
    g = build_graph(n, pairs)
    if g.m != m:
        raise GraphError("graph file lists a duplicate edge")
    return g


def read_graph(path) -> Graph:
    with open(path, encoding="ascii") as fh:
        return parse_graph(fh.read())


def write_graph(g: Graph, path, comments: Sequence[str] = ()) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_graph(g, comments))
