"""Generators for the regular graph families, plus a one-line spec format.

Every experiment input can be rebuilt from a string such as
``hypercube:n=4`` or ``random-regular:n=16,d=4,seed=7``.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import reduce

from .graph import Graph, GraphError, build_graph

__all__ = [
    "GraphSpec",
    "SpecParseError",
    "GenerationError",
    "hypercube",
    "mobius_cube",
    "ary_cube",
    "circulant",
    "random_regular",
    "parse_spec",
    "materialize",
    "FAMILY_KEYS",
]

FAMILY_KEYS: dict[str, tuple[str, ...]] = {
    "hypercube": ("n",),
    "mobius": ("v", "n"),
    "arycube": ("k", "n"),
    "circulant": ("p", "s"),
    "random-regular": ("n", "d", "seed"),
}

MAX_ATTEMPTS = 10**6


class SpecParseError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class GenerationError(RuntimeError):
    """Random generation gave up after too many rejected samples."""


def _bits(x: int, n: int) -> str:
    return format(x, f"0{n}b")


def hypercube(n: int) -> Graph:
    """The n-cube: n-bit labels, edges between labels at Hamming distance 1."""
    if n < 1:
        raise GraphError(f"hypercube dimension must be >= 1, got {n}")
    size = 1 << n
    edges = [(x, x ^ (1 << b)) for x in range(size) for b in range(n) if x < x ^ (1 << b)]
    return build_graph(size, edges, [_bits(x, n) for x in range(size)])


def mobius_cube(variant: int, n: int) -> Graph:
    """The 0- or 1-Mobius cube of dimension n.

    Bit x_1 is the most significant. Along position i a vertex flips x_i alone
    when x_{i-1} = 0 and the whole suffix x_i..x_n when x_{i-1} = 1; the
    missing x_0 is taken to be ``variant``.
    """
    if variant not in (0, 1):
        raise GraphError(f"mobius variant must be 0 or 1, got {variant}")
    if n < 1:
        raise GraphError(f"mobius dimension must be >= 1, got {n}")
    size = 1 << n
    nbrs: list[set[int]] = [set() for _ in range(size)]
    for x in range(size):
        prev = variant
        for i in range(1, n + 1):
            shift = n - i
            mask = 1 << shift if prev == 0 else (1 << (shift + 1)) - 1
            nbrs[x].add(x ^ mask)
            prev = x >> shift & 1
    for x in range(size):
        assert len(nbrs[x]) == n, f"vertex {x} has degree {len(nbrs[x])}, expected {n}"
        for y in nbrs[x]:
            assert x in nbrs[y], f"asymmetric adjacency between {x} and {y}"
    edges = [(x, y) for x in range(size) for y in nbrs[x] if x < y]
    return build_graph(size, edges, [_bits(x, n) for x in range(size)])


def ary_cube(k: int, n: int) -> Graph:
    """The k-ary n-cube: base-k labels, one coordinate differing by 1 mod k."""
    if k < 2:
        raise GraphError(f"arycube radix must be >= 2, got {k}")
    if n < 1:
        raise GraphError(f"arycube dimension must be >= 1, got {n}")
    size = k**n
    edges = []
    for x in range(size):
        weight = 1
        for _ in range(n):
            digit = x // weight % k
            y = x - digit * weight + (digit + 1) % k * weight
            if x != y:
                edges.append((x, y))
            weight *= k
    sep = "" if k <= 10 else "."

    def label(x: int) -> str:
        digits = []
        for _ in range(n):
            digits.append(str(x % k))
            x //= k
        return sep.join(reversed(digits))

    return build_graph(size, edges, [label(x) for x in range(size)])


def _normalize_offset(p: int, s: int) -> int:
    r = s % p
    return min(r, p - r)


def circulant(p: int, offsets, strict: bool = True) -> Graph:
    """Circulant graph on Z_p with i ~ i +- s for each offset s.

    Strict mode enforces a connected 2k-regular graph: offsets in [1, p-1],
    distinct after folding s -> min(s, p - s), none equal to p/2, and
    gcd(p, offsets) = 1. Relaxed mode only requires offsets in [1, p-1].
    """
    offsets = list(offsets)
    if p < 3:
        raise GraphError(f"circulant order must be >= 3, got {p}")
    if not offsets:
        raise GraphError("circulant needs at least one offset")
    seen: set[int] = set()
    for s in offsets:
        if not 1 <= s <= p - 1:
            raise GraphError(f"offset {s} outside [1, {p - 1}]")
        folded = _normalize_offset(p, s)
        if strict and 2 * folded == p:
            raise GraphError(f"offset {s} equals p/2 = {p // 2}; graph would not be {2 * len(offsets)}-regular")
        if strict and folded in seen:
            raise GraphError(f"offset {s} duplicates another offset modulo {p}")
        seen.add(folded)
    if strict and reduce(math.gcd, offsets, p) != 1:
        raise GraphError(f"gcd({p}, {', '.join(map(str, offsets))}) != 1; circulant is disconnected")
    edges = [(i, (i + s) % p) for i in range(p) for s in offsets]
    return build_graph(p, edges, [str(i) for i in range(p)])


def random_regular(n: int, d: int, seed: int, max_attempts: int = MAX_ATTEMPTS) -> Graph:
    """Uniform simple d-regular graph from the pairing model.

    A whole pairing of the n*d stubs is drawn and discarded if it has a loop
    or a repeated pair, which leaves the uniform law on simple graphs.
    """
    if d < 0 or n < 1:
        raise GraphError(f"need n >= 1 and d >= 0, got n={n}, d={d}")
    if (n * d) % 2:
        raise GraphError(f"n*d must be even, got n={n}, d={d}")
    if d >= n:
        raise GraphError(f"degree {d} must be below vertex count {n}")
    rng = random.Random(seed)
    stubs = [v for v in range(n) for _ in range(d)]
    for _ in range(max_attempts):
        rng.shuffle(stubs)
        edges = set()
        for a, b in zip(stubs[::2], stubs[1::2]):
            if a == b:
                break
            e = (a, b) if a < b else (b, a)
            if e in edges:
                break
            edges.add(e)
        else:
            return build_graph(n, edges, [str(v) for v in range(n)])
    raise GenerationError(f"no simple {d}-regular graph on {n} vertices after {max_attempts} attempts")


@dataclass(frozen=True)
class GraphSpec:
    family: str
    parameters: tuple[int, ...]

    @property
    def canonical_name(self) -> str:
        p = self.parameters
        if self.family == "circulant":
            return f"circulant:p={p[0]},s={'+'.join(map(str, p[1:]))}"
        keys = FAMILY_KEYS[self.family]
        return f"{self.family}:" + ",".join(f"{k}={v}" for k, v in zip(keys, p))

    def __str__(self) -> str:
        return self.canonical_name


def _check_family(family: str, values: dict[str, object], pos: int) -> tuple[int, ...]:
    def need(cond: bool, msg: str) -> None:
        if not cond:
            raise SpecParseError(msg, pos)

    if family == "hypercube":
        need(values["n"] >= 1, "hypercube needs n >= 1")
        return (values["n"],)
    if family == "mobius":
        need(values["v"] in (0, 1), "variant must be 0 or 1")
        need(values["n"] >= 1, "mobius needs n >= 1")
        return (values["v"], values["n"])
    if family == "arycube":
        need(values["k"] >= 2, "arycube needs k >= 2")
        need(values["n"] >= 1, "arycube needs n >= 1")
        return (values["k"], values["n"])
    if family == "circulant":
        p, offsets = values["p"], values["s"]
        need(p >= 3, "circulant needs p >= 3")
        need(all(1 <= s <= p - 1 for s in offsets), f"offsets must lie in [1, {p - 1}]")
        return (p, *offsets)
    n, d, seed = values["n"], values["d"], values["seed"]
    need(n >= 1 and 0 <= d < n, "random-regular needs 0 <= d < n")
    need(n * d % 2 == 0, "random-regular needs n*d even")
    need(0 <= seed < 2**64, "seed must be an unsigned 64-bit integer")
    return (n, d, seed)


def parse_spec(text: str) -> GraphSpec:
    """Parse ``<family>:<key>=<value>(,<key>=<value>)*``; keys may come in any order."""
    family, sep, rest = text.strip().partition(":")
    if not sep:
        raise SpecParseError("expected '<family>:' prefix", 0)
    if family not in FAMILY_KEYS:
        raise SpecParseError(f"unknown family {family!r}", 0)
    keys = FAMILY_KEYS[family]
    values: dict[str, object] = {}
    pos = len(family) + 1
    for item in rest.split(","):
        key, eq, raw = item.partition("=")
        if not eq:
            raise SpecParseError(f"expected key=value, got {item!r}", pos)
        key = key.strip()
        if key not in keys:
            raise SpecParseError(f"unknown key {key!r} for {family}", pos)
        if key in values:
            raise SpecParseError(f"duplicate key {key!r}", pos)
        vpos = pos + len(item) - len(raw)
        try:
            if key == "s":
                values[key] = tuple(int(tok) for tok in raw.split("+"))
            else:
                values[key] = int(raw)
        except ValueError:
            raise SpecParseError(f"malformed value {raw!r} for {key!r}", vpos) from None
        pos += len(item) + 1
    missing = [k for k in keys if k not in values]
    if missing:
        raise SpecParseError(f"missing key(s) {', '.join(missing)} for {family}", len(text))
    return GraphSpec(family, _check_family(family, values, len(family) + 1))


def materialize(spec: GraphSpec | str, strict: bool = True) -> Graph:
    if isinstance(spec, str):
        spec = parse_spec(spec)
    p = spec.parameters
    if spec.family == "hypercube":
        return hypercube(p[0])
    if spec.family == "mobius":
        return mobius_cube(p[0], p[1])
    if spec.family == "arycube":
        return ary_cube(p[0], p[1])
    if spec.family == "circulant":
        return circulant(p[0], p[1:], strict=strict)
    return random_regular(p[0], p[1], p[2])
