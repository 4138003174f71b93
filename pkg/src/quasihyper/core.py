"""Core types: uniform hypergraphs, partite hypergraphs, set systems.

All values are immutable after construction and safe to share across
threads.  Exact arithmetic uses ``fractions.Fraction`` throughout; float
mode is opt-in for large sweeps.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

Edge = tuple[int, ...]

MASK64 = (1 << 64) - 1


class QuasihyperError(Exception):
    """Base class for errors raised by this package."""


class ParseError(QuasihyperError):
    """Malformed input file or literal."""


class BudgetError(QuasihyperError):
    """A computation would exceed its configured size budget."""


def parse_scalar(text: str) -> Fraction:
    """Parse ``p/q``, integer, or decimal literals into an exact rational."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"cannot parse scalar {text!r}") from exc


def scalar_str(value: Fraction | float) -> str:
    if isinstance(value, Fraction):
        return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)
    return repr(value)


def falling_factorial(n: int, k: int) -> int:
    """n * (n-1) * ... * (n-k+1); zero when k > n."""
    out = 1
    for j in range(k):
        out *= n - j
    return max(out, 0) if n < k else out


def degenerate_tuple_count(n: int, k: int) -> int:
    """Number of k-tuples over [0,n) with at least one repeated entry."""
    return n**k - falling_factorial(n, k)


def spawn_rng(seed: int, *path: int | str) -> np.random.Generator:
    """Deterministic generator for ``seed`` at a spawn path.

    Path components are folded to integers so that every sampled object can
    record how its generator was derived from the root seed.
    """
    key = tuple(_path_component(p) for p in path)
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def _path_component(p: int | str) -> int:
    if isinstance(p, int):
        return p & 0xFFFFFFFF
    h = 0
    for ch in p.encode():
        h = splitmix64(h ^ ch)
    return h & 0xFFFFFFFF


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return (z ^ (z >> 31)) & MASK64


@dataclass(frozen=True)
class Hypergraph:
    """A k-uniform hypergraph on vertices 0..n-1.

    Edges are sorted k-tuples of distinct vertices; the edge set is
    canonical (no duplicates, no orientation).  Ordered edges (all k!
    orderings of each edge) are derived on demand.
    """

    k: int
    n: int
    edges: frozenset[Edge]

    def __post_init__(self) -> None:
        if self.k < 2:
            raise ValueError(f"uniformity must be >= 2, got {self.k}")
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        for e in self.edges:
            if len(e) != self.k or len(set(e)) != self.k:
                raise ValueError(f"edge {e} must have exactly {self.k} distinct vertices")
            if tuple(sorted(e)) != e:
                raise ValueError(f"edge {e} is not in canonical sorted order")
            if e[0] < 0 or e[-1] >= self.n:
                raise ValueError(f"edge {e} has a vertex outside [0, {self.n})")

    @classmethod
    def from_edges(cls, k: int, n: int, edges, warn_duplicates: bool = False) -> "Hypergraph":
        seen: set[Edge] = set()
        for e in edges:
            t = tuple(e)
            if len(set(t)) != len(t):
                raise ValueError(f"edge {t} repeats a vertex")
            t = tuple(sorted(t))
            if t in seen and warn_duplicates:
                warnings.warn(f"duplicate edge {t} ignored", stacklevel=2)
            seen.add(t)
        return cls(k, n, frozenset(seen))

    @classmethod
    def empty(cls, k: int, n: int) -> "Hypergraph":
        return cls(k, n, frozenset())

    @classmethod
    def complete(cls, k: int, n: int) -> "Hypergraph":
        return cls(k, n, frozenset(combinations(range(n), k)))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, vertices) -> bool:
        """Membership for an arbitrary k-multiset; False on repeated entries."""
        s = set(vertices)
        if len(s) != self.k:
            return False
        return tuple(sorted(s)) in self.edges

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def to_text(self) -> str:
        lines = [f"{self.k} {self.n}"]
        lines.extend(" ".join(map(str, e)) for e in self.sorted_edges())
        return "\n".join(lines) + "\n"

    def to_json_obj(self) -> dict:
        return {"k": self.k, "n": self.n, "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Hypergraph":
        try:
            k, n, edges = int(obj["k"]), int(obj["n"]), obj["edges"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError("hypergraph JSON must have k, n, edges") from exc
        return _checked_from_rows(k, n, [tuple(map(int, row)) for row in edges])


def parse_hypergraph(text: str | bytes) -> Hypergraph:
    """Parse the text format: header ``k n``, one edge per line, ``#`` comments.

    Duplicate edges are deduplicated with a warning; a repeated vertex in an
    edge or a vertex out of range is a hard error.
    """
    if isinstance(text, bytes):
        text = text.decode()
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise ParseError("empty hypergraph file")
    header = lines[0].split()
    if len(header) != 2:
        raise ParseError(f"header must be 'k n', got {lines[0]!r}")
    try:
        k, n = int(header[0]), int(header[1])
    except ValueError as exc:
        raise ParseError(f"header must be 'k n', got {lines[0]!r}") from exc
    rows = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != k:
            raise ParseError(f"edge line {ln!r} must have {k} vertices")
        try:
            row = tuple(int(p) for p in parts)
        except ValueError as exc:
            raise ParseError(f"bad vertex in line {ln!r}") from exc
        if any(v < 0 or v >= n for v in row):
            raise ParseError(f"vertex out of range in line {ln!r}")
        if len(set(row)) != k:
            raise ParseError(f"repeated vertex in edge {ln!r}")
        if list(row) != sorted(row):
            raise ParseError(f"edge {ln!r} must list vertices strictly increasing")
        rows.append(row)
    return _checked_from_rows(k, n, rows)


def _checked_from_rows(k: int, n: int, rows: list[Edge]) -> Hypergraph:
    seen: set[Edge] = set()
    for row in rows:
        if len(set(row)) != k:
            raise ParseError(f"repeated vertex in edge {row}")
        if any(v < 0 or v >= n for v in row):
            raise ParseError(f"vertex out of range in edge {row}")
        key = tuple(sorted(row))
        if key in seen:
            warnings.warn(f"duplicate edge {key} ignored", stacklevel=3)
        seen.add(key)
    return Hypergraph(k, n, frozenset(seen))


def density(h: Hypergraph) -> Fraction:
    """Edge density |E| / C(n, k), exact."""
    if h.n < h.k:
        raise ValueError(f"density undefined for n={h.n} < k={h.k}")
    return Fraction(len(h.edges), math.comb(h.n, h.k))


def edge_indicator(h: Hypergraph, d: Fraction | float, t: Edge):
    """Centered indicator of the ordered edge set: 1-d on edges, -d otherwise.

    Tuples with repeated entries are never edges.
    """
    for v in t:
        if v < 0 or v >= h.n:
            raise ValueError(f"vertex {v} out of range [0, {h.n})")
    return (1 - d) if h.has_edge(t) else -d


@dataclass(frozen=True)
class SetSystem:
    """An ordered system of distinct subsets of the ground set {1..k}.

    The member order is part of the value: the doubling construction and
    the exponent identity consume members in sequence.
    """

    k: int
    members: tuple[frozenset[int], ...]

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("ground set size must be >= 1")
        seen = set()
        for m in self.members:
            if not m <= frozenset(range(1, self.k + 1)):
                raise ValueError(f"member {sorted(m)} not a subset of [1..{self.k}]")
            if m in seen:
                raise ValueError(f"duplicate member {sorted(m)}")
            seen.add(m)

    @classmethod
    def from_lists(cls, k: int, lists) -> "SetSystem":
        return cls(k, tuple(frozenset(m) for m in lists))

    @classmethod
    def singletons(cls, k: int) -> "SetSystem":
        return cls(k, tuple(frozenset({i}) for i in range(1, k + 1)))

    @classmethod
    def uniform(cls, k: int, size: int) -> "SetSystem":
        """All size-subsets of [1..k] in lexicographic order."""
        return cls(k, tuple(frozenset(c) for c in combinations(range(1, k + 1), size)))

    @property
    def ell(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def member_positions(self, idx: int) -> tuple[int, ...]:
        """Sorted 1-based positions of the idx-th member."""
        return tuple(sorted(self.members[idx]))

    def has_empty_member(self) -> bool:
        return any(not m for m in self.members)

    def to_json_obj(self) -> dict:
        return {"k": self.k, "sets": [sorted(m) for m in self.members]}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "SetSystem":
        try:
            k, sets = int(obj["k"]), obj["sets"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError("set system JSON must have k and sets") from exc
        return cls.from_lists(k, [[int(x) for x in m] for m in sets])


@dataclass(frozen=True)
class PartiteHypergraph:
    """A k-partite k-uniform hypergraph with tagged vertex classes.

    A vertex is identified by (class index, history tag); tags record the
    doubling choices that produced the vertex, one bit per doubling step
    whose index set excluded the class.  Edge coordinate j lies in class
    j+1 (classes are 1-based in the math, 0-based in storage).
    """

    k: int
    classes: tuple[tuple[str, ...], ...]
    edges: frozenset[tuple[str, ...]]

    def __post_init__(self) -> None:
        if len(self.classes) != self.k:
            raise ValueError("class list length must equal k")
        for tags in self.classes:
            if len(set(tags)) != len(tags):
                raise ValueError("history tags within a class must be distinct")
        class_sets = [set(tags) for tags in self.classes]
        for e in self.edges:
            if len(e) != self.k:
                raise ValueError(f"edge {e} must have {self.k} coordinates")
            for j, tag in enumerate(e):
                if tag not in class_sets[j]:
                    raise ValueError(f"edge coordinate {j} tag {tag!r} not in class {j + 1}")

    @property
    def num_vertices(self) -> int:
        return sum(len(tags) for tags in self.classes)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def class_sizes(self) -> tuple[int, ...]:
        return tuple(len(tags) for tags in self.classes)

    def to_json_obj(self) -> dict:
        return {
            "k": self.k,
            "classes": [list(tags) for tags in self.classes],
            "edges": sorted(list(e) for e in self.edges),
        }

    def to_hypergraph(self) -> tuple[Hypergraph, dict[tuple[int, str], int]]:
        """Flatten to a k-uniform hypergraph; returns (graph, vertex numbering).

        Vertices are numbered class by class with tags in sorted order, so
        the flattening is deterministic.
        """
        vid: dict[tuple[int, str], int] = {}
        for j, tags in enumerate(self.classes):
            for tag in sorted(tags):
                vid[(j + 1, tag)] = len(vid)
        edges = frozenset(
            tuple(sorted(vid[(j + 1, tag)] for j, tag in enumerate(e))) for e in self.edges
        )
        return Hypergraph(self.k, len(vid), edges), vid


def dump_json(obj, fp=None, **kwargs):
    """Stable JSON encoding (sorted keys) with Fraction support."""

    def default(o):
        if isinstance(o, Fraction):
            return scalar_str(o)
        if isinstance(o, (np.integer,)):
            return int(o)
        if isinstance(o, (np.floating,)):
            return float(o)
        if isinstance(o, frozenset):
            return sorted(o)
        raise TypeError(f"not JSON serializable: {type(o)}")

    if fp is None:
        return json.dumps(obj, sort_keys=True, default=default, **kwargs)
    return json.dump(obj, fp, sort_keys=True, default=default, **kwargs)
