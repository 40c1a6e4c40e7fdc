"""Trees, hop metrics and broadcast predicates."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np


class InvalidTree(ValueError):
    """Raised when an edge list does not describe a tree on 0..n-1."""


@dataclass(frozen=True)
class Tree:
    """Undirected tree on dense vertex ids ``0..n-1``.

    Edges are stored normalized as ``(min, max)`` and sorted, so two trees
    built from the same edge set compare equal.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        n = self.n
        if n < 1:
            raise InvalidTree("a tree needs at least one vertex")
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise InvalidTree(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidTree(f"edge ({u}, {v}) out of range for n={n}")
            norm.append((u, v) if u < v else (v, u))
        norm.sort()
        if len(norm) != n - 1:
            raise InvalidTree(f"expected {n - 1} edges, got {len(norm)}")
        for a, b in zip(norm, norm[1:]):
            if a == b:
                raise InvalidTree(f"duplicate edge {a}")
        object.__setattr__(self, "edges", tuple(norm))
        if -1 in bfs_distances(self, 0):
            raise InvalidTree("edge list is not connected")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Tree":
        return cls(n, tuple((int(u), int(v)) for u, v in edges))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(a) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def leaves(self) -> list[int]:
        return [v for v in range(self.n) if len(self.adjacency[v]) == 1]

    def to_edge_list(self) -> str:
        lines = [str(self.n)] + [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def parse_edge_list(cls, text: str) -> "Tree":
        """Parse the ``n`` / ``u v`` per line text format."""
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not rows:
            raise InvalidTree("empty edge list")
        try:
            n = int(rows[0][0])
            edges = [(int(r[0]), int(r[1])) for r in rows[1:]]
        except (ValueError, IndexError) as exc:
            raise InvalidTree(f"malformed edge list: {exc}") from None
        return cls.from_edges(n, edges)


def bfs_distances(tree: Tree, source: int) -> list[int]:
    """Hop distance from ``source`` to every vertex (-1 if unreachable)."""
    adj = tree.adjacency
    dist = [-1] * tree.n
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = du
                queue.append(w)
    return dist


@dataclass(frozen=True)
class DistanceTable:
    dist: np.ndarray = field(repr=False)
    ecc: tuple[int, ...]
    diameter: int


def metrics(tree: Tree) -> DistanceTable:
    """All-pairs hop distances by one BFS per vertex."""
    dist = np.array([bfs_distances(tree, s) for s in range(tree.n)], dtype=np.int64)
    dist.setflags(write=False)
    ecc = tuple(int(x) for x in dist.max(axis=1))
    return DistanceTable(dist=dist, ecc=ecc, diameter=max(ecc))


# A broadcast is any mapping vertex -> value; missing vertices read as 0.
Broadcast = Mapping[int, int]


def as_vector(f: Broadcast | Sequence[int], n: int) -> list[int]:
    if isinstance(f, Mapping):
        out = [0] * n
        for v, x in f.items():
            out[int(v)] = int(x)
        return out
    out = [int(x) for x in f]
    if len(out) != n:
        raise ValueError(f"assignment has {len(out)} entries for {n} vertices")
    return out


def cost(f: Broadcast | Sequence[int]) -> int:
    values = f.values() if isinstance(f, Mapping) else f
    return sum(int(x) for x in values)


def support(f: Broadcast | Sequence[int]) -> list[int]:
    items = f.items() if isinstance(f, Mapping) else enumerate(f)
    return sorted(int(v) for v, x in items if x > 0)


def is_broadcast(tree: Tree, table: DistanceTable, f: Broadcast | Sequence[int]) -> bool:
    vec = as_vector(f, tree.n)
    return all(0 <= x <= e for x, e in zip(vec, table.ecc))


def is_independent(tree: Tree, table: DistanceTable, f: Broadcast | Sequence[int]) -> bool:
    vec = as_vector(f, tree.n)
    hot = [v for v in range(tree.n) if vec[v] > 0]
    d = table.dist
    for i, u in enumerate(hot):
        for v in hot[i + 1:]:
            if d[u, v] <= max(vec[u], vec[v]):
                return False
    return True


def is_dominating(tree: Tree, table: DistanceTable, f: Broadcast | Sequence[int]) -> bool:
    vec = as_vector(f, tree.n)
    hot = [v for v in range(tree.n) if vec[v] > 0]
    if not hot:
        return False
    d = table.dist
    for x in range(tree.n):
        if not any(d[u, x] <= vec[u] for u in hot):
            return False
    return True


# --- table-free checks, linear-ish in n for the small values constructions use ---


def eccentricities(tree: Tree) -> list[int]:
    """Eccentricity of every vertex from two far-end BFS runs (trees only)."""
    d0 = bfs_distances(tree, 0)
    a = max(range(tree.n), key=d0.__getitem__)
    da = bfs_distances(tree, a)
    b = max(range(tree.n), key=da.__getitem__)
    db = bfs_distances(tree, b)
    return [max(x, y) for x, y in zip(da, db)]


def _ball_hits(tree: Tree, src: int, radius: int, hot: list[bool]) -> bool:
    """True iff some other hot vertex lies within ``radius`` of ``src``."""
    adj = tree.adjacency
    frontier = [src]
    seen = {src}
    for _ in range(radius):
        nxt = []
        for u in frontier:
            for w in adj[u]:
                if w not in seen:
                    if hot[w]:
                        return True
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return False


def check_broadcast(tree: Tree, f: Broadcast | Sequence[int], ecc: Sequence[int] | None = None) -> bool:
    vec = as_vector(f, tree.n)
    ecc = ecc if ecc is not None else eccentricities(tree)
    return all(0 <= x <= e for x, e in zip(vec, ecc))


def check_independent(tree: Tree, f: Broadcast | Sequence[int]) -> bool:
    """Independence by radius-limited BFS from each broadcast vertex."""
    vec = as_vector(f, tree.n)
    hot = [x > 0 for x in vec]
    return not any(hot[v] and _ball_hits(tree, v, vec[v], hot) for v in range(tree.n))


def check_dominating(tree: Tree, f: Broadcast | Sequence[int]) -> bool:
    """Every vertex within f(u) of some broadcast vertex u.

    Propagates the largest leftover power ``f(u) - d(u, x)`` outward, bucketed
    by power so each vertex is settled once.
    """
    vec = as_vector(f, tree.n)
    top = max(vec, default=0)
    if top <= 0:
        return False
    adj = tree.adjacency
    power = [-1] * tree.n
    buckets: list[list[int]] = [[] for _ in range(top + 1)]
    for v, x in enumerate(vec):
        if x > 0:
            buckets[x].append(v)
    for p in range(top, -1, -1):
        for u in buckets[p]:
            if power[u] >= p:
                continue
            power[u] = p
            if p > 0:
                for w in adj[u]:
                    if power[w] < p - 1:
                        buckets[p - 1].append(w)
    return all(x >= 0 for x in power)
