"""Exact broadcast independence number of small trees by subset search.

For a fixed support set T of broadcast vertices the independence condition
``d(u, v) > max(f(u), f(v))`` splits into ``f(u) < d(u, v)`` and
``f(v) < d(u, v)``, so every vertex of T independently takes
``min(ecc(v), min_{u in T, u != v} d(u, v) - 1)``.  T is feasible iff all of
those are positive, i.e. iff T is an independent set.  The search walks all
independent sets in lexicographic order of their sorted vertex lists and keeps
the first one of maximal total, which makes the witness reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np
from numba import njit

from .tree_core import DistanceTable, Tree, metrics

MAX_ORACLE_VERTICES = 24


class TooLarge(ValueError):
    """Raised when a tree exceeds the brute-force cap."""


@dataclass(frozen=True)
class OracleResult:
    beta_b: int
    witness: tuple[int, ...]
    explored: int


@njit(cache=True)
def _search(dist, ecc, allowed):
    n = ecc.shape[0]
    caps = np.zeros((n + 1, n), dtype=np.int64)
    chosen = np.zeros(n, dtype=np.int64)
    nxt = np.zeros(n + 1, dtype=np.int64)
    best = -1
    best_set = np.zeros(n, dtype=np.int64)
    best_caps = np.zeros(n, dtype=np.int64)
    best_len = 0
    explored = 0
    depth = 0
    while depth >= 0:
        w = nxt[depth]
        if w >= n:
            depth -= 1
            continue
        nxt[depth] = w + 1
        if not allowed[w]:
            continue
        c = ecc[w]
        for t in range(depth):
            d = dist[chosen[t], w] - 1
            if d < c:
                c = d
        if c <= 0:
            continue
        total = c
        for t in range(depth):
            cu = caps[depth, t]
            d = dist[chosen[t], w] - 1
            if d < cu:
                cu = d
            caps[depth + 1, t] = cu
            total += cu
        caps[depth + 1, depth] = c
        chosen[depth] = w
        explored += 1
        if total > best:
            best = total
            best_len = depth + 1
            for t in range(depth + 1):
                best_set[t] = chosen[t]
                best_caps[t] = caps[depth + 1, t]
        depth += 1
        nxt[depth] = w + 1
    return best, best_set[:best_len].copy(), best_caps[:best_len].copy(), explored


def exact_beta_b(
    tree: Tree, table: DistanceTable | None = None, exclude: Iterable[int] = ()
) -> OracleResult:
    """Maximum cost of an independent broadcast on ``tree`` (n <= 24).

    ``exclude`` pins the listed vertices to value 0.
    """
    if tree.n > MAX_ORACLE_VERTICES:
        raise TooLarge(f"oracle is capped at {MAX_ORACLE_VERTICES} vertices, got {tree.n}")
    if tree.n < 2:
        raise ValueError("oracle needs at least two vertices")
    table = table or metrics(tree)
    ecc = np.asarray(table.ecc, dtype=np.int64)
    allowed = np.ones(tree.n, dtype=np.bool_)
    for v in exclude:
        allowed[v] = False
    best, verts, vals, explored = _search(np.ascontiguousarray(table.dist), ecc, allowed)
    if best < 0:
        best = 0
    witness = [0] * tree.n
    for v, x in zip(verts, vals):
        witness[int(v)] = int(x)
    return OracleResult(beta_b=int(best), witness=tuple(witness), explored=int(explored))


def lower_bound_antipodal(tree: Tree, table: DistanceTable | None = None) -> int:
    """``|A| * (diam - 1)`` for the largest greedy set A of pairwise antipodal vertices."""
    if tree.n < 2:
        raise ValueError("needs at least two vertices")
    table = table or metrics(tree)
    diam = table.diameter
    d = table.dist
    ends = [v for v in range(tree.n) if table.ecc[v] == diam]
    best = 2
    for start in ends:
        group = [start]
        for v in ends:
            if all(d[v, u] == diam for u in group):
                group.append(v)
        best = max(best, len(group))
    return best * (diam - 1)


def milp_beta_b(tree: Tree, table: DistanceTable | None = None, time_limit: float | None = None) -> OracleResult:
    """Exact beta_b through a 0/1 program solved by HiGHS.

    One binary ``x[v, r]`` per vertex and value ``1 <= r <= ecc(v)``; at most one
    value per vertex, and for every ordered pair ``(u, v)`` at distance ``d``
    a value ``>= d`` at ``u`` excludes any broadcast at ``v``.  Needs only the
    distance table, so it reaches well past the subset-enumeration cap.
    """
    from scipy.optimize import Bounds, LinearConstraint, milp
    from scipy.sparse import coo_matrix

    table = table or metrics(tree)
    n = tree.n
    ecc = table.ecc
    offset = [0] * (n + 1)
    for v in range(n):
        offset[v + 1] = offset[v] + ecc[v]
    nvar = offset[n]
    obj = np.zeros(nvar)
    for v in range(n):
        obj[offset[v]:offset[v + 1]] = -np.arange(1, ecc[v] + 1)

    rows, cols = [], []
    r = 0
    for v in range(n):
        rows.extend([r] * ecc[v])
        cols.extend(range(offset[v], offset[v + 1]))
        r += 1
    d = table.dist
    for u in range(n):
        for v in range(n):
            if u == v or d[u, v] > ecc[u]:
                continue
            hi = range(offset[u] + int(d[u, v]) - 1, offset[u + 1])
            rows.extend([r] * (len(hi) + ecc[v]))
            cols.extend(hi)
            cols.extend(range(offset[v], offset[v + 1]))
            r += 1
    a = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(r, nvar)).tocsr()
    options = {"time_limit": time_limit} if time_limit else {}
    res = milp(
        obj,
        constraints=LinearConstraint(a, -np.inf, 1.0),
        integrality=np.ones(nvar),
        bounds=Bounds(0, 1),
        options=options,
    )
    if res.status != 0:
        raise RuntimeError(f"MILP did not reach optimality: {res.message}")
    x = np.round(res.x).astype(int)
    witness = [0] * n
    for v in range(n):
        hits = np.nonzero(x[offset[v]:offset[v + 1]])[0]
        if hits.size:
            witness[v] = int(hits[0]) + 1
    return OracleResult(beta_b=sum(witness), witness=tuple(witness), explored=0)
