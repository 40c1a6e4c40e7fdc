"""Seeded random and exhaustive locally uniform 2-lobster instances.

Random draws use ``random.Random`` (Mersenne Twister MT19937), whose integer
stream for a given seed is the same on every platform and Python >= 3.2.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterator

from .lobster_model import S1, S2, LobsterSpec, SubtreeSpec


class Unsatisfiable(ValueError):
    pass


@dataclass(frozen=True)
class GenParams:
    seed: int = 0
    k_range: tuple[int, int] = (0, 4)
    branch_count_range: tuple[int, int] = (2, 4)
    leaf_count_range: tuple[int, int] = (1, 4)
    s1_leaf_range: tuple[int, int] = (2, 4)
    max_vertices: int = 22
    s1_probability: float = 0.5

    def __post_init__(self) -> None:
        for name in ("k_range", "branch_count_range", "leaf_count_range", "s1_leaf_range"):
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"{name} is empty: {lo} > {hi}")
        if self.k_range[0] < 0:
            raise ValueError("k must be non-negative")
        if self.branch_count_range[0] < 2:
            raise ValueError("every subtree needs at least two branches")
        if self.leaf_count_range[0] < 1 or self.s1_leaf_range[0] < 2:
            raise ValueError("leaf counts below the 2-lobster minimum")

    def min_vertices(self, k: int) -> int:
        """Smallest lobster with spine index ``k`` these ranges allow."""
        s2 = 1 + self.branch_count_range[0] * (1 + self.leaf_count_range[0])
        if k == 0:
            return s2
        inner = s2
        if self.s1_probability > 0:
            inner = min(inner, 1 + self.s1_leaf_range[0])
        if self.s1_probability >= 1:
            inner = 1 + self.s1_leaf_range[0]
        return 2 * s2 + (k - 1) * inner


def _min_size(params: GenParams, end: bool) -> int:
    s2 = 1 + params.branch_count_range[0] * (1 + params.leaf_count_range[0])
    if end or params.s1_probability <= 0:
        return s2
    s1 = 1 + params.s1_leaf_range[0]
    return s1 if params.s1_probability >= 1 else min(s1, s2)


def _draw_subtree(rng: random.Random, params: GenParams, end: bool, budget: int, max_tries: int) -> SubtreeSpec:
    for _ in range(max_tries):
        if not end and rng.random() < params.s1_probability:
            sub = SubtreeSpec(S1, leaves=rng.randint(*params.s1_leaf_range))
        else:
            b = rng.randint(*params.branch_count_range)
            sub = SubtreeSpec(S2, branches=tuple(rng.randint(*params.leaf_count_range) for _ in range(b)))
        if sub.size <= budget:
            return sub
    raise Unsatisfiable(f"no subtree of at most {budget} vertices after {max_tries} draws")


def _draw(rng: random.Random, params: GenParams, max_tries: int) -> LobsterSpec:
    """Pick k uniformly among feasible values, then fill the spine left to right.

    Each subtree is redrawn until it fits the vertex budget left after
    reserving the minimum size of the positions still to fill.
    """
    feasible = [k for k in range(params.k_range[0], params.k_range[1] + 1) if params.min_vertices(k) <= params.max_vertices]
    if not feasible:
        raise Unsatisfiable(f"no k in {params.k_range} fits {params.max_vertices} vertices")
    k = rng.choice(feasible)
    subs: list[SubtreeSpec] = []
    used = 0
    for i in range(k + 1):
        reserve = sum(_min_size(params, j in (0, k)) for j in range(i + 1, k + 1))
        sub = _draw_subtree(rng, params, i in (0, k), params.max_vertices - used - reserve, max_tries)
        subs.append(sub)
        used += sub.size
    return LobsterSpec(tuple(subs))


def random_instance(params: GenParams, max_tries: int = 10_000) -> LobsterSpec:
    """One instance; the same params always give the same spec."""
    return _draw(random.Random(params.seed), params, max_tries)


def random_instances(params: GenParams, count: int, max_tries: int = 10_000) -> Iterator[LobsterSpec]:
    """``count`` instances from a single stream seeded by ``params.seed``."""
    rng = random.Random(params.seed)
    for _ in range(count):
        yield _draw(rng, params, max_tries)


# --- exhaustive enumeration ----------------------------------------------------


@dataclass(frozen=True)
class Catalog:
    """Allowed S1 leaf counts and S2 branch multisets (each a sorted tuple)."""

    s1_sizes: tuple[int, ...]
    s2_branch_sets: tuple[tuple[int, ...], ...]

    @classmethod
    def bounded(cls, max_branches: int = 4, max_leaves: int = 4) -> "Catalog":
        s1 = tuple(range(2, max_branches + 1))
        s2 = tuple(
            combo
            for b in range(2, max_branches + 1)
            for combo in itertools.combinations_with_replacement(range(1, max_leaves + 1), b)
        )
        return cls(s1, s2)

    def items(self) -> list[SubtreeSpec]:
        """Catalog order: S2 multisets as listed, then S1 sizes ascending."""
        return [SubtreeSpec(S2, branches=bs) for bs in self.s2_branch_sets] + [
            SubtreeSpec(S1, leaves=m) for m in self.s1_sizes
        ]


def canonical_key(spec: LobsterSpec) -> list[tuple]:
    """Same census ordering the recognizer uses to pick a spine direction."""
    out = []
    for s in spec.subtrees:
        if s.type == S1:
            out.append((S1, s.leaves, ()))
        else:
            out.append((S2, 0, tuple(sorted(s.branches))))
    return out


def is_canonical(spec: LobsterSpec) -> bool:
    return canonical_key(spec) <= canonical_key(spec.reversed())


def enumerate_small(
    max_vertices: int, k_max: int = 4, catalog: Catalog | None = None
) -> Iterator[LobsterSpec]:
    """Every spec over ``catalog`` within the bounds, one per reversal pair.

    Order: by k ascending, then lexicographically by catalog position of each
    subtree from left to right.  Of a reversal pair, only the orientation with
    the smaller canonical key is emitted.
    """
    catalog = catalog or Catalog.bounded()
    items = catalog.items()
    ends = [it for it in items if it.type == S2]
    min_inner = min((it.size for it in items), default=0)
    min_end = min((it.size for it in ends), default=max_vertices + 1)

    for k in range(k_max + 1):
        if k == 0:
            for it in ends:
                if it.size <= max_vertices:
                    yield LobsterSpec((it,))
            continue

        def rec(prefix: list[SubtreeSpec], used: int) -> Iterator[LobsterSpec]:
            pos = len(prefix)
            if pos == k:
                for it in ends:
                    if used + it.size <= max_vertices:
                        spec = LobsterSpec(tuple(prefix) + (it,))
                        if is_canonical(spec):
                            yield spec
                return
            pool = ends if pos == 0 else items
            remaining_inner = k - 1 - pos if pos > 0 else k - 1
            for it in pool:
                budget = used + it.size + remaining_inner * min_inner + min_end
                if budget <= max_vertices:
                    prefix.append(it)
                    yield from rec(prefix, used + it.size)
                    prefix.pop()

        yield from rec([], 0)


def sized_instance(n_target: int, seed: int = 0, params: GenParams | None = None) -> LobsterSpec:
    """A spec with roughly ``n_target`` vertices (never fewer), for scaling runs.

    Inner subtrees are drawn from ``params`` until the target is reached,
    then an S2 end closes the spine.
    """
    params = params or GenParams(seed=seed, max_vertices=max(n_target, 64))
    rng = random.Random(seed)
    budget = 1 << 62
    subs = [_draw_subtree(rng, params, True, budget, 1)]
    used = subs[0].size
    while used < n_target:
        sub = _draw_subtree(rng, params, False, budget, 1)
        subs.append(sub)
        used += sub.size
    last = _draw_subtree(rng, params, True, budget, 1)
    return LobsterSpec(tuple(subs) + (last,))
