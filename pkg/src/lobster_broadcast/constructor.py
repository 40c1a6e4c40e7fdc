"""Explicit independent broadcast of cost beta* in four stages."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .beta_star import beta_star
from .classifier import XB, XC, SubtreeType, T4Sequence, classify_all, find_t4_sequences
from .lobster_model import S2, LobsterStructure, SpineSubtree
from .tree_core import check_broadcast, check_independent, cost, eccentricities

Assignment = tuple[int, ...]


class WrongLength(ValueError):
    pass


class VerificationFailure(RuntimeError):
    def __init__(self, stage: str, predicate: str):
        super().__init__(f"stage {stage}: {predicate} violated")
        self.stage = stage
        self.predicate = predicate


@dataclass(frozen=True)
class ConstructionTrace:
    stages: tuple[Assignment, ...]
    costs: tuple[int, ...]

    @property
    def final(self) -> Assignment:
        return self.stages[-1]

    @property
    def final_cost(self) -> int:
        return self.costs[-1]


def _set_small_branch(f: list[int], br, top: int) -> None:
    f[br.leaves[0]] = top
    for x in br.leaves[1:]:
        f[x] = 0


def construct_k0(struct: LobsterStructure) -> Assignment:
    if struct.k != 0:
        raise WrongLength(f"construct_k0 needs a spine of length 0, got k={struct.k}")
    s = struct.subtrees[0]
    f = [0] * struct.tree.n
    for br in s.branches:
        if br.two_leaf_count <= 2:
            _set_small_branch(f, br, 3)
        else:
            for x in br.leaves:
                f[x] = 1
    if s.alpha2_star == 0:
        f[s.root] = 1
    return tuple(f)


def step1(struct: LobsterStructure) -> Assignment:
    """Only-leaves get 2, every other leaf 1."""
    tree = struct.tree
    adj = tree.adjacency
    is_leaf = [len(a) == 1 for a in adj]
    f = [0] * tree.n
    for u in range(tree.n):
        if is_leaf[u]:
            (w,) = adj[u]
            f[u] = 2 if sum(is_leaf[x] for x in adj[w]) == 1 else 1
    return tuple(f)


def step2(struct: LobsterStructure, f1: Assignment) -> Assignment:
    """Small branches of depth-2 subtrees: one leaf to 3, its sisters to 0."""
    f = list(f1)
    for s in struct.subtrees:
        if s.depth_class == S2:
            for br in s.branches:
                if br.small:
                    _set_small_branch(f, br, 3)
    return tuple(f)


def _xc_leaves(s: SpineSubtree) -> tuple[int, int]:
    a, b = s.branches
    return a.attach_vertex, b.attach_vertex


def step3(struct: LobsterStructure, types: Sequence[SubtreeType], f2: Assignment) -> Assignment:
    """Each Xc subtree: one 1-leaf to 3, the other to 0."""
    f = list(f2)
    for s, t in zip(struct.subtrees, types):
        if t is XC:
            a, b = _xc_leaves(s)
            f[a], f[b] = 3, 0
    return tuple(f)


def step4(
    struct: LobsterStructure,
    types: Sequence[SubtreeType],
    sequences: Sequence[T4Sequence],
    f3: Assignment,
) -> Assignment:
    """Raise every A root to 1, lower every Xb/Xc sitting between two of them."""
    f = list(f3)
    subs = struct.subtrees
    for seq in sequences:
        for i in seq.a_positions():
            f[subs[i].root] = 1
        for i in seq.x_positions():
            if types[i] is XB:
                (br,) = [br for br in subs[i].branches if br.small]
                _set_small_branch(f, br, 2)
            elif types[i] is XC:
                a, b = _xc_leaves(subs[i])
                f[a], f[b] = 1, 1
    return tuple(f)


def construct(struct: LobsterStructure) -> ConstructionTrace:
    """Build and certify the optimal broadcast; raises VerificationFailure on any defect."""
    tree = struct.tree
    ecc = eccentricities(tree)

    def verified(name: str, f: Assignment) -> Assignment:
        if not check_broadcast(tree, f, ecc):
            raise VerificationFailure(name, "broadcast (f(v) <= ecc(v))")
        if not check_independent(tree, f):
            raise VerificationFailure(name, "independence")
        return f

    if struct.k == 0:
        stages = (verified("k0", construct_k0(struct)),)
    else:
        types = classify_all(struct)
        seqs = find_t4_sequences(types)
        f1 = verified("1", step1(struct))
        f2 = verified("2", step2(struct, f1))
        f3 = verified("3", step3(struct, types, f2))
        f4 = verified("4", step4(struct, types, seqs, f3))
        stages = (f1, f2, f3, f4)
    costs = tuple(cost(f) for f in stages)
    if any(a > b for a, b in zip(costs, costs[1:])):
        raise VerificationFailure("all", "non-decreasing cost")
    target = beta_star(struct).beta_star
    if costs[-1] != target:
        raise VerificationFailure("final", f"cost {costs[-1]} == beta* {target}")
    return ConstructionTrace(stages, costs)


def subtree_values(struct: LobsterStructure, f: Assignment) -> list[int]:
    """Sum of f over each spine-subtree (root included)."""
    out = []
    for s in struct.subtrees:
        total = f[s.root]
        for br in s.branches:
            if br.depth == 2:
                total += f[br.attach_vertex]
            total += sum(f[x] for x in br.leaves)
        out.append(total)
    return out


def exceed_by(struct: LobsterStructure, f: Assignment, i: int) -> int:
    """Largest e with a 1-leaf valued e+1 or a 2-leaf valued e+2 in subtree i (0 if none)."""
    e = 0
    for br in struct.subtrees[i].branches:
        for x in br.leaves:
            e = max(e, f[x] - br.depth)
    return e
