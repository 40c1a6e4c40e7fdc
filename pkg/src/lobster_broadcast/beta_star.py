"""Closed-form broadcast independence number of locally uniform 2-lobsters."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .classifier import (
    FA,
    G,
    XA,
    XB,
    XC,
    YC,
    SubtreeType,
    T4Sequence,
    classify_all,
    find_t4_sequences,
)
from .lobster_model import S2, LobsterStructure


class DecompositionMismatch(RuntimeError):
    pass


@dataclass(frozen=True)
class BetaStarReport:
    nu1: int
    nu2: int
    nu3: int
    nu4: int
    beta_star: int
    per_subtree: tuple[int, ...]
    types: tuple[SubtreeType, ...]
    sequences: tuple[T4Sequence, ...]

    def to_json(self) -> dict:
        return {
            "nu1": self.nu1,
            "nu2": self.nu2,
            "nu3": self.nu3,
            "nu4": self.nu4,
            "beta_star": self.beta_star,
            "types": [str(t) for t in self.types],
            "sequences": [s.to_json() for s in self.sequences],
            "per_subtree": list(self.per_subtree),
        }


def compute_nus(
    struct: LobsterStructure, types: Sequence[SubtreeType], sequences: Sequence[T4Sequence]
) -> tuple[int, int, int, int]:
    nu1 = nu2 = nu3 = 0
    for s, t in zip(struct.subtrees, types):
        nu1 += s.lambda1 + s.lambda2 + s.lambda2_star
        if s.depth_class == S2:
            nu2 += s.alpha2_star
        if t is XC:
            nu3 += 1
    nu4 = sum(seq.p + 1 - seq.bxc_count for seq in sequences)
    return nu1, nu2, nu3, nu4


def per_subtree_values(
    struct: LobsterStructure, types: Sequence[SubtreeType], sequences: Sequence[T4Sequence]
) -> list[int]:
    """The broadcast value each spine-subtree carries in the optimal construction."""
    role = [None] * len(types)
    for seq in sequences:
        for i in seq.a_positions():
            role[i] = "A"
        for i in seq.x_positions():
            role[i] = "X"
    out = []
    for s, t, r in zip(struct.subtrees, types, role):
        if t in (G, XA):
            out.append(s.lambda1)
        elif t is XB:
            out.append(s.lambda2 + s.lambda2_star + s.alpha2_star - (r == "X"))
        elif t is XC:
            out.append(2 if r == "X" else 3)
        elif t is YC:
            out.append(s.lambda2 + s.lambda2_star + s.alpha2_star)
        elif t is FA:
            out.append(s.lambda2 + (r == "A"))
        else:  # pragma: no cover
            raise DecompositionMismatch(f"untyped subtree {s.index}")
    return out


def beta_star(struct: LobsterStructure) -> BetaStarReport:
    """Single pass over the spine census; never touches distances."""
    types = classify_all(struct)
    seqs = find_t4_sequences(types)
    nus = compute_nus(struct, types, seqs)
    parts = per_subtree_values(struct, types, seqs)
    total = sum(nus)
    if sum(parts) != total:
        raise DecompositionMismatch(f"nu sum {total} != per-subtree sum {sum(parts)}")
    return BetaStarReport(*nus, total, tuple(parts), tuple(types), tuple(seqs))
