"""Spine-subtree types and the alternating Fa/X sequences that earn root bonuses."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence

from .lobster_model import S1, S2, LobsterStructure


class ClassificationError(RuntimeError):
    pass


class SubtreeType(str, Enum):
    FA = "Fa"
    G = "G"
    XA = "Xa"
    XB = "Xb"
    XC = "Xc"
    YC = "Yc"

    def __str__(self) -> str:
        return self.value

    @property
    def exceed(self) -> int:
        """How far the step-3 broadcast of this subtree reaches past its own spine vertex."""
        return _EXCEED[self]


_EXCEED = {
    SubtreeType.FA: 0,
    SubtreeType.G: 0,
    SubtreeType.XA: 0,
    SubtreeType.XB: 1,
    SubtreeType.YC: 1,
    SubtreeType.XC: 2,
}

FA, G, XA, XB, XC, YC = SubtreeType
X_TYPES = frozenset({XA, XB, XC})
# None stands for the empty subtree beyond either end of the spine.
E0 = frozenset({None, FA, G, XA})
E1 = frozenset({XB, YC})
E2 = frozenset({XC})


def exceed_class(t: SubtreeType | None) -> int:
    return 0 if t is None else t.exceed


def classify_all(struct: LobsterStructure) -> list[SubtreeType]:
    subs = struct.subtrees
    out = []
    for i, s in enumerate(subs):
        if s.b < 2:
            raise ClassificationError(f"subtree {i} has fewer than two branches")
        if s.depth_class == S1:
            if s.lambda1 >= 3:
                out.append(XA)
            else:
                left = subs[i - 1].depth_class if i > 0 else None
                right = subs[i + 1].depth_class if i + 1 < len(subs) else None
                out.append(G if S1 in (left, right) else XC)
        elif s.depth_class == S2:
            out.append(FA if s.alpha2_star == 0 else XB if s.alpha2_star == 1 else YC)
        else:
            raise ClassificationError(f"subtree {i} is not locally uniform")
    bad = xc_beside_s1_star(out)
    if bad:
        raise ClassificationError(f"G/Xa subtree next to Xc at {bad}")
    return out


def xc_beside_s1_star(types: Sequence[SubtreeType]) -> list[int]:
    """Indices i where a G or Xa subtree neighbours an Xc subtree."""
    return [
        i
        for i in range(len(types) - 1)
        if {types[i], types[i + 1]} & {G, XA} and XC in (types[i], types[i + 1])
    ]


@dataclass(frozen=True)
class T4Sequence:
    """Subtrees ``start..end``: Fa at even offsets, X or Fa at odd offsets."""

    start: int
    end: int
    x_roles: tuple[SubtreeType, ...]

    @property
    def p(self) -> int:
        return (self.end - self.start) // 2

    @property
    def length(self) -> int:
        return self.end - self.start + 1

    @property
    def bxc_count(self) -> int:
        return sum(1 for t in self.x_roles if t in (XB, XC))

    @property
    def value(self) -> int:
        return self.p + 1 - self.bxc_count

    def a_positions(self) -> range:
        return range(self.start, self.end + 1, 2)

    def x_positions(self) -> range:
        return range(self.start + 1, self.end, 2)

    def to_json(self) -> dict:
        return {
            "start": self.start,
            "end": self.end,
            "p": self.p,
            "x_roles": [str(t) for t in self.x_roles],
            "bxc_count": self.bxc_count,
            "value": self.value,
        }


def _at(types: Sequence[SubtreeType], i: int) -> SubtreeType | None:
    return types[i] if 0 <= i < len(types) else None


def left_context_ok(types: Sequence[SubtreeType], i: int) -> bool:
    return _at(types, i - 1) in E0 and _at(types, i - 2) not in E2


def right_context_ok(types: Sequence[SubtreeType], j: int) -> bool:
    return _at(types, j + 1) in E0 and _at(types, j + 2) not in E2


def find_t4_sequences(types: Sequence[SubtreeType]) -> list[T4Sequence]:
    """Pick the sequences that make up the root bonus.

    Candidates are intervals ``Fa (X|Fa Fa)*`` whose two-deep neighbourhood on
    each side is ``(not Xc).(empty|Fa|G|Xa)``.  Candidates may overlap or touch
    (e.g. in a run of Fa subtrees), and their roots would then clash, so the
    chosen family must be pairwise disjoint with at least one subtree between
    consecutive members.  Among such families the one of maximum total value
    is returned; ties keep the earlier, longer sequence.  One left-to-right
    pass: ``best[j]`` is the optimum over subtrees ``0..j`` and, per chain of
    same-parity Fa positions, a running maximum of ``best[s - 2] - s/2 +
    #XbXc(< s)`` over admissible starts ``s`` turns every candidate ending at
    ``j`` into an O(1) lookup.
    """
    m = len(types)
    xbxc = [0] * (m + 1)  # xbxc[i] = #Xb/Xc among types[:i]
    for i, t in enumerate(types):
        xbxc[i + 1] = xbxc[i] + (t in (XB, XC))

    best = [0] * m
    # Doubled keys keep s/2 integral.
    run_key = [None] * m  # best doubled key over admissible starts of the chain ending at i
    run_arg = [-1] * m
    pick = [-1] * m  # start of the sequence ending at j chosen by best[j], or -1

    def best_before(i: int) -> int:
        return best[i] if i >= 0 else 0

    for j in range(m):
        best[j] = best_before(j - 1)
        if types[j] is not FA:
            continue
        key, arg = None, -1
        if j >= 2 and types[j - 2] is FA and (types[j - 1] in X_TYPES or types[j - 1] is FA):
            key, arg = run_key[j - 2], run_arg[j - 2]
        if left_context_ok(types, j):
            own = 2 * (best_before(j - 2) + xbxc[j]) - j
            if key is None or own > key:
                key, arg = own, j
        run_key[j], run_arg[j] = key, arg
        if key is not None and right_context_ok(types, j):
            gain = (key + j + 2 - 2 * xbxc[j + 1]) // 2
            if gain > best[j]:
                best[j] = gain
                pick[j] = arg

    seqs = []
    j = m - 1
    while j >= 0:
        s = pick[j]
        if s < 0:
            j -= 1
            continue
        seqs.append(T4Sequence(s, j, tuple(types[x] for x in range(s + 1, j, 2))))
        j = s - 2
    seqs.reverse()
    return seqs

