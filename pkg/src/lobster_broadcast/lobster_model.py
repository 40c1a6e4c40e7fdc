"""Lobster recognition, spine-subtree census and the JSON instance format."""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

from .tree_core import Tree

S1 = "S1"
S2 = "S2"
MIXED = "mixed"


class LobsterError(ValueError):
    pass


class TooSmall(LobsterError):
    pass


class EmptySpine(LobsterError):
    """Stripping leaves twice leaves nothing, or the first stripping leaves at most an edge."""


class NotALobster(LobsterError):
    pass


class SpecViolation(LobsterError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


@dataclass(frozen=True)
class Branch:
    attach_vertex: int
    depth: int
    two_leaf_count: int
    leaves: tuple[int, ...]

    @property
    def small(self) -> bool:
        """Depth-2 branch with at most two 2-leaves."""
        return self.depth == 2 and self.two_leaf_count <= 2


@dataclass(frozen=True)
class SpineSubtree:
    index: int
    root: int
    branches: tuple[Branch, ...]
    depth_class: str
    lambda1: int
    lambda2: int
    lambda2_star: int
    alpha2_star: int

    @property
    def b(self) -> int:
        return len(self.branches)

    @property
    def alpha1(self) -> int:
        return self.b if self.depth_class == S1 else 0

    @property
    def alpha2(self) -> int:
        return self.b if self.depth_class == S2 else 0

    def census(self) -> tuple:
        counts = tuple(sorted(br.two_leaf_count for br in self.branches if br.depth == 2))
        return (self.depth_class, self.lambda1, counts)

    @classmethod
    def from_branches(cls, index: int, root: int, branches: Iterable[Branch]) -> "SpineSubtree":
        brs = tuple(sorted(branches, key=lambda br: (br.depth, br.two_leaf_count, br.attach_vertex)))
        depths = {br.depth for br in brs}
        depth_class = S1 if depths == {1} else S2 if depths == {2} else MIXED
        return cls(
            index=index,
            root=root,
            branches=brs,
            depth_class=depth_class,
            lambda1=sum(1 for br in brs if br.depth == 1),
            lambda2=sum(br.two_leaf_count for br in brs),
            lambda2_star=sum(1 for br in brs if br.depth == 2 and br.two_leaf_count == 1),
            alpha2_star=sum(1 for br in brs if br.small),
        )


@dataclass(frozen=True, eq=False)
class LobsterStructure:
    tree: Tree
    spine: tuple[int, ...]
    subtrees: tuple[SpineSubtree, ...]

    @property
    def k(self) -> int:
        return len(self.spine) - 1

    @property
    def lambda1_total(self) -> int:
        return sum(s.lambda1 for s in self.subtrees)

    @property
    def lambda2_total(self) -> int:
        return sum(s.lambda2 for s in self.subtrees)

    @property
    def lambda2_star_total(self) -> int:
        return sum(s.lambda2_star for s in self.subtrees)

    def census(self) -> list[tuple]:
        return [s.census() for s in self.subtrees]

    def to_spec(self) -> "LobsterSpec":
        out = []
        for s in self.subtrees:
            if s.depth_class == S1:
                out.append(SubtreeSpec(S1, leaves=s.lambda1))
            elif s.depth_class == S2:
                out.append(SubtreeSpec(S2, branches=tuple(br.two_leaf_count for br in s.branches)))
            else:
                raise LobsterError(f"subtree {s.index} is not locally uniform")
        return LobsterSpec(tuple(out))

    def reversed(self) -> "LobsterStructure":
        k = self.k
        subs = tuple(
            SpineSubtree.from_branches(k - s.index, s.root, s.branches) for s in reversed(self.subtrees)
        )
        return LobsterStructure(self.tree, tuple(reversed(self.spine)), subs)


def _orientation_key(subtrees: Sequence[SpineSubtree]) -> list[tuple]:
    return [s.census() for s in subtrees]


def recognize_lobster(tree: Tree) -> LobsterStructure:
    """Recover spine and spine-subtrees of a lobster.

    The spine orientation is canonical: of the two readings, the one whose
    per-subtree census sequence is lexicographically smaller wins, with the
    smaller first spine vertex id breaking palindromic ties.
    """
    n = tree.n
    if n < 5:
        raise TooSmall(f"a lobster here needs at least 5 vertices, got {n}")
    adj = tree.adjacency
    deg = [len(a) for a in adj]
    core = [v for v in range(n) if deg[v] > 1]
    if len(core) <= 2:
        raise EmptySpine("removing leaves leaves at most a single edge")
    in_core = [False] * n
    for v in core:
        in_core[v] = True
    core_deg = {v: sum(1 for w in adj[v] if in_core[w]) for v in core}
    spine_set = {v for v in core if core_deg[v] > 1}
    if not spine_set:
        raise EmptySpine("second leaf removal leaves nothing")
    pdeg = {v: sum(1 for w in adj[v] if w in spine_set) for v in spine_set}
    if any(d > 2 for d in pdeg.values()):
        raise NotALobster("second leaf removal does not leave a path")
    ends = sorted(v for v, d in pdeg.items() if d <= 1)
    if len(spine_set) > 1 and len(ends) != 2:
        raise NotALobster("second leaf removal does not leave a path")
    spine = [ends[0]]
    prev = -1
    while len(spine) < len(spine_set):
        cur = spine[-1]
        step = [w for w in adj[cur] if w in spine_set and w != prev]
        prev = cur
        spine.append(step[0])

    on_spine = set(spine)
    subtrees = []
    for i, v in enumerate(spine):
        branches = []
        for w in adj[v]:
            if w in on_spine:
                continue
            if deg[w] == 1:
                branches.append(Branch(w, 1, 0, (w,)))
                continue
            leaves = tuple(sorted(x for x in adj[w] if x != v))
            if any(deg[x] != 1 for x in leaves):
                raise NotALobster(f"vertex {w} hangs deeper than two levels off the spine")
            branches.append(Branch(w, 2, len(leaves), leaves))
        subtrees.append(SpineSubtree.from_branches(i, v, branches))

    fwd = LobsterStructure(tree, tuple(spine), tuple(subtrees))
    if len(spine) > 1:
        rev = fwd.reversed()
        kf, kr = _orientation_key(fwd.subtrees), _orientation_key(rev.subtrees)
        if kr < kf or (kr == kf and rev.spine[0] < fwd.spine[0]):
            return rev
    return fwd


def validate_locally_uniform(struct: LobsterStructure) -> tuple[bool, list[str]]:
    bad = [
        f"subtree {s.index}: branches of mixed depth"
        for s in struct.subtrees
        if s.depth_class == MIXED
    ]
    return (not bad, bad)


def validate_two_lobster(struct: LobsterStructure) -> tuple[bool, list[str]]:
    bad = [f"subtree {s.index}: only {s.b} branch(es)" for s in struct.subtrees if s.b < 2]
    return (not bad, bad)


def validate(struct: LobsterStructure) -> list[str]:
    """All violations of the locally uniform 2-lobster preconditions."""
    return validate_locally_uniform(struct)[1] + validate_two_lobster(struct)[1]


# --- LobsterSpec JSON -------------------------------------------------------


@dataclass(frozen=True)
class SubtreeSpec:
    type: str
    leaves: int | None = None
    branches: tuple[int, ...] | None = None

    def to_json(self) -> dict[str, Any]:
        if self.type == S1:
            return {"type": S1, "leaves": self.leaves}
        return {"type": S2, "branches": list(self.branches or ())}

    def short(self) -> str:
        if self.type == S1:
            return f"S1:{self.leaves}"
        return "S2:[" + ",".join(map(str, self.branches or ())) + "]"

    @property
    def size(self) -> int:
        """Vertices including the spine vertex."""
        if self.type == S1:
            return 1 + (self.leaves or 0)
        return 1 + sum(1 + c for c in self.branches or ())


@dataclass(frozen=True)
class LobsterSpec:
    subtrees: tuple[SubtreeSpec, ...]

    @property
    def n(self) -> int:
        return sum(s.size for s in self.subtrees)

    @property
    def k(self) -> int:
        return len(self.subtrees) - 1

    def reversed(self) -> "LobsterSpec":
        return LobsterSpec(tuple(reversed(self.subtrees)))

    def to_json(self) -> dict[str, Any]:
        return {"subtrees": [s.to_json() for s in self.subtrees]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    def short(self) -> str:
        return "[" + ", ".join(s.short() for s in self.subtrees) + "]"

    def __str__(self) -> str:
        return self.short()

    @classmethod
    def parse(cls, data: Any) -> "LobsterSpec":
        """Parse and check a decoded JSON object; raises SpecViolation."""
        if isinstance(data, (str, bytes)):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as exc:
                raise SpecViolation("$", f"invalid JSON: {exc}") from None
        if not isinstance(data, dict) or "subtrees" not in data:
            raise SpecViolation("$", "expected an object with a 'subtrees' list")
        raw = data["subtrees"]
        if not isinstance(raw, list) or not raw:
            raise SpecViolation("subtrees", "must be a non-empty list")
        subs = []
        for i, item in enumerate(raw):
            path = f"subtrees[{i}]"
            if not isinstance(item, dict):
                raise SpecViolation(path, "must be an object")
            kind = item.get("type")
            if kind == S1:
                m = item.get("leaves")
                if not isinstance(m, int) or isinstance(m, bool):
                    raise SpecViolation(f"{path}.leaves", "must be an integer")
                subs.append(SubtreeSpec(S1, leaves=m))
            elif kind == S2:
                brs = item.get("branches")
                if not isinstance(brs, list) or not all(
                    isinstance(c, int) and not isinstance(c, bool) for c in brs
                ):
                    raise SpecViolation(f"{path}.branches", "must be a list of integers")
                subs.append(SubtreeSpec(S2, branches=tuple(brs)))
            else:
                raise SpecViolation(f"{path}.type", f"unknown subtree type {kind!r}")
        spec = cls(tuple(subs))
        spec.check()
        return spec

    @classmethod
    def from_short(cls, text: str) -> "LobsterSpec":
        """Parse ``"S2:[1,1] S1:2 S2:[1,1]"`` (commas between subtrees optional)."""
        subs = []
        for kind, body in re.findall(r"(S[12])\s*:\s*(\[[^\]]*\]|\d+)", text):
            if kind == S1:
                subs.append({"type": S1, "leaves": int(body)})
            else:
                subs.append({"type": S2, "branches": json.loads(body)})
        return cls.parse({"subtrees": subs})

    def check(self) -> None:
        last = len(self.subtrees) - 1
        for i, s in enumerate(self.subtrees):
            path = f"subtrees[{i}]"
            if s.type == S1:
                if s.leaves is None or s.leaves < 2:
                    raise SpecViolation(f"{path}.leaves", "an S1 subtree needs at least 2 leaves")
                if i in (0, last):
                    raise SpecViolation(f"{path}.type", "end subtrees must be S2")
            else:
                brs = s.branches or ()
                if len(brs) < 2:
                    raise SpecViolation(f"{path}.branches", "an S2 subtree needs at least 2 branches")
                for j, c in enumerate(brs):
                    if c < 1:
                        raise SpecViolation(f"{path}.branches[{j}]", "each branch needs at least one leaf")


def build_tree_from_spec(spec: LobsterSpec) -> tuple[Tree, LobsterStructure]:
    """Materialize a spec; spine is ``0..k``, then branches in the given order.

    The returned structure keeps the spec's orientation.
    """
    spec.check()
    k = spec.k
    edges = [(i, i + 1) for i in range(k)]
    nxt = k + 1
    per_subtree: list[list[Branch]] = []
    for i, s in enumerate(spec.subtrees):
        brs = []
        if s.type == S1:
            for _ in range(s.leaves):
                edges.append((i, nxt))
                brs.append(Branch(nxt, 1, 0, (nxt,)))
                nxt += 1
        else:
            for c in s.branches:
                mid = nxt
                edges.append((i, mid))
                leaves = tuple(range(mid + 1, mid + 1 + c))
                edges.extend((mid, x) for x in leaves)
                brs.append(Branch(mid, 2, c, leaves))
                nxt = mid + 1 + c
        per_subtree.append(brs)
    tree = Tree(nxt, tuple(edges))
    subs = tuple(SpineSubtree.from_branches(i, i, brs) for i, brs in enumerate(per_subtree))
    return tree, LobsterStructure(tree, tuple(range(k + 1)), subs)
