"""Shared builders for the test suite."""

from __future__ import annotations

import itertools

from hypothesis import strategies as st

from lobster_broadcast.classifier import FA, G, XA, XB, XC, YC
from lobster_broadcast.lobster_model import S1, S2, LobsterSpec, SubtreeSpec, build_tree_from_spec
from lobster_broadcast.tree_core import Tree

SAMPLE_LOBSTER = "S2:[1,2] S1:3 S2:[1,1,1,2,3] S1:2 S1:2 S2:[1,1]"


def lobster(short: str):
    return build_tree_from_spec(LobsterSpec.from_short(short))


def path(n: int) -> Tree:
    return Tree(n, tuple((i, i + 1) for i in range(n - 1)))


def star(leaves: int) -> Tree:
    return Tree(leaves + 1, tuple((0, i) for i in range(1, leaves + 1)))


def spider(legs: int, length: int) -> Tree:
    edges, nxt = [], 1
    for _ in range(legs):
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev, nxt = nxt, nxt + 1
    return Tree(nxt, tuple(edges))


@st.composite
def trees(draw, min_n: int = 2, max_n: int = 9) -> Tree:
    n = draw(st.integers(min_n, max_n))
    edges = [(draw(st.integers(0, i - 1)), i) for i in range(1, n)]
    return Tree(n, tuple(edges))


def _s2(max_branches: int, max_leaves: int):
    return st.lists(st.integers(1, max_leaves), min_size=2, max_size=max_branches).map(
        lambda bs: SubtreeSpec(S2, branches=tuple(bs))
    )


def _s1(max_leaves: int):
    return st.integers(2, max_leaves).map(lambda m: SubtreeSpec(S1, leaves=m))


@st.composite
def specs(draw, max_k: int = 6, max_branches: int = 4, max_leaves: int = 4) -> LobsterSpec:
    k = draw(st.integers(0, max_k))
    end = _s2(max_branches, max_leaves)
    inner = st.one_of(end, _s1(max_branches))
    subs = [draw(end)]
    subs += [draw(inner) for _ in range(k - 1)]
    if k:
        subs.append(draw(end))
    return LobsterSpec(tuple(subs))


# Symbolic type strings: F=Fa, B=Xb, Y=Yc, A=Xa, T=an S1 subtree with two leaves
# (G when an S1 neighbour exists, otherwise Xc).
SYMBOL_SPEC = {"F": "S2:[3,3]", "B": "S2:[1,3]", "Y": "S2:[1,1]", "A": "S1:3", "T": "S1:2"}


def realize(symbols: str):
    out = []
    for i, c in enumerate(symbols):
        if c == "T":
            nbrs = {symbols[j] for j in (i - 1, i + 1) if 0 <= j < len(symbols)}
            out.append(G if nbrs & {"T", "A"} else XC)
        else:
            out.append({"F": FA, "B": XB, "Y": YC, "A": XA}[c])
    return out


def symbol_strings(max_len: int):
    """Every legal symbolic string: S2 at both ends, anything inside."""
    yield "F"
    yield "B"
    yield "Y"
    for n in range(2, max_len + 1):
        for a in "FBY":
            for b in "FBY":
                for mid in itertools.product("FBYAT", repeat=n - 2):
                    yield a + "".join(mid) + b


def symbols_to_spec(symbols: str) -> LobsterSpec:
    return LobsterSpec.from_short(" ".join(SYMBOL_SPEC[c] for c in symbols))


def memberships(struct, i):
    """Every type whose defining predicate holds for subtree i, checked one by one."""
    s = struct.subtrees[i]
    subs = struct.subtrees
    nbr_s1 = any(0 <= j < len(subs) and subs[j].depth_class == S1 for j in (i - 1, i + 1))
    small = sum(1 for br in s.branches if br.depth == 2 and br.two_leaf_count <= 2)
    preds = {
        FA: s.depth_class == S2 and all(br.two_leaf_count >= 3 for br in s.branches),
        XB: s.depth_class == S2 and small == 1,
        YC: s.depth_class == S2 and small >= 2,
        XA: s.depth_class == S1 and len(s.branches) >= 3,
        G: s.depth_class == S1 and len(s.branches) == 2 and nbr_s1,
        XC: s.depth_class == S1 and len(s.branches) == 2 and not nbr_s1,
    }
    return {t for t, ok in preds.items() if ok}
