import pytest
from hypothesis import given, settings

from helpers import SAMPLE_LOBSTER, lobster, specs
from lobster_broadcast import constructor
from lobster_broadcast.beta_star import beta_star
from lobster_broadcast.classifier import FA, XC, classify_all, find_t4_sequences
from lobster_broadcast.constructor import (
    VerificationFailure,
    WrongLength,
    construct,
    construct_k0,
    exceed_by,
    step1,
    step2,
    step3,
    subtree_values,
)
from lobster_broadcast.lobster_model import build_tree_from_spec
from lobster_broadcast.tree_core import check_dominating, cost


def only_leaf_values(tree, spine):
    """Leaves at depth two whose parent has no other leaf get 2, other leaves 1."""
    on_spine = set(spine)
    f = [0] * tree.n
    for v in tree.leaves():
        (p,) = tree.adjacency[v]
        if p in on_spine:
            f[v] = 1
        else:
            sisters = [w for w in tree.adjacency[p] if w not in on_spine]
            f[v] = 2 if len(sisters) == 1 else 1
    return tuple(f)


class TestSingleSubtree:
    def test_two_short_branches(self):
        _, struct = lobster("S2:[1,1]")
        f = construct_k0(struct)
        assert cost(f) == 6
        assert sorted(f[x] for br in struct.subtrees[0].branches for x in br.leaves) == [3, 3]

    def test_two_long_branches(self):
        _, struct = lobster("S2:[3,3]")
        f = construct_k0(struct)
        assert f[struct.spine[0]] == 1
        assert sorted(x for x in f if x) == [1] * 7

    def test_one_short_branch(self):
        _, struct = lobster("S2:[2,3]")
        f = construct_k0(struct)
        assert cost(f) == 6
        small, big = sorted(struct.subtrees[0].branches, key=lambda b: b.two_leaf_count)
        assert sorted(f[x] for x in small.leaves) == [0, 3]
        assert [f[x] for x in big.leaves] == [1, 1, 1]

    def test_wrong_length(self):
        _, struct = lobster("S2:[1,1] S2:[1,1]")
        with pytest.raises(WrongLength):
            construct_k0(struct)

    def test_single_stage_trace(self):
        _, struct = lobster("S2:[1,1]")
        trace = construct(struct)
        assert len(trace.stages) == 1 and trace.final_cost == 6


class TestStages:
    def test_sample_first_stage(self):
        tree, struct = lobster(SAMPLE_LOBSTER)
        assert step1(struct) == only_leaf_values(tree, struct.spine)

    def test_sample_trace(self):
        _, struct = lobster(SAMPLE_LOBSTER)
        trace = construct(struct)
        assert len(trace.stages) == 4
        assert trace.final_cost == beta_star(struct).beta_star

    def test_short_branches_raised(self):
        _, struct = lobster("S2:[1,2] S2:[1,2]")
        f2 = step2(struct, step1(struct))
        for s in struct.subtrees:
            one, two = s.branches
            assert [f2[x] for x in one.leaves] == [3]
            assert sorted(f2[x] for x in two.leaves) == [0, 3]

    def test_step1_cost(self):
        _, struct = lobster("S2:[1,1] S1:2 S2:[1,1]")
        assert cost(step1(struct)) == 10

    def test_long_branches_untouched_by_step2(self):
        _, struct = lobster("S2:[3,4] S2:[3,3]")
        f1 = step1(struct)
        assert step2(struct, f1) == f1

    def test_xc_raised(self):
        _, struct = lobster("S2:[3,3] S1:2 S2:[3,3]")
        types = classify_all(struct)
        f3 = step3(struct, types, step2(struct, step1(struct)))
        assert sorted(f3[x] for br in struct.subtrees[1].branches for x in br.leaves) == [0, 3]

    def test_mixed_run(self):
        _, struct = lobster("S2:[3,3] S1:2 S2:[3,3] S2:[3,3] S2:[3,3] S1:2 S1:2 S2:[3,3]")
        types = classify_all(struct)
        assert types[:5] == [FA, XC, FA, FA, FA]
        trace = construct(struct)
        f3, f4 = trace.stages[2], trace.stages[3]
        for i in (0, 2, 4):
            assert f4[struct.spine[i]] == 1
        assert sorted(f4[x] for br in struct.subtrees[1].branches for x in br.leaves) == [1, 1]
        first = find_t4_sequences(types)[0]
        assert (first.start, first.end) == (0, 4)
        gain = sum(subtree_values(struct, f4)[:5]) - sum(subtree_values(struct, f3)[:5])
        assert gain == 2

    def test_defect_is_caught(self, monkeypatch):
        _, struct = lobster("S2:[3,3] S1:2 S2:[3,3]")

        def bad_step4(struct, types, seqs, f3):
            f = list(f3)
            f[struct.spine[1]] = 5
            return tuple(f)

        monkeypatch.setattr(constructor, "step4", bad_step4)
        with pytest.raises(VerificationFailure) as info:
            construct(struct)
        assert info.value.stage == "4"


@settings(max_examples=150, deadline=None)
@given(specs(max_k=10))
def test_stage_invariants(spec):
    tree, struct = build_tree_from_spec(spec)
    trace = construct(struct)
    rep = beta_star(struct)
    assert trace.final_cost == rep.beta_star
    assert check_dominating(tree, trace.final)
    assert subtree_values(struct, trace.final) == list(rep.per_subtree)
    if struct.k == 0:
        assert trace.final_cost == rep.nu1 + rep.nu2 + rep.nu4
        return
    deltas = [trace.costs[0]] + [b - a for a, b in zip(trace.costs, trace.costs[1:])]
    assert deltas == [rep.nu1, rep.nu2, rep.nu3, rep.nu4]
    f1, f2, f3, f4 = trace.stages
    for f in (f1, f2, f3):
        assert all(f[v] == 0 for v in struct.spine)
    a_roots = {struct.spine[i] for seq in rep.sequences for i in seq.a_positions()}
    assert {v for v in struct.spine if f4[v]} == a_roots
    assert set(f4) <= {0, 1, 2, 3}
    for i, t in enumerate(rep.types):
        assert exceed_by(struct, f3, i) == t.exceed
