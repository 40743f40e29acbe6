import pytest
from hypothesis import given, settings, strategies as st

from kfl.formula import Dia, Var, parse, subformulas
from kfl.frame import Frame, bits, cluster_decomposition
from kfl.model import Model, formula_partition, model_check
from kfl.oracle import frame_valid
from kfl.partition import (
    Partition, compose_partitions, filtrate_model, is_proper, is_refinement,
    meet, minimal_filtration,
)

from util import (
    all_partitions, formulas3, frames, models, partitions_of,
    skeletons_isomorphic,
)

CHAIN3 = Frame(3, [(0, 1), (1, 2)])
CYCLE3 = Frame(3, [(0, 1), (1, 2), (2, 0)])


def is_proper_naive(F, P):
    blocks = P.block_sets()
    pairs = set(F.rel.pairs())
    for U in blocks:
        for V in blocks:
            if any((u, v) in pairs for u in U for v in V):
                if not all(any((u, v) in pairs for v in V) for u in U):
                    return False
    return True


class TestPartitionType:
    def test_blocks_sorted_by_min(self):
        P = Partition(4, [{3, 1}, {0, 2}])
        assert P.block_sets() == (frozenset({0, 2}), frozenset({1, 3}))
        assert P.block_of == (0, 1, 0, 1)

    @pytest.mark.parametrize("blocks", [
        [{0, 1}, {1, 2}],      # overlap
        [{0}, {2}],            # gap
        [{0, 1}, set()],       # empty block
        [{0, 3}],              # out of range cover
    ])
    def test_invalid_rejected(self, blocks):
        with pytest.raises(ValueError):
            Partition(3, blocks)

    def test_io_round_trip(self):
        P = Partition.from_dict({"blocks": [[1, 3], [0, 2]]})
        assert P == Partition(4, [{0, 2}, {1, 3}])
        assert P.to_dict() == {"blocks": [[0, 2], [1, 3]]}

    def test_io_validates(self):
        with pytest.raises(ValueError):
            Partition.from_dict({"blocks": [[0], [0, 1]]})
        with pytest.raises(ValueError):
            Partition.from_dict({"blocks": []})


class TestMinimalFiltration:
    def test_singletons_identity(self):
        G, proj = minimal_filtration(CHAIN3, Partition.singletons(3))
        assert G == CHAIN3
        assert proj == (0, 1, 2)

    def test_one_block_collapse(self):
        G, _ = minimal_filtration(CHAIN3, Partition.one_block(3))
        assert G == Frame(1, [(0, 0)])
        G2, _ = minimal_filtration(Frame(2), Partition.one_block(2))
        assert G2 == Frame(1)

    def test_chain_two_blocks(self):
        G, proj = minimal_filtration(CHAIN3, Partition(3, [{0, 2}, {1}]))
        assert set(G.rel.pairs()) == {(0, 1), (1, 0)}
        assert proj == (0, 1, 0)

    @given(frames(), st.data())
    @settings(max_examples=100)
    def test_definition_clause(self, F, data):
        P = data.draw(partitions_of(F.n))
        G, proj = minimal_filtration(F, P)
        pairs = set(F.rel.pairs())
        for i, U in enumerate(P.block_sets()):
            for j, V in enumerate(P.block_sets()):
                expected = any((u, v) in pairs for u in U for v in V)
                assert G.rel.has(i, j) == expected


class TestFiltrateModel:
    def test_singletons_preserve_truth(self):
        M = Model(CHAIN3, {1: [2]})
        f = parse("<>p1 -> p1")
        M2, proj = filtrate_model(M, Partition.singletons(3), f)
        for x in range(3):
            for g in subformulas(f):
                assert model_check(M, x, g) == model_check(M2, proj[x], g)

    def test_formula_partition_filtration_isomorphic(self):
        M = Model(CHAIN3, {1: [2]})
        f = Dia(Var(1))
        M2, proj = filtrate_model(M, formula_partition(M, f), f)
        assert M2 == M and proj == (0, 1, 2)

    def test_rejects_non_refinement(self):
        M = Model(CHAIN3, {1: [2]})
        with pytest.raises(ValueError):
            filtrate_model(M, Partition.one_block(3), Var(1))

    @given(models(max_n=6), formulas3, st.data())
    @settings(max_examples=150)
    def test_subformula_truth_preserved(self, M, f, data):
        Q = data.draw(partitions_of(M.frame.n))
        P = meet(formula_partition(M, f), Q)  # an arbitrary refinement of ~_f
        M2, proj = filtrate_model(M, P, f)
        for g in subformulas(f):
            for x in range(M.frame.n):
                assert model_check(M, x, g) == model_check(M2, proj[x], g)


class TestRefinementLattice:
    def test_examples(self):
        P = Partition(3, [{0, 1}, {2}])
        Q = Partition(3, [{0}, {1, 2}])
        assert is_refinement(Partition.singletons(3), P)
        assert is_refinement(P, P)
        assert not is_refinement(P, Q)

    def test_meet_examples(self):
        P = Partition(3, [{0, 1}, {2}])
        Q = Partition(3, [{0}, {1, 2}])
        assert meet(P, Partition.singletons(3)) == Partition.singletons(3)
        assert meet(P, P) == P
        assert meet(P, Q) == Partition.singletons(3)

    @given(st.data())
    def test_meet_refines_both(self, data):
        n = data.draw(st.integers(1, 7))
        P1 = data.draw(partitions_of(n))
        P2 = data.draw(partitions_of(n))
        m = meet(P1, P2)
        assert is_refinement(m, P1) and is_refinement(m, P2)

    def test_mismatched_n(self):
        with pytest.raises(ValueError):
            is_refinement(Partition.singletons(2), Partition.singletons(3))
        with pytest.raises(ValueError):
            meet(Partition.singletons(2), Partition.singletons(3))


class TestProper:
    @given(frames())
    def test_singletons_always_proper(self, F):
        assert is_proper(F, Partition.singletons(F.n))

    def test_chain_improper(self):
        assert not is_proper(CHAIN3, Partition(3, [{0, 1}, {2}]))

    def test_cycle_one_block_proper(self):
        assert is_proper(CYCLE3, Partition.one_block(3))

    @given(frames(max_n=5), st.data())
    @settings(max_examples=150)
    def test_matches_naive_definition(self, F, data):
        P = data.draw(partitions_of(F.n))
        assert is_proper(F, P) == is_proper_naive(F, P)

    def test_validity_transfer_on_proper_quotients(self):
        # frames on <= 3 points here; the acceptance suite covers 4 points
        fs = [parse(s) for s in
              ("p1 -> <>p1", "<>p1 -> p1", "<><>p1 -> <>p1", "[]p1 -> p1",
               "<>(p1 & p2) -> <>p1 | <>p2", "[](p1 -> p2) -> ([]p1 -> []p2)",
               "p1 | ~p1", "<>true -> []false | <>p2")]
        for idx in range(512):
            F = Frame(3, [(u, v) for u in range(3) for v in range(3)
                          if idx >> (u * 3 + v) & 1])
            for P in all_partitions(3):
                if not is_proper(F, P):
                    continue
                G, _ = minimal_filtration(F, P)
                for f in fs:
                    if frame_valid(F, f):
                        assert frame_valid(G, f)


class TestSkeletonPreservation:
    @given(frames(), st.data())
    @settings(max_examples=150)
    def test_cluster_refinement_preserves_skeleton(self, F, data):
        Q = data.draw(partitions_of(F.n))
        P = meet(Q, cluster_decomposition(F).clusters)
        G, _ = minimal_filtration(F, P)
        assert skeletons_isomorphic(F, P, G)


class TestComposition:
    def test_singleton_outer(self):
        A = Partition(3, [{0, 1}, {2}])
        assert compose_partitions(CHAIN3, A, Partition.singletons(2)) == A

    def test_one_block_outer(self):
        A = Partition(3, [{0, 1}, {2}])
        assert compose_partitions(CHAIN3, A, Partition.one_block(2)) == Partition.one_block(3)

    def test_chain_grouping(self):
        A = Partition.singletons(3)
        B = Partition(3, [{0, 1}, {2}])
        assert compose_partitions(CHAIN3, A, B) == Partition(3, [{0, 1}, {2}])

    def test_index_mismatch(self):
        with pytest.raises(ValueError):
            compose_partitions(CHAIN3, Partition.singletons(3), Partition.singletons(2))

    @given(frames(), st.data())
    @settings(max_examples=150)
    def test_iterated_filtration_isomorphism(self, F, data):
        A = data.draw(partitions_of(F.n))
        B_over_A = data.draw(partitions_of(len(A.blocks)))
        FA, projA = minimal_filtration(F, A)
        FAB, projB = minimal_filtration(FA, B_over_A)
        C = compose_partitions(F, A, B_over_A)
        FC, projC = minimal_filtration(F, C)
        # explicit bijection: outer block -> the C-block that is its union
        mapping = []
        for g in B_over_A.blocks:
            union = 0
            for j in bits(g):
                union |= A.blocks[j]
            mapping.append(C.blocks.index(union))
        assert sorted(mapping) == list(range(len(C.blocks)))
        for i in range(FAB.n):
            for j in range(FAB.n):
                assert FAB.rel.has(i, j) == FC.rel.has(mapping[i], mapping[j])
        for x in range(F.n):
            assert projC[x] == mapping[projB[projA[x]]]
