import numpy as np
import pytest

from gcsq import (
    CoalitionStructure,
    Graph,
    PartitionError,
    coalition_from_members,
    coalition_members,
    coalition_value,
    cut_value,
    grand_coalition,
    structure_from_masks,
    structure_value,
    validate_structure,
)
from oracles import cross_value, pairs_value, random_graph

TRIANGLE = Graph.from_edges(3, {(0, 1): 5.0, (0, 2): -2.0, (1, 2): 3.0})
MIXED = Graph.from_edges(3, {(0, 1): -4.0, (0, 2): 2.0, (1, 2): 1.0})


class TestGraphValidation:
    def test_rejects_asymmetric(self):
        w = np.zeros((2, 2))
        w[0, 1] = 1.0
        with pytest.raises(ValueError, match="symmetric"):
            Graph(2, w)

    def test_rejects_nonzero_diagonal(self):
        w = np.eye(3)
        with pytest.raises(ValueError, match="diagonal"):
            Graph(3, w)

    def test_rejects_nan(self):
        w = np.zeros((2, 2))
        w[0, 1] = w[1, 0] = np.nan
        with pytest.raises(ValueError, match="finite"):
            Graph(2, w)

    def test_rejects_bad_agent_count(self):
        with pytest.raises(ValueError, match="agent count"):
            Graph(0, np.zeros((0, 0)))
        with pytest.raises(ValueError, match="agent count"):
            Graph(65, np.zeros((65, 65)))

    def test_weights_are_frozen(self):
        g = Graph(2, np.zeros((2, 2)))
        with pytest.raises(ValueError):
            g.weights[0, 1] = 3.0


class TestCoalitionHelpers:
    def test_round_trip(self):
        mask = coalition_from_members([0, 2, 5])
        assert mask == 0b100101
        assert coalition_members(mask) == (0, 2, 5)

    def test_grand(self):
        assert grand_coalition(3) == 0b111


class TestCoalitionValue:
    def test_triangle_grand(self):
        assert coalition_value(TRIANGLE, 0b111) == pytest.approx(6.0)

    def test_singleton_is_zero(self):
        assert coalition_value(TRIANGLE, 0b001) == 0.0

    def test_single_internal_edge(self):
        assert coalition_value(TRIANGLE, 0b101) == pytest.approx(-2.0)

    def test_empty_coalition_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            coalition_value(TRIANGLE, 0)

    def test_out_of_range_bit_rejected(self):
        with pytest.raises(ValueError, match="out of range"):
            coalition_value(TRIANGLE, 1 << 3)

    def test_matches_pair_enumeration(self):
        g = random_graph(11, 9)
        rng = np.random.default_rng(12)
        for _ in range(50):
            members = [i for i in range(9) if rng.random() < 0.5] or [0]
            mask = coalition_from_members(members)
            assert coalition_value(g, mask) == pytest.approx(
                pairs_value(g.weights, members), rel=1e-12, abs=1e-12
            )


class TestCutValue:
    def test_mixed_example(self):
        assert cut_value(MIXED, 0b101, 0b010) == pytest.approx(-3.0)

    def test_triangle_example(self):
        assert cut_value(TRIANGLE, 0b001, 0b110) == pytest.approx(3.0)

    def test_overlap_rejected(self):
        with pytest.raises(ValueError, match="overlap"):
            cut_value(TRIANGLE, 0b011, 0b010)

    def test_empty_side_rejected(self):
        with pytest.raises(ValueError, match="empty"):
            cut_value(TRIANGLE, 0b011, 0)

    def test_cut_identity_on_seeded_trials(self):
        # v(C) + v(C-bar) + cut(C, C-bar) == v(S) for random splits
        rng = np.random.default_rng(2024)
        for trial in range(1000):
            n = int(rng.integers(2, 17))
            g = random_graph(3000 + trial, n)
            members = list(rng.choice(n, size=int(rng.integers(2, n + 1)), replace=False))
            split = {m for m in members if rng.random() < 0.5}
            if not split or len(split) == len(members):
                split = {members[0]}
                if len(members) == 1:
                    continue
            side_a = coalition_from_members(split)
            side_b = coalition_from_members(set(members) - split)
            whole = side_a | side_b
            lhs = (
                coalition_value(g, side_a)
                + coalition_value(g, side_b)
                + cut_value(g, side_a, side_b)
            )
            rhs = coalition_value(g, whole)
            assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-9)


class TestStructureValue:
    def test_grand_structure(self):
        cs = structure_from_masks(TRIANGLE, [0b111])
        assert structure_value(TRIANGLE, cs) == pytest.approx(6.0)

    def test_all_singletons_zero(self):
        cs = structure_from_masks(TRIANGLE, [0b001, 0b010, 0b100])
        assert structure_value(TRIANGLE, cs) == 0.0
        for seed in range(20):
            g = random_graph(seed, 7)
            singles = structure_from_masks(g, [1 << i for i in range(7)])
            assert structure_value(g, singles) == 0.0

    def test_mixed_optimum_structure(self):
        cs = structure_from_masks(MIXED, [0b101, 0b010])
        assert structure_value(MIXED, cs) == pytest.approx(2.0)

    def test_overlap_names_agent(self):
        cs = CoalitionStructure((0b011, 0b110), 0.0)
        with pytest.raises(PartitionError, match="agent 1"):
            structure_value(TRIANGLE, cs)

    def test_missing_names_agent(self):
        cs = CoalitionStructure((0b011,), 0.0)
        with pytest.raises(PartitionError, match="agent 2"):
            structure_value(TRIANGLE, cs)

    def test_permutation_invariance(self):
        rng = np.random.default_rng(7)
        for trial in range(30):
            n = int(rng.integers(2, 10))
            g = random_graph(500 + trial, n)
            perm = rng.permutation(n)
            permuted = np.zeros((n, n))
            for i in range(n):
                for j in range(n):
                    permuted[perm[i], perm[j]] = g.weights[i, j]
            g2 = Graph(n, permuted)
            masks = []
            remaining = list(range(n))
            while remaining:
                k = int(rng.integers(1, len(remaining) + 1))
                block, remaining = remaining[:k], remaining[k:]
                masks.append(coalition_from_members(block))
            cs1 = structure_from_masks(g, masks)
            cs2 = structure_from_masks(
                g2,
                [
                    coalition_from_members(perm[m] for m in coalition_members(b))
                    for b in masks
                ],
            )
            assert cs1.welfare == pytest.approx(cs2.welfare, rel=1e-9, abs=1e-9)


class TestValidateStructure:
    def test_valid_partition(self):
        cs = structure_from_masks(TRIANGLE, [0b011, 0b100])
        report = validate_structure(TRIANGLE, cs)
        assert report.valid
        assert report.problems == ()

    def test_duplicate_agent_flagged(self):
        cs = CoalitionStructure((0b011, 0b110), 0.0)
        report = validate_structure(TRIANGLE, cs)
        assert not report.valid
        assert any("agent 1" in p for p in report.problems)

    def test_disconnected_coalition_flagged(self):
        path = Graph.from_edges(3, {(0, 1): 1.0, (1, 2): 1.0})
        cs = structure_from_masks(path, [0b101, 0b010])
        report = validate_structure(path, cs, check_connectivity=True)
        assert not report.valid
        assert report.infeasible == (0b101,)

    def test_connectivity_ok_on_complete_graph(self):
        g = random_graph(5, 6)
        cs = structure_from_masks(g, [0b000111, 0b111000])
        report = validate_structure(g, cs, check_connectivity=True)
        assert report.valid

    def test_never_raises(self):
        report = validate_structure(TRIANGLE, CoalitionStructure((0,), 0.0))
        assert not report.valid


class TestWelfareCache:
    def test_cached_welfare_matches_recomputation(self):
        for seed in range(25):
            g = random_graph(seed, 8)
            cs = structure_from_masks(g, [0b00001111, 0b11110000])
            assert cs.welfare == pytest.approx(
                structure_value(g, cs), rel=1e-9
            )

    def test_cross_check_against_oracle(self):
        g = random_graph(42, 6)
        cs = structure_from_masks(g, [0b000011, 0b011100, 0b100000])
        expected = (
            pairs_value(g.weights, [0, 1])
            + pairs_value(g.weights, [2, 3, 4])
            + pairs_value(g.weights, [5])
        )
        assert cs.welfare == pytest.approx(expected, rel=1e-12)
        assert cut_value(g, 0b000011, 0b011100) == pytest.approx(
            cross_value(g.weights, [0, 1], [2, 3, 4]), rel=1e-12
        )
