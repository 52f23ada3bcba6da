import itertools

import numpy as np
import pytest

from gcsq import (
    DimensionError,
    Graph,
    QuboProblem,
    build_split_qubo,
    coalition_from_members,
    coalition_members,
    cut_value,
    decode_split,
    grand_coalition,
    ising_energy,
    qubo_energy,
    qubo_to_ising,
)
from oracles import cross_value, random_graph

MIXED = Graph.from_edges(3, {(0, 1): -4.0, (0, 2): 2.0, (1, 2): 1.0})


def all_assignments(m):
    return itertools.product((0, 1), repeat=m)


class TestBuildSplitQubo:
    def test_mixed_coefficients(self):
        q = build_split_qubo(MIXED, 0b111)
        assert np.allclose(np.diag(q.coeffs), [-2.0, -3.0, 3.0])
        assert q.coeffs[0, 1] == pytest.approx(8.0)
        assert q.coeffs[0, 2] == pytest.approx(-4.0)
        assert q.coeffs[1, 2] == pytest.approx(-2.0)
        assert q.index_map == (0, 1, 2)

    def test_energy_matches_cut(self):
        q = build_split_qubo(MIXED, 0b111)
        assert qubo_energy(q, (1, 0, 1)) == pytest.approx(-3.0)
        assert qubo_energy(q, (1, 0, 1)) == pytest.approx(
            cut_value(MIXED, 0b101, 0b010)
        )

    def test_trivial_assignments_are_zero(self):
        for seed in range(10):
            g = random_graph(seed, 7)
            q = build_split_qubo(g, grand_coalition(7))
            assert qubo_energy(q, (0,) * 7) == 0.0
            assert qubo_energy(q, (1,) * 7) == pytest.approx(0.0, abs=1e-12)

    def test_singleton_rejected(self):
        with pytest.raises(ValueError, match="two agents"):
            build_split_qubo(MIXED, 0b001)
        with pytest.raises(ValueError, match="two agents"):
            build_split_qubo(MIXED, 0)

    def test_subcoalition_index_map(self):
        g = random_graph(3, 8)
        s = coalition_from_members([1, 4, 6])
        q = build_split_qubo(g, s)
        assert q.index_map == (1, 4, 6)
        assert q.size == 3

    def test_energy_equals_cut_on_seeded_trials(self):
        # every non-trivial assignment's energy is the decoded bipartition's cut
        rng = np.random.default_rng(99)
        for trial in range(500):
            n = int(rng.integers(2, 13))
            g = random_graph(7000 + trial, n)
            size = int(rng.integers(2, n + 1))
            members = sorted(rng.choice(n, size=size, replace=False).tolist())
            q = build_split_qubo(g, coalition_from_members(members))
            x = [int(rng.integers(0, 2)) for _ in range(size)]
            if all(x) or not any(x):
                x[0] = 1 - x[0]
            side_a = [m for m, bit in zip(members, x) if bit]
            side_b = [m for m in members if m not in side_a]
            assert qubo_energy(q, x) == pytest.approx(
                cross_value(g.weights, side_a, side_b), rel=1e-9, abs=1e-9
            )

    def test_complement_symmetry(self):
        rng = np.random.default_rng(5)
        g = random_graph(17, 9)
        q = build_split_qubo(g, grand_coalition(9))
        for _ in range(50):
            x = rng.integers(0, 2, size=9)
            assert qubo_energy(q, x) == pytest.approx(
                qubo_energy(q, 1 - x), rel=1e-9, abs=1e-9
            )


class TestQuboEnergy:
    def test_single_linear_term(self):
        q = QuboProblem(1, [[3.0]], (0,))
        assert qubo_energy(q, (1,)) == 3.0
        assert qubo_energy(q, (0,)) == 0.0

    def test_single_edge(self):
        q = QuboProblem(2, [[4.0, -8.0], [0.0, 4.0]], (0, 1))
        assert qubo_energy(q, (1, 0)) == 4.0
        assert qubo_energy(q, (1, 1)) == 0.0

    def test_length_mismatch(self):
        q = QuboProblem(2, [[4.0, -8.0], [0.0, 4.0]], (0, 1))
        with pytest.raises(DimensionError):
            qubo_energy(q, (1, 0, 1))

    def test_rejects_lower_triangle(self):
        with pytest.raises(ValueError, match="upper-triangular"):
            QuboProblem(2, [[0.0, 0.0], [1.0, 0.0]], (0, 1))


class TestIsingConversion:
    def test_single_edge_example(self):
        q = QuboProblem(2, [[4.0, -8.0], [0.0, 4.0]], (0, 1))
        p = qubo_to_ising(q)
        assert np.allclose(p.h, [0.0, 0.0])
        assert p.j[0, 1] == pytest.approx(-2.0)
        assert p.offset == pytest.approx(2.0)
        for x in all_assignments(2):
            z = [1 - 2 * b for b in x]
            assert ising_energy(p, z) == pytest.approx(qubo_energy(q, x), abs=1e-12)

    def test_zero_problem(self):
        q = QuboProblem(3, np.zeros((3, 3)), (0, 1, 2))
        p = qubo_to_ising(q)
        assert np.all(p.h == 0.0)
        assert np.all(p.j == 0.0)
        assert p.offset == 0.0

    def test_exhaustive_equivalence_on_random_problems(self):
        rng = np.random.default_rng(31)
        for trial in range(25):
            m = int(rng.integers(1, 11))
            coeffs = np.triu(rng.normal(0, 5, size=(m, m)))
            q = QuboProblem(m, coeffs, tuple(range(m)))
            p = qubo_to_ising(q)
            for x in all_assignments(m):
                z = [1 - 2 * b for b in x]
                assert ising_energy(p, z) == pytest.approx(
                    qubo_energy(q, x), abs=1e-9
                )


class TestDecodeSplit:
    def test_direct_decoding(self):
        q = build_split_qubo(MIXED, 0b111)
        assert decode_split((1, 0, 1), q) == (0b101, 0b010)

    def test_one_sided_is_no_split(self):
        q = build_split_qubo(MIXED, 0b111)
        assert decode_split((1, 1, 1), q) == (0b111, 0)
        assert decode_split((0, 0, 0), q) == (0b111, 0)

    def test_respects_index_map(self):
        g = random_graph(3, 8)
        s = coalition_from_members([1, 4, 6])
        q = build_split_qubo(g, s)
        side_a, side_b = decode_split((0, 1, 1), q)
        assert coalition_members(side_a) == (4, 6)
        assert coalition_members(side_b) == (1,)

    def test_length_mismatch(self):
        q = build_split_qubo(MIXED, 0b111)
        with pytest.raises(DimensionError):
            decode_split((1, 0), q)
