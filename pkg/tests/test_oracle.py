import itertools

import numpy as np
import pytest

from hpmp.errors import InfeasibleProblemError, NoPerfectMatchingError, OracleLimitError
from hpmp.instance import generate_euclidean
from hpmp.matching import GeneralGraph
from hpmp.oracle import (
    OracleLimitConfig,
    brute_hpmp,
    brute_matching,
    brute_two_factor,
    cheapest_cycle_table,
    max_l_exhaustive,
)


class TestBruteMatching:
    def test_single_edge(self):
        m = brute_matching(GeneralGraph.from_edges(2, [(0, 1, 4.0)]))
        assert m.pairs == ((0, 1),) and m.weight == 4.0

    def test_k4(self):
        edges = [(0, 1, 1.0), (2, 3, 1.0), (0, 2, 10.0), (0, 3, 10.0), (1, 2, 10.0), (1, 3, 10.0)]
        assert brute_matching(GeneralGraph.from_edges(4, edges)).weight == 2.0

    def test_k6_ones(self):
        edges = [(i, j, 1.0) for i in range(6) for j in range(i + 1, 6)]
        assert brute_matching(GeneralGraph.from_edges(6, edges)).weight == 3.0

    def test_limit(self):
        edges = [(i, i + 1, 1.0) for i in range(13)]
        with pytest.raises(OracleLimitError):
            brute_matching(GeneralGraph.from_edges(14, edges))

    def test_none(self):
        with pytest.raises(NoPerfectMatchingError):
            brute_matching(GeneralGraph.from_edges(4, [(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]))


class TestCycleTable:
    def test_against_permutations(self):
        inst = generate_euclidean(7, 3)
        cost, order = cheapest_cycle_table(inst.weights)
        for k in range(3, 8):
            for sub in itertools.combinations(range(7), k):
                mask = sum(1 << v for v in sub)
                ref = min(inst.cycle_weight((sub[0],) + p) for p in itertools.permutations(sub[1:]))
                assert cost[mask] == pytest.approx(ref, abs=1e-9)
                assert sorted(order[mask]) == list(sub)
                assert inst.cycle_weight(order[mask]) == pytest.approx(ref, abs=1e-9)

    def test_small_subsets_are_infinite(self):
        cost, _ = cheapest_cycle_table(generate_euclidean(4, 1).weights)
        assert cost[0b0011] == np.inf and cost[0b0001] == np.inf


class TestBruteCovers:
    def test_k3(self):
        inst = generate_euclidean(3, 5)
        assert brute_two_factor(inst).cycles == ((0, 1, 2),)

    def test_hpmp_n6_p2(self):
        inst = generate_euclidean(6, 8)
        best = min(inst.cycle_weight((0,) + r) + inst.cycle_weight(tuple(sorted(set(range(1, 6)) - set(r))))
                   for r in itertools.combinations(range(1, 6), 2))
        sol = brute_hpmp(inst, 2)
        assert sol.p == 2
        assert sol.weight == pytest.approx(best, abs=1e-9)

    def test_hpmp_n6_p1(self):
        inst = generate_euclidean(6, 9)
        best = min(inst.cycle_weight((0,) + p) for p in itertools.permutations(range(1, 6)))
        assert brute_hpmp(inst, 1).weight == pytest.approx(best, abs=1e-9)

    def test_infeasible(self):
        with pytest.raises(InfeasibleProblemError):
            brute_hpmp(generate_euclidean(8, 1), 3)

    def test_limits(self):
        inst = generate_euclidean(11, 1)
        with pytest.raises(OracleLimitError):
            brute_two_factor(inst)
        with pytest.raises(OracleLimitError):
            brute_hpmp(inst, 2)
        assert brute_two_factor(generate_euclidean(6, 1), OracleLimitConfig(max_n_two_factor=6))

    def test_bad_limits(self):
        with pytest.raises(ValueError):
            OracleLimitConfig(max_n_hpmp=0)

    @pytest.mark.parametrize("seed", range(5))
    def test_relaxation(self, seed):
        inst = generate_euclidean(10, seed)
        tf = brute_two_factor(inst).weight
        for p in (1, 2, 3):
            assert tf <= brute_hpmp(inst, p).weight + 1e-9


class TestMaxL:
    @pytest.mark.parametrize("n, expect", [(10, 4), (12, 3), (5, 2), (3, 0), (4, 1)])
    def test_values(self, n, expect):
        assert max_l_exhaustive(n) == expect

    def test_bound(self):
        for n in range(3, 201):
            assert max_l_exhaustive(n) <= 2 * -(-n // 5)

    def test_range(self):
        with pytest.raises(ValueError):
            max_l_exhaustive(201)
