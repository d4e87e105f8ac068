import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splitmatch.graph import build_graph, validate_bmatching
from splitmatch.kernel import (
    Expansion,
    Kernel,
    KernelBudgetError,
    greedy_bmatching,
    max_matching,
    solve_bmatching_ilp,
    solve_bmatching_kernel,
    solve_maxcost_bmatching_ilp,
    solve_maxcost_bmatching_kernel,
)
from splitmatch.testkit import all_bmatchings, has_augmenting_path, oracle_bmatching, random_connected_graph

TRIANGLE = build_graph(3, [(0, 1), (1, 2), (0, 2)])


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return build_graph(10, outer + spokes + inner)


def brute_matching(g):
    best = 0
    for r in range(g.m + 1):
        for es in itertools.combinations(g.edges, r):
            used = [v for e in es for v in e]
            if len(used) == len(set(used)):
                best = max(best, r)
    return best


class TestMaxMatching:
    def test_c5(self):
        assert max_matching(build_graph(5, [(i, (i + 1) % 5) for i in range(5)])).cardinality == 2

    def test_k4(self):
        assert max_matching(build_graph(4, list(itertools.combinations(range(4), 2)))).cardinality == 2

    def test_petersen(self):
        g = petersen()
        assert brute_matching(g) == 5
        assert max_matching(g).cardinality == 5

    @pytest.mark.parametrize("seed", range(60))
    def test_no_augmenting_path(self, seed):
        rng = random.Random(seed)
        g = random_connected_graph(rng.randint(2, 11), rng.uniform(0.1, 0.6), rng)
        res = max_matching(g)
        assert validate_bmatching(g, [1] * g.n, res.x) is None
        assert not has_augmenting_path(g, res.x)


class TestBMatchingKernel:
    def test_triangle(self):
        assert solve_bmatching_kernel(TRIANGLE, [2, 2, 2]).cardinality == 3

    def test_path(self):
        g = build_graph(3, [(0, 1), (1, 2)])
        assert solve_bmatching_kernel(g, [1, 2, 1]).cardinality == 2

    def test_zero_capacities(self):
        assert solve_bmatching_kernel(petersen(), [0] * 10).cardinality == 0

    def test_budget(self):
        with pytest.raises(KernelBudgetError):
            solve_bmatching_kernel(TRIANGLE, [2, 2, 2], budget=3)

    def test_expansion_fold_lift(self):
        ex = Expansion(TRIANGLE, [2, 2, 2])
        assert ex.size == 6
        assert ex.fold(ex.lift([1, 1, 1])) == [1, 1, 1]
        assert sum(ex.fold(max_matching_mate(ex))) == 3

    def test_greedy_is_valid(self):
        rng = random.Random(4)
        for _ in range(50):
            g = random_connected_graph(rng.randint(2, 9), 0.4, rng)
            b = [rng.randint(0, 3) for _ in range(g.n)]
            assert validate_bmatching(g, b, greedy_bmatching(g, b)) is None

    def test_matches_oracle_on_1000_graphs(self):
        rng = random.Random(8)
        for _ in range(1000):
            n = rng.randint(1, 8)
            g = random_connected_graph(n, rng.uniform(0.1, 0.8), rng)
            b = [rng.randint(0, 3) for _ in range(n)]
            res = solve_bmatching_kernel(g, b)
            assert validate_bmatching(g, b, res.x) is None
            assert res.cardinality == oracle_bmatching(g, b).cardinality

    @given(st.integers(2, 9), st.integers(0, 10**6))
    @settings(max_examples=40, deadline=None)
    def test_ilp_agrees(self, n, seed):
        rng = random.Random(seed)
        g = random_connected_graph(n, rng.random(), rng)
        b = [rng.randint(0, 6) for _ in range(n)]
        assert solve_bmatching_ilp(g, b).cardinality == oracle_bmatching(g, b, budget=10**6).cardinality


def max_matching_mate(ex):
    from splitmatch.kernel import blossom_matching

    return blossom_matching(ex.adjacency())


class TestMaxCost:
    # a-u2, a-u3, u2-u3 with cost 2 on u2-u3
    G = build_graph(3, [(0, 1), (0, 2), (1, 2)])
    C = [1, 1, 2]

    def test_internal_edge_chosen(self):
        res = solve_maxcost_bmatching_kernel(self.G, [1, 1, 1], self.C)
        assert (res.cardinality, res.cost) == (1, 2)
        assert res.x[self.G.edge_id(1, 2)] == 1

    def test_wider_apex(self):
        res = solve_maxcost_bmatching_kernel(self.G, [2, 1, 1], self.C)
        assert (res.cardinality, res.cost) == (2, 2)

    def test_unit_costs(self):
        rng = random.Random(9)
        for _ in range(100):
            g = random_connected_graph(rng.randint(2, 7), 0.5, rng)
            b = [rng.randint(0, 2) for _ in range(g.n)]
            res = solve_maxcost_bmatching_kernel(g, b, [1] * g.m)
            assert res.cardinality == solve_bmatching_kernel(g, b).cardinality

    def test_against_enumeration(self):
        rng = random.Random(10)
        for _ in range(150):
            g = random_connected_graph(rng.randint(2, 6), 0.5, rng)
            if g.m > 9:
                continue
            b = [rng.randint(0, 2) for _ in range(g.n)]
            c = [rng.randint(1, 3) for _ in range(g.m)]
            sols = list(all_bmatchings(g, b))
            card = max(map(sum, sols))
            cost = max(sum(ci * xi for ci, xi in zip(c, x)) for x in sols if sum(x) == card)
            for res in (solve_maxcost_bmatching_kernel(g, b, c), solve_maxcost_bmatching_ilp(g, b, c)):
                assert validate_bmatching(g, b, res.x) is None
                assert (res.cardinality, res.cost) == (card, cost)

    def test_kernel_dispatch_counts_calls(self):
        k = Kernel(expand_limit=4)
        k.bmatching(TRIANGLE, [2, 2, 2])
        k.maxcost(TRIANGLE, [2, 2, 2], [1, 1, 2])
        k.maxcost(TRIANGLE, [1, 1, 1], [1, 1, 2])
        assert (k.calls, k.cost_calls) == (1, 2)
