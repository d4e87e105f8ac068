import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from splitmatch.graph import GraphError, build_graph
from splitmatch.splitdecomp import (
    Component,
    SplitTree,
    decompose_minimal,
    find_split,
    is_split,
    recompose,
    split_width,
    verify_decomposition,
)
from splitmatch.testkit import gen_bounded_splitwidth, gen_distance_hereditary, random_connected_graph


def cycle(n):
    return build_graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n):
    return build_graph(n, list(itertools.combinations(range(n), 2)))


P4 = build_graph(4, [(0, 1), (1, 2), (2, 3)])


def has_split_exhaustive(g):
    rest = list(range(1, g.n))
    for r in range(1, g.n - 2):
        for extra in itertools.combinations(rest, r):
            if is_split(g, (0, *extra)):
                return True
    return False


class TestFindSplit:
    def test_c4(self):
        s = find_split(cycle(4))
        assert {s.U, s.W} == {(0, 2), (1, 3)}

    def test_c5_prime(self):
        assert find_split(cycle(5)) is None
        assert not has_split_exhaustive(cycle(5))

    def test_star(self):
        g = build_graph(4, [(0, 1), (0, 2), (0, 3)])
        s = find_split(g)
        assert s is not None and is_split(g, s.U)

    def test_frontiers(self):
        s = find_split(P4)
        assert is_split(P4, s.U)
        assert all(P4.has_edge(c, d) for c in s.C for d in s.D)

    def test_disconnected(self):
        with pytest.raises(GraphError):
            find_split(build_graph(4, [(0, 1), (2, 3)]))

    def test_small_graphs_have_no_split(self):
        assert find_split(complete(3)) is None

    def test_agrees_with_exhaustive_search(self):
        rng = random.Random(11)
        for _ in range(500):
            g = random_connected_graph(rng.randint(4, 8), rng.uniform(0.15, 0.85), rng)
            s = find_split(g)
            assert (s is not None) == has_split_exhaustive(g)
            if s is not None:
                assert is_split(g, s.U)


class TestDecompose:
    def test_c5_single_component(self):
        t = decompose_minimal(cycle(5))
        assert len(t) == 1
        assert split_width(cycle(5)) == 5

    def test_k4_triangles(self):
        t = decompose_minimal(complete(4))
        assert all(len(c.vertices) == 3 and len(c.edges) == 3 for c in t.components)
        assert verify_decomposition(complete(4), t) is None

    def test_p4(self):
        t = decompose_minimal(P4)
        assert [len(c.vertices) for c in t.components] == [3, 3]
        assert len(t.edges) == 1
        assert verify_decomposition(P4, t) is None

    def test_markers_labelled_after_vertices(self):
        t = decompose_minimal(P4)
        markers = [v for c in t.components for v in c.vertices if t.is_marker(v)]
        assert all(v >= P4.n for v in markers)
        assert t.label_name(markers[0]).startswith("s")

    def test_root_holds_vertex_zero(self):
        t = decompose_minimal(gen_distance_hereditary(40, 3))
        assert 0 in t.components[t.root].vertices

    def test_postorder_children_first(self):
        t = decompose_minimal(gen_distance_hereditary(60, 4))
        seen = set()
        for i in t.postorder():
            for e in t.child_edges[i]:
                assert t.edges[e].child in seen
            seen.add(i)
        assert len(seen) == len(t)

    def test_dh_width_two(self):
        assert split_width(gen_distance_hereditary(50, 7)) == 2

    def test_generated_cograph(self):
        # joins and disjoint unions of single vertices
        g = build_graph(5, [(0, 2), (0, 3), (1, 2), (1, 3), (2, 4), (3, 4), (0, 4), (1, 4)])
        assert split_width(g) == 2

    def test_bounded_width_with_c5_pieces(self):
        g = gen_bounded_splitwidth(5, 25, 1, piece=cycle(5))
        assert split_width(g) <= 5

    def test_recompose(self):
        g = gen_bounded_splitwidth(4, 30, 2)
        assert recompose(decompose_minimal(g)) == g


class TestVerifyDecomposition:
    def test_coverage_violation(self):
        t = decompose_minimal(P4)
        comps = [t.components[0], Component(t.components[1].vertices[1:], ())]
        bad = SplitTree(t.n, comps, [], [])
        v = verify_decomposition(P4, bad)
        assert v is not None and v.kind == "vertex coverage"

    def test_not_a_split(self):
        # the tree of a diamond with a pendant, checked against the graph
        # that lacks the join edge 1-3
        g = build_graph(5, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (1, 2)])
        h = build_graph(5, [(0, 1), (0, 2), (2, 3), (3, 4), (1, 2)])
        v = verify_decomposition(h, decompose_minimal(g))
        assert v is not None and v.kind == "not a split"

    def test_component_edge_missing(self):
        g = build_graph(5, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (1, 2)])
        h = build_graph(5, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)])
        v = verify_decomposition(h, decompose_minimal(g))
        assert v is not None and v.kind == "recompose"

    @pytest.mark.parametrize("seed", range(20))
    def test_random_graphs_verify(self, seed):
        rng = random.Random(seed)
        g = random_connected_graph(rng.randint(4, 12), rng.uniform(0.2, 0.8), rng)
        assert verify_decomposition(g, decompose_minimal(g)) is None


@given(st.integers(2, 300), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_dh_components_have_order_three(n, seed):
    g = gen_distance_hereditary(n, seed)
    t = decompose_minimal(g)
    assert all(len(c.vertices) <= 3 for c in t.components) or n < 4
    assert verify_decomposition(g, t) is None


@given(st.integers(3, 7), st.integers(4, 50), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_bounded_width_generator_contract(k, n, seed):
    g = gen_bounded_splitwidth(k, n, seed)
    t = decompose_minimal(g)
    assert max(len(c.vertices) for c in t.components) <= max(3, k)
    assert verify_decomposition(g, t) is None
