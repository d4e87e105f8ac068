import random

import pytest

from splitmatch.gadget import (
    INTERNAL_COST,
    GadgetError,
    build_gadget_component,
    contract_all,
    contract_module,
    is_normalized,
    module_degrees,
    module_demand,
    normalize,
)
from splitmatch.graph import validate_bmatching
from splitmatch.kernel import Kernel, solve_bmatching_kernel
from splitmatch.profile import MuProfile, mu_from_profile
from splitmatch.testkit import random_connected_graph


def weights(h, pairs):
    """Edge-indexed weights from ``{(u, v): w}`` on ids of h."""
    x = [0] * h.graph.m
    for (u, v), w in pairs.items():
        x[h.graph.edge_id(u, v)] = w
    return x


def cost(h, x):
    return sum(c * w for c, w in zip(h.cost, x))


class TestBuild:
    # W side of the P4 split: marker 10 stands for {0, 1}, and 10-2-3 is a path
    def test_p4_w_side(self):
        h = build_gadget_component([10, 2, 3], [(10, 2), (2, 3)], {10: MuProfile(1, 0, 0)}, {2: 1, 3: 1})
        (md,) = h.modules
        assert (md.u1, md.u2, md.u3) == (2, 3, 4)
        assert [h.b[u] for u in (md.u1, md.u2, md.u3)] == [0, 0, 0]
        assert md.frontier == (0,)  # label 2
        assert sorted(h.graph.edges) == [(0, 1), (0, 2), (0, 3), (0, 4), (3, 4)]
        assert h.cost[h.graph.edge_id(3, 4)] == INTERNAL_COST
        assert h.labels == [2, 3, None, None, None]

    def test_caps_follow_profile(self):
        h = build_gadget_component([10, 2, 3], [(10, 2), (2, 3)], {10: MuProfile(1, 1, 1)}, {2: 1, 3: 1})
        md = h.modules[0]
        assert [h.b[u] for u in (md.u1, md.u2, md.u3)] == [1, 1, 1]
        assert h.graph.n == 5

    def test_no_children(self):
        h = build_gadget_component([0, 1, 2], [(0, 1), (1, 2)], {}, {0: 1, 1: 2, 2: 1})
        assert h.graph.n == 3 and list(h.graph.edges) == [(0, 1), (1, 2)]
        assert h.b == [1, 2, 1] and h.modules == []

    def test_parent_starts_at_zero(self):
        h = build_gadget_component([0, 1, 9], [(0, 1), (1, 9)], {}, {0: 1, 1: 1}, parent_marker=9)
        assert h.b[h.parent] == 0
        assert h.with_parent_capacity(4)[h.parent] == 4

    def test_profile_for_unknown_marker(self):
        with pytest.raises(GadgetError) as exc:
            build_gadget_component([0, 1], [(0, 1)], {7: MuProfile(0, 1, 1)}, {0: 1, 1: 1})
        assert exc.value.kind == "missing-profile"

    def test_at_most_three_times_larger(self):
        rng = random.Random(5)
        for _ in range(100):
            n = rng.randint(2, 8)
            g = random_connected_graph(n, 0.5, rng)
            prof = {v: MuProfile(0, 1, 1) for v in range(n) if rng.random() < 0.7}
            h = build_gadget_component(list(range(n)), g.edges, prof, lambda v: 1)
            assert h.graph.n <= 3 * n


# component labels: v' = 0, v'' = 1, child marker 5
FRONT = ([0, 1, 5], [(0, 1), (0, 5), (1, 5)])


def front(profile, caps=(2, 2)):
    return build_gadget_component(*FRONT, {5: profile}, {0: caps[0], 1: caps[1]})


class TestNormalize:
    def test_rule1_moves_unit_to_u1(self):
        h = front(MuProfile(0, 1, 1))
        md = h.modules[0]
        x = weights(h, {(md.u2, 0): 1})
        assert not is_normalized(h, x, md)
        y, stats = normalize(h, x)
        assert module_degrees(h, y, md)[:3] == (1, 0, 0)
        assert y[h.graph.edge_id(md.u1, 0)] == 1
        assert stats.passes[5] == 1

    def test_rule2_rebalances(self):
        h = front(MuProfile(0, 0, 2))
        md = h.modules[0]
        x = weights(h, {(md.u2, 0): 1, (md.u2, 1): 1})
        y, _ = normalize(h, x)
        d1, d2, d3, _ = module_degrees(h, y, md)
        assert (d2, d3) == (1, 1)
        assert sum(y) == sum(x)

    def test_rule3_uses_internal_edge(self):
        h = front(MuProfile(0, 0, 1))
        md = h.modules[0]
        x = weights(h, {(md.u2, 0): 1})
        y, stats = normalize(h, x)
        assert stats.rule3 == 1
        assert y[h.graph.edge_id(md.u2, md.u3)] == 1
        assert cost(h, y) > cost(h, x)

    def test_fixpoint(self):
        h = front(MuProfile(0, 1, 1))
        md = h.modules[0]
        x = weights(h, {(md.u1, 0): 1, (md.u2, md.u3): 1})
        y, stats = normalize(h, x)
        assert y == x and stats.passes[5] == 0

    def test_pass_limit(self):
        h = front(MuProfile(0, 0, 2))
        md = h.modules[0]
        x = weights(h, {(md.u2, 0): 2, (md.u2, 1): 0})
        with pytest.raises(GadgetError) as exc:
            normalize(h, x, max_passes=0)
        assert exc.value.kind == "not-cost-maximal"

    def test_max_cardinality_inputs(self):
        rng = random.Random(2)
        corrected = 0
        for _ in range(400):
            n = rng.randint(2, 6)
            g = random_connected_graph(n, rng.uniform(0.3, 0.9), rng)
            prof = {m: MuProfile(0, rng.randint(0, 3), rng.randint(0, 3)) for m in range(n) if rng.random() < 0.5}
            h = build_gadget_component(list(range(n)), g.edges, prof, {v: rng.randint(0, 3) for v in range(n)})
            x = solve_bmatching_kernel(h.graph, h.b).x
            corrected += any(not is_normalized(h, x, md) for md in h.modules)
            y, _ = normalize(h, x, max_passes=10)
            assert sum(y) == sum(x)
            assert cost(h, y) >= cost(h, x)
            assert validate_bmatching(h.graph, h.b, y) is None
            assert all(is_normalized(h, y, md) for md in h.modules)
        assert corrected > 50


class TestContract:
    def test_empty_module(self):
        h = front(MuProfile(0, 0, 0))
        md = h.modules[0]
        x = weights(h, {(0, 1): 1})
        h2, x2, demand = contract_module(h, x, md)
        assert demand == 0 and sum(x2) == 1

    def test_spread_load(self):
        h = front(MuProfile(0, 1, 1))
        md = h.modules[0]
        x = weights(h, {(md.u1, 0): 1, (md.u2, 0): 1, (md.u3, 1): 1})
        h2, x2, demand = contract_module(h, x, md)
        assert demand == 3
        marker = h2.labels.index(5)
        got = {h2.labels[v] if u == marker else h2.labels[u]: w for (u, v), w in zip(h2.graph.edges, x2) if marker in (u, v)}
        assert got == {0: 2, 1: 1}
        assert h2.b[marker] == 3

    def test_internal_edge_only(self):
        # u2 busy on the internal edge alone contributes nothing to the demand
        h = front(MuProfile(0, 1, 1))
        md = h.modules[0]
        x = weights(h, {(md.u1, 0): 1, (md.u2, md.u3): 1})
        assert module_demand(h, x, md) == 1
        _, x2, demand = contract_module(h, x, md)
        assert demand == 1
        assert sum(x2) == sum(x) - 1

    def test_needs_normalized_input(self):
        h = front(MuProfile(0, 1, 1))
        md = h.modules[0]
        with pytest.raises(GadgetError) as exc:
            module_demand(h, weights(h, {(md.u2, 0): 1}), md)
        assert exc.value.kind == "not-normalized"

    def test_contract_all_invariants(self):
        rng = random.Random(31)
        kernel = Kernel()
        for _ in range(300):
            n = rng.randint(2, 6)
            g = random_connected_graph(n, rng.uniform(0.3, 0.9), rng)
            prof = {
                m: MuProfile(rng.randint(0, 3), rng.randint(0, 2), rng.randint(0, 2)) for m in range(n) if rng.random() < 0.5
            }
            h = build_gadget_component(list(range(n)), g.edges, prof, {v: rng.randint(0, 3) for v in range(n)})
            res = kernel.maxcost(h.graph, h.b, h.cost)
            y, _ = normalize(h, res.x)
            pairs, demands, lost = contract_all(h, y)
            assert sum(pairs.values()) + lost == res.cardinality
            for md in h.modules:
                d1, d2, _, x23 = module_degrees(h, y, md)
                c1p, c2p = d1, d2 - x23
                assert demands[md.marker] == c1p + 2 * c2p
                if c2p > 0:
                    assert c1p == md.c1
                p = prof[md.marker]
                assert mu_from_profile(p, demands[md.marker]) == p.mu0 + c1p + c2p
