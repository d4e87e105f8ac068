"""
Exact matching kernels used as black boxes on small graphs.

Three routes are provided:

- ``max_matching``: Edmonds' blossom algorithm for maximum-cardinality
  matching in general graphs.
- ``solve_bmatching_kernel`` / ``solve_maxcost_bmatching_kernel``: reduce
  b-matching to ordinary matching on the expanded graph, where vertex v is
  replaced by b_v pairwise nonadjacent copies. Pseudo-polynomial, guarded by
  a budget on the number of expanded vertices.
- ``solve_bmatching_ilp`` / ``solve_maxcost_bmatching_ilp``: the same
  problems as small integer programs (HiGHS through scipy). Polynomial in
  log(capacity), used when capacities are too large to expand.

``Kernel`` dispatches between the routes and counts calls.
"""

from __future__ import annotations

from collections import deque
from collections.abc import Sequence
from typing import NamedTuple, Optional

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import csr_array

from .graph import Graph, truncate_capacities, validate_bmatching

DEFAULT_BUDGET = 50_000


class KernelBudgetError(RuntimeError):
    kind = "kernel-budget"


class KernelResult(NamedTuple):
    x: list[int]
    cardinality: int
    cost: Optional[int] = None


# ---------------------------------------------------------------------------
# Edmonds' blossom algorithm
# ---------------------------------------------------------------------------


def _greedy_matching(adj: Sequence[Sequence[int]], mate: list[int]) -> None:
    # Match low-degree vertices first; leaves fewer augmentations for blossom.
    order = sorted(range(len(adj)), key=lambda v: len(adj[v]))
    for v in order:
        if mate[v] != -1:
            continue
        for u in adj[v]:
            if mate[u] == -1:
                mate[v] = u
                mate[u] = v
                break


def blossom_matching(adj: Sequence[Sequence[int]], mate: Optional[list[int]] = None) -> list[int]:
    """Maximum-cardinality matching of a general graph.

    Parameters:
        adj: Adjacency lists over vertices 0..n-1 (no loops).
        mate: Optional initial matching (``mate[v]`` is the partner or -1);
            it is modified in place and extended to a maximum matching.

    Returns:
        The mate array.
    """
    n = len(adj)
    if mate is None:
        mate = [-1] * n
        _greedy_matching(adj, mate)

    base = list(range(n))
    parent = [-1] * n
    in_tree = [False] * n
    in_blossom = [False] * n

    def lca(a: int, b: int) -> int:
        seen = set()
        while True:
            a = base[a]
            seen.add(a)
            if mate[a] == -1:
                break
            a = parent[mate[a]]
        while True:
            b = base[b]
            if b in seen:
                return b
            b = parent[mate[b]]

    def mark_path(v: int, b: int, child: int) -> None:
        while base[v] != b:
            in_blossom[base[v]] = True
            in_blossom[base[mate[v]]] = True
            parent[v] = child
            child = mate[v]
            v = parent[mate[v]]

    def find_path(root: int, touched: list[int]) -> int:
        touched.append(root)
        in_tree[root] = True
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for to in adj[v]:
                if base[v] == base[to] or mate[v] == to:
                    continue
                if to == root or (mate[to] != -1 and parent[mate[to]] != -1):
                    cur = lca(v, to)
                    for i in touched:
                        in_blossom[i] = False
                    mark_path(v, cur, to)
                    mark_path(to, cur, v)
                    for i in touched:
                        if in_blossom[base[i]]:
                            base[i] = cur
                            if not in_tree[i]:
                                in_tree[i] = True
                                queue.append(i)
                elif parent[to] == -1:
                    parent[to] = v
                    touched.append(to)
                    if mate[to] == -1:
                        return to
                    nxt = mate[to]
                    in_tree[nxt] = True
                    touched.append(nxt)
                    queue.append(nxt)
        return -1

    for root in range(n):
        if mate[root] != -1:
            continue
        touched: list[int] = []
        v = find_path(root, touched)
        while v != -1:
            pv = parent[v]
            ppv = mate[pv]
            mate[v] = pv
            mate[pv] = v
            v = ppv
        for i in touched:
            base[i] = i
            parent[i] = -1
            in_tree[i] = False
            in_blossom[i] = False
    return mate


def max_matching(g: Graph) -> KernelResult:
    """Maximum-cardinality matching of g as a 0/1 edge-weight vector."""
    adj = [[u for u, _ in g.adj[v]] for v in range(g.n)]
    mate = blossom_matching(adj)
    x = [0] * g.m
    for v in range(g.n):
        u = mate[v]
        if u > v:
            x[g.edge_id(v, u)] = 1
    return KernelResult(x, sum(x), None)


# ---------------------------------------------------------------------------
# Expanded-graph reduction
# ---------------------------------------------------------------------------


class Expansion:
    """Expanded graph G_b: vertex v becomes copies offset[v]..offset[v]+b_v-1."""

    def __init__(self, g: Graph, b: Sequence[int], budget: int = DEFAULT_BUDGET) -> None:
        total = sum(b)
        if total > budget:
            raise KernelBudgetError(f"expanded graph would have {total} vertices (budget {budget})")
        self.g = g
        self.b = list(b)
        self.offset = [0] * (g.n + 1)
        for v in range(g.n):
            self.offset[v + 1] = self.offset[v] + b[v]
        self.owner = [v for v in range(g.n) for _ in range(b[v])]
        self.size = total

    def copies(self, v: int) -> range:
        return range(self.offset[v], self.offset[v + 1])

    def adjacency(self) -> list[list[int]]:
        shared = []
        for v in range(self.g.n):
            nb: list[int] = []
            for u, _ in self.g.adj[v]:
                nb.extend(self.copies(u))
            shared.append(nb)
        # copies of one vertex share one neighbor list (read-only)
        return [shared[self.owner[i]] for i in range(self.size)]

    def lift(self, x: Sequence[int]) -> list[int]:
        """Realize a b-matching as a matching on the copies."""
        mate = [-1] * self.size
        nxt = self.offset[:-1]
        nxt = list(nxt)
        for (u, v), w in zip(self.g.edges, x):
            for _ in range(w):
                a, c = nxt[u], nxt[v]
                nxt[u] += 1
                nxt[v] += 1
                mate[a] = c
                mate[c] = a
        return mate

    def fold(self, mate: Sequence[int]) -> list[int]:
        x = [0] * self.g.m
        for a, c in enumerate(mate):
            if c > a:
                x[self.g.edge_id(self.owner[a], self.owner[c])] += 1
        return x


def greedy_bmatching(g: Graph, b: Sequence[int]) -> list[int]:
    res = list(b)
    x = [0] * g.m
    for e, (u, v) in enumerate(g.edges):
        w = min(res[u], res[v])
        if w > 0:
            x[e] = w
            res[u] -= w
            res[v] -= w
    return x


def solve_bmatching_kernel(g: Graph, b: Sequence[int], budget: int = DEFAULT_BUDGET) -> KernelResult:
    """Maximum-cardinality b-matching by blossom on the expanded graph.

    Capacities are truncated first (this never changes the optimum).
    Raises KernelBudgetError if the expanded graph exceeds ``budget``
    vertices.
    """
    bt = truncate_capacities(g, b)
    ex = Expansion(g, bt, budget)
    mate = ex.lift(greedy_bmatching(g, bt))
    blossom_matching(ex.adjacency(), mate)
    x = ex.fold(mate)
    return KernelResult(x, sum(x), None)


def solve_maxcost_bmatching_kernel(
    g: Graph, b: Sequence[int], c: Sequence[int], budget: int = DEFAULT_BUDGET
) -> KernelResult:
    """Maximum-cost b-matching among the maximum-cardinality ones.

    Every copy of edge e gets weight K + c_e with K = 1 + (sum of c over
    expanded edges), so that one more matched edge always outweighs any
    cost difference; a maximum-weight matching of the expanded graph is
    then folded back.
    """
    import networkx as nx

    bt = truncate_capacities(g, b)
    ex = Expansion(g, bt, budget)
    big = 1 + sum(c[e] * bt[u] * bt[v] for e, (u, v) in enumerate(g.edges))
    h = nx.Graph()
    h.add_nodes_from(range(ex.size))
    for e, (u, v) in enumerate(g.edges):
        wt = big + c[e]
        for a in ex.copies(u):
            for d in ex.copies(v):
                h.add_edge(a, d, weight=wt)
    mate = [-1] * ex.size
    for a, d in nx.max_weight_matching(h):
        mate[a] = d
        mate[d] = a
    x = ex.fold(mate)
    return KernelResult(x, sum(x), sum(ci * xi for ci, xi in zip(c, x)))


# ---------------------------------------------------------------------------
# Integer programs
# ---------------------------------------------------------------------------


def _incidence(g: Graph) -> csr_array:
    rows = []
    cols = []
    for e, (u, v) in enumerate(g.edges):
        rows += [u, v]
        cols += [e, e]
    return csr_array((np.ones(len(rows)), (rows, cols)), shape=(g.n, g.m))


def _solve_milp(g: Graph, b: Sequence[int], objective: np.ndarray, extra=None) -> list[int]:
    cons = [LinearConstraint(_incidence(g), -np.inf, np.asarray(b, dtype=float))]
    if extra is not None:
        cons.append(extra)
    res = milp(
        -objective,
        constraints=cons,
        integrality=np.ones(g.m),
        bounds=Bounds(0, np.inf),
        options={"mip_rel_gap": 0.0},
    )
    if res.x is None:
        raise RuntimeError(f"integer program failed: {res.message}")
    x = [int(round(v)) for v in res.x]
    if validate_bmatching(g, b, x) is not None:
        raise RuntimeError("integer program returned an infeasible point")
    return x


def solve_bmatching_ilp(g: Graph, b: Sequence[int]) -> KernelResult:
    if g.m == 0:
        return KernelResult([], 0, None)
    bt = truncate_capacities(g, b)
    x = _solve_milp(g, bt, np.ones(g.m))
    return KernelResult(x, sum(x), None)


def solve_maxcost_bmatching_ilp(
    g: Graph, b: Sequence[int], c: Sequence[int], cardinality: Optional[int] = None
) -> KernelResult:
    """Two-stage integer program: fix the optimal cardinality, then maximize cost."""
    if g.m == 0:
        return KernelResult([], 0, 0)
    bt = truncate_capacities(g, b)
    if cardinality is None:
        cardinality = solve_bmatching_ilp(g, bt).cardinality
    fix = LinearConstraint(np.ones((1, g.m)), cardinality, cardinality)
    x = _solve_milp(g, bt, np.asarray(c, dtype=float), extra=fix)
    if sum(x) != cardinality:
        raise RuntimeError("integer program lost cardinality")
    return KernelResult(x, sum(x), sum(ci * xi for ci, xi in zip(c, x)))


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------


class Kernel:
    """Exact b-matching black box with call accounting.

    Instances whose truncated capacities sum to at most ``expand_limit`` go
    through the expanded graph; larger ones through the integer programs
    (the costed route first fixes the optimal cardinality, then maximizes
    cost).
    """

    def __init__(self, expand_limit: int = 48, budget: int = DEFAULT_BUDGET) -> None:
        self.expand_limit = expand_limit
        self.budget = budget
        self.calls = 0
        self.cost_calls = 0

    def bmatching(self, g: Graph, b: Sequence[int]) -> KernelResult:
        self.calls += 1
        bt = truncate_capacities(g, b)
        if sum(bt) <= min(self.expand_limit, self.budget):
            return solve_bmatching_kernel(g, bt, self.budget)
        return solve_bmatching_ilp(g, bt)

    def maxcost(self, g: Graph, b: Sequence[int], c: Sequence[int]) -> KernelResult:
        self.cost_calls += 1
        bt = truncate_capacities(g, b)
        if sum(bt) <= min(self.expand_limit, self.budget):
            return solve_maxcost_bmatching_kernel(g, bt, c, self.budget)
        card = self.bmatching(g, bt).cardinality
        self.calls -= 1
        return solve_maxcost_bmatching_ilp(g, bt, c, cardinality=card)
