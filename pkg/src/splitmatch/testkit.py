"""
Oracles and instance generators for testing.

The oracle does not share code with the solver or the kernels: it expands
the graph (b_v copies per vertex) and runs networkx's matching routine, and
for small graphs it is cross-checked by an exhaustive search over edge
weights.
"""

from __future__ import annotations

import random
from collections.abc import Iterator, Sequence
from functools import lru_cache
from typing import NamedTuple, Optional

import networkx as nx

from .graph import Graph, build_graph, is_connected, validate_bmatching

ORACLE_BUDGET = 5_000
EXHAUSTIVE_MAX_N = 8


class OracleError(RuntimeError):
    kind = "oracle-budget"


class OracleResult(NamedTuple):
    cardinality: int
    witness: list[int]


def _expanded_matching(g: Graph, b: Sequence[int], budget: int) -> list[int]:
    caps = [min(b[v], sum(b[u] for u in g.neighbors(v))) for v in range(g.n)]
    if sum(caps) > budget:
        raise OracleError(f"expanded graph has {sum(caps)} vertices (budget {budget})")
    h = nx.Graph()
    for v in range(g.n):
        h.add_nodes_from((v, i) for i in range(caps[v]))
    for u, v in g.edges:
        h.add_edges_from(((u, i), (v, j)) for i in range(caps[u]) for j in range(caps[v]))
    x = [0] * g.m
    for (u, _), (v, _) in nx.max_weight_matching(h, maxcardinality=True):
        x[g.edge_id(u, v)] += 1
    return x


def exhaustive_bmatching(g: Graph, b: Sequence[int]) -> int:
    """Maximum cardinality by trying every weight on every edge (small graphs)."""
    edges = g.edges

    @lru_cache(maxsize=None)
    def best(k: int, res: tuple[int, ...]) -> int:
        if k == len(edges):
            return 0
        u, v = edges[k]
        top = 0
        for w in range(min(res[u], res[v]) + 1):
            r = list(res)
            r[u] -= w
            r[v] -= w
            top = max(top, w + best(k + 1, tuple(r)))
        return top

    return best(0, tuple(b))


def oracle_bmatching(g: Graph, b: Sequence[int], budget: int = ORACLE_BUDGET) -> OracleResult:
    """Maximum b-matching by expansion; cross-checked exhaustively when n <= 8."""
    x = _expanded_matching(g, b, budget)
    if validate_bmatching(g, b, x) is not None:
        raise AssertionError("oracle witness is invalid")
    card = sum(x)
    if g.n <= EXHAUSTIVE_MAX_N and exhaustive_bmatching(g, b) != card:
        raise AssertionError("expansion and exhaustive search disagree")
    return OracleResult(card, x)


def all_bmatchings(g: Graph, b: Sequence[int]) -> Iterator[list[int]]:
    """Every b-matching of (g, b); only sensible for tiny instances."""
    x = [0] * g.m
    res = list(b)

    def rec(k: int) -> Iterator[list[int]]:
        if k == g.m:
            yield list(x)
            return
        u, v = g.edges[k]
        for w in range(min(res[u], res[v]) + 1):
            x[k] = w
            res[u] -= w
            res[v] -= w
            yield from rec(k + 1)
            res[u] += w
            res[v] += w
        x[k] = 0

    yield from rec(0)


def has_augmenting_path(g: Graph, x: Sequence[int]) -> bool:
    """Search for an augmenting path of a 0/1 matching by brute-force DFS over simple paths."""
    mate = [-1] * g.n
    for (u, v), w in zip(g.edges, x):
        if w:
            mate[u], mate[v] = v, u
    free = [v for v in range(g.n) if mate[v] == -1]

    def dfs(v: int, seen: set[int]) -> bool:
        # v is reached by a non-matching edge; continue along its matching edge
        for z in g.neighbors(v):
            if z in seen:
                continue
            if mate[z] == -1:
                return True
            m = mate[z]
            if m in seen:
                continue
            if dfs(m, seen | {z, m}):
                return True
        return False

    return any(dfs(s, {s}) for s in free)


def sweep_mu(g: Graph, b_partial: Sequence[int], w: int, t_max: int) -> list[int]:
    """[mu(0), ..., mu(t_max)] for vertex w, one oracle call per t."""
    out = []
    for t in range(t_max + 1):
        b = list(b_partial)
        b[w] = t
        out.append(oracle_bmatching(g, b).cardinality)
    return out


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

DH_PROBS = (0.5, 0.25, 0.25)  # pendant, true twin, false twin


def gen_distance_hereditary(n: int, seed: int, probs: Sequence[float] = DH_PROBS) -> Graph:
    """Connected distance-hereditary graph grown from K2.

    Each new vertex picks a random existing vertex and becomes its pendant
    neighbor, its true twin or its false twin.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    rng = random.Random(seed)
    adj: list[list[int]] = [[1], [0]]
    for v in range(2, n):
        u = rng.randrange(v)
        r = rng.random()
        if r < probs[0]:
            nb = [u]
        elif r < probs[0] + probs[1]:
            nb = adj[u] + [u]
        else:
            nb = list(adj[u])
        adj.append(nb)
        for z in nb:
            adj[z].append(v)
    return build_graph(n, sorted((u, v) for u in range(n) for v in adj[u] if u < v))


def random_connected_graph(n: int, p: float, rng: random.Random) -> Graph:
    """G(n, p) conditioned on connectivity by adding a random spanning tree."""
    edges = {(rng.randrange(v), v) for v in range(1, n)}
    edges |= {(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p}
    return build_graph(n, sorted(edges))


def _random_piece(k: int, rng: random.Random, prime: Optional[Graph] = None) -> Graph:
    if prime is not None:
        return prime
    order = rng.randint(3, k)
    return random_connected_graph(order, rng.random(), rng)


def gen_bounded_splitwidth(k: int, target_n: int, seed: int, piece: Optional[Graph] = None) -> Graph:
    """Connected graph of split-width at most k.

    Starts from one random piece of order 3..k and repeatedly glues a new
    piece along a split: a vertex p of the graph so far and a vertex q of
    the piece are deleted and N(p) is joined completely to N(q). Every
    piece then survives as a union of split components, so no prime
    component exceeds k vertices. ``piece`` fixes the piece graph.
    """
    if k < 3:
        raise ValueError("need k >= 3")
    rng = random.Random(seed)
    g = _random_piece(k, rng, piece)
    adj = [set(g.neighbors(v)) for v in range(g.n)]
    alive = list(range(g.n))
    while len(alive) < target_n:
        h = _random_piece(k, rng, piece)
        p = rng.choice(alive)
        q = rng.randrange(h.n)
        base = len(adj)
        for v in range(h.n):
            adj.append({base + z for z in h.neighbors(v)})
        np_ = adj[p] - {p}
        nq = {base + z for z in h.neighbors(q)}
        for a in np_:
            adj[a].discard(p)
        for c in nq:
            adj[c].discard(base + q)
        adj[p] = set()
        adj[base + q] = set()
        for a in np_:
            for c in nq:
                adj[a].add(c)
                adj[c].add(a)
        alive = [v for v in alive if v != p] + [base + v for v in range(h.n) if v != q]
    index = {v: i for i, v in enumerate(alive)}
    edges = sorted((index[u], index[v]) for u in alive for v in adj[u] if u < v)
    out = build_graph(len(alive), edges)
    assert is_connected(out)
    return out
