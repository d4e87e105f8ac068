"""
Graphs, capacities and b-matchings.

A graph has dense vertex ids 0..n-1 and stable edge ids 0..m-1 assigned in
input order. A capacity map is a plain list of nonnegative ints indexed by
vertex; a b-matching is a plain list of nonnegative ints indexed by edge.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Sequence
from typing import NamedTuple, Optional

# Dichotomic search doubles capacities transiently.
MAX_TOTAL_CAPACITY = 2**62


class GraphError(ValueError):
    """Rejected graph or capacity input; ``kind`` is a short machine code."""

    def __init__(self, kind: str, message: str) -> None:
        super().__init__(f"{kind}: {message}")
        self.kind = kind


class Graph:
    """Simple undirected graph encoded as adjacency lists.

    Attributes:
        n: Number of vertices.
        edges: Tuple of ``(u, v)`` pairs with ``u < v``, indexed by edge id.
        adj: For every vertex, a tuple of ``(neighbor, edge_id)`` pairs.
    """

    __slots__ = ("n", "edges", "adj", "_eid")

    def __init__(self, n: int, edges: Sequence[tuple[int, int]]) -> None:
        self.n = n
        self.edges = tuple(edges)
        adj: list[list[tuple[int, int]]] = [[] for _ in range(n)]
        eid: dict[tuple[int, int], int] = {}
        for k, (u, v) in enumerate(self.edges):
            adj[u].append((v, k))
            adj[v].append((u, k))
            eid[(u, v)] = k
        self.adj = tuple(tuple(a) for a in adj)
        self._eid = eid

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_id(self, u: int, v: int) -> Optional[int]:
        """Return the id of edge {u, v}, or None if absent."""
        if u > v:
            u, v = v, u
        return self._eid.get((u, v))

    def has_edge(self, u: int, v: int) -> bool:
        return self.edge_id(u, v) is not None

    def neighbors(self, v: int) -> list[int]:
        return [u for u, _ in self.adj[v]]

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def build_graph(n: int, edge_list: Iterable[tuple[int, int]]) -> Graph:
    """Build a simple graph on vertices 0..n-1.

    Duplicate edges are dropped (first occurrence keeps its position);
    loops and out-of-range endpoints raise GraphError.
    """
    if n < 0:
        raise GraphError("vertex-range", f"negative vertex count {n}")
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    for u, v in edge_list:
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError("vertex-range", f"edge ({u}, {v}) outside 0..{n - 1}")
        if u == v:
            raise GraphError("loop", f"loop at vertex {u}")
        key = (u, v) if u < v else (v, u)
        if key not in seen:
            seen.add(key)
            edges.append(key)
    return Graph(n, edges)


def check_capacities(g: Graph, b: Sequence[int]) -> list[int]:
    """Return b as a list after checking length, sign and total size."""
    if len(b) != g.n:
        raise GraphError("capacity", f"expected {g.n} capacities, got {len(b)}")
    out = [int(c) for c in b]
    for v, c in enumerate(out):
        if c < 0:
            raise GraphError("capacity", f"negative capacity {c} at vertex {v}")
    if sum(out) >= MAX_TOTAL_CAPACITY:
        raise GraphError("capacity", "total capacity exceeds 2**62")
    return out


class Violation(NamedTuple):
    """First reason a weight vector is not a b-matching."""

    kind: str  # "length", "negative", "capacity"
    vertex: Optional[int]
    edge: Optional[int]
    detail: str


def degrees(g: Graph, x: Sequence[int]) -> list[int]:
    deg = [0] * g.n
    for (u, v), w in zip(g.edges, x):
        deg[u] += w
        deg[v] += w
    return deg


def validate_bmatching(g: Graph, b: Sequence[int], x: Sequence[int]) -> Optional[Violation]:
    """Check that x is a b-matching of (g, b).

    Returns None when every weight is a nonnegative integer and every
    vertex degree is within capacity, otherwise the first violation found
    (edges are scanned before vertices).
    """
    if len(x) != g.m:
        return Violation("length", None, None, f"expected {g.m} weights, got {len(x)}")
    for e, w in enumerate(x):
        if w < 0 or int(w) != w:
            return Violation("negative", None, e, f"edge {e} has weight {w}")
    deg = degrees(g, x)
    for v in range(g.n):
        if deg[v] > b[v]:
            return Violation("capacity", v, None, f"vertex {v} has degree {deg[v]} > {b[v]}")
    return None


def cardinality(x: Sequence[int]) -> int:
    return sum(x)


def truncate_capacities(g: Graph, b: Sequence[int]) -> list[int]:
    """Cap every b_v by the total capacity of its neighborhood.

    A vertex cannot absorb more than its neighbors offer, so the set of
    b-matchings is unchanged.
    """
    out = []
    for v in range(g.n):
        offer = 0
        for u, _ in g.adj[v]:
            offer += b[u]
            if offer >= b[v]:
                break
        out.append(min(b[v], offer))
    return out


def connected_components(g: Graph) -> list[list[int]]:
    """Vertex lists of the connected components, each sorted, ordered by minimum."""
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        stack = [s]
        comp = []
        while stack:
            v = stack.pop()
            comp.append(v)
            for u, _ in g.adj[v]:
                if not seen[u]:
                    seen[u] = True
                    stack.append(u)
        comp.sort()
        comps.append(comp)
    return comps


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or len(connected_components(g)) == 1


def induced_subgraph(g: Graph, vertices: Sequence[int]) -> tuple[Graph, list[int]]:
    """Subgraph induced by ``vertices``, relabelled 0..k-1 in the given order.

    Returns the subgraph and, per new edge id, the original edge id.
    """
    index = {v: i for i, v in enumerate(vertices)}
    edges = []
    origin = []
    for k, (u, v) in enumerate(g.edges):
        if u in index and v in index:
            a, c = index[u], index[v]
            edges.append((a, c) if a < c else (c, a))
            origin.append(k)
    return Graph(len(vertices), edges), origin


# ---------------------------------------------------------------------------
# Weight store with constant-time split and merge along a shared edge.
# ---------------------------------------------------------------------------


class WeightStore:
    """Edge weights reached through one indirection handle per edge.

    Keys are arbitrary hashable edge keys. All weights start at 0.
    ``store_split`` gives two views that share every cell except the one of
    the split edge, which is duplicated; ``store_merge`` folds the two copies
    back as their maximum.
    """

    def __init__(self, keys: Iterable[Hashable] = ()) -> None:
        self._cells: list[int] = []
        self._handle: dict[Hashable, int] = {}
        # split edge key -> (view U cell, view W cell)
        self._pending: dict[Hashable, tuple[int, int]] = {}
        for key in keys:
            self._new_cell(key)

    def _new_cell(self, key: Hashable, value: int = 0) -> int:
        self._cells.append(value)
        h = len(self._cells) - 1
        self._handle[key] = h
        return h

    def __contains__(self, key: Hashable) -> bool:
        return key in self._handle

    def __getitem__(self, key: Hashable) -> int:
        if key in self._pending:
            raise KeyError(f"edge {key!r} is split; read it through a view")
        return self._cells[self._handle[key]]

    def __setitem__(self, key: Hashable, value: int) -> None:
        if key in self._pending:
            raise KeyError(f"edge {key!r} is split; write it through a view")
        h = self._handle.get(key)
        if h is None:
            self._new_cell(key, value)
        else:
            self._cells[h] = value

    def keys(self) -> list[Hashable]:
        return list(self._handle)

    def items(self) -> list[tuple[Hashable, int]]:
        return [(k, self._cells[h]) for k, h in self._handle.items()]

    def is_split(self, key: Hashable) -> bool:
        return key in self._pending

    def snapshot(self) -> dict[Hashable, int]:
        """Plain dict copy of all non-split weights."""
        return {k: self._cells[h] for k, h in self._handle.items() if k not in self._pending}


class StoreView:
    """One side of a split WeightStore."""

    __slots__ = ("store", "key", "side", "_cell")

    def __init__(self, store: WeightStore, key: Hashable, side: str, cell: int) -> None:
        self.store = store
        self.key = key
        self.side = side
        self._cell = cell

    def __getitem__(self, key: Hashable) -> int:
        if key == self.key:
            return self.store._cells[self._cell]
        return self.store[key]

    def __setitem__(self, key: Hashable, value: int) -> None:
        if key == self.key:
            self.store._cells[self._cell] = value
        else:
            self.store[key] = value


def store_split(store: WeightStore, shared_edge: Hashable) -> tuple[StoreView, StoreView]:
    """Duplicate the cell of ``shared_edge`` into a U-side and a W-side copy.

    Both copies start at the current weight. Raises ValueError if the edge
    is already split.
    """
    if shared_edge in store._pending:
        raise ValueError(f"edge {shared_edge!r} is already split")
    h = store._handle.get(shared_edge)
    if h is None:
        h = store._new_cell(shared_edge)
    value = store._cells[h]
    store._cells.append(value)
    cu = len(store._cells) - 1
    store._cells.append(value)
    cw = len(store._cells) - 1
    store._pending[shared_edge] = (cu, cw)
    return StoreView(store, shared_edge, "U", cu), StoreView(store, shared_edge, "W", cw)


def store_merge(view_u: StoreView, view_w: StoreView) -> WeightStore:
    """Fold a split back: the shared edge takes the max of the two sides."""
    store = view_u.store
    key = view_u.key
    if (
        view_w.store is not store
        or view_w.key != key
        or view_u.side != "U"
        or view_w.side != "W"
        or store._pending.get(key) != (view_u._cell, view_w._cell)
    ):
        raise ValueError("views do not come from the same split")
    cu, cw = store._pending.pop(key)
    store._cells[store._handle[key]] = max(store._cells[cu], store._cells[cw])
    return store
