"""
Split detection and minimal split decomposition.

Vertices of component graphs are integer *labels*: labels ``0..n-1`` are the
original vertices, labels ``n, n+1, ...`` are marker vertices created by
simple decompositions. Every marker has exactly one partner marker in
another component; the two are the endpoints of one tree edge.

The decomposition runs in two gears. A peeling pass repeatedly removes a
twin or a pendant vertex (each such pair ``{a, b}`` is one side of a split)
in time linear in the degrees involved; on distance-hereditary graphs this
alone finishes the job. When no twin or pendant is left and the remainder
still has four or more vertices, a closure-based search looks for a general
split; each side is then decomposed again. A remainder without a split is a
prime component.
"""

from __future__ import annotations

import random
from collections import deque
from collections.abc import Iterable, Sequence
from typing import NamedTuple, Optional

from .graph import Graph, GraphError, build_graph, is_connected

_MASK = (1 << 64) - 1
_HASH_SEED = 0x5D1E7


class Split(NamedTuple):
    """A split (U, W) with frontier sets C = N(W) in U and D = N(U) in W."""

    U: tuple[int, ...]
    W: tuple[int, ...]
    C: tuple[int, ...]
    D: tuple[int, ...]


class Component(NamedTuple):
    vertices: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]


class TreeEdge(NamedTuple):
    parent: int
    child: int
    parent_marker: int
    child_marker: int
    parent_frontier: tuple[int, ...]
    child_frontier: tuple[int, ...]


class SplitRecord(NamedTuple):
    """One simple decomposition: ``U`` keeps marker ``mw``, the rest gets ``mu``."""

    U: tuple[int, ...]
    mu: int
    mw: int


class DecompViolation(NamedTuple):
    kind: str
    detail: str


class SplitTree:
    """Rooted split decomposition tree over label graphs.

    Attributes:
        n: Order of the decomposed graph.
        components: Component label graphs (vertices and edges sorted).
        edges: Tree edges oriented parent -> child.
        root: Index of the component containing vertex 0.
        parent_edge: Per component, index of the tree edge to its parent
            (None at the root).
        child_edges: Per component, indices of tree edges to its children.
        partner: Marker label -> partner marker label.
        home: Label -> index of the component holding it.
        log: The simple decompositions in the order they were applied.
    """

    def __init__(
        self,
        n: int,
        components: list[Component],
        pairs: Sequence[tuple[int, int]],
        log: list[SplitRecord],
    ) -> None:
        self.n = n
        self.components = components
        self.log = log
        self.partner: dict[int, int] = {}
        for a, c in pairs:
            self.partner[a] = c
            self.partner[c] = a
        self.home: dict[int, int] = {}
        for i, comp in enumerate(components):
            for v in comp.vertices:
                self.home[v] = i
        nbrs: dict[int, list[int]] = {m: [] for m in self.partner}
        for comp in components:
            for u, v in comp.edges:
                if u in nbrs:
                    nbrs[u].append(v)
                if v in nbrs:
                    nbrs[v].append(u)
        self.root = self.home.get(0, 0)
        self.edges: list[TreeEdge] = []
        self.parent_edge: list[Optional[int]] = [None] * len(components)
        self.child_edges: list[list[int]] = [[] for _ in components]
        seen = [False] * len(components)
        if components:
            seen[self.root] = True
            queue = deque([self.root])
            while queue:
                i = queue.popleft()
                for m in components[i].vertices:
                    if m < n or m not in self.partner:
                        continue
                    q = self.partner[m]
                    j = self.home.get(q)
                    if j is None or seen[j]:
                        continue
                    seen[j] = True
                    k = len(self.edges)
                    self.edges.append(
                        TreeEdge(i, j, m, q, tuple(sorted(nbrs[m])), tuple(sorted(nbrs[q])))
                    )
                    self.parent_edge[j] = k
                    self.child_edges[i].append(k)
                    queue.append(j)

    def __len__(self) -> int:
        return len(self.components)

    def is_marker(self, label: int) -> bool:
        return label >= self.n

    def label_name(self, label: int) -> str:
        return str(label) if label < self.n else f"s{label - self.n}"

    def order(self, i: int) -> int:
        return len(self.components[i].vertices)

    def postorder(self) -> list[int]:
        """Component indices, children before parents."""
        out = []
        stack = [self.root]
        while stack:
            i = stack.pop()
            out.append(i)
            stack.extend(self.edges[k].child for k in self.child_edges[i])
        out.reverse()
        return out

    def component_graph(self, i: int) -> tuple[Graph, list[int]]:
        """Component i as a Graph on 0..order-1, with the label of each vertex."""
        labels = list(self.components[i].vertices)
        index = {v: k for k, v in enumerate(labels)}
        return Graph(len(labels), [(index[u], index[v]) for u, v in self.components[i].edges]), labels

    def split_width(self) -> int:
        return max([2] + [len(c.vertices) for c in self.components if len(c.vertices) >= 4])

    def representatives(self) -> dict[int, int]:
        """Marker label -> lowest original vertex of the frontier it stands for."""
        nbrs: dict[int, list[int]] = {m: [] for m in self.partner}
        for comp in self.components:
            for u, v in comp.edges:
                if u in nbrs:
                    nbrs[u].append(v)
                if v in nbrs:
                    nbrs[v].append(u)
        rep: dict[int, int] = {}

        def resolve(m: int) -> Optional[int]:
            best = None
            for z in nbrs[self.partner[m]]:
                r = z if z < self.n else rep.get(z)
                if r is None:
                    return None
                best = r if best is None or r < best else best
            return best

        # Markers pointing down depend only on deeper markers; markers
        # pointing up may depend on anything, so they go second, top-down.
        post = self.postorder()
        for i in post:
            for k in self.child_edges[i]:
                m = self.edges[k].parent_marker
                rep[m] = resolve(m)  # type: ignore[assignment]
        for i in reversed(post):
            k = self.parent_edge[i]
            if k is not None:
                m = self.edges[k].child_marker
                rep[m] = resolve(m)  # type: ignore[assignment]
        return rep


# ---------------------------------------------------------------------------
# General split search
# ---------------------------------------------------------------------------


def _closure(adj: Sequence[set[int]], seed: Iterable[int], x: int, y: int, limit: int) -> Optional[set[int]]:
    """Smallest U containing ``seed`` such that x is in C and y is in D.

    Returns None once U grows past ``limit`` vertices.
    """
    nx_ = adj[x]
    ny = adj[y]
    U = set(seed)
    queue = list(U)
    while queue:
        v = queue.pop()
        nv = adj[v]
        if v in ny:
            # v sees W exactly like x does
            moved = [z for z in nv if z not in U and z not in nx_]
            moved += [z for z in nx_ if z not in U and z not in nv and z != v]
        else:
            moved = [z for z in nv if z not in U]
        for z in moved:
            if z not in U:
                U.add(z)
                queue.append(z)
        if len(U) > limit:
            return None
    return U


def _general_split(adj: Sequence[set[int]]) -> Optional[set[int]]:
    """Return one side of a split of the connected graph ``adj``, or None."""
    n = len(adj)
    if n < 4:
        return None
    s = min(range(n), key=lambda v: (len(adj[v]), v))
    limit = n - 2
    for y in range(n):
        if y == s:
            continue
        for x in sorted(adj[y]):
            if x != s:
                seeds: Iterable[tuple[int, ...]] = [(s, x)]
            else:
                seeds = [(s,)] + [(s, a) for a in range(n) if a != s and a != y]
            for seed in seeds:
                U = _closure(adj, seed, x, y, limit)
                if U is not None and len(U) >= 2:
                    return U
    return None


def _as_split(adj: Sequence[set[int]], U: set[int]) -> Split:
    n = len(adj)
    W = [v for v in range(n) if v not in U]
    C = sorted(v for v in U if any(z not in U for z in adj[v]))
    D = sorted(v for v in W if any(z in U for z in adj[v]))
    return Split(tuple(sorted(U)), tuple(W), tuple(C), tuple(D))


def is_split(g: Graph, U: Iterable[int]) -> bool:
    """Check that (U, V - U) is a split of g."""
    Us = set(U)
    if len(Us) < 2 or g.n - len(Us) < 2:
        return False
    C = [v for v in Us if any(z not in Us for z in g.neighbors(v))]
    D = {z for v in C for z in g.neighbors(v) if z not in Us}
    return all({z for z in g.neighbors(v) if z not in Us} == D for v in C)


def find_split(g: Graph) -> Optional[Split]:
    """Find one split of a connected graph, or None if there is none.

    Deterministic for a fixed graph encoding. Raises GraphError with kind
    ``"disconnected"`` on disconnected input.
    """
    if not is_connected(g):
        raise GraphError("disconnected", "find_split needs a connected graph")
    adj = [set(g.neighbors(v)) for v in range(g.n)]
    U = _general_split(adj)
    return None if U is None else _as_split(adj, U)


# ---------------------------------------------------------------------------
# Minimal decomposition
# ---------------------------------------------------------------------------


class _Builder:
    def __init__(self, n: int) -> None:
        self.n = n
        self.next_label = n
        self.components: list[Component] = []
        self.pairs: list[tuple[int, int]] = []
        self.log: list[SplitRecord] = []
        self.rng = random.Random(_HASH_SEED)

    def marker(self) -> int:
        self.next_label += 1
        return self.next_label - 1

    def emit(self, vertices: Iterable[int], edges: Iterable[tuple[int, int]]) -> None:
        es = sorted((u, v) if u < v else (v, u) for u, v in edges)
        self.components.append(Component(tuple(sorted(vertices)), tuple(es)))

    def decompose(self, labels: list[int], adj: list[set[int]]) -> None:
        work = [(labels, adj)]
        while work:
            labels, adj = work.pop()
            rest = self.peel(labels, adj)
            if rest is None:
                continue
            labels, adj = rest
            U = _general_split(adj)
            if U is None:
                self.emit(labels, ((labels[v], labels[z]) for v in range(len(adj)) for z in adj[v] if v < z))
                continue
            mu, mw = self.marker(), self.marker()
            C = [v for v in U if any(z not in U for z in adj[v])]
            D = sorted({z for v in C for z in adj[v] if z not in U})
            self.log.append(SplitRecord(tuple(sorted(labels[v] for v in U)), mu, mw))
            self.pairs.append((mu, mw))
            for side, marker, front in ((sorted(U), mw, C), (None, mu, D)):
                if side is None:
                    side = [v for v in range(len(adj)) if v not in U]
                idx = {v: k for k, v in enumerate(side)}
                sub_adj = [{idx[z] for z in adj[v] if z in idx} for v in side]
                mk = len(side)
                sub_adj.append({idx[v] for v in front})
                for v in front:
                    sub_adj[idx[v]].add(mk)
                work.append(([labels[v] for v in side] + [marker], sub_adj))

    def peel(self, lab: list[int], nb: list[set[int]]) -> Optional[tuple[list[int], list[set[int]]]]:
        """Strip twins and pendants; return the stuck remainder, if any."""
        r = len(lab)
        if r <= 3:
            self.emit(lab, ((lab[v], lab[z]) for v in range(r) for z in nb[v] if v < z))
            return None
        lab = list(lab)
        rnd = [self.rng.getrandbits(64) for _ in range(r)]
        ho = [sum(rnd[z] for z in nb[v]) & _MASK for v in range(r)]
        hc = [(ho[v] + rnd[v]) & _MASK for v in range(r)]
        buckets: tuple[dict[int, set[int]], dict[int, set[int]]] = ({}, {})
        dirty: set[tuple[int, int]] = set()
        pend = {v for v in range(r) if len(nb[v]) == 1}
        alive = [True] * r
        count = r

        def put(kind: int, h: int, v: int) -> None:
            bucket = buckets[kind].setdefault(h, set())
            bucket.add(v)
            if len(bucket) >= 2:
                dirty.add((kind, h))

        def drop(kind: int, h: int, v: int) -> None:
            bucket = buckets[kind][h]
            bucket.discard(v)
            if not bucket:
                del buckets[kind][h]

        for v in range(r):
            put(0, ho[v], v)
            put(1, hc[v], v)

        def is_twin(kind: int, a: int, b: int) -> bool:
            if len(nb[a]) != len(nb[b]):
                return False
            if kind == 0:
                return nb[a] == nb[b]
            return b in nb[a] and nb[a] - {b} == nb[b] - {a}

        def twins(kind: int, bucket: set[int]) -> Optional[tuple[int, int]]:
            it = iter(bucket)
            a = next(it)
            for b in it:
                if is_twin(kind, a, b):
                    return a, b
                break
            # hash collision: fall back to all pairs
            members = sorted(bucket)
            for i, a in enumerate(members):
                for b in members[i + 1 :]:
                    if is_twin(kind, a, b):
                        return a, b
            return None

        while count >= 4:
            op = None
            while pend and op is None:
                a = pend.pop()
                if alive[a] and len(nb[a]) == 1:
                    op = ("pendant", a, next(iter(nb[a])))
            while dirty and op is None:
                kind, h = dirty.pop()
                bucket = buckets[kind].get(h)
                if bucket is None or len(bucket) < 2:
                    continue
                pair = twins(kind, bucket)
                if pair is not None:
                    op = ("false" if kind == 0 else "true", pair[0], pair[1])
                    dirty.add((kind, h))
            if op is None:
                break
            how, a, b = op
            la, lb = lab[a], lab[b]
            mu, mw = self.marker(), self.marker()
            if how == "true":
                self.emit((la, lb, mw), ((la, lb), (la, mw), (lb, mw)))
            elif how == "false":
                self.emit((la, lb, mw), ((la, mw), (lb, mw)))
            else:
                self.emit((la, lb, mw), ((la, lb), (lb, mw)))
            self.log.append(SplitRecord(tuple(sorted((la, lb))), mu, mw))
            self.pairs.append((mu, mw))
            # remove a; b now plays the marker mu
            for z in nb[a]:
                nb[z].discard(a)
                drop(0, ho[z], z)
                drop(1, hc[z], z)
                ho[z] = (ho[z] - rnd[a]) & _MASK
                hc[z] = (hc[z] - rnd[a]) & _MASK
                put(0, ho[z], z)
                put(1, hc[z], z)
                if len(nb[z]) == 1:
                    pend.add(z)
            drop(0, ho[a], a)
            drop(1, hc[a], a)
            nb[a] = set()
            alive[a] = False
            lab[b] = mu
            count -= 1
        keep = [v for v in range(r) if alive[v]]
        if count <= 3:
            self.emit((lab[v] for v in keep), ((lab[v], lab[z]) for v in keep for z in nb[v] if v < z))
            return None
        idx = {v: k for k, v in enumerate(keep)}
        return [lab[v] for v in keep], [{idx[z] for z in nb[v]} for v in keep]


def decompose_minimal(g: Graph) -> SplitTree:
    """Minimal split decomposition of a connected graph.

    Every component is prime or has order 3; graphs with fewer than four
    vertices give a single component. The tree is rooted at the component
    containing vertex 0. Raises GraphError ``"disconnected"``.
    """
    if not is_connected(g):
        raise GraphError("disconnected", "decompose_minimal needs a connected graph")
    builder = _Builder(g.n)
    adj = [set(g.neighbors(v)) for v in range(g.n)]
    if g.n < 4:
        builder.emit(range(g.n), g.edges)
    else:
        builder.decompose(list(range(g.n)), adj)
    return SplitTree(g.n, builder.components, builder.pairs, builder.log)


def split_width(g: Graph) -> int:
    """Largest prime component order in the minimal decomposition, at least 2."""
    return decompose_minimal(g).split_width()


# ---------------------------------------------------------------------------
# Checking
# ---------------------------------------------------------------------------


def _label_adjacency(components: Iterable[Component]) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {}
    for comp in components:
        for v in comp.vertices:
            adj.setdefault(v, set())
        for u, v in comp.edges:
            adj[u].add(v)
            adj[v].add(u)
    return adj


def recompose(t: SplitTree) -> Graph:
    """Glue all components back along their tree edges.

    Returns the graph on the original labels with edges in sorted order.
    """
    adj = _label_adjacency(t.components)
    for e in t.edges:
        p, q = e.parent_marker, e.child_marker
        left = adj.pop(p)
        right = adj.pop(q)
        for a in left:
            adj[a].discard(p)
        for c in right:
            adj[c].discard(q)
        for a in left:
            for c in right:
                adj[a].add(c)
                adj[c].add(a)
    edges = sorted((u, v) for u, nbrs in adj.items() for v in nbrs if u < v)
    return build_graph(t.n, edges)


def _replay(g: Graph, t: SplitTree) -> Optional[DecompViolation]:
    adj: dict[int, set[int]] = {v: set(g.neighbors(v)) for v in range(g.n)}
    where: dict[int, int] = {v: 0 for v in range(g.n)}
    members: dict[int, set[int]] = {0: set(range(g.n))}
    for step, rec in enumerate(t.log):
        U = set(rec.U)
        gids = {where.get(v) for v in U}
        if len(gids) != 1 or None in gids:
            return DecompViolation("replay", f"step {step}: side {sorted(U)} is not inside one graph")
        gid = gids.pop()
        if len(U) < 2 or len(members[gid]) - len(U) < 2:  # type: ignore[index]
            return DecompViolation("replay", f"step {step}: side too small")
        C = [v for v in U if adj[v] - U]
        D = set().union(*(adj[v] - U for v in C)) if C else set()
        if not C or any(adj[v] - U != D for v in C):
            return DecompViolation("replay", f"step {step}: {sorted(U)} is not a split side")
        new = len(members)
        members[new] = U | {rec.mw}
        members[gid] = (members[gid] - U) | {rec.mu}  # type: ignore[index]
        for v in C:
            adj[v] -= D
            adj[v].add(rec.mw)
        for z in D:
            adj[z] -= U
            adj[z].add(rec.mu)
        adj[rec.mw] = set(C)
        adj[rec.mu] = D
        for v in U:
            where[v] = new
        where[rec.mw] = new
        where[rec.mu] = gid  # type: ignore[assignment]
    got = set()
    for vs in members.values():
        es = tuple(sorted((u, v) for u in vs for v in adj[u] if u < v))
        got.add((tuple(sorted(vs)), es))
    want = {(c.vertices, c.edges) for c in t.components}
    if got != want:
        return DecompViolation("replay", "replayed components differ from the tree's components")
    return None


def verify_decomposition(g: Graph, t: SplitTree, replay: bool = True) -> Optional[DecompViolation]:
    """Independent check of a SplitTree against g; None when everything holds.

    Checks, in order: vertex coverage, marker and tree structure, that every
    tree edge is a split of g, that gluing the components gives back g, and
    (optionally) that replaying the logged simple decompositions from g
    reproduces the components edge for edge.
    """
    count: dict[int, int] = {}
    for comp in t.components:
        for v in comp.vertices:
            count[v] = count.get(v, 0) + 1
    for v in range(g.n):
        if count.get(v, 0) != 1:
            return DecompViolation("vertex coverage", f"vertex {v} appears {count.get(v, 0)} times")
    for v, k in count.items():
        if v < 0 or (v >= g.n and (k != 1 or v not in t.partner)):
            return DecompViolation("vertex coverage", f"unexpected label {v}")

    adj = _label_adjacency(t.components)
    for m, q in t.partner.items():
        if t.partner.get(q) != m or m not in t.home or q not in t.home or t.home[m] == t.home[q]:
            return DecompViolation("marker structure", f"marker {m} has no valid partner")
    if len(t.edges) != len(t.components) - 1 or any(
        t.parent_edge[i] is None for i in range(len(t.components)) if i != t.root
    ):
        return DecompViolation("marker structure", "tree edges do not form a spanning tree")
    for k, e in enumerate(t.edges):
        if t.partner.get(e.parent_marker) != e.child_marker:
            return DecompViolation("marker structure", f"tree edge {k} joins unpaired markers")
        if tuple(sorted(adj[e.parent_marker])) != e.parent_frontier or tuple(
            sorted(adj[e.child_marker])
        ) != e.child_frontier:
            return DecompViolation("marker structure", f"tree edge {k} frontier disagrees with its markers")

    access: dict[int, frozenset[int]] = {}

    def resolve(labels: Iterable[int]) -> set[int]:
        out: set[int] = set()
        for z in labels:
            out |= {z} if z < t.n else access[z]
        return out

    post = t.postorder()
    for i in post:
        for k in t.child_edges[i]:
            e = t.edges[k]
            access[e.parent_marker] = frozenset(resolve(adj[e.child_marker]))
    for i in reversed(post):
        k = t.parent_edge[i]
        if k is not None:
            e = t.edges[k]
            access[e.child_marker] = frozenset(resolve(adj[e.parent_marker]))
    for k, e in enumerate(t.edges):
        left = access[e.child_marker]
        right = access[e.parent_marker]
        for a in left:
            for c in right:
                if not g.has_edge(a, c):
                    return DecompViolation("not a split", f"tree edge {k}: missing join edge ({a}, {c})")

    h = recompose(t)
    if set(h.edges) != set(g.edges):
        return DecompViolation("recompose", "glued components do not give back the graph")
    if replay:
        return _replay(g, t)
    return None
