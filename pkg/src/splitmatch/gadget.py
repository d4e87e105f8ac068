"""
Gadget modules: a child subtree, summarized by its profile (mu0, c1, c2), is
plugged into its parent component as three vertices u1, u2, u3 that replace
the child marker. u1 has capacity c1, u2 and u3 have capacity c2 and are
adjacent to each other, and all three see the marker's neighborhood.

After a maximum-cardinality, maximum-cost solve of the augmented component
(cost 2 on every u2-u3 edge, 1 elsewhere), ``normalize`` makes every module
symmetric (deg u2 = deg u3) and saturated (u1 below capacity implies u2 only
uses its internal edge). ``contract_module`` then folds a module back into
its marker and reads off the demand passed down to the child.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping, Sequence
from typing import NamedTuple, Optional

from .graph import Graph, build_graph, degrees
from .profile import MuProfile

INTERNAL_COST = 2


class GadgetError(ValueError):
    def __init__(self, kind: str, message: str) -> None:
        super().__init__(f"{kind}: {message}")
        self.kind = kind


class GadgetModule(NamedTuple):
    marker: int
    u1: int
    u2: int
    u3: int
    c1: int
    c2: int
    frontier: tuple[int, ...]  # ids in the augmented graph


class AugmentedComponent:
    """A component with every child marker replaced by its module.

    Attributes:
        graph: The augmented graph H on dense ids.
        b: Capacities on H; the parent marker (if any) starts at 0.
        cost: Per edge of H, 2 on module-internal edges and 1 elsewhere.
        labels: Per vertex of H, its component label, or None for a module
            member.
        modules: Gadget modules in ascending marker order.
        parent: Id of the parent marker in H, or None.
    """

    __slots__ = ("graph", "b", "cost", "labels", "modules", "parent", "_internal")

    def __init__(
        self,
        graph: Graph,
        b: list[int],
        labels: list[Optional[int]],
        modules: list[GadgetModule],
        parent: Optional[int],
    ) -> None:
        self.graph = graph
        self.b = b
        self.labels = labels
        self.modules = modules
        self.parent = parent
        self._internal = {graph.edge_id(md.u2, md.u3) for md in modules}
        self.cost = [INTERNAL_COST if e in self._internal else 1 for e in range(graph.m)]

    def with_parent_capacity(self, t: int) -> list[int]:
        b = list(self.b)
        if self.parent is not None:
            b[self.parent] = t
        return b


def build_gadget_component(
    vertices: Sequence[int],
    edges: Sequence[tuple[int, int]],
    child_profiles: Mapping[int, MuProfile],
    b_restricted: Callable[[int], int] | Mapping[int, int],
    parent_marker: Optional[int] = None,
) -> AugmentedComponent:
    """Replace every child marker of a component by its gadget module.

    Parameters:
        vertices, edges: The component as a label graph.
        child_profiles: Profile for every child marker of the component.
        b_restricted: Capacity of every other label except the parent
            marker (a mapping or a function).
        parent_marker: Label of the parent marker, kept as a plain vertex
            with capacity 0.

    Plain vertices get ids first, in component order; then each child
    marker, in ascending label order, gets three consecutive ids u1, u2, u3.
    """
    cap = b_restricted.__getitem__ if isinstance(b_restricted, Mapping) else b_restricted
    vset = set(vertices)
    for m in child_profiles:
        if m not in vset:
            raise GadgetError("missing-profile", f"profile given for {m}, which is not in the component")
    plain = [v for v in vertices if v not in child_profiles]
    ids: dict[int, tuple[int, ...]] = {v: (i,) for i, v in enumerate(plain)}
    labels: list[Optional[int]] = list(plain)
    b = [0 if v == parent_marker else cap(v) for v in plain]
    nxt = len(plain)
    children = sorted(child_profiles)
    for m in children:
        p = child_profiles[m]
        ids[m] = (nxt, nxt + 1, nxt + 2)
        labels += [None, None, None]
        b += [p.c1, p.c2, p.c2]
        nxt += 3
    out: list[tuple[int, int]] = []
    for u, v in edges:
        for a in ids[u]:
            for c in ids[v]:
                out.append((a, c))
    for m in children:
        _, u2, u3 = ids[m]
        out.append((u2, u3))
    g = build_graph(nxt, out)
    nbrs: dict[int, list[int]] = {m: [] for m in children}
    for u, v in edges:
        if u in nbrs:
            nbrs[u].extend(ids[v])
        if v in nbrs:
            nbrs[v].extend(ids[u])
    modules = [
        GadgetModule(m, *ids[m], child_profiles[m].c1, child_profiles[m].c2, tuple(sorted(nbrs[m])))
        for m in children
    ]
    parent = ids[parent_marker][0] if parent_marker is not None else None
    return AugmentedComponent(g, b, labels, modules, parent)


# ---------------------------------------------------------------------------
# Normalization
# ---------------------------------------------------------------------------


class NormalizeStats(NamedTuple):
    passes: dict[int, int]  # marker -> corrective passes
    rule3: int


def module_degrees(h: AugmentedComponent, x: Sequence[int], md: GadgetModule) -> tuple[int, int, int, int]:
    """(deg u1, deg u2, deg u3, x on the u2-u3 edge)."""
    g = h.graph
    d = [sum(x[e] for _, e in g.adj[u]) for u in (md.u1, md.u2, md.u3)]
    return d[0], d[1], d[2], x[g.edge_id(md.u2, md.u3)]


def is_normalized(h: AugmentedComponent, x: Sequence[int], md: GadgetModule) -> bool:
    d1, d2, d3, x23 = module_degrees(h, x, md)
    return d2 == d3 and (d1 >= md.c1 or d2 == x23)


def _pass(h: AugmentedComponent, x: list[int], md: GadgetModule) -> int:
    """Apply Rules 1-3 once to one module; returns how often Rule 3 fired."""
    g = h.graph
    eid = g.edge_id
    d1, d2, d3, _ = module_degrees(h, x, md)
    # Rule 1: shift frontier load from u2/u3 onto u1 while u1 has room.
    deficit = md.c1 - d1
    for v in md.frontier:
        if deficit <= 0:
            break
        for uk in (md.u2, md.u3):
            e = eid(uk, v)
            if deficit > 0 and x[e] > 0:
                delta = min(deficit, x[e])
                x[eid(md.u1, v)] += delta
                x[e] -= delta
                deficit -= delta
                if uk == md.u2:
                    d2 -= delta
                else:
                    d3 -= delta
    # Rule 2: balance u2 and u3 to within one.
    hi, lo = (md.u2, md.u3) if d2 >= d3 else (md.u3, md.u2)
    diff = abs(d2 - d3)
    if diff > 1:
        for v in md.frontier:
            eh, el = eid(hi, v), eid(lo, v)
            if x[eh] > x[el]:
                delta = min(diff // 2, x[eh])
                x[eh] -= delta
                x[el] += delta
                diff -= 2 * delta
                if diff <= 1:
                    break
    # Rule 3: a unit from the heavier side onto the internal edge.
    fired = 0
    if diff == 1:
        for v in md.frontier:
            eh, el = eid(hi, v), eid(lo, v)
            if x[eh] > x[el]:
                x[eh] -= 1
                x[eid(md.u2, md.u3)] += 1
                fired = 1
                break
    return fired


def normalize(h: AugmentedComponent, x: Sequence[int], max_passes: int = 2) -> tuple[list[int], NormalizeStats]:
    """Make every module symmetric and saturated.

    Modules are processed in ascending marker order, then all are checked
    again. A module that needs more than ``max_passes`` corrective passes
    raises GadgetError ``"not-cost-maximal"``; with a maximum-cost input
    every module needs at most one.
    """
    y = list(x)
    passes = {md.marker: 0 for md in h.modules}
    rule3 = 0
    while True:
        dirty = [md for md in h.modules if not is_normalized(h, y, md)]
        if not dirty:
            return y, NormalizeStats(passes, rule3)
        for md in dirty:
            if passes[md.marker] >= max_passes:
                raise GadgetError("not-cost-maximal", f"module {md.marker} still unbalanced after {max_passes} passes")
            passes[md.marker] += 1
            rule3 += _pass(h, y, md)


# ---------------------------------------------------------------------------
# Contraction
# ---------------------------------------------------------------------------


def module_demand(h: AugmentedComponent, x: Sequence[int], md: GadgetModule) -> int:
    """Capacity handed to the child: c1' + 2*c2' with c2' = deg(u2) - x(u2u3)."""
    if not is_normalized(h, x, md):
        raise GadgetError("not-normalized", f"module {md.marker} is not symmetric and saturated")
    d1, d2, _, x23 = module_degrees(h, x, md)
    return d1 + 2 * (d2 - x23)


def contract_module(
    h: AugmentedComponent, x: Sequence[int], md: GadgetModule
) -> tuple[AugmentedComponent, list[int], int]:
    """Fold one module back into its marker.

    Returns the contracted component (the marker is a plain vertex with
    capacity equal to the demand), the contracted weights, and the demand.
    """
    demand = module_demand(h, x, md)
    g = h.graph
    gone = {md.u2, md.u3}
    new_id: dict[int, int] = {}
    keep = [v for v in range(g.n) if v not in gone]
    for i, v in enumerate(keep):
        new_id[v] = i
    new_id[md.u2] = new_id[md.u3] = new_id[md.u1]
    weight: dict[tuple[int, int], int] = {}
    for e, (u, v) in enumerate(g.edges):
        if {u, v} == gone:
            continue
        a, c = new_id[u], new_id[v]
        key = (a, c) if a < c else (c, a)
        weight[key] = weight.get(key, 0) + x[e]
    g2 = Graph(len(keep), list(weight))
    labels = [h.labels[v] for v in keep]
    labels[new_id[md.u1]] = md.marker
    b = [h.b[v] for v in keep]
    b[new_id[md.u1]] = demand
    modules = [
        GadgetModule(
            o.marker, new_id[o.u1], new_id[o.u2], new_id[o.u3], o.c1, o.c2,
            tuple(sorted({new_id[v] for v in o.frontier})),
        )
        for o in h.modules
        if o.marker != md.marker
    ]
    parent = None if h.parent is None else new_id[h.parent]
    return AugmentedComponent(g2, b, labels, modules, parent), list(weight.values()), demand


def contract_all(
    h: AugmentedComponent, x: Sequence[int]
) -> tuple[dict[tuple[int, int], int], dict[int, int], int]:
    """Fold every module at once.

    Returns positive weights keyed by component label pairs ``(a, c)`` with
    ``a < c``, the demand of every child marker, and the cardinality lost
    (the total weight on internal edges).
    """
    owner: list[int] = [lab if lab is not None else -1 for lab in h.labels]
    demands = {}
    for md in h.modules:
        demands[md.marker] = module_demand(h, x, md)
        owner[md.u1] = owner[md.u2] = owner[md.u3] = md.marker
    weights: dict[tuple[int, int], int] = {}
    lost = 0
    for e, (u, v) in enumerate(h.graph.edges):
        w = x[e]
        if w <= 0:
            continue
        a, c = owner[u], owner[v]
        if a == c:
            lost += w
            continue
        key = (a, c) if a < c else (c, a)
        weights[key] = weights.get(key, 0) + w
    return weights, demands, lost


def vertex_degrees(h: AugmentedComponent, x: Sequence[int]) -> list[int]:
    return degrees(h.graph, x)
