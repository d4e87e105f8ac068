"""
b-Matching on graphs of bounded split-width by dynamic programming over the
split decomposition tree.

Phase 1 walks the tree bottom-up. Each component, with its child markers
replaced by gadget modules, gets a profile with respect to its parent
marker; the root uses a dummy isolated parent vertex of capacity 0. Adding
back what the gadgets hide gives mu(0) of the whole subtree, and at the root
the optimum.

Phase 2 walks top-down. Each component is solved with its parent marker
fixed to the demand handed down from above, the solution is normalized and
the modules are contracted, which fixes the demand of every child. Finally
the component solutions are merged across every tree edge.

Components are solved in a canonical vertex order (all orders for
components of order at most 3), so isomorphic components with the same
capacities and child profiles share one kernel solve within a call.
"""

from __future__ import annotations

import itertools
import time
from collections.abc import Sequence
from typing import Any, NamedTuple, Optional

from .gadget import AugmentedComponent, build_gadget_component, contract_all, normalize
from .graph import (
    Graph,
    build_graph,
    check_capacities,
    connected_components,
    degrees,
    induced_subgraph,
    validate_bmatching,
)
from .kernel import Kernel
from .merge import MergeContext, PairWeights, marker_load, merge_across_split, merge_markers, pair
from .profile import MuProfile, call_bound, compute_profile, mu_from_profile
from .splitdecomp import SplitTree, decompose_minimal

# Phase-1 kernel calls are at most BETA * (number of components) * log2(||b|| + 2).
BETA = 12

# "auto" mode hands graphs with at most this many vertices to the kernel.
AUTO_KERNEL_MAX_N = 12

_CANON_MAX_ORDER = 3


class SolverError(RuntimeError):
    def __init__(self, kind: str, message: str) -> None:
        super().__init__(f"{kind}: {message}")
        self.kind = kind


class SolveResult(NamedTuple):
    cardinality: int
    matching: list[int]
    stats: dict[str, Any]


class MergeRecord(NamedTuple):
    size_u: int
    size_w: int
    d: int
    size: int
    valid: bool


class _Local(NamedTuple):
    """A component in canonical position space."""

    order: tuple[int, ...]  # position -> label
    key: tuple
    edges: tuple[tuple[int, int], ...]
    b: tuple[int, ...]  # per position (0 for markers)
    children: dict[int, MuProfile]  # position -> child profile
    parent: int  # position of the parent marker (the dummy at the root)


def _new_stats() -> dict[str, Any]:
    return {
        "components": 0,
        "split_width": 2,
        "kernel_calls_phase1": 0,
        "kernel_calls_phase2": 0,
        "mu_evaluations": 0,
        "cache_hits_phase1": 0,
        "cache_hits_phase2": 0,
        "normalize_rule3": 0,
        "normalize_max_passes": 0,
        "merge_work": 0,
        "merges": 0,
        "max_augmented_ratio": 0.0,
        "time_decompose_ms": 0.0,
        "time_phase1_ms": 0.0,
        "time_phase2_ms": 0.0,
    }


class _TreeSolver:
    def __init__(
        self,
        g: Graph,
        b: Sequence[int],
        tree: SplitTree,
        kernel: Kernel,
        stats: dict[str, Any],
        cache: bool = True,
        instrument: bool = False,
    ) -> None:
        self.g = g
        self.b = b
        self.t = tree
        self.kernel = kernel
        self.stats = stats
        self.use_cache = cache
        self.instrument = instrument
        self.profile: list[Optional[MuProfile]] = [None] * len(tree)
        self.hprofile: list[Optional[MuProfile]] = [None] * len(tree)
        self.local: list[Optional[_Local]] = [None] * len(tree)
        self.cache1: dict[tuple, MuProfile] = {}
        self.cache2: dict[tuple, tuple] = {}
        self.merges: list[MergeRecord] = []

    # -- canonical form ---------------------------------------------------

    def _localize(self, i: int) -> _Local:
        t = self.t
        comp = t.components[i]
        k = t.parent_edge[i]
        parent = t.edges[k].child_marker if k is not None else None
        children = {t.edges[e].parent_marker: self.profile[t.edges[e].child] for e in t.child_edges[i]}

        def desc(v: int) -> tuple:
            if v in children:
                p = children[v]
                return (1, p.c1, p.c2)  # type: ignore[union-attr]
            if v == parent:
                return (2,)
            return (0, self.b[v])

        verts = comp.vertices
        if len(verts) <= _CANON_MAX_ORDER and self.use_cache:
            orders: Sequence[tuple[int, ...]] = list(itertools.permutations(verts))
        else:
            orders = [verts]
        best = None
        for order in orders:
            pos = {v: p for p, v in enumerate(order)}
            edges = tuple(sorted(pair(pos[u], pos[v]) for u, v in comp.edges))
            key = (tuple(desc(v) for v in order), edges)
            if best is None or key < best[0]:
                best = (key, order, edges)
        key, order, edges = best  # type: ignore[misc]
        pos = {v: p for p, v in enumerate(order)}
        kids = {pos[m]: p for m, p in children.items()}
        bpos = tuple(self.b[v] if v < t.n else 0 for v in order)
        ppos = pos[parent] if parent is not None else len(order)
        return _Local(order, key, edges, bpos, kids, ppos)  # type: ignore[arg-type]

    def _augment(self, loc: _Local) -> AugmentedComponent:
        verts = list(range(len(loc.order)))
        if loc.parent == len(loc.order):
            verts.append(loc.parent)  # dummy isolated parent at the root
        h = build_gadget_component(verts, loc.edges, loc.children, loc.b.__getitem__, loc.parent)
        ratio = h.graph.n / max(1, len(loc.order))
        if ratio > self.stats["max_augmented_ratio"]:
            self.stats["max_augmented_ratio"] = ratio
        return h

    # -- phase 1 ----------------------------------------------------------

    def phase1(self) -> MuProfile:
        t = self.t
        before = self.kernel.calls
        for i in t.postorder():
            loc = self._localize(i)
            self.local[i] = loc
            hp = self.cache1.get(loc.key) if self.use_cache else None
            if hp is None:
                h = self._augment(loc)
                calls = self.kernel.calls
                hp, evals = compute_profile(h.graph, h.b, h.parent, self.kernel)  # type: ignore[arg-type]
                self.stats["mu_evaluations"] += evals
                if self.kernel.calls - calls > call_bound(sum(h.b)):
                    raise SolverError("profile-calls", f"component {i} used too many kernel calls")
                if self.use_cache:
                    self.cache1[loc.key] = hp
            else:
                self.stats["cache_hits_phase1"] += 1
            self.hprofile[i] = hp
            hidden = sum(p.mu0 - p.c2 for p in loc.children.values())
            self.profile[i] = MuProfile(hp.mu0 + hidden, hp.c1, hp.c2)
        self.stats["kernel_calls_phase1"] += self.kernel.calls - before
        return self.profile[t.root]  # type: ignore[return-value]

    # -- phase 2 ----------------------------------------------------------

    def _solve_local(self, i: int, demand: int) -> tuple[dict[tuple[int, int], int], dict[int, int]]:
        """Contracted solution of component i, in position space."""
        loc = self.local[i]
        assert loc is not None
        key = (loc.key, demand)
        hit = self.cache2.get(key) if self.use_cache else None
        if hit is not None:
            self.stats["cache_hits_phase2"] += 1
            return hit
        h = self._augment(loc)
        bh = h.with_parent_capacity(demand)
        calls = self.kernel.cost_calls
        res = self.kernel.maxcost(h.graph, bh, h.cost)
        self.stats["kernel_calls_phase2"] += self.kernel.cost_calls - calls
        want = mu_from_profile(self.hprofile[i], demand)  # type: ignore[arg-type]
        if res.cardinality != want:
            raise SolverError("local-optimality", f"component {i}: kernel gave {res.cardinality}, profile says {want}")
        y, ns = normalize(h, res.x)
        self.stats["normalize_rule3"] += ns.rule3
        if ns.passes:
            self.stats["normalize_max_passes"] = max(self.stats["normalize_max_passes"], max(ns.passes.values()))
        if degrees(h.graph, y)[h.parent] != demand:  # type: ignore[index]
            raise SolverError("unsaturated", f"component {i}: parent marker misses its demand {demand}")
        weights, demands, _ = contract_all(h, y)
        out = (weights, demands)
        if self.use_cache:
            self.cache2[key] = out
        return out

    def phase2(self) -> dict[tuple[int, int], int]:
        t = self.t
        demand = [0] * len(t)
        pieces: list[dict[tuple[int, int], int]] = [{}] * len(t)
        stack = [t.root]
        while stack:
            i = stack.pop()
            loc = self.local[i]
            assert loc is not None
            wpos, dpos = self._solve_local(i, demand[i])
            order = loc.order
            pieces[i] = {pair(order[a], order[c]): w for (a, c), w in wpos.items() if c < len(order)}
            pos = {v: p for p, v in enumerate(order)}
            for e in t.child_edges[i]:
                te = t.edges[e]
                demand[te.child] = dpos[pos[te.parent_marker]]
                stack.append(te.child)
        self.demand = demand
        if self.instrument:
            return self._merge_instrumented(pieces)
        pw = PairWeights()
        for piece in pieces:
            pw.add_all(piece)
        for i in t.postorder():
            for e in t.child_edges[i]:
                te = t.edges[e]
                merge_markers(pw, te.parent_marker, te.child_marker)
                self.stats["merges"] += 1
        self.stats["merge_work"] += pw.work
        return pw.positive()

    def _merge_instrumented(self, pieces: list[dict[tuple[int, int], int]]) -> dict[tuple[int, int], int]:
        """Merge with one explicit dict per subtree and check every merge."""
        t = self.t
        group: list[dict[tuple[int, int], int]] = [dict(p) for p in pieces]
        for i in t.postorder():
            for e in t.child_edges[i]:
                te = t.edges[e]
                xu, xw = group[i], group[te.child]
                d = marker_load(xu, te.parent_marker)
                merged = merge_across_split(MergeContext(xu, xw, te.parent_marker, te.child_marker))
                valid = self._valid_partial(merged)
                self.merges.append(MergeRecord(sum(xu.values()), sum(xw.values()), d, sum(merged.values()), valid))
                group[i] = merged
                group[te.child] = {}
                self.stats["merges"] += 1
        return group[t.root]

    def _valid_partial(self, x: dict[tuple[int, int], int]) -> bool:
        """Originals within capacity, open markers at their demand, real edges only."""
        t = self.t
        deg: dict[int, int] = {}
        for (a, c), w in x.items():
            if w < 0:
                return False
            if a < t.n and c < t.n and not self.g.has_edge(a, c):
                return False
            deg[a] = deg.get(a, 0) + w
            deg[c] = deg.get(c, 0) + w
        for v, dv in deg.items():
            if v < t.n:
                if dv > self.b[v]:
                    return False
            else:
                j = t.home[v]
                k = t.parent_edge[j]
                if k is not None and t.edges[k].child_marker == v:
                    want = self.demand[j]
                else:
                    want = next(self.demand[t.edges[e].child] for e in t.child_edges[j] if t.edges[e].parent_marker == v)
                if dv != want:
                    return False
        return True


def _kernel_solve(g: Graph, b: Sequence[int], kernel: Kernel) -> tuple[list[int], int]:
    res = kernel.bmatching(g, b)
    return res.x, res.cardinality


def solve_bmatching(
    g: Graph,
    b: Sequence[int],
    mode: str = "splitdp",
    kernel: Optional[Kernel] = None,
    cache: bool = True,
    instrument: bool = False,
) -> SolveResult:
    """Maximum-cardinality b-matching of (g, b).

    Parameters:
        mode: ``"splitdp"`` runs the decomposition algorithm on every
            connected part with at least four vertices; ``"kernel"`` solves
            the whole graph with the kernel; ``"auto"`` uses the kernel for
            graphs with at most ``AUTO_KERNEL_MAX_N`` vertices.
        cache: Share solves between identical canonical components.
        instrument: Merge with explicit per-subtree solutions and record a
            MergeRecord per merge in ``stats["merge_records"]``.

    Returns:
        SolveResult with the matching indexed by edge id of g.
    """
    if mode not in ("splitdp", "kernel", "auto"):
        raise ValueError(f"unknown mode {mode!r}")
    b = check_capacities(g, b)
    kernel = kernel or Kernel()
    stats = _new_stats()
    stats["mode"] = mode
    if mode == "kernel" or (mode == "auto" and g.n <= AUTO_KERNEL_MAX_N):
        x, card = _kernel_solve(g, b, kernel)
        stats["kernel_calls_phase2"] = kernel.calls
        return SolveResult(card, x, stats)

    x = [0] * g.m
    records: list[MergeRecord] = []
    total = 0
    for verts in connected_components(g):
        if len(verts) < 2:
            continue
        sub, origin = induced_subgraph(g, verts)
        bsub = [b[v] for v in verts]
        t0 = time.perf_counter()
        tree = decompose_minimal(sub) if sub.n >= 4 else None
        stats["time_decompose_ms"] += (time.perf_counter() - t0) * 1e3
        if tree is None or len(tree) == 1:
            stats["components"] += 1
            if tree is not None:
                stats["split_width"] = max(stats["split_width"], tree.split_width())
            calls = kernel.calls
            xs, card = _kernel_solve(sub, bsub, kernel)
            stats["kernel_calls_phase2"] += kernel.calls - calls
        else:
            stats["components"] += len(tree)
            stats["split_width"] = max(stats["split_width"], tree.split_width())
            ts = _TreeSolver(sub, bsub, tree, kernel, stats, cache=cache, instrument=instrument)
            t0 = time.perf_counter()
            prof = ts.phase1()
            t1 = time.perf_counter()
            pairs = ts.phase2()
            t2 = time.perf_counter()
            stats["time_phase1_ms"] += (t1 - t0) * 1e3
            stats["time_phase2_ms"] += (t2 - t1) * 1e3
            records += ts.merges
            xs = [0] * sub.m
            for (a, c), w in pairs.items():
                e = sub.edge_id(a, c)
                if e is None:
                    raise SolverError("merge", f"merged weight on non-edge ({a}, {c})")
                xs[e] = w
            card = sum(xs)
            if card != prof.mu0:
                raise SolverError("cardinality", f"phase 2 found {card}, phase 1 promised {prof.mu0}")
        for e, w in enumerate(xs):
            x[origin[e]] = w
        total += card
    if validate_bmatching(g, b, x) is not None:
        raise SolverError("invalid", str(validate_bmatching(g, b, x)))
    if instrument:
        stats["merge_records"] = records
    return SolveResult(total, x, stats)


def solve_maximum_matching(g: Graph, **kwargs: Any) -> SolveResult:
    """Maximum matching as the b = 1 case; weights are 0/1."""
    return solve_bmatching(g, [1] * g.n, **kwargs)


def phase1_call_bound(components: int, total_capacity: int) -> float:
    import math

    return BETA * components * math.log2(total_capacity + 2)


# ---------------------------------------------------------------------------
# Reduction identity across a single split
# ---------------------------------------------------------------------------


class ReductionCheck(NamedTuple):
    xw_cardinality: int
    profile_u: MuProfile
    predicted: int


def reduction_identity(g: Graph, b: Sequence[int], U: Sequence[int], kernel: Optional[Kernel] = None) -> ReductionCheck:
    """Predict the optimum of (g, b) from one split (U, W).

    The U side G[U + {w}] is summarized by its profile for the marker w;
    the W side G[W + {u}] gets u replaced by the gadget module. The
    prediction is ||x^W|| + mu^U(0) - c2^U.
    """
    kernel = kernel or Kernel()
    Us = set(U)
    W = [v for v in range(g.n) if v not in Us]
    Ul = sorted(Us)
    C = [v for v in Ul if any(z not in Us for z in g.neighbors(v))]
    D = sorted({z for v in C for z in g.neighbors(v) if z not in Us})
    # U side: vertices Ul then marker w
    iu = {v: k for k, v in enumerate(Ul)}
    wm = len(Ul)
    gu = build_graph(wm + 1, [(iu[a], iu[c]) for a, c in g.edges if a in Us and c in Us] + [(iu[v], wm) for v in C])
    pu, _ = compute_profile(gu, [b[v] for v in Ul] + [0], wm, kernel)
    # W side with the module in place of u
    verts = W + [-1]
    edges = [(a, c) for a, c in g.edges if a not in Us and c not in Us] + [(v, -1) for v in D]
    h = build_gadget_component(verts, edges, {-1: pu}, lambda v: b[v])
    xw = kernel.bmatching(h.graph, h.b).cardinality
    return ReductionCheck(xw, pu, xw + pu.mu0 - pu.c2)
