"""
Merging two side solutions across a split.

Weights live on *label pairs* ``(a, c)`` with ``a < c``. A side solution of
G_U = G[U + {w}] puts some load on pairs containing the marker w, and the
side solution of G_W = G[W + {u}] on pairs containing u. If both markers
carry the same load d, pairing the two loads greedily over the complete
join C x D gives a solution of G with cardinality ||x^U|| + ||x^W|| - d.
A pair created this way may still contain a marker of some other split;
it is resolved when that split is merged, so the order in which tree edges
are merged does not matter.
"""

from __future__ import annotations

from collections.abc import Mapping
from typing import NamedTuple

from .graph import WeightStore, store_merge, store_split

Pair = tuple[int, int]


class MergeError(ValueError):
    def __init__(self, kind: str, message: str) -> None:
        super().__init__(f"{kind}: {message}")
        self.kind = kind


def pair(a: int, c: int) -> Pair:
    return (a, c) if a < c else (c, a)


class PairWeights:
    """Label-pair weights in a WeightStore, with an incidence index per label."""

    def __init__(self) -> None:
        self.store = WeightStore()
        self.inc: dict[int, set[int]] = {}
        self.work = 0

    def add(self, a: int, c: int, w: int) -> None:
        if w == 0:
            return
        key = pair(a, c)
        self.store[key] = (self.store[key] if key in self.store else 0) + w
        self.inc.setdefault(a, set()).add(c)
        self.inc.setdefault(c, set()).add(a)

    def add_all(self, weights: Mapping[Pair, int]) -> None:
        for (a, c), w in weights.items():
            self.add(a, c, w)

    def take(self, m: int) -> list[tuple[int, int]]:
        """Remove every pair containing m; return ``(other end, weight)`` sorted by label."""
        out = []
        for c in sorted(self.inc.pop(m, ())):
            key = pair(m, c)
            w = self.store[key]
            self.store[key] = 0
            self.inc[c].discard(m)
            if w:
                out.append((c, w))
        return out

    def positive(self) -> dict[Pair, int]:
        return {k: w for k, w in self.store.items() if w > 0}

    def total(self) -> int:
        return sum(w for _, w in self.store.items())


def merge_markers(pw: PairWeights, w: int, u: int) -> int:
    """Merge in place across the split whose markers are w (in G_U) and u (in G_W).

    Returns d. Raises MergeError ``"marker-degree"`` if the two marker loads
    differ.
    """
    left = pw.take(w)
    right = pw.take(u)
    d = sum(c for _, c in left)
    if d != sum(c for _, c in right):
        raise MergeError("marker-degree", f"marker {w} carries {d}, marker {u} carries {sum(c for _, c in right)}")
    pw.work += len(left) + len(right)
    if d == 0:
        return 0
    # The marker edge {u, w} is the only edge the two sides share: give each
    # side its own cell, clear both (their load now sits in left/right),
    # and fold the cells back before the greedy pairing writes cross edges.
    shared = pair(left[0][0], right[0][0])
    view_u, view_w = store_split(pw.store, shared)
    view_u[shared] = 0
    view_w[shared] = 0
    store_merge(view_u, view_w)
    i = j = 0
    lc, rc = left[0][1], right[0][1]
    while i < len(left) and j < len(right):
        delta = min(lc, rc)
        pw.add(left[i][0], right[j][0], delta)
        lc -= delta
        rc -= delta
        if lc == 0:
            i += 1
            if i < len(left):
                lc = left[i][1]
        if rc == 0:
            j += 1
            if j < len(right):
                rc = right[j][1]
    return d


class MergeContext(NamedTuple):
    """Two side solutions and the markers of the split between them.

    ``xu`` is a solution of G_U, where marker ``w`` stands for W; ``xw`` is a
    solution of G_W, where marker ``u`` stands for U.
    """

    xu: Mapping[Pair, int]
    xw: Mapping[Pair, int]
    w: int
    u: int


def marker_load(x: Mapping[Pair, int], m: int) -> int:
    return sum(wt for (a, c), wt in x.items() if m in (a, c))


def merge_across_split(ctx: MergeContext) -> dict[Pair, int]:
    """Combined solution as a fresh dict of positive weights.

    The result has cardinality ``||xu|| + ||xw|| - d``.
    """
    pw = PairWeights()
    pw.add_all(ctx.xu)
    pw.add_all(ctx.xw)
    merge_markers(pw, ctx.w, ctx.u)
    return pw.positive()
