"""
The function mu(t): maximum b-matching cardinality when one distinguished
vertex w gets capacity t, and its three-number profile (mu0, c1, c2).

mu rises by one per unit of t up to c1, then by one per two units for
another 2*c2 units, then stays flat. ``compute_profile`` finds both
breakpoints by doubling followed by bisection, so it needs only
O(log ||b||) kernel calls.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from typing import NamedTuple, Optional

from .graph import Graph
from .kernel import Kernel


class MuProfile(NamedTuple):
    mu0: int
    c1: int
    c2: int


def mu_from_profile(p: MuProfile, t: int) -> int:
    """Evaluate the piecewise-linear closed form at t >= 0."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    if t <= p.c1:
        return p.mu0 + t
    if t <= p.c1 + 2 * p.c2:
        return p.mu0 + p.c1 + (t - p.c1) // 2
    return p.mu0 + p.c1 + p.c2


def _with_capacity(b_partial: Sequence[int], w: int, t: int) -> list[int]:
    b = list(b_partial)
    b[w] = t
    return b


def mu_at(g: Graph, b_partial: Sequence[int], w: int, t: int, kernel: Optional[Kernel] = None) -> int:
    """mu(t) for vertex w; the entry ``b_partial[w]`` is ignored."""
    if t < 0:
        raise ValueError("t must be nonnegative")
    kernel = kernel or Kernel()
    return kernel.bmatching(g, _with_capacity(b_partial, w, t)).cardinality


def call_bound(total_capacity: int) -> int:
    """Kernel calls ``compute_profile`` may use for a given sum of capacities."""
    return 4 * max(1, (total_capacity + 2 - 1).bit_length()) + 8


def _last_true(pred: Callable[[int], bool], hi: int) -> int:
    """Largest i in [0, hi] with pred(i), assuming pred(0) and monotonicity.

    Doubles from 1 until the predicate fails or passes hi, then bisects.
    """
    lo = 0
    step = 1
    while step <= hi and pred(step):
        lo = step
        step *= 2
    top = min(step, hi + 1)  # pred(top) is false or top is out of range
    while top - lo > 1:
        mid = (lo + top) // 2
        if pred(mid):
            lo = mid
        else:
            top = mid
    return lo


def compute_profile(
    g: Graph, b_partial: Sequence[int], w: int, kernel: Optional[Kernel] = None
) -> tuple[MuProfile, int]:
    """Profile of mu for vertex w.

    Returns the profile and the number of distinct mu evaluations it took.
    """
    kernel = kernel or Kernel()
    memo: dict[int, int] = {}

    def mu(t: int) -> int:
        if t not in memo:
            memo[t] = kernel.bmatching(g, _with_capacity(b_partial, w, t)).cardinality
        return memo[t]

    mu0 = mu(0)
    ub = sum(b_partial[u] for u, _ in g.adj[w])
    if ub == 0:
        return MuProfile(mu0, 0, 0), len(memo)
    c1 = _last_true(lambda t: mu(t) == mu0 + t, ub)
    base = mu(c1)
    c2 = _last_true(lambda i: mu(c1 + 2 * i) == base + i, (ub - c1) // 2)
    return MuProfile(mu0, c1, c2), len(memo)
