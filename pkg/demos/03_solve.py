"""Solving b-matching through the decomposition and checking it against the oracle."""

import random

from splitmatch import solve_bmatching, validate_bmatching
from splitmatch.testkit import gen_bounded_splitwidth, oracle_bmatching

rng = random.Random(0)
g = gen_bounded_splitwidth(5, 40, seed=3)
b = [rng.randint(0, 3) for _ in range(g.n)]
res = solve_bmatching(g, b, mode="splitdp", instrument=True)
print(f"n={g.n} m={g.m} cardinality={res.cardinality}")
print("valid:", validate_bmatching(g, b, res.matching) is None)
print("oracle:", oracle_bmatching(g, b).cardinality)
for key in ("components", "split_width", "kernel_calls_phase1", "kernel_calls_phase2", "cache_hits_phase1", "merges"):
    print(f"  {key}: {res.stats[key]}")
recs = res.stats["merge_records"]
print("every merge satisfies |x| = |xU| + |xW| - d:", all(r.size == r.size_u + r.size_w - r.d for r in recs))
