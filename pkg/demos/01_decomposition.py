"""Split decomposition of a small graph and of a larger distance-hereditary one."""

from splitmatch import build_graph, decompose_minimal, find_split, split_width, verify_decomposition
from splitmatch.cli import format_tree
from splitmatch.testkit import gen_distance_hereditary

# P4 has exactly one split, {0, 1} | {2, 3}, joined through the edge 1-2
p4 = build_graph(4, [(0, 1), (1, 2), (2, 3)])
s = find_split(p4)
print("split of P4:", s.U, "|", s.W, "frontiers", s.C, s.D)
t = decompose_minimal(p4)
print(format_tree(t))

# C5 is prime, so it is its own decomposition
c5 = build_graph(5, [(i, (i + 1) % 5) for i in range(5)])
print("split-width of C5:", split_width(c5))

g = gen_distance_hereditary(2000, seed=1)
t = decompose_minimal(g)
print(f"DH graph n={g.n} m={g.m}: {len(t)} components, width {t.split_width()}")
print("verified:", verify_decomposition(g, t, replay=False) is None)
