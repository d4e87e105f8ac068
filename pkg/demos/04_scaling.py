"""Running time on distance-hereditary graphs of growing size."""

import math
import sys
import time

import numpy as np

from splitmatch import max_matching, solve_maximum_matching
from splitmatch.testkit import gen_distance_hereditary

top = int(sys.argv[1]) if len(sys.argv) > 1 else 14
solve_maximum_matching(gen_distance_hereditary(256, 0))  # warm-up
xs, ys = [], []
for e in range(10, top + 1):
    g = gen_distance_hereditary(2**e, e)
    t0 = time.perf_counter()
    res = solve_maximum_matching(g)
    secs = time.perf_counter() - t0
    check = max_matching(g).cardinality == res.cardinality
    print(f"n={g.n:6d} m={g.m:7d} time={secs * 1e3:9.1f} ms  matching={res.cardinality}  blossom agrees={check}")
    xs.append(math.log(g.n + g.m))
    ys.append(math.log(secs))
print(f"log-log slope: {np.polyfit(xs, ys, 1)[0]:.3f}")
