"""How the optimum reacts to the capacity of one vertex."""

from splitmatch import build_graph, compute_profile, mu_from_profile
from splitmatch.testkit import sweep_mu

# w = 0 sees a and bb, which are also adjacent to each other
g = build_graph(3, [(0, 1), (0, 2), (1, 2)])
b = [0, 1, 1]
print("sweep:", sweep_mu(g, b, 0, 5))
p, evals = compute_profile(g, b, 0)
print("profile:", p, "from", evals, "evaluations")
print("closed form:", [mu_from_profile(p, t) for t in range(6)])

# a wider example where mu first climbs by one, then by one every two steps
g = build_graph(6, [(0, 1), (0, 2), (0, 3), (1, 2), (3, 4), (4, 5), (0, 5)])
b = [0, 2, 1, 2, 1, 2]
print("sweep:", sweep_mu(g, b, 0, 9))
p, evals = compute_profile(g, b, 0)
print("profile:", p, "closed form:", [mu_from_profile(p, t) for t in range(10)])
