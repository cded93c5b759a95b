"""Does adding a single pendant edge at v lower lambda_max?

The change of the Rayleigh quotient is a concave quadratic in the value y
put on the new edge. Using the Perron vector of T as trial vector gives a
test based on rho = S^2/A at v; the coarse test only looks at deg(v).
"""
import numpy as np

from treericci import attach_leaves, build_tree, lambda_max, one_step_guarantee, rayleigh_difference, theta
from treericci.ricci import perron

fork = build_tree([("v", "u1"), ("u1", "w1"), ("v", "u2"), ("u2", "z1"), ("u2", "z2")])


def hubs(n_hubs, m):
    edges = [("v", f"n{i}") for i in range(5)]
    edges += [(f"n{i}", f"n{i}x{j}") for i in range(n_hubs) for j in range(m)]
    return build_tree(edges)


print("theta(d):", {d: round(theta(d), 4) for d in range(2, 8)})

for name, tree in [("fork-chain", fork), ("two hubs", hubs(2, 5)), ("five hubs", hubs(5, 1))]:
    ok, a = one_step_guarantee(tree, "v")
    after = lambda_max(attach_leaves(tree, "v", 1))
    print(f"\n{name}: d = {a.d}, mu = {a.mu:.4f}, theta = {a.theta:.4f}, rho = {a.rho:.4f}")
    print(f"    coarse {a.coarse_holds}, sharp {a.criterion_holds}, best y {a.y_star:.4f}")
    print(f"    lambda_max {a.mu:.6f} -> {after:.6f} ({'up' if after >= a.mu else 'down'})")
    assert not ok or after >= a.mu - 1e-10

# the quadratic itself, for the fork-chain Perron vector
_, w, _ = perron(fork)
f = w / np.linalg.norm(w)
for y in np.linspace(-0.2, 0.6, 5):
    print(f"y = {y:5.2f}   Delta = {rayleigh_difference(fork, 'v', f, y):+.5f}")
