"""Attach k leaves at one vertex and follow lambda_max as k grows.

The reduced matrix has fixed size no matter how many leaves are added;
for small k we compare it with the explicitly grown tree.
"""
from treericci import build_tree, reduced_system, reduction_oracle_check
from treericci.asymptotics import lambda_infinity
from treericci.reduction import lambda_k, reduced_matrix

tree = build_tree([("v", "u1"), ("u1", "w1"), ("v", "u2"), ("u2", "z1"), ("u2", "z2")])
# the two leaves under u2 are interchangeable: one coordinate for both
rs = reduced_system(tree, "v", [["u2~z1", "u2~z2"]])
print(f"reduced dimension {rs.dim}: {len(rs.classes)} edge classes plus the leaf cluster, for any k")
print("Q_5 =\n", reduced_matrix(rs, 5).entries.round(4))

print(f"\n{'k':>7} {'lambda_k':>12} {'full matrix':>12}")
for k in (1, 2, 3, 5, 10, 20, 50, 100, 1000, 100000):
    lam = lambda_k(rs, k)
    full = f"{reduction_oracle_check(tree, 'v', k).full:12.6f}" if k <= 100 else " " * 12
    print(f"{k:>7} {lam:12.6f} {full}")

print(f"\nlimit: {lambda_infinity(rs).value}")
