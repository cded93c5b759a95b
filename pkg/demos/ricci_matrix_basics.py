"""The edge Ricci matrix of a small tree, its Laplacian/potential split,
and the Perron vector as a set of edge weights of constant curvature."""
import numpy as np

from treericci import build_tree, einstein_check, lly_curvature, ricci_matrix, schrodinger_split
from treericci.tree import edge_label

np.set_printoptions(precision=4, suppress=True)

tree = build_tree([("v", "u1"), ("u1", "w1"), ("v", "u2"), ("u2", "z1"), ("u2", "z2")])
labels = [edge_label(e) for e in tree.edges]
print("edges:", labels)

R = ricci_matrix(tree).entries
print("R_T =\n", R)

# Laplacian part has zero row sums; the potential carries the diagonal excess
split = schrodinger_split(tree)
print("row sums of the Laplacian part:", split.laplacian.sum(axis=1))
print("potential:", split.potential)

# top eigenvector -> positive weights, every edge sees curvature -lambda_max
res = einstein_check(tree)
print(f"lambda_max = {res.lambda_max:.6f}")
print("curvature per edge:", lly_curvature(tree, res.weights))
print(f"max deviation from constant: {res.max_deviation:.2e}")
