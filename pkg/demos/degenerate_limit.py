"""Two identical branches tie for lambda_inf.

With a repeated limit eigenvalue there is no single pair of eigenvectors;
the slope is the top eigenvalue of a small compressed matrix instead.
Fits need much larger k here before the bias dies out.
"""
import numpy as np

from treericci import build_tree, compression, convergence_diagnostics, reduced_system
from treericci.asymptotics import asymptotics

edges = [("v", "a0"), ("v", "b0")]
edges += [("a0", f"l{i}") for i in range(4)] + [("b0", f"m{i}") for i in range(4)]
tree = build_tree(edges)
rs = reduced_system(tree, "v")

rep = asymptotics(rs)
print(f"lambda_inf = {rep.lambda_inf:.8f}, multiplicity {rep.multiplicity}, achieved by branches {rep.achiever}")
W = compression(rs)
print("compressed slope matrix W =\n", W.round(6))
print("eigenvalues of W:", np.sort(np.linalg.eigvals(W).real))
print(f"alpha_max = {rep.alpha_max:.6f}")

for ks in ([10**3, 10**4, 10**5], [10**6, 10**7, 10**8]):
    diag = convergence_diagnostics(tree, "v", ks, rs=rs)
    print(f"fit at k = {ks}: {diag.alpha_hat:.6f} (error {diag.error:.1e})")
