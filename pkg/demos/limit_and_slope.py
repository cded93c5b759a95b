"""Where lambda_k ends up and from which side it gets there.

lambda_inf comes from the branch blocks; the slope alpha in
lambda_k ~ lambda_inf + alpha/(d+k) comes from one pair of eigenvectors.
A fit of the tabulated values at large k should agree with it.
"""
from treericci import asymptotics, build_tree, convergence_diagnostics, reduced_system, tail_check

cases = {
    "fork-chain": (build_tree([("v", "u1"), ("u1", "w1"), ("v", "u2"), ("u2", "z1"), ("u2", "z2")]), "v"),
    "single edge": (build_tree([("v", "u1")]), "v"),
    "hub branch": (build_tree([("v", "a0")] + [("a0", f"l{i}") for i in range(4)]), "v"),
}

for name, (tree, v) in cases.items():
    rs = reduced_system(tree, v)
    rep = asymptotics(rs)
    diag = convergence_diagnostics(tree, v, [10**3, 10**4, 10**5], rs=rs)
    print(f"{name}: lambda_inf = {rep.lambda_inf:.6f} (from {rep.achiever}), alpha = {rep.alpha:.6f}")
    print(f"    fitted alpha at k = 1e3..1e5: {diag.alpha_hat:.6f}, {rep.direction}")

# the fork-chain sequence only settles into its final direction after a while
tc = tail_check(*cases["fork-chain"], k_start=0, window=60)
print(f"\nfork-chain: monotone on the tail from k = {tc.first_monotone_k}")
