"""Trees shared by the test modules."""
import os

import numpy as np

from treericci import build_tree

SEED = int(os.environ.get("RICCI_SEED", "20261015"))

FORK_CHAIN_EDGES = [("v", "u1"), ("u1", "w1"), ("v", "u2"), ("u2", "z1"), ("u2", "z2")]
# reference lambda_k on the fork-chain tree, 4 decimals
TABLE_KS = [0, 1, 2, 3, 5, 10, 20, 50, 100]
TABLE_LAMBDAS = [-0.1731, -0.0312, 0.0310, 0.0628, 0.0906, 0.1028, 0.0922, 0.0643, 0.0436]


def fork_chain():
    return build_tree(FORK_CHAIN_EDGES)


def single_edge():
    return build_tree([("v", "u1")])


def hub_branch_tree(n_hub_leaves=4):
    """v -- a0, with a0 carrying ``n_hub_leaves`` leaves: lambda_max(A_1) > 0 for >= 4."""
    return build_tree([("v", "a0")] + [("a0", f"l{i}") for i in range(n_hub_leaves)])


def twin_hubs(n=4):
    """Two identical hub branches at v: lambda_inf > 0 with multiplicity 2."""
    edges = [("v", "a0"), ("v", "b0")]
    edges += [("a0", f"l{i}") for i in range(n)] + [("b0", f"m{i}") for i in range(n)]
    return build_tree(edges)


def hubs_at_degree5(n_hubs, m):
    """v of degree 5; the first ``n_hubs`` neighbours carry ``m`` leaves each."""
    edges = [("v", f"n{i}") for i in range(5)]
    edges += [(f"n{i}", f"n{i}x{j}") for i in range(n_hubs) for j in range(m)]
    return build_tree(edges)


def path_tree(n_vertices):
    labels = [f"p{i:02d}" for i in range(n_vertices)]
    return build_tree(list(zip(labels, labels[1:])))


def star_tree(n_vertices):
    """Star S_n: n vertices, n - 1 edges, centre 'c'."""
    return build_tree([("c", f"x{i:02d}") for i in range(n_vertices - 1)])


def prufer_tree(seq, n):
    """Decode a Pruefer sequence over vertices 0..n-1."""
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(i for i in range(n) if degree[i] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, w = [i for i in range(n) if degree[i] == 1]
    edges.append((u, w))
    return build_tree([(f"t{a}", f"t{b}") for a, b in edges])


def random_tree(rng, n_edges):
    n = n_edges + 1
    if n == 2:
        return build_tree([("t0", "t1")])
    return prufer_tree([int(x) for x in rng.integers(0, n, size=n - 2)], n)


def corpus():
    """Named trees with a pivot, covering every regime the code distinguishes."""
    rng = np.random.default_rng(SEED)
    items = [
        ("fork_chain", fork_chain(), "v"),
        ("single_edge", single_edge(), "v"),
        ("path3_mid", path_tree(3), "p01"),
        ("path6_end", path_tree(6), "p00"),
        ("star5", star_tree(5), "c"),
        ("hub_branch", hub_branch_tree(4), "v"),
        ("twin_hubs", twin_hubs(4), "v"),
        ("deg5_two_hubs", hubs_at_degree5(2, 5), "v"),
        ("deg5_sym_hubs", hubs_at_degree5(5, 1), "v"),
        ("caterpillar", build_tree([("s0", "s1"), ("s1", "s2"), ("s2", "s3"), ("s0", "a"),
                                    ("s0", "b"), ("s3", "c"), ("s1", "d")]), "s1"),
    ]
    for i in range(8):
        t = random_tree(rng, int(rng.integers(2, 11)))
        items.append((f"random{i}", t, sorted(t.vertices)[int(rng.integers(0, len(t.vertices)))]))
    return items


CORPUS = corpus()
CORPUS_IDS = [name for name, _, _ in CORPUS]


def tree_strategy(max_edges=10, min_edges=1):
    from hypothesis import strategies as st

    @st.composite
    def trees(draw):
        n_edges = draw(st.integers(min_edges, max_edges))
        n = n_edges + 1
        if n == 2:
            return build_tree([("t0", "t1")])
        seq = draw(st.lists(st.integers(0, n - 1), min_size=n - 2, max_size=n - 2))
        return prufer_tree(seq, n)

    return trees()
