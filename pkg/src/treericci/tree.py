"""Labeled finite trees with a canonical edge order.

Edges are stored as sorted label pairs and the edge list itself is sorted
lexicographically, so edge ``i`` means the same thing on every run.
"""
from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import (
    DuplicateEdge,
    InvalidLabel,
    NotATree,
    SelfLoop,
    UnknownVertex,
)

Edge = tuple[str, str]

LEAF_PREFIX = "~leaf"


def _norm(a: str, b: str) -> Edge:
    return (a, b) if a <= b else (b, a)


def edge_label(e: Edge) -> str:
    """Render an edge as ``"min~max"``."""
    return f"{e[0]}~{e[1]}"


@dataclass(frozen=True)
class Tree:
    vertices: frozenset[str]
    edges: tuple[Edge, ...]
    degree: Mapping[str, int] = field(compare=False)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}

    def index_of(self, a: str, b: str) -> int:
        try:
            return self.edges.index(_norm(a, b))
        except ValueError:
            raise KeyError(f"no edge {a}-{b}") from None

    def incident(self, v: str) -> list[int]:
        """Indices of the edges containing ``v``, in canonical order."""
        if v not in self.vertices:
            raise UnknownVertex(v)
        return [i for i, e in enumerate(self.edges) if v in e]

    def neighbors(self, v: str) -> list[str]:
        if v not in self.vertices:
            raise UnknownVertex(v)
        out = [b if a == v else a for a, b in self.edges if v in (a, b)]
        return sorted(out)

    @property
    def max_degree(self) -> int:
        return max(self.degree.values())

    def __repr__(self) -> str:
        return f"Tree(n_edges={self.n_edges}, edges={[edge_label(e) for e in self.edges]})"


@dataclass(frozen=True)
class Branch:
    """One component of ``T - v`` together with its root edge ``{v, u}``.

    ``edges`` lists indices into the parent tree's edge list, root edge first,
    remaining edges in canonical order.
    """
    root: str
    root_edge: int
    edges: tuple[int, ...]


@dataclass(frozen=True)
class BranchDecomposition:
    pivot: str
    branches: tuple[Branch, ...]
    d: int


def _check_label(label: str, allow_reserved: bool) -> None:
    if not isinstance(label, str) or not label or any(c.isspace() for c in label):
        raise InvalidLabel(f"bad vertex label {label!r}")
    if "~" in label and not (allow_reserved and label.startswith(LEAF_PREFIX)):
        raise InvalidLabel(f"label {label!r} uses the reserved character '~'")


def build_tree(edge_pairs: Iterable[Sequence[str]], *, _allow_reserved: bool = False) -> Tree:
    """Validate an edge list and return it as a canonical :class:`Tree`.

    Raises SelfLoop, DuplicateEdge or NotATree for invalid input.
    """
    pairs = [tuple(p) for p in edge_pairs]
    if not pairs:
        raise NotATree("a tree needs at least one edge")
    seen: set[Edge] = set()
    for p in pairs:
        if len(p) != 2:
            raise NotATree(f"edge {p!r} does not have two endpoints")
        a, b = p
        _check_label(a, _allow_reserved)
        _check_label(b, _allow_reserved)
        if a == b:
            raise SelfLoop(f"self-loop at {a!r}")
        e = _norm(a, b)
        if e in seen:
            raise DuplicateEdge(f"edge {edge_label(e)} given twice")
        seen.add(e)

    edges = tuple(sorted(seen))
    adj: dict[str, list[str]] = defaultdict(list)
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    vertices = frozenset(adj)
    if len(edges) != len(vertices) - 1:
        raise NotATree(f"{len(edges)} edges on {len(vertices)} vertices")
    start = min(vertices)
    reached = {start}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in reached:
                reached.add(y)
                queue.append(y)
    if len(reached) != len(vertices):
        raise NotATree("edge list is disconnected")
    degree = {v: len(adj[v]) for v in sorted(vertices)}
    return Tree(vertices, edges, degree)


def parse_tree(text: str) -> Tree:
    """Parse the one-edge-per-line text format (``#`` comments allowed)."""
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise NotATree(f"line {lineno}: expected two labels, got {len(parts)}")
        pairs.append((parts[0], parts[1]))
    return build_tree(pairs)


def read_tree(path: str | Path) -> Tree:
    return parse_tree(Path(path).read_text(encoding="utf-8"))


def format_tree(t: Tree) -> str:
    return "".join(f"{a} {b}\n" for a, b in t.edges)


def attach_leaves(t: Tree, v: str, k: int) -> Tree:
    """Return ``T_k``: ``t`` with ``k`` new pendant edges at ``v``.

    New vertices are named ``~leaf<n>`` with ``n`` continuing past any
    generated leaves already present, so repeated calls never collide.
    """
    if v not in t.vertices:
        raise UnknownVertex(v)
    if k < 0:
        raise ValueError("k must be nonnegative")
    used = [int(x[len(LEAF_PREFIX):]) for x in t.vertices if x.startswith(LEAF_PREFIX)]
    start = max(used) + 1 if used else 0
    new = [(v, f"{LEAF_PREFIX}{start + i}") for i in range(k)]
    return build_tree(list(t.edges) + new, _allow_reserved=True)


def branch_decomposition(t: Tree, v: str) -> BranchDecomposition:
    """Split the edges of ``t`` into the branches hanging off ``v``.

    Branch ``j`` holds the root edge ``{v, u_j}`` and every edge of the
    component of ``T - v`` containing ``u_j``; branches are ordered by
    neighbor label.
    """
    if v not in t.vertices:
        raise UnknownVertex(v)
    adj: dict[str, list[str]] = defaultdict(list)
    for a, b in t.edges:
        adj[a].append(b)
        adj[b].append(a)
    index = t.edge_index
    branches = []
    for u in sorted(adj[v]):
        comp_edges = []
        seen = {v, u}
        queue = deque([u])
        while queue:
            x = queue.popleft()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp_edges.append(index[_norm(x, y)])
                    queue.append(y)
        root = index[_norm(v, u)]
        branches.append(Branch(u, root, (root, *sorted(comp_edges))))
    return BranchDecomposition(v, tuple(branches), t.degree[v])


def star(n_edges: int, center: str = "v") -> Tree:
    """Star with ``n_edges`` leaves around ``center`` (``S_n`` has ``n-1`` edges)."""
    return build_tree([(center, f"x{i}") for i in range(n_edges)])


def path(n_vertices: int) -> Tree:
    labels = [f"p{i}" for i in range(n_vertices)]
    return build_tree(list(zip(labels, labels[1:])))
