"""Orbit reduction of ``R_{T_k}`` for repeated leaf attachment at one vertex.

The ``k`` new pendant edges at the pivot ``v`` are interchangeable, so the
Perron vector is constant on them and they collapse to a single coordinate
``y``. Optionally, further classes of old edges known to carry equal Perron
values (sibling leaves, say) collapse too. Coordinates hold the common value
on a class; row ``O`` of the quotient is the row of any representative of
``O`` summed over each target class.

In these coordinates ``Q_k = Q_inf + B / (d + k)`` with ``Q_inf`` and ``B``
independent of ``k``. Entries of ``R_{T_k}`` split into a part without
``1/d_v`` (the Dirichlet part, giving ``Q_inf``) and integer multiples of
``1/d_v = 1/(d + k)`` (giving ``B``).
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple, Sequence

import numpy as np

from .eigen import BlockUpperTriangular, sym_eigen, symmetrize, top_pair_symmetrizable
from .errors import DimensionCap, IncompatiblePartition, InvalidK
from .ricci import ricci_entries
from .tree import Branch, Tree, attach_leaves, branch_decomposition

DIMENSION_CAP = 2000


@dataclass(frozen=True)
class OrbitPartition:
    """Disjoint edge-index classes covering the edge set of a tree."""
    classes: tuple[tuple[int, ...], ...]

    @property
    def sizes(self) -> list[int]:
        return [len(c) for c in self.classes]


@dataclass(frozen=True)
class Interface:
    c: np.ndarray
    b: np.ndarray
    beta: np.ndarray


@dataclass(frozen=True)
class ReducedSystem:
    """The ``k``-independent data describing the family ``Q_k``.

    Old-edge coordinates come first, grouped by branch (root edge first in
    each branch); the last coordinate is the leaf cluster ``y``. With
    ``exact=True`` at construction, the matrices hold ``Fraction`` objects.
    """
    tree: Tree
    pivot: str
    d: int
    classes: tuple[tuple[int, ...], ...]
    branch_slices: tuple[slice, ...]
    limit: np.ndarray
    coupling: np.ndarray
    scaling: np.ndarray
    exact: bool = False

    @property
    def dim(self) -> int:
        return self.limit.shape[0]

    @property
    def n_branches(self) -> int:
        return len(self.branch_slices)

    @property
    def branch_blocks(self) -> list[np.ndarray]:
        return [self.limit[s, s] for s in self.branch_slices]

    @property
    def branch_scalings(self) -> list[np.ndarray]:
        return [self.scaling[s] for s in self.branch_slices]

    @property
    def interface(self) -> list[Interface]:
        out = []
        for s in self.branch_slices:
            out.append(Interface(self.limit[s, -1], self.coupling[s, -1], self.coupling[-1, s]))
        return out

    @property
    def scalar_row(self) -> np.ndarray:
        return self.coupling[-1, :]

    @property
    def b_yy(self):
        return self.coupling[-1, -1]

    def as_float(self) -> "ReducedSystem":
        if not self.exact:
            return self
        return ReducedSystem(
            self.tree, self.pivot, self.d, self.classes, self.branch_slices,
            self.limit.astype(float), self.coupling.astype(float), self.scaling, False,
        )

    def limit_blocks(self) -> BlockUpperTriangular:
        """``Q_inf`` as a block upper-triangular structure (branches, then ``y``)."""
        rs = self.as_float()
        nb = rs.n_branches
        upper = {(j, nb): rs.limit[s, -1:] for j, s in enumerate(rs.branch_slices)}
        return BlockUpperTriangular(
            rs.branch_blocks + [np.zeros((1, 1))], upper, rs.branch_scalings + [np.ones(1)]
        )


@dataclass(frozen=True)
class ReducedMatrix:
    k: int
    entries: np.ndarray
    scaling: np.ndarray


def orbit_partition(t: Tree, classes: Sequence[Sequence] = ()) -> OrbitPartition:
    """Complete ``classes`` to a partition of ``E(t)`` with singletons.

    Class members may be edge indices or edge labels ``"u~v"``.
    """
    index = t.edge_index
    seen: set[int] = set()
    out = []
    for cls in classes:
        members = []
        for item in cls:
            if isinstance(item, (int, np.integer)):
                i = int(item)
                if not 0 <= i < t.n_edges:
                    raise IncompatiblePartition(f"edge index {i} out of range")
            else:
                a, sep, b = str(item).partition("~")
                if not sep:
                    raise IncompatiblePartition(f"edge label {item!r} is not of the form u~v")
                key = (a, b) if a <= b else (b, a)
                if key not in index:
                    raise IncompatiblePartition(f"no edge {item!r} in tree")
                i = index[key]
            if i in seen:
                raise IncompatiblePartition(f"edge {t.edges[i]} appears in two classes")
            seen.add(i)
            members.append(i)
        if members:
            out.append(tuple(sorted(members)))
    out.extend((i,) for i in range(t.n_edges) if i not in seen)
    return OrbitPartition(tuple(sorted(out)))


def read_orbits(path: str | Path, t: Tree) -> OrbitPartition:
    """Load a JSON list of lists of edge labels ``"u~v"``."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if not isinstance(data, list) or not all(isinstance(c, list) for c in data):
        raise IncompatiblePartition("orbit file must hold a JSON list of lists")
    return orbit_partition(t, data)


def _dirichlet_parts(t: Tree, v: str, num):
    """Split ``R_T`` at pivot ``v`` into ``P + N / d_v`` with ``N`` integral."""
    n = t.n_edges
    p = [[num(0)] * n for _ in range(n)]
    nmat = [[0] * n for _ in range(n)]
    at: dict[str, list[int]] = {}
    for i, e in enumerate(t.edges):
        for z in e:
            at.setdefault(z, []).append(i)
    for i, (x, y) in enumerate(t.edges):
        for z in (x, y):
            if z == v:
                nmat[i][i] -= 1
            else:
                p[i][i] -= num(1) / t.degree[z]
    for z, edges in at.items():
        for a in edges:
            for b in edges:
                if a == b:
                    continue
                if z == v:
                    nmat[a][b] += 1
                else:
                    p[a][b] += num(1) / t.degree[z]
    incident = [1 if v in e else 0 for e in t.edges]
    return p, nmat, incident


def _check_compatible(t: Tree, v: str, classes, branch_of: dict[int, int]) -> None:
    for cls in classes:
        if len({branch_of[i] for i in cls}) > 1:
            raise IncompatiblePartition(f"class {[t.edges[i] for i in cls]} spans several branches")
    r = ricci_entries(t)
    p, nmat, incident = _dirichlet_parts(t, v, float)
    p, nmat = np.array(p), np.array(nmat, dtype=float)
    for cls in classes:
        if len(cls) == 1:
            continue
        if len({incident[i] for i in cls}) > 1:
            raise IncompatiblePartition("class mixes edges at the pivot with edges away from it")
        for other in classes:
            cols = list(other)
            for m in (r, p, nmat):
                sums = m[np.ix_(cls, cols)].sum(axis=1)
                if np.max(np.abs(sums - sums[0])) > 1e-12:
                    raise IncompatiblePartition(
                        f"row sums of class {[t.edges[i] for i in cls]} differ "
                        f"over class {[t.edges[i] for i in other]}"
                    )


def reduced_system(t: Tree, v: str, extra_classes: OrbitPartition | Sequence[Sequence] | None = None,
                   *, exact: bool = False) -> ReducedSystem:
    """Build ``Q_inf`` and ``B`` for growth at ``v``.

    ``extra_classes`` may merge old edges into orbit classes; they are checked
    for compatibility with the Ricci matrix (equal row sums over every class,
    for all ``k``) and rejected with IncompatiblePartition otherwise.
    """
    bd = branch_decomposition(t, v)
    if extra_classes is None:
        part = orbit_partition(t)
    elif isinstance(extra_classes, OrbitPartition):
        part = orbit_partition(t, extra_classes.classes)
    else:
        part = orbit_partition(t, extra_classes)
    branch_of = {i: j for j, br in enumerate(bd.branches) for i in br.edges}
    _check_compatible(t, v, part.classes, branch_of)

    ordered: list[tuple[int, ...]] = []
    slices = []
    for j, br in enumerate(bd.branches):
        mine = [c for c in part.classes if branch_of[c[0]] == j]
        mine.sort(key=lambda c: (br.root_edge not in c, c[0]))
        slices.append(slice(len(ordered), len(ordered) + len(mine)))
        ordered.extend(mine)

    num = Fraction if exact else float
    p, nmat, incident = _dirichlet_parts(t, v, num)
    d = bd.d
    n = len(ordered) + 1
    dtype = object if exact else float
    q_inf = np.zeros((n, n), dtype=dtype)
    b = np.zeros((n, n), dtype=dtype)
    if exact:
        q_inf[:] = Fraction(0)
        b[:] = Fraction(0)
    for a, cls in enumerate(ordered):
        rep = cls[0]
        for c, other in enumerate(ordered):
            q_inf[a, c] = sum((p[rep][e] for e in other), num(0))
            b[a, c] = num(sum(nmat[rep][e] for e in other))
        q_inf[a, -1] = num(incident[rep])
        b[a, -1] = num(-d * incident[rep])
        b[-1, a] = num(sum(incident[e] for e in cls))
    b[-1, -1] = num(-(d + 2))

    scaling = np.sqrt([float(len(c)) for c in ordered])
    rs = ReducedSystem(t, v, d, tuple(ordered), tuple(slices), q_inf, b, scaling, exact)
    for k in (1, 2):
        qk = reduced_matrix(rs, k)
        symmetrize(qk.entries.astype(float), qk.scaling)
    return rs


def dirichlet_branch_matrix(t: Tree, branch: Branch | int, v: str | None = None,
                            extra_classes=None, *, exact: bool = False) -> np.ndarray:
    """``A_j``: the Ricci matrix of one branch with every ``1/d_v`` term dropped.

    ``branch`` is a :class:`Branch` or a branch index; ``v`` defaults to the
    other endpoint of the branch's root edge.
    """
    if isinstance(branch, Branch):
        if v is None:
            x, y = t.edges[branch.root_edge]
            v = x if y == branch.root else y
        j = [b.root for b in branch_decomposition(t, v).branches].index(branch.root)
    else:
        if v is None:
            raise ValueError("pivot required when branch is given by index")
        j = branch
    rs = reduced_system(t, v, extra_classes, exact=exact)
    s = rs.branch_slices[j]
    return rs.limit[s, s]


def reduced_matrix(rs: ReducedSystem, k: int) -> ReducedMatrix:
    """``Q_k = Q_inf + B / (d + k)`` with its symmetrizing scaling."""
    if int(k) != k or k < 1:
        raise InvalidK(f"k must be a positive integer, got {k}; k = 0 needs the full matrix")
    k = int(k)
    if rs.exact:
        entries = rs.limit + rs.coupling * Fraction(1, rs.d + k)
    else:
        entries = rs.limit + rs.coupling / (rs.d + k)
    return ReducedMatrix(k, entries, np.append(rs.scaling, np.sqrt(k)))


def lambda_k(rs: ReducedSystem, k: int) -> float:
    qk = reduced_matrix(rs, k)
    return top_pair_symmetrizable(qk.entries.astype(float), qk.scaling).value


class OracleCheck(NamedTuple):
    reduced: float
    full: float
    diff: float


def full_lambda(t: Tree, v: str, k: int) -> float:
    """``lambda_max(R_{T_k})`` from the explicitly built tree."""
    if t.n_edges + k > DIMENSION_CAP:
        raise DimensionCap(f"full matrix would have {t.n_edges + k} rows (cap {DIMENSION_CAP})")
    return float(sym_eigen(ricci_entries(attach_leaves(t, v, k))).values[0])


def reduction_oracle_check(t: Tree, v: str, k: int, extra_classes=None) -> OracleCheck:
    """Compare the reduced top eigenvalue with the full-matrix one."""
    if t.n_edges + k > DIMENSION_CAP:
        raise DimensionCap(f"full matrix would have {t.n_edges + k} rows (cap {DIMENSION_CAP})")
    red = lambda_k(reduced_system(t, v, extra_classes), k)
    full = full_lambda(t, v, k)
    return OracleCheck(red, full, abs(red - full))
