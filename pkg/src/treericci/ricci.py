"""The Ricci matrix of a tree and the quantities built on it."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .eigen import sym_eigen
from .errors import DimensionMismatch, NonpositiveWeight
from .tree import Edge, Tree, edge_label

CHECK_QUADRATIC_FORM = __debug__


@dataclass(frozen=True)
class RicciMatrix:
    entries: np.ndarray
    edges: tuple[Edge, ...]

    @property
    def dim(self) -> int:
        return len(self.edges)

    @property
    def edge_index(self) -> dict[Edge, int]:
        return {e: i for i, e in enumerate(self.edges)}


@dataclass(frozen=True)
class SchrodingerSplit:
    laplacian: np.ndarray
    potential: np.ndarray


class EinsteinCheck(NamedTuple):
    lambda_max: float
    weights: np.ndarray
    max_deviation: float


def ricci_entries(t: Tree) -> np.ndarray:
    """Assemble ``R_T`` entry by entry from degree reciprocals."""
    n = t.n_edges
    r = np.zeros((n, n))
    inv = {v: 1.0 / d for v, d in t.degree.items()}
    by_vertex: dict[str, list[int]] = {}
    for i, (x, y) in enumerate(t.edges):
        r[i, i] = -(inv[x] + inv[y])
        by_vertex.setdefault(x, []).append(i)
        by_vertex.setdefault(y, []).append(i)
    for z, inc in by_vertex.items():
        for a in range(len(inc)):
            for b in range(a + 1, len(inc)):
                i, j = inc[a], inc[b]
                r[i, j] = r[j, i] = inv[z]
    return r


def ricci_matrix(t: Tree) -> RicciMatrix:
    return RicciMatrix(ricci_entries(t), t.edges)


def schrodinger_split(t: Tree) -> SchrodingerSplit:
    """Write ``R_T = Delta - diag(V)`` with ``Delta`` a zero-row-sum Laplacian."""
    r = ricci_entries(t)
    pot = np.array([2.0 / t.degree[x] + 2.0 / t.degree[y] - 2.0 for x, y in t.edges])
    lap = r.copy()
    np.fill_diagonal(lap, [1.0 / t.degree[x] + 1.0 / t.degree[y] - 2.0 for x, y in t.edges])
    return SchrodingerSplit(lap, pot)


def vertex_sums(t: Tree, f, v: str) -> tuple[float, float]:
    """``(S_v(f), A_v(f))``: sum and sum of squares of ``f`` on edges at ``v``."""
    vals = np.asarray(f, dtype=float)[t.incident(v)]
    return float(vals.sum()), float(vals @ vals)


def _as_edge_vector(t: Tree, f) -> np.ndarray:
    f = np.asarray(f, dtype=float)
    if f.shape != (t.n_edges,):
        raise DimensionMismatch(f"expected {t.n_edges} edge values, got shape {f.shape}")
    return f


def quadratic_form(t: Tree, f, *, check: bool | None = None) -> float:
    """``<f, R_T f>`` via the vertex decomposition ``sum_w (S_w^2 - 2 A_w) / d_w``.

    With ``check`` (on by default unless Python runs with ``-O``), the result is
    compared to the matrix product and an AssertionError raised on mismatch.
    """
    f = _as_edge_vector(t, f)
    s: dict[str, float] = {}
    a: dict[str, float] = {}
    for (x, y), fe in zip(t.edges, f):
        for w in (x, y):
            s[w] = s.get(w, 0.0) + fe
            a[w] = a.get(w, 0.0) + fe * fe
    total = sum((s[w] ** 2 - 2.0 * a[w]) / t.degree[w] for w in s)
    if CHECK_QUADRATIC_FORM if check is None else check:
        direct = float(f @ ricci_entries(t) @ f)
        assert abs(total - direct) <= 1e-10 * max(1.0, abs(direct)), (total, direct)
    return float(total)


def lly_curvature(t: Tree, w) -> np.ndarray:
    """Lin-Lu-Yau curvature of every edge of ``t`` weighted by ``w > 0``."""
    w = _as_edge_vector(t, w)
    if np.any(w <= 0):
        raise NonpositiveWeight("edge weights must be positive")
    s: dict[str, float] = {}
    for (x, y), we in zip(t.edges, w):
        s[x] = s.get(x, 0.0) + we
        s[y] = s.get(y, 0.0) + we
    kappa = np.empty(t.n_edges)
    for i, ((x, y), we) in enumerate(zip(t.edges, w)):
        kappa[i] = -((s[x] - 2 * we) / (we * t.degree[x]) + (s[y] - 2 * we) / (we * t.degree[y]))
    return kappa


def perron(t: Tree) -> tuple[float, np.ndarray, float]:
    """Top eigenvalue, positive unit eigenvector and spectral gap of ``R_T``."""
    res = sym_eigen(ricci_entries(t))
    return float(res.values[0]), res.vectors[:, 0], res.gap


def lambda_max(t: Tree) -> float:
    return perron(t)[0]


def einstein_check(t: Tree) -> EinsteinCheck:
    """Perron data of ``R_T`` and how far the induced curvature is from ``-lambda_max``."""
    lam, w, _ = perron(t)
    kappa = lly_curvature(t, w)
    return EinsteinCheck(lam, w, float(np.max(np.abs(kappa + lam))))


def matrix_csv(t: Tree, m=None) -> str:
    """Dump a square edge-indexed matrix (``R_T`` by default) as CSV."""
    m = ricci_entries(t) if m is None else np.asarray(m)
    labels = [edge_label(e) for e in t.edges]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["edge", *labels])
    for lab, row in zip(labels, m):
        writer.writerow([lab, *(f"{x:.12g}" for x in row)])
    return buf.getvalue()
