"""Dense eigensolvers used throughout the package.

Every matrix that reaches this module has a real spectrum: either it is
symmetric, or it becomes symmetric under a positive diagonal similarity,
or it is block upper-triangular with such blocks on the diagonal. Nothing
here ever touches a general nonsymmetric eigenproblem.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import (
    DegenerateEigenvalue,
    NoConvergence,
    NotSymmetric,
    NotSymmetrizable,
    SingularBlockSolve,
)

OFF_TOL = 1e-14
MAX_SWEEPS = 100
SIMPLE_GAP = 1e-9
SMALL_N = 48


@dataclass(frozen=True)
class EigenResult:
    values: np.ndarray
    vectors: np.ndarray
    gap: float


class TopPair(NamedTuple):
    value: float
    right: np.ndarray
    left: np.ndarray


def is_separated(a: float, b: float) -> bool:
    """True when ``a`` and ``b`` count as distinct eigenvalues."""
    return abs(a - b) > SIMPLE_GAP * max(1.0, abs(a))


def normalize_sign(x: np.ndarray) -> np.ndarray:
    """Flip ``x`` so its largest-magnitude entry is positive."""
    i = int(np.argmax(np.abs(x)))
    return -x if x[i] < 0 else x


@lru_cache(maxsize=64)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Tournament schedule covering every index pair exactly once per sweep.

    Pairs within a round are disjoint, so their rotations commute and can be
    applied together.
    """
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        p, q = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                p.append(min(a, b))
                q.append(max(a, b))
        rounds.append((np.array(p, dtype=int), np.array(q, dtype=int)))
        players = [players[0], players[-1], *players[1:-1]]
    return tuple(rounds)


def _check_symmetric(m: np.ndarray, tol: float) -> None:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotSymmetric(f"matrix of shape {m.shape} is not square")
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    if np.max(np.abs(m - m.T), initial=0.0) > tol * scale:
        raise NotSymmetric("matrix is not symmetric")


def sym_eigen(m) -> EigenResult:
    """Full eigendecomposition of a real symmetric matrix by cyclic Jacobi.

    Rotations are applied in round-robin order. Iteration stops once the
    off-diagonal Frobenius mass drops below ``1e-14 * ||m||_F``.
    Eigenvalues come back in descending order; each eigenvector column has
    its largest-magnitude entry positive.
    """
    a = np.array(m, dtype=float)
    _check_symmetric(a, 1e-12)
    a = 0.5 * (a + a.T)
    n = a.shape[0]
    v = np.eye(n)
    norm = np.linalg.norm(a)
    target = OFF_TOL * norm

    mask = ~np.eye(n, dtype=bool)

    def off(x):
        return np.linalg.norm(x[mask])

    if n > 1 and off(a) > target:
        rounds = _round_robin(n)
        for _ in range(MAX_SWEEPS):
            for p, q in rounds:
                apq = a[p, q]
                live = np.abs(apq) > 1e-3 * target
                if not live.any():
                    continue
                p, q, apq = p[live], q[live], apq[live]
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0))
                t[theta == 0.0] = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                if n <= SMALL_N:
                    # one orthogonal matrix per round: cheaper than indexed updates here
                    j = np.eye(n)
                    j[p, p] = c
                    j[q, q] = c
                    j[p, q] = s
                    j[q, p] = -s
                    a = j.T @ a @ j
                    v = v @ j
                else:
                    ap, aq = a[:, p].copy(), a[:, q].copy()
                    a[:, p] = c * ap - s * aq
                    a[:, q] = s * ap + c * aq
                    ap, aq = a[p, :].copy(), a[q, :].copy()
                    a[p, :] = c[:, None] * ap - s[:, None] * aq
                    a[q, :] = s[:, None] * ap + c[:, None] * aq
                    vp, vq = v[:, p].copy(), v[:, q].copy()
                    v[:, p] = c * vp - s * vq
                    v[:, q] = s * vp + c * vq
                a[p, q] = 0.0
                a[q, p] = 0.0
            a = 0.5 * (a + a.T)
            if off(a) <= target:
                break
        else:
            raise NoConvergence(f"Jacobi did not converge in {MAX_SWEEPS} sweeps")

    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    values = values[order]
    v = v[:, order]
    for j in range(n):
        v[:, j] = normalize_sign(v[:, j])
    gap = float(values[0] - values[1]) if n > 1 else float("inf")

    m = np.asarray(m, dtype=float)
    resid = np.max(np.abs(m @ v - v * values), initial=0.0)
    if resid > 1e-10 * max(1.0, np.max(np.sum(np.abs(m), axis=1))):
        raise NoConvergence(f"eigenpair residual {resid:.3g} too large")
    return EigenResult(values, v, gap)


def symmetrize(m, weights) -> np.ndarray:
    """Return ``D m D^{-1}`` for ``D = diag(weights)``, checked for symmetry."""
    m = np.asarray(m, dtype=float)
    w = np.asarray(weights, dtype=float)
    if w.shape != (m.shape[0],) or np.any(w <= 0):
        raise NotSymmetrizable("scaling must be a positive vector matching the matrix")
    s = w[:, None] * m / w[None, :]
    scale = max(1.0, float(np.max(np.abs(s), initial=0.0)))
    if np.max(np.abs(s - s.T), initial=0.0) > 1e-10 * scale:
        raise NotSymmetrizable("D m D^-1 is not symmetric for the given scaling")
    return 0.5 * (s + s.T)


def top_pair_symmetrizable(m, weights) -> TopPair:
    """Largest eigenvalue of ``m`` with right and left eigenvectors.

    ``weights`` defines ``D`` with ``D m D^-1`` symmetric. If ``u`` is the
    top unit eigenvector of that symmetric matrix then ``D^-1 u`` is a right
    and ``D u`` a left eigenvector of ``m``, and their inner product is 1.
    """
    w = np.asarray(weights, dtype=float)
    res = sym_eigen(symmetrize(m, w))
    u = res.vectors[:, 0]
    return TopPair(float(res.values[0]), u / w, u * w)


def symmetrizable_eigen(m, weights) -> EigenResult:
    """Full spectrum of a diagonally symmetrizable matrix.

    Columns of ``vectors`` are right eigenvectors ``D^-1 u``.
    """
    w = np.asarray(weights, dtype=float)
    res = sym_eigen(symmetrize(m, w))
    return EigenResult(res.values, res.vectors / w[:, None], res.gap)


@dataclass
class BlockUpperTriangular:
    """Block upper-triangular matrix ``[[M_00, M_01, ...], [0, M_11, ...], ...]``.

    ``diag`` holds the square diagonal blocks; ``upper`` maps ``(i, j)`` with
    ``i < j`` to the off-diagonal block (absent keys are zero); ``scalings``
    gives, per diagonal block, positive weights making it symmetric under
    ``D M D^-1`` (defaults to all ones).
    """
    diag: list[np.ndarray]
    upper: dict[tuple[int, int], np.ndarray] = field(default_factory=dict)
    scalings: list[np.ndarray] | None = None

    def __post_init__(self):
        self.diag = [np.atleast_2d(np.asarray(b, dtype=float)) for b in self.diag]
        for b in self.diag:
            if b.shape[0] != b.shape[1]:
                raise ValueError("diagonal blocks must be square")
        if self.scalings is None:
            self.scalings = [np.ones(b.shape[0]) for b in self.diag]
        sizes = self.sizes
        for (i, j), blk in self.upper.items():
            if not i < j:
                raise ValueError(f"block ({i}, {j}) is not strictly upper")
            if np.shape(blk) != (sizes[i], sizes[j]):
                raise ValueError(f"block ({i}, {j}) has shape {np.shape(blk)}")

    @property
    def sizes(self) -> list[int]:
        return [b.shape[0] for b in self.diag]

    @property
    def offsets(self) -> list[int]:
        return list(np.cumsum([0] + self.sizes))

    def dense(self) -> np.ndarray:
        off = self.offsets
        out = np.zeros((off[-1], off[-1]))
        for i, b in enumerate(self.diag):
            out[off[i]:off[i + 1], off[i]:off[i + 1]] = b
        for (i, j), b in self.upper.items():
            out[off[i]:off[i + 1], off[j]:off[j + 1]] = b
        return out


@dataclass(frozen=True)
class TriangularEigen:
    """Spectrum of a block-triangular matrix plus one simple eigenpair."""
    values: np.ndarray
    value: float
    block: int
    right: np.ndarray
    left: np.ndarray
    gap: float


def block_spectra(blocks: BlockUpperTriangular) -> list[EigenResult]:
    return [symmetrizable_eigen(b, s) for b, s in zip(blocks.diag, blocks.scalings)]


def nonsym_eigen_triangular(blocks: BlockUpperTriangular, value: float | None = None) -> TriangularEigen:
    """Eigen-data of a block upper-triangular matrix.

    The spectrum is the union of the diagonal-block spectra. For the target
    eigenvalue (default: the largest) the right eigenvector is zero below its
    owning block and is completed upward by back substitution; the left
    eigenvector is zero above the owning block and is completed downward.
    The owning block's part of the right vector is ``D^-1 u``; the left vector
    is then scaled so that ``left @ right == 1``.

    Raises DegenerateEigenvalue if the target is not simple.
    """
    spectra = block_spectra(blocks)
    values = np.sort(np.concatenate([s.values for s in spectra]))[::-1]
    if value is None:
        value = float(values[0])

    owner, pos, best = -1, -1, np.inf
    for j, s in enumerate(spectra):
        i = int(np.argmin(np.abs(s.values - value)))
        if abs(s.values[i] - value) < best:
            owner, pos, best = j, i, abs(s.values[i] - value)
    lam = float(spectra[owner].values[pos])
    if is_separated(lam, value):
        raise ValueError(f"{value} is not an eigenvalue")
    close = sum(1 for x in values if not is_separated(lam, x))
    if close > 1:
        raise DegenerateEigenvalue(f"eigenvalue {lam:.12g} has multiplicity {close}")
    others = values[[is_separated(lam, x) for x in values]]
    gap = float(np.min(np.abs(others - lam))) if others.size else float("inf")

    nb = len(blocks.diag)
    sizes, off = blocks.sizes, blocks.offsets
    w = blocks.scalings[owner]
    u = spectra[owner].vectors[:, pos] * w  # unit symmetric eigenvector
    u = u / np.linalg.norm(u)

    right = [np.zeros(n) for n in sizes]
    left = [np.zeros(n) for n in sizes]
    right[owner] = u / w
    left[owner] = u * w

    def shifted(i):
        return blocks.diag[i] - lam * np.eye(sizes[i])

    def solve(mat, rhs, i):
        try:
            x = np.linalg.solve(mat, rhs)
        except np.linalg.LinAlgError as exc:
            raise SingularBlockSolve(f"block {i} is singular at {lam:.12g}") from exc
        if np.linalg.cond(mat) > 1e12:
            raise SingularBlockSolve(f"block {i} is nearly singular at {lam:.12g}")
        return x

    for i in range(owner - 1, -1, -1):
        rhs = np.zeros(sizes[i])
        for j in range(i + 1, owner + 1):
            if (i, j) in blocks.upper:
                rhs -= blocks.upper[(i, j)] @ right[j]
        right[i] = solve(shifted(i), rhs, i)
    for i in range(owner + 1, nb):
        rhs = np.zeros(sizes[i])
        for j in range(owner, i):
            if (j, i) in blocks.upper:
                rhs -= left[j] @ blocks.upper[(j, i)]
        left[i] = solve(shifted(i).T, rhs, i)

    r = np.concatenate(right)
    ell = np.concatenate(left)
    if r[int(np.argmax(np.abs(r)))] < 0:
        r = -r
    ell = ell / (ell @ r)
    return TriangularEigen(values, lam, owner, r, ell, gap)
