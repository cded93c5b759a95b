"""Limit, first-order coefficient and tail behaviour of ``lambda_k``.

Everything is computed from the reduced system: ``lambda_inf`` is the top of
the spectrum of the block-triangular ``Q_inf`` and the slope is
``alpha = l^T B r`` for bi-normalized eigenvectors of ``Q_inf``. When
``lambda_inf`` is multiple, the slope is the top eigenvalue of the
compression ``W = L^T B R`` with ``L^T R = I``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .eigen import block_spectra, is_separated, nonsym_eigen_triangular
from .errors import (
    DegenerateEigenvalue,
    IllConditionedEigenspace,
    NeedAtLeastThreeK,
    NumericalError,
    SingularBlockSolve,
    SingularBranchBlock,
)
from .reduction import ReducedSystem, lambda_k, reduced_system
from .ricci import lambda_max
from .tree import Tree

DIRECTION_TOL = 1e-9
COND_LIMIT = 1e8

DECREASING = "decreasing_from_above"
INCREASING = "increasing_from_below"
UNDETERMINED = "undetermined"


def direction_of(alpha: float, tol: float = DIRECTION_TOL) -> str:
    if alpha > tol:
        return DECREASING
    if alpha < -tol:
        return INCREASING
    return UNDETERMINED


class Limit(NamedTuple):
    value: float
    achievers: tuple  # "scalar" and/or branch indices
    block_maxima: tuple[float, ...]

    @property
    def achiever(self):
        return self.achievers[0] if len(self.achievers) == 1 else self.achievers

    @property
    def tied(self) -> bool:
        return len(self.achievers) > 1


@dataclass
class AsymptoticsReport:
    lambda_inf: float
    achiever: object
    simple: bool
    alpha: float | None = None
    alpha_max: float | None = None
    direction: str = UNDETERMINED
    r: np.ndarray | None = None
    l: np.ndarray | None = None
    multiplicity: int = 1
    diagnostics: dict | None = field(default=None)

    @property
    def slope(self) -> float:
        return self.alpha if self.simple else self.alpha_max

    def to_dict(self) -> dict:
        def num(x):
            return None if x is None else float(f"{float(x):.12g}")

        def vec(x):
            return None if x is None else [num(v) for v in x]

        achiever = self.achiever
        if isinstance(achiever, tuple):
            achiever = list(achiever)
        out = {
            "lambda_inf": num(self.lambda_inf),
            "achiever": achiever,
            "simple": self.simple,
            "multiplicity": self.multiplicity,
            "alpha": num(self.alpha),
            "direction": self.direction,
            "r": vec(self.r),
            "l": vec(self.l),
        }
        if not self.simple:
            out["alpha_max"] = num(self.alpha_max)
        if self.diagnostics is not None:
            out["diagnostics"] = self.diagnostics
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def lambda_infinity(rs: ReducedSystem) -> Limit:
    """``max(0, lambda_max(A_1), ..., lambda_max(A_d))`` and who attains it."""
    rs = rs.as_float()
    maxima = tuple(float(s.values[0]) for s in block_spectra(rs.limit_blocks())[:-1])
    value = max((0.0, *maxima))
    achievers = []
    if not is_separated(value, 0.0):
        achievers.append("scalar")
    achievers.extend(j for j, m in enumerate(maxima) if not is_separated(value, m))
    return Limit(value, tuple(achievers), maxima)


def limit_multiplicity(rs: ReducedSystem) -> int:
    rs = rs.as_float()
    lam = lambda_infinity(rs).value
    values = np.concatenate([s.values for s in block_spectra(rs.limit_blocks())])
    return int(sum(1 for x in values if not is_separated(lam, x)))


def first_order_coefficient(rs: ReducedSystem) -> AsymptoticsReport:
    """Slope ``alpha = l^T B r`` for a simple ``lambda_inf``.

    Raises DegenerateEigenvalue when ``lambda_inf`` is multiple; use
    :func:`degenerate_coefficient` (or :func:`asymptotics`) then.
    """
    rs = rs.as_float()
    lim = lambda_infinity(rs)
    try:
        te = nonsym_eigen_triangular(rs.limit_blocks(), lim.value)
    except SingularBlockSolve as exc:
        raise SingularBranchBlock(str(exc)) from exc
    alpha = float(te.left @ rs.coupling @ te.right)
    achiever = "scalar" if te.block == rs.n_branches else te.block
    return AsymptoticsReport(
        lambda_inf=lim.value, achiever=achiever, simple=True, alpha=alpha,
        direction=direction_of(alpha), r=te.right, l=te.left,
    )


def _null_space(m: np.ndarray, tol: float) -> np.ndarray:
    _, s, vt = np.linalg.svd(m)
    rank = int(np.sum(s > tol))
    return vt[rank:].T


def _bi_normalized_eigenspaces(rs: ReducedSystem):
    lim = lambda_infinity(rs)
    m = limit_multiplicity(rs)
    q = rs.limit.astype(float)
    shifted = q - lim.value * np.eye(rs.dim)
    tol = 1e-9 * max(1.0, np.linalg.norm(q))
    right = _null_space(shifted, tol)
    left = _null_space(shifted.T, tol)
    if right.shape[1] != m or left.shape[1] != m:
        raise IllConditionedEigenspace(
            f"eigenvalue {lim.value:.12g} has algebraic multiplicity {m} but "
            f"{right.shape[1]} independent eigenvectors"
        )
    gram = left.T @ right
    if np.linalg.cond(gram) > COND_LIMIT:
        raise IllConditionedEigenspace("left and right eigenspaces are nearly orthogonal")
    return lim, m, right @ np.linalg.inv(gram), left


def compression(rs: ReducedSystem) -> np.ndarray:
    """``W = L^T B R`` over the ``lambda_inf`` eigenspace, with ``L^T R = I``."""
    rs = rs.as_float()
    _, _, right, left = _bi_normalized_eigenspaces(rs)
    return left.T @ rs.coupling @ right


def degenerate_coefficient(rs: ReducedSystem) -> AsymptoticsReport:
    """Slope ``alpha_max = lambda_max(W)`` when ``lambda_inf`` is multiple.

    Bases ``R`` and ``L`` of the right and left eigenspaces of ``Q_inf`` are
    taken from null spaces, then ``R`` is re-scaled so that ``L^T R = I``.
    A defective eigenvalue (geometric < algebraic multiplicity) or a badly
    conditioned ``L^T R`` raises IllConditionedEigenspace.
    """
    rs = rs.as_float()
    lim, m, right, left = _bi_normalized_eigenspaces(rs)
    ev = np.linalg.eigvals(left.T @ rs.coupling @ right)
    if np.max(np.abs(ev.imag)) > 1e-9 * max(1.0, np.max(np.abs(ev))):
        raise NumericalError("compression has complex eigenvalues")
    alpha_max = float(np.max(ev.real))
    simple = m == 1
    return AsymptoticsReport(
        lambda_inf=lim.value, achiever=lim.achiever, simple=simple,
        alpha=alpha_max if simple else None, alpha_max=None if simple else alpha_max,
        direction=direction_of(alpha_max), r=right[:, 0] if simple else None,
        l=left[:, 0] if simple else None, multiplicity=m,
    )


def asymptotics(rs: ReducedSystem) -> AsymptoticsReport:
    """Simple or degenerate first-order report, whichever applies."""
    try:
        return first_order_coefficient(rs)
    except DegenerateEigenvalue:
        return degenerate_coefficient(rs)


def lambda_sequence(t: Tree, v: str, ks: Iterable[int], extra_classes=None,
                    rs: ReducedSystem | None = None) -> list[tuple[int, float]]:
    """``(k, lambda_k)`` pairs; ``k >= 1`` use the reduced matrix, ``k = 0`` the full one."""
    ks = list(ks)
    if not ks:
        raise ValueError("need at least one k")
    if rs is None:
        rs = reduced_system(t, v, extra_classes)
    out = []
    for k in ks:
        out.append((k, lambda_max(t) if k == 0 else lambda_k(rs, k)))
    return out


@dataclass
class Diagnostics:
    rows: list[tuple[int, float, float]]  # (k, lambda_k, g_k)
    alpha_hat: float
    alpha: float | None
    error: float | None

    def to_dict(self) -> dict:
        def num(x):
            return None if x is None else float(f"{float(x):.12g}")
        return {
            "rows": [{"k": k, "lambda": num(lam), "g": num(g)} for k, lam, g in self.rows],
            "alpha_hat": num(self.alpha_hat),
            "alpha": num(self.alpha),
            "error": num(self.error),
        }


def convergence_diagnostics(t: Tree, v: str, ks: Sequence[int], extra_classes=None,
                            rs: ReducedSystem | None = None) -> Diagnostics:
    """Tabulate ``g_k = (lambda_k - lambda_inf)(d + k)`` and fit the slope.

    ``alpha_hat`` is the intercept of a least-squares line of ``g`` against
    ``1/(d+k)`` over the three largest ``k``. Only meaningful for large ``k``
    (thousands and up); at moderate ``k`` higher-order terms bias it.
    """
    ks = sorted({int(k) for k in ks})
    if len([k for k in ks if k >= 1]) < 3:
        raise NeedAtLeastThreeK("slope fit needs three distinct k >= 1")
    if rs is None:
        rs = reduced_system(t, v, extra_classes)
    lam_inf = lambda_infinity(rs).value
    rows = []
    for k, lam in lambda_sequence(t, v, ks, rs=rs):
        rows.append((k, lam, (lam - lam_inf) * (rs.d + k)))
    top = [row for row in rows if row[0] >= 1][-3:]
    x = np.array([1.0 / (rs.d + k) for k, _, _ in top])
    g = np.array([gk for _, _, gk in top])
    _, intercept = np.polyfit(x, g, 1)
    try:
        alpha = asymptotics(rs).slope
    except NumericalError:
        alpha = None
    err = None if alpha is None else abs(intercept - alpha)
    return Diagnostics(rows, float(intercept), alpha, err)


class TailCheck(NamedTuple):
    monotone: bool
    direction: str
    first_monotone_k: int | None
    same_side: bool
    values: list[tuple[int, float]]


def tail_check(t: Tree, v: str, k_start: int, window: int, extra_classes=None) -> TailCheck:
    """Check strict monotonicity of ``lambda_k`` on ``[k_start, k_start + window]``.

    The expected direction comes from the sign of the slope. ``first_monotone_k``
    is the smallest ``k`` in the window from which the sequence moves strictly
    in that direction up to the end of the window (None if not even the last
    step does). ``same_side`` says whether every ``lambda_k - lambda_inf`` has
    the sign of the slope.
    """
    if window < 2:
        raise ValueError("window must be at least 2")
    rs = reduced_system(t, v, extra_classes)
    rep = asymptotics(rs)
    values = lambda_sequence(t, v, range(k_start, k_start + window + 1), rs=rs)
    lam = np.array([x for _, x in values])
    steps = np.diff(lam)
    if rep.direction == DECREASING:
        good, sign = steps < 0, 1.0
    elif rep.direction == INCREASING:
        good, sign = steps > 0, -1.0
    else:
        good, sign = np.zeros_like(steps, dtype=bool), 0.0
    first = None
    for i in range(len(good) - 1, -1, -1):
        if not good[i]:
            break
        first = values[i][0]
    same_side = bool(sign != 0 and np.all(sign * (lam - rep.lambda_inf) > 0))
    return TailCheck(bool(good.all()), rep.direction, first, same_side, values)
