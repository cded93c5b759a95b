"""Effect of attaching a single pendant edge on the Rayleigh quotient.

For ``f`` on the edges of ``T`` and the new edge carrying the value ``y``,
the change of the quadratic form is a concave quadratic in ``y`` that only
depends on ``d = deg(v)``, ``S = S_v(f)`` and ``A = A_v(f)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotUnitVector, ZeroAtVertex
from .ricci import lambda_max, perron, quadratic_form, ricci_entries, vertex_sums
from .tree import Tree, attach_leaves


@dataclass(frozen=True)
class OneStepAnalysis:
    d: int
    S: float
    A: float
    rho: float
    mu: float
    applicable: bool
    criterion_holds: bool
    y_star: float
    max_gain: float

    @property
    def theta(self) -> float:
        return theta(self.d)

    @property
    def coarse_holds(self) -> bool:
        return self.mu <= theta(self.d)


def theta(d: int) -> float:
    """Degree-only threshold: ``lambda_max <= theta(d)`` guarantees no decrease."""
    if d < 1:
        raise ValueError("degree must be positive")
    if d <= 2:
        return math.inf
    return 4 / ((d + 1) * (d - 2))


def _delta(d: int, s: float, a: float, y: float) -> float:
    return -(s * s - 2 * a) / (d * (d + 1)) + 2 * s * y / (d + 1) - (d + 2) / (d + 1) * y * y


def rayleigh_difference(t: Tree, v: str, f, y: float) -> float:
    """``<f_y, R_T' f_y> - <f, R_T f>`` for one new pendant edge at ``v``."""
    f = np.asarray(f, dtype=float)
    if f.shape != (t.n_edges,):
        raise DimensionMismatch(f"expected {t.n_edges} edge values, got shape {f.shape}")
    s, a = vertex_sums(t, f, v)
    return _delta(t.degree[v], s, a, y)


def extend(t: Tree, grown: Tree, f, values) -> np.ndarray:
    """Lift ``f`` from ``t`` to ``grown`` (a leaf extension), filling new edges with ``values``."""
    old = grown.edge_index
    out = np.empty(grown.n_edges)
    new_slots = np.ones(grown.n_edges, dtype=bool)
    for e, fe in zip(t.edges, f):
        out[old[e]] = fe
        new_slots[old[e]] = False
    out[new_slots] = values
    return out


def rayleigh_difference_oracle(t: Tree, v: str, f, y: float) -> float:
    """Same quantity as :func:`rayleigh_difference`, from the explicitly grown tree."""
    grown = attach_leaves(t, v, 1)
    fy = extend(t, grown, f, y)
    f = np.asarray(f, dtype=float)
    return float(fy @ ricci_entries(grown) @ fy) - float(f @ ricci_entries(t) @ f)


def sharp_criterion(t: Tree, v: str, f) -> OneStepAnalysis:
    """Evaluate the ``rho_v`` criterion for a unit edge vector ``f``.

    With ``mu = <f, R_T f>``, the extension ``f_y`` has Rayleigh quotient at
    least ``mu`` for some ``y`` whenever
    ``2(d + 2 + mu(d+1)) >= rho_v (2 + mu(d+1))``. The test assumes
    ``Delta(y) - mu y^2`` is concave, i.e. ``d + 2 + mu(d+1) > 0``; otherwise
    the result carries ``applicable=False`` and ``criterion_holds=False``.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (t.n_edges,):
        raise DimensionMismatch(f"expected {t.n_edges} edge values, got shape {f.shape}")
    if abs(np.linalg.norm(f) - 1.0) > 1e-10:
        raise NotUnitVector(f"|f| = {np.linalg.norm(f):.15g}")
    d = t.degree[v]
    s, a = vertex_sums(t, f, v)
    if a <= 0.0:
        raise ZeroAtVertex(f"f vanishes on every edge at {v!r}")
    rho = s * s / a
    mu = quadratic_form(t, f)
    denom = d + 2 + mu * (d + 1)
    if denom <= 0:
        return OneStepAnalysis(d, s, a, rho, mu, False, False, math.nan, math.inf)
    y_star = s / denom
    max_gain = a / (d * (d + 1)) * (2 * denom - rho * (2 + mu * (d + 1))) / denom
    holds = 2 * denom >= rho * (2 + mu * (d + 1))
    return OneStepAnalysis(d, s, a, rho, mu, True, bool(holds), y_star, max_gain)


def one_step_guarantee(t: Tree, v: str, *, verify: bool = False) -> tuple[bool, OneStepAnalysis]:
    """Does the Perron criterion guarantee ``lambda_max(T') >= lambda_max(T)``?

    A single edge is special: ``lambda_max = -2`` lies outside the concave
    regime, but the grown tree is a 2-edge star with ``lambda_max = -1``, so
    the answer is True by direct computation. With ``verify``, a True answer
    is confirmed on the explicitly grown tree.
    """
    lam, w, _ = perron(t)
    analysis = sharp_criterion(t, v, w / np.linalg.norm(w))
    guaranteed = analysis.criterion_holds or t.n_edges == 1
    if verify and guaranteed:
        grown = lambda_max(attach_leaves(t, v, 1))
        if grown < lam - 1e-10:
            raise AssertionError(f"lambda_max dropped from {lam} to {grown}")
    return guaranteed, analysis
