import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from treericci import attach_leaves, lambda_max, quadratic_form
from treericci.errors import DimensionMismatch, NotUnitVector, ZeroAtVertex
from treericci.growth import (
    extend,
    one_step_guarantee,
    rayleigh_difference,
    rayleigh_difference_oracle,
    sharp_criterion,
    theta,
)
from treericci.ricci import perron, vertex_sums

from corpus import CORPUS, CORPUS_IDS, SEED, fork_chain, hubs_at_degree5, path_tree, random_tree, single_edge, star_tree, tree_strategy


def test_theta_values():
    assert theta(1) == math.inf and theta(2) == math.inf
    assert theta(3) == 1.0
    assert theta(5) == pytest.approx(2 / 9)
    vals = [theta(d) for d in range(3, 40)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        theta(0)


def test_path_closed_form():
    # path a-b-c, grow at b: d = 2, S = f1 + f2, A = f1^2 + f2^2
    t = path_tree(3)
    f = np.array([0.3, -1.1])
    for y in (-2.0, 0.0, 0.7):
        s, a = f.sum(), f @ f
        expected = -(s * s - 2 * a) / 6 + 2 * s * y / 3 - 4 / 3 * y * y
        assert abs(rayleigh_difference(t, "p01", f, y) - expected) < 1e-14
        assert abs(rayleigh_difference_oracle(t, "p01", f, y) - expected) < 1e-13


def test_closed_form_against_grown_tree():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(500):
        t = random_tree(rng, int(rng.integers(1, 9)))
        v = sorted(t.vertices)[int(rng.integers(0, len(t.vertices)))]
        f = rng.normal(size=t.n_edges)
        y = float(rng.normal() * 2)
        worst = max(worst, abs(rayleigh_difference(t, v, f, y) - rayleigh_difference_oracle(t, v, f, y)))
    assert worst < 1e-9


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        rayleigh_difference(fork_chain(), "v", [1.0], 0.0)
    with pytest.raises(DimensionMismatch):
        sharp_criterion(fork_chain(), "v", [1.0])


def gain_by_search(t, v, f, mu):
    # coarse grid to bracket the maximum of Delta(y) - mu y^2, then Brent
    ys = np.linspace(-20, 20, 401)
    vals = [rayleigh_difference(t, v, f, y) - mu * y * y for y in ys]
    y0 = ys[int(np.argmax(vals))]
    res = minimize_scalar(lambda y: -(rayleigh_difference(t, v, f, y) - mu * y * y),
                          bracket=(y0 - 0.2, y0, y0 + 0.2), tol=1e-12)
    return -res.fun, res.x


@pytest.mark.parametrize("name, t, v", CORPUS, ids=CORPUS_IDS)
def test_max_gain_matches_search(name, t, v):
    _, w, _ = perron(t)
    f = w / np.linalg.norm(w)
    a = sharp_criterion(t, v, f)
    if not a.applicable:
        assert t.n_edges == 1
        return
    gain, y = gain_by_search(t, v, f, a.mu)
    assert abs(gain - a.max_gain) < 1e-8
    assert abs(y - a.y_star) < 1e-5


@pytest.mark.parametrize("name, t, v", CORPUS, ids=CORPUS_IDS)
def test_rho_bounds(name, t, v):
    _, w, _ = perron(t)
    a = sharp_criterion(t, v, w / np.linalg.norm(w))
    assert 1 - 1e-12 <= a.rho <= a.d + 1e-12


def test_rho_equals_degree_for_constant_values():
    t = star_tree(5)
    f = np.ones(4) / 2
    a = sharp_criterion(t, "c", f)
    assert a.rho == pytest.approx(4.0)


def test_rejects_non_unit_and_zero():
    t = fork_chain()
    with pytest.raises(NotUnitVector):
        sharp_criterion(t, "v", np.ones(5))
    f = np.zeros(5)
    f[1] = 1.0  # only on u1~w1, away from v
    with pytest.raises(ZeroAtVertex):
        sharp_criterion(t, "v", f)


def test_fork_chain_guaranteed():
    ok, a = one_step_guarantee(fork_chain(), "v", verify=True)
    assert ok and a.criterion_holds and a.coarse_holds
    assert round(a.mu, 4) == -0.1731


def test_single_edge_bypass():
    ok, a = one_step_guarantee(single_edge(), "v", verify=True)
    assert ok and not a.applicable
    assert math.isnan(a.y_star)


def test_sharp_beats_coarse():
    t = hubs_at_degree5(2, 5)
    ok, a = one_step_guarantee(t, "v", verify=True)
    assert a.mu > theta(5)
    assert not a.coarse_holds and a.criterion_holds and ok


@pytest.mark.parametrize("m", [1, 2, 4])
def test_criterion_fails_and_lambda_drops(m):
    t = hubs_at_degree5(5, m)
    ok, a = one_step_guarantee(t, "v")
    assert a.mu > theta(5) and not ok
    assert lambda_max(attach_leaves(t, "v", 1)) < a.mu


def test_low_degree_always_holds():
    rng = np.random.default_rng(SEED + 1)
    for _ in range(40):
        t = random_tree(rng, int(rng.integers(2, 10)))
        for v in t.vertices:
            if t.degree[v] <= 2:
                ok, a = one_step_guarantee(t, v)
                assert ok and a.coarse_holds


@settings(max_examples=60, deadline=None)
@given(tree_strategy(max_edges=10, min_edges=2), st.integers(0, 100))
def test_guarantee_is_sound(t, pick):
    v = sorted(t.vertices)[pick % len(t.vertices)]
    ok, a = one_step_guarantee(t, v)
    if ok:
        assert lambda_max(attach_leaves(t, v, 1)) >= a.mu - 1e-10
    if a.coarse_holds:
        assert ok


@settings(max_examples=60, deadline=None)
@given(tree_strategy(max_edges=8), st.integers(0, 100),
       st.floats(-5, 5, allow_nan=False), st.integers(0, 2 ** 32 - 1))
def test_delta_property(t, pick, y, seed):
    v = sorted(t.vertices)[pick % len(t.vertices)]
    f = np.random.default_rng(seed).normal(size=t.n_edges)
    assert abs(rayleigh_difference(t, v, f, y) - rayleigh_difference_oracle(t, v, f, y)) < 1e-9
    s, a = vertex_sums(t, f, v)
    assert s * s <= t.degree[v] * a + 1e-12


@settings(max_examples=60, deadline=None)
@given(tree_strategy(max_edges=10, min_edges=2), st.integers(0, 100))
def test_extended_vector_rayleigh_quotient(t, pick):
    v = sorted(t.vertices)[pick % len(t.vertices)]
    _, w, _ = perron(t)
    f = w / np.linalg.norm(w)
    a = sharp_criterion(t, v, f)
    if not a.criterion_holds:
        return
    grown = attach_leaves(t, v, 1)
    fy = extend(t, grown, f, a.y_star)
    rq = quadratic_form(grown, fy) / (fy @ fy)
    assert rq >= a.mu - 1e-10
