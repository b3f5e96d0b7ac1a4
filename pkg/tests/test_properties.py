"""Randomized properties over small ordered and interleaved configurations."""
from fractions import Fraction as F

import numpy as np
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from tplag import (
    build_A,
    build_L,
    evaluate,
    evaluate_direct,
    evaluation_scale,
    fit,
    ls_solve_A,
    ls_solve_L,
    make_config,
    mp_inverse_L,
    projection_matrix,
    reconstruct_from_bd,
    tnbdlr,
    tnqr,
)

EPS = np.finfo(float).eps / 2
SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])

rationals = st.builds(F, st.integers(-40, 40), st.sampled_from([1, 2, 4, 5, 8, 10]))


@st.composite
def ordered_configs(draw, max_n=6, max_l=12):
    n = draw(st.integers(0, max_n))
    l = draw(st.integers(n, max_l))
    x = sorted(draw(st.sets(rationals.filter(lambda v: -5 <= v <= 2), min_size=n + 1, max_size=n + 1)))
    gaps = draw(st.sets(st.builds(F, st.integers(1, 80), st.sampled_from([1, 2, 4, 5, 8, 10])),
                        min_size=l + 1, max_size=l + 1))
    t = sorted((x[-1] + g for g in gaps), reverse=True)
    return make_config([str(v) for v in x], [str(v) for v in t])


@st.composite
def interleaved_configs(draw):
    n = draw(st.integers(1, 5))
    l = draw(st.integers(n + 1, 10))
    pool = rationals.filter(lambda v: -3 <= v <= 3)
    x = sorted(draw(st.sets(pool, min_size=n + 1, max_size=n + 1)))
    t = sorted(draw(st.sets(pool, min_size=l + 1, max_size=l + 1)), reverse=True)
    return make_config([str(v) for v in x], [str(v) for v in t])


def data(cfg, seed):
    return np.random.default_rng(seed).standard_normal(cfg.l + 1)


def componentwise(residual, scale):
    residual = np.abs(np.asarray(residual, dtype=float))
    return np.max(np.divide(residual, scale, out=np.zeros_like(residual), where=scale > 0))


@SETTINGS
@given(ordered_configs(max_l=10))
def test_bd_reconstructs_exactly(cfg):
    bd = tnbdlr(cfg, exact=True)
    assert all(v > 0 for v in bd.entries.ravel())
    assert reconstruct_from_bd(bd).tolist() == build_A(cfg, exact=True).tolist()


@SETTINGS
@given(ordered_configs())
def test_float_bd_positive_and_qr(cfg):
    bd = tnbdlr(cfg)
    assert np.all(bd.entries > 0)
    qr = tnqr(bd)
    orth = np.abs(qr.Q.T @ qr.Q - np.eye(cfg.l + 1)).sum(axis=1).max()
    assert orth <= 64 * (cfg.l + 1) * EPS
    A = build_A(cfg)
    assert np.linalg.norm(qr.Q1 @ qr.R - A) / np.linalg.norm(A) <= 1e-12


@SETTINGS
@given(ordered_configs())
def test_penrose_componentwise(cfg):
    # measured against |N||G||N|, which also bounds the rounding in forming the products
    L, G = build_L(cfg), mp_inverse_L(cfg)
    aL, aG = np.abs(L), np.abs(G)
    assert componentwise(L @ G @ L - L, aL @ aG @ aL) <= 1e-10
    assert componentwise(G @ L @ G - G, aG @ aL @ aG) <= 1e-10
    for P, S in ((L @ G, aL @ aG), (G @ L, aG @ aL)):
        assert componentwise(P - P.T, S + S.T) <= 1e-10


@SETTINGS
@given(ordered_configs())
def test_projection(cfg):
    H = projection_matrix(cfg)
    assert np.abs(H - H.T).max() <= 1e-10
    assert np.abs(H @ H - H).max() <= 1e-10
    assert abs(np.trace(H) - (cfg.n + 1)) <= 1e-8


@SETTINGS
@given(ordered_configs(), st.integers(0, 2**31))
def test_normal_equations_componentwise(cfg, seed):
    b = data(cfg, seed)
    z, *_ = ls_solve_A(cfg, b)
    A = build_A(cfg)
    aA = np.abs(A)
    assert componentwise(A.T @ (b - A @ z), aA.T @ (np.abs(b) + aA @ np.abs(z))) <= 1e-12


@SETTINGS
@given(ordered_configs(), st.integers(0, 2**31))
def test_pinv_times_b_matches_solve(cfg, seed):
    b = data(cfg, seed)
    c = ls_solve_L(cfg, b).c_bar
    assert np.linalg.norm(mp_inverse_L(cfg) @ b - c) <= 1e-11 * np.linalg.norm(c)


@SETTINGS
@given(interleaved_configs(), st.integers(0, 2**31), st.sampled_from([0.5, 1.0, 1.5]))
def test_evaluation(cfg, seed, extra):
    b = data(cfg, seed)
    model = fit(cfg, b)
    other = fit(cfg, b, a0=model.cov.a0 + extra, a1=1.25)
    for t in np.linspace(cfg.t[-1], cfg.t[0], 5):
        p = evaluate(model, t)
        assert abs(p - evaluate_direct(model, t)) <= 1e-13 * abs(p)
        scale = max(evaluation_scale(model, t), evaluation_scale(other, t))
        assert abs(p - evaluate(other, t)) <= 1e-13 * scale
