import json
from fractions import Fraction as F

import mpmath
import numpy as np
import pytest

from tplag import DimensionMismatch, NotSTP, OracleCancelled, RankDeficient, build_A, build_L, make_config
from tplag.oracle import (
    condition_number_2,
    decode_reference,
    encode_reference,
    exact_ls_solve,
    exact_neville_bd,
    exact_pinv,
    exact_projection,
    exact_solve,
    rel_error_2norm,
)
from tplag.refdata import EXAMPLE1_T, EXAMPLE1_X

A_3x2 = [[3, 4], [2, 3], [1, 2]]
BD_3x2 = [[F(3), F(4, 3)], [F(2, 3), F(1, 3)], [F(1, 2), F(3, 2)]]


def test_neville_ones_column():
    bd = exact_neville_bd([[1], [1], [1]])
    assert bd.tolist() == [[1], [1], [1]]


def test_neville_small_example():
    assert exact_neville_bd(A_3x2).tolist() == BD_3x2


def test_neville_rejects_non_stp():
    with pytest.raises(NotSTP):
        exact_neville_bd([[1, 2], [3, 4]])
    with pytest.raises(NotSTP):
        exact_neville_bd([[0, 1], [1, 1]])


def test_neville_example1_positive():
    cfg = make_config(EXAMPLE1_X, EXAMPLE1_T)
    bd = exact_neville_bd(build_A(cfg, exact=True))
    assert all(v > 0 for v in bd.ravel())


def test_exact_solve():
    X = exact_solve([[2, 1], [1, 3]], [1, 2])
    assert X.tolist() == [F(1, 5), F(3, 5)]
    # zero leading entry forces a row swap
    X = exact_solve([[0, 1], [1, 0]], [[1, 2], [3, 4]])
    assert X.tolist() == [[3, 4], [1, 2]]
    with pytest.raises(RankDeficient):
        exact_solve([[1, 2], [2, 4]], [1, 1])
    with pytest.raises(DimensionMismatch):
        exact_solve([[1, 2]], [1])


def test_exact_ls_solve():
    assert exact_ls_solve([[2, 0], [0, 4]], [1, 1]).tolist() == [F(1, 2), F(1, 4)]
    c = exact_ls_solve(A_3x2, [1, 1, 1])
    assert c.tolist() == [-1, 1]
    c = exact_ls_solve(A_3x2, [1, 0, 0])
    assert c.tolist() == [F(7, 6), F(-2, 3)]
    A = np.array(A_3x2, dtype=object)
    r = np.array([F(1), F(0), F(0)]) - A @ c
    assert not any(A.T @ r)
    with pytest.raises(DimensionMismatch):
        exact_ls_solve(A_3x2, [1, 2])
    with pytest.raises(RankDeficient):
        exact_ls_solve([[1, 2, 3]], [1])


def test_exact_pinv_penrose():
    G = exact_pinv(A_3x2)
    assert G.tolist() == [[F(7, 6), F(-1, 3), F(-11, 6)], [F(-2, 3), F(1, 3), F(4, 3)]]
    A = np.array(A_3x2, dtype=object)
    assert (G @ A).tolist() == [[1, 0], [0, 1]]
    assert (A @ G @ A == A).all()
    assert (G @ A @ G == G).all()
    assert exact_pinv(np.eye(3, dtype=int)).tolist() == np.eye(3, dtype=int).tolist()


def test_exact_projection():
    H = exact_projection(A_3x2)
    assert H.tolist() == [
        [F(5, 6), F(1, 3), F(-1, 6)],
        [F(1, 3), F(1, 3), F(1, 3)],
        [F(-1, 6), F(1, 3), F(5, 6)],
    ]
    assert sum(H[i, i] for i in range(3)) == 2


def test_rel_error_2norm():
    e = [F(1, 3), F(-2, 7)]
    assert rel_error_2norm([0.25, -0.5], [F(1, 4), F(-1, 2)]) == 0.0
    assert rel_error_2norm([float(v) for v in e], e) < 1e-16
    assert rel_error_2norm([2 / 3, -4 / 7], e) == pytest.approx(1.0, rel=1e-14)
    assert rel_error_2norm([[1.0, 2.0]], [["1", "2"]]) == 0.0
    assert rel_error_2norm([0.1], ["0.1"]) == pytest.approx(5.55e-18, rel=1e-2)
    with pytest.raises(DimensionMismatch):
        rel_error_2norm([1.0], e)


def test_condition_number_2():
    assert condition_number_2(np.eye(3, dtype=int)) == pytest.approx(1.0, rel=1e-14)
    assert condition_number_2([[2, 0], [0, 1]]) == pytest.approx(2.0, rel=1e-14)
    with pytest.raises(RankDeficient):
        condition_number_2([[1, 2], [2, 4]])


def test_condition_number_example1():
    cfg = make_config(EXAMPLE1_X, EXAMPLE1_T)
    kappa = condition_number_2(build_L(cfg, exact=True))
    assert 4.1e32 / 2 <= kappa <= 4.1e32 * 2


def test_cancellation():
    def stop():
        return True

    with pytest.raises(OracleCancelled):
        exact_neville_bd(A_3x2, cancel=stop)
    with pytest.raises(OracleCancelled):
        exact_solve([[1, 0], [0, 1]], [1, 1], cancel=stop)
    calls = []

    def late():
        calls.append(1)
        return len(calls) > 1

    with pytest.raises(OracleCancelled):
        exact_pinv(A_3x2, cancel=late)


def test_reference_round_trip():
    with mpmath.workdps(30):
        y = [mpmath.mpf(1) / 3, mpmath.mpf(2)]
    ref = {"pinv": exact_pinv(A_3x2), "y": y, "kappa": 4.0, "third": F(1, 3)}
    text = json.dumps(encode_reference(ref, digits=30))
    back = decode_reference(json.loads(text))
    assert back["pinv"].tolist() == exact_pinv(A_3x2).tolist()
    # a two-entry decimal vector must not be mistaken for a fraction
    assert back["y"].shape == (2,)
    assert back["y"][1].startswith("2.000")
    assert rel_error_2norm([1 / 3, 2.0], back["y"]) < 1e-16
    assert back["kappa"] == 4.0 and back["third"] == F(1, 3)
