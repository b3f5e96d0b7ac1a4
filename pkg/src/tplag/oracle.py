"""Exact reference computations.

Exact matrices are 2-D numpy object arrays of :class:`fractions.Fraction`
(always reduced, positive denominator).  Nothing here rounds except
:func:`rel_error_2norm` and :func:`condition_number_2`, which take an explicit
precision, and the ``hp_*`` helpers for irrational nodes, which work in
mpmath at a caller-chosen number of digits.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Callable, Optional, Sequence

import mpmath
import numpy as np

from .errors import DimensionMismatch, NotSTP, OracleCancelled, RankDeficient

__all__ = [
    "exact_matrix",
    "exact_vector",
    "exact_neville_bd",
    "exact_solve",
    "exact_ls_solve",
    "exact_pinv",
    "exact_projection",
    "rel_error_2norm",
    "condition_number_2",
    "hp_matrix_A",
    "hp_ls_solve",
    "encode_reference",
    "decode_reference",
]

Cancel = Optional[Callable[[], bool]]


def _check(cancel: Cancel) -> None:
    if cancel is not None and cancel():
        raise OracleCancelled("oracle computation cancelled")


def exact_matrix(rows) -> np.ndarray:
    """Coerce a 2-D sequence of rationals (or exact floats) into an object array of Fractions."""
    arr = np.array(rows, dtype=object)
    if arr.ndim != 2 or 0 in arr.shape:
        raise DimensionMismatch("exact matrix must be 2-D and non-empty")
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = v if isinstance(v, Fraction) else Fraction(v)
    return out


def exact_vector(values) -> np.ndarray:
    out = np.empty(len(values), dtype=object)
    for i, v in enumerate(values):
        out[i] = v if isinstance(v, Fraction) else Fraction(v)
    return out


def _neville_multipliers(A: np.ndarray, cancel: Cancel) -> tuple[np.ndarray, list]:
    """Neville elimination: multipliers below the diagonal and the diagonal pivots."""
    W = [list(r) for r in A]
    M, N = len(W), len(W[0])
    mult = np.empty((M, N), dtype=object)
    mult[:, :] = Fraction(0)
    pivots = []
    for j in range(min(M, N)):
        _check(cancel)
        for i in range(M - 1, j, -1):
            above = W[i - 1][j]
            if not above > 0:
                raise NotSTP(f"non-positive pivot at ({i - 1}, {j})")
            m = W[i][j] / above
            mult[i, j] = m
            if m:
                W[i] = [a - m * b for a, b in zip(W[i], W[i - 1])]
        if not W[j][j] > 0:
            raise NotSTP(f"non-positive pivot at ({j}, {j})")
        pivots.append(W[j][j])
    return mult, pivots


def exact_neville_bd(A, cancel: Cancel = None) -> np.ndarray:
    """BD packing (pivots, multipliers of ``A`` and of ``A.T``) by exact Neville elimination.

    Raises
    ------
    NotSTP
        A pivot that should be positive is not.
    """
    A = exact_matrix(A)
    mult, pivots = _neville_multipliers(A, cancel)
    multT, _ = _neville_multipliers(A.T, cancel)
    out = mult.copy()
    M, N = A.shape
    for i in range(M):
        for j in range(N):
            if i < j:
                out[i, j] = multT[j, i]
    for q, p in enumerate(pivots):
        out[q, q] = p
    return out


def _integer_rows(G: np.ndarray, H: np.ndarray) -> list[list[int]]:
    rows = []
    for gi, hi in zip(G, H):
        vals = list(gi) + list(hi)
        scale = lcm(*(v.denominator for v in vals))
        rows.append([v.numerator * (scale // v.denominator) for v in vals])
    return rows


def exact_solve(G, H, cancel: Cancel = None) -> np.ndarray:
    """Solve ``G X = H`` exactly with fraction-free (Bareiss) elimination.

    ``H`` may be a vector or a matrix of right-hand sides.
    """
    G = exact_matrix(G)
    vector = np.ndim(H) == 1
    H = exact_matrix(np.array(H, dtype=object).reshape(len(H), -1))
    N = G.shape[0]
    if G.shape != (N, N) or H.shape[0] != N:
        raise DimensionMismatch("exact_solve needs square G and matching right-hand side")
    K = H.shape[1]
    a = _integer_rows(G, H)
    prev = 1
    for k in range(N):
        _check(cancel)
        if a[k][k] == 0:
            swap = next((p for p in range(k + 1, N) if a[p][k] != 0), None)
            if swap is None:
                raise RankDeficient("matrix is singular")
            a[k], a[swap] = a[swap], a[k]
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, N):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, N + K):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
            ri[k] = 0
        prev = akk
    X = np.empty((N, K), dtype=object)
    for c in range(K):
        for i in range(N - 1, -1, -1):
            acc = Fraction(a[i][N + c])
            for j in range(i + 1, N):
                acc -= a[i][j] * X[j, c]
            X[i, c] = acc / a[i][i]
    return X[:, 0] if vector else X


def _full_column_rank_gram(L: np.ndarray) -> np.ndarray:
    M, N = L.shape
    if M < N:
        raise RankDeficient("more columns than rows")
    return L.T @ L


def exact_ls_solve(L, b, cancel: Cancel = None) -> np.ndarray:
    """Exact least squares solution from the normal equations ``L.T L c = L.T b``."""
    L = exact_matrix(L)
    b = exact_vector(b)
    if len(b) != L.shape[0]:
        raise DimensionMismatch("data vector length does not match the number of rows")
    c = exact_solve(_full_column_rank_gram(L), L.T @ b, cancel)
    if any(L.T @ (b - L @ c)):
        raise AssertionError("normal-equation residual is not orthogonal")
    return c


def exact_pinv(L, cancel: Cancel = None, verify: bool = True) -> np.ndarray:
    """Exact ``(L.T L)^{-1} L.T``; the four Penrose conditions are checked exactly."""
    L = exact_matrix(L)
    G = exact_solve(_full_column_rank_gram(L), L.T, cancel)
    if verify:
        _check(cancel)
        LG = L @ G
        GL = G @ L
        ok = (
            np.all(LG @ L == L)
            and np.all(G @ LG == G)
            and np.all(LG.T == LG)
            and np.all(GL.T == GL)
        )
        if not ok:
            raise AssertionError("Penrose conditions failed in exact arithmetic")
    return G


def exact_projection(L, cancel: Cancel = None) -> np.ndarray:
    """Exact projector ``L pinv(L)``, checked symmetric and idempotent."""
    L = exact_matrix(L)
    H = L @ exact_pinv(L, cancel, verify=False)
    if not (np.all(H.T == H) and np.all(H @ H == H)):
        raise AssertionError("projection matrix is not an exact orthogonal projector")
    return H


def _to_mpf(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    if isinstance(v, str):
        if "/" in v:
            p, q = v.split("/")
            return mpmath.mpf(p) / mpmath.mpf(q)
        return mpmath.mpf(v)
    return mpmath.mpf(v)


def rel_error_2norm(approx, exact, digits: int = 60) -> float:
    """``||approx - exact|| / ||exact||`` in ``digits``-digit arithmetic.

    Vectors use the 2-norm and matrices the Frobenius norm.  ``exact`` may
    hold Fractions, mpf values or decimal strings.
    """
    a = np.asarray(approx, dtype=float)
    e = np.asarray(exact, dtype=object)
    if a.shape != e.shape:
        raise DimensionMismatch(f"shapes differ: {a.shape} vs {e.shape}")
    with mpmath.workdps(digits):
        num = mpmath.mpf(0)
        den = mpmath.mpf(0)
        for av, ev in zip(a.ravel(), e.ravel()):
            ev = _to_mpf(ev)
            num += (mpmath.mpf(float(av)) - ev) ** 2
            den += ev ** 2
        return float(mpmath.sqrt(num / den))


def condition_number_2(L, digits: int = 100) -> float:
    """``sigma_max / sigma_min`` from the eigenvalues of ``L.T L`` at ``digits`` digits."""
    L = exact_matrix(L)
    G = _full_column_rank_gram(L)
    exact_solve(G, G[:, 0])  # raises RankDeficient for a singular Gram matrix
    with mpmath.workdps(digits):
        Gm = mpmath.matrix([[_to_mpf(v) for v in row] for row in G])
        ev = mpmath.eigsy(Gm, eigvals_only=True)
        lo = min(ev)
        if not lo > 0:
            raise RankDeficient("Gram matrix is not positive definite")
        return float(mpmath.sqrt(max(ev) / lo))


def hp_matrix_A(x: Sequence, t: Sequence, digits: int = 100) -> "mpmath.matrix":
    """Lagrange-Vandermonde matrix from mpmath nodes, at ``digits`` digits."""
    with mpmath.workdps(digits):
        x = [_to_mpf(v) for v in x]
        A = mpmath.matrix(len(t), len(x))
        for i, ti in enumerate(t):
            ti = _to_mpf(ti)
            for j in range(len(x)):
                p = mpmath.mpf(1)
                for k, xk in enumerate(x):
                    if k != j:
                        p *= ti - xk
                A[i, j] = p
        return A


def hp_ls_solve(A: "mpmath.matrix", b: Sequence, digits: int = 100):
    """High-precision least squares solution and fitted values ``(y, A y)``."""
    with mpmath.workdps(digits):
        bm = mpmath.matrix([_to_mpf(v) for v in b])
        At = A.T
        y = mpmath.lu_solve(At * A, At * bm)
        return [y[i] for i in range(A.cols)], [v for v in (A * y)]


def encode_reference(obj, digits: int = 100):
    """Make oracle output JSON-ready.

    Fractions become ``[numerator, denominator]`` string pairs and mpf values
    become decimal strings with ``digits`` significant digits.  Arrays,
    lists and dicts are converted recursively.
    """
    if isinstance(obj, Fraction):
        return [str(obj.numerator), str(obj.denominator)]
    if isinstance(obj, mpmath.mpf):
        return mpmath.nstr(obj, digits, strip_zeros=False)
    if isinstance(obj, np.ndarray):
        return [encode_reference(v, digits) for v in obj]
    if isinstance(obj, dict):
        return {k: encode_reference(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode_reference(v, digits) for v in obj]
    return obj


def _is_int_string(u) -> bool:
    return isinstance(u, str) and u.lstrip("-").isdigit()


def _is_pair(v) -> bool:
    # mpf values are written with a decimal point, so only integer pairs qualify
    return isinstance(v, list) and len(v) == 2 and all(_is_int_string(u) for u in v)


def _decode_array(v):
    if _is_pair(v):
        return Fraction(int(v[0]), int(v[1]))
    if isinstance(v, list):
        return [_decode_array(u) for u in v]
    return v


def decode_reference(obj) -> dict:
    """Inverse of :func:`encode_reference` for a top-level dict.

    List-valued fields come back as object arrays holding Fractions (from
    pairs) or decimal strings; scalars are left as they are.
    """
    out = {}
    for k, v in obj.items():
        if isinstance(v, list):
            dec = _decode_array(v)
            out[k] = dec if isinstance(dec, Fraction) else np.array(dec, dtype=object)
        else:
            out[k] = v
    return out
