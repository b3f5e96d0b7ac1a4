"""QR factorization, triangular solve and triangular inverse driven by a BD.

The matrix is kept as a product of elementary bidiagonal factors
``A = (lower factors) * D * (upper factors)``.  ``tnqr`` cancels the lower
factors one at a time, leftmost first, with a Givens rotation chosen so that
``G * E(m) = E'(m) * diag(1/c, c)``; the leftover upper factor and diagonal
are pushed right through the remaining factors using only products,
quotients and sums of positive numbers.  What is left at the end is ``R`` in
bidiagonal form, and the rotations accumulate into ``Q``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bd_core import BDMatrix
from .errors import DimensionMismatch, NonPositiveBD, SingularR

__all__ = ["QRFactors", "tnqr", "tnsolve", "tninverse_expand", "expand_upper"]


@dataclass(frozen=True, eq=False)
class QRFactors:
    """``A = Q @ [R; 0]`` with ``R`` stored as its bidiagonal decomposition.

    ``R_bd`` is an ``(n+1) x (n+1)`` :class:`BDMatrix` whose strictly lower
    part is zero.
    """

    Q: np.ndarray
    R_bd: BDMatrix

    @property
    def Q1(self) -> np.ndarray:
        return self.Q[:, : self.R_bd.cols]

    @property
    def R(self) -> np.ndarray:
        return expand_upper(self.R_bd)


def _push_upper(ut: np.ndarray, k: int, y: float) -> None:
    """Left-multiply the unit upper factor by ``I + y e_{k-1} e_k^T`` in place.

    ``ut[i, col]`` is the entry at row ``col`` of the i-th lower bidiagonal
    factor of the transposed unit upper part (rightmost factor ``i = 1``).
    Passing the elementary factor through layer ``i`` emits a new one at the
    next index, by the relation ``E_k(a) E_{k+1}(b) E_k(y) =
    E_{k+1}(y b/(a+y)) E_k(a+y) E_{k+1}(a b/(a+y))``.
    """
    N = ut.shape[1]
    idx = k
    for i in range(1, N):
        a = ut[i, idx]
        new = a + y
        ut[i, idx] = new
        if idx + 1 > N - 1:
            return
        b = ut[i, idx + 1]
        if b == 0:
            return
        ut[i, idx + 1] = a * b / new
        y = y * b / new
        idx += 1


def tnqr(bd: BDMatrix) -> QRFactors:
    """QR factorization of a strictly totally positive matrix given ``BD(A)``.

    Costs O(l^2 n) including the explicit ``Q``.  ``R`` has a positive
    diagonal and is returned in bidiagonal form.

    Raises
    ------
    NonPositiveBD
        Some BD entry is zero or negative.
    """
    B = np.asarray(bd.entries, dtype=float)
    M, N = B.shape
    if M < N:
        raise DimensionMismatch("tnqr needs at least as many rows as columns")
    if not np.all(B > 0):
        raise NonPositiveBD("NonPositiveBD: every BD entry must be strictly positive")

    # low[i, row]: entry at (row, row-1) of the lower factor F_i; F_{M-1} leftmost.
    low = np.zeros((M, M))
    for i in range(1, M):
        for row in range(i, min(M - 1, i + N - 1) + 1):
            low[i, row] = B[row, row - i]
    piv = np.zeros(M)
    piv[:N] = np.diag(B)
    ut = np.zeros((N, N))
    for i in range(1, N):
        for col in range(i, N):
            ut[i, col] = B[col - i, col]
    Q = np.eye(M)

    for i in range(M - 1, 0, -1):
        for row in range(i, M):
            m = low[i, row]
            if m == 0.0:
                continue
            low[i, row] = 0.0
            h = math.hypot(1.0, m)
            c, s = 1.0 / h, m / h
            qa = Q[:, row - 1].copy()
            qb = Q[:, row]
            Q[:, row - 1] = c * qa + s * qb
            Q[:, row] = c * qb - s * qa

            # What remains is E^U_row(x) diag(d1, d2) on rows (row-1, row).
            d1, d2, x = h, 1.0 / h, m
            if row + 1 < M:
                low[i, row + 1] /= d2
            for i2 in range(i - 1, 0, -1):
                if row - 1 >= i2:
                    low[i2, row - 1] *= d1
                mu = low[i2, row]
                if mu != 0.0:
                    mu = mu * d2 / d1
                    tt = 1.0 + x * mu
                    low[i2, row] = mu / tt
                    d1 *= tt
                    d2 /= tt
                    x *= tt
                if row + 1 < M:
                    low[i2, row + 1] /= d2
            piv[row - 1] *= d1
            piv[row] *= d2
            if row < N:
                _push_upper(ut, row, x * piv[row] / piv[row - 1])

    R = np.zeros((N, N))
    R[np.diag_indices(N)] = piv[:N]
    for i in range(1, N):
        for col in range(i, N):
            R[col - i, col] = ut[i, col]
    R.setflags(write=False)
    return QRFactors(Q=Q, R_bd=BDMatrix(entries=R))


def _upper_bd(r_bd) -> np.ndarray:
    B = r_bd.entries if isinstance(r_bd, BDMatrix) else np.asarray(r_bd)
    if B.ndim != 2 or B.shape[0] != B.shape[1]:
        raise DimensionMismatch("R must be square")
    return B


def expand_upper(r_bd) -> np.ndarray:
    """Multiply out ``R = D G_1 ... G_n`` from the BD of an upper triangular matrix."""
    B = _upper_bd(r_bd)
    N = B.shape[0]
    X = np.diag(np.diag(B)).astype(B.dtype)
    for i in range(1, N):
        for col in range(N - 1, i - 1, -1):
            X[:, col] = X[:, col] + B[col - i, col] * X[:, col - 1]
    return X


def tnsolve(r_bd, d) -> np.ndarray:
    """Solve ``R z = d`` through the bidiagonal factors of ``R`` in O(n^2).

    High relative accuracy is guaranteed only when ``d`` alternates in sign;
    other right-hand sides are accepted.
    """
    B = _upper_bd(r_bd)
    N = B.shape[0]
    z = np.array(d, dtype=B.dtype if B.dtype == object else float)
    if z.shape != (N,):
        raise DimensionMismatch(f"right-hand side has shape {z.shape}, expected ({N},)")
    diag = np.diag(B)
    if np.any(diag == 0):
        raise SingularR("SingularR: zero diagonal pivot")
    z = z / diag
    for i in range(1, N):
        for col in range(N - 1, i - 1, -1):
            z[col - 1] = z[col - 1] - B[col - i, col] * z[col]
    return z


def tninverse_expand(r_bd) -> np.ndarray:
    """Inverse of an upper triangular TP matrix from its BD.

    Each step subtracts quantities of opposite sign, so the checkerboard
    inverse is obtained without cancellation.  O(n^3) row operations.
    """
    B = _upper_bd(r_bd)
    N = B.shape[0]
    diag = np.diag(B)
    if np.any(diag == 0):
        raise SingularR("SingularR: zero diagonal pivot")
    X = np.diag(1 / diag).astype(B.dtype)
    for i in range(1, N):
        for col in range(N - 1, i - 1, -1):
            g = B[col - i, col]
            X[col - 1, col:] = X[col - 1, col:] - g * X[col, col:]
    return X
