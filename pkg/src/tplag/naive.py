"""Working-precision comparators that ignore the total positivity structure.

These exist only to exhibit the accuracy gap in the reproduction harness.
The least squares comparator is a plain Householder QR on the explicit
collocation matrix; the pseudo-inverse uses numpy's SVD-based ``pinv``.
"""
from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch

__all__ = ["householder_qr", "naive_lstsq", "naive_pinv", "naive_projection"]


def householder_qr(M) -> tuple[np.ndarray, np.ndarray]:
    """Thin QR of a tall matrix by Householder reflections.

    Returns ``(Q1, R)`` with ``Q1`` of shape ``(m, n)`` and ``R`` upper
    triangular of shape ``(n, n)``.
    """
    R = np.array(M, dtype=float)
    m, n = R.shape
    if m < n:
        raise DimensionMismatch("householder_qr needs at least as many rows as columns")
    vs = []
    for k in range(n):
        v = R[k:, k].copy()
        alpha = np.linalg.norm(v)
        if alpha == 0.0:
            vs.append(None)
            continue
        if v[0] > 0:
            alpha = -alpha
        v[0] -= alpha
        v /= np.linalg.norm(v)
        R[k:, k:] -= 2.0 * np.outer(v, v @ R[k:, k:])
        vs.append(v)
    Q = np.eye(m)[:, :n]
    for k in range(n - 1, -1, -1):
        v = vs[k]
        if v is not None:
            Q[k:, :] -= 2.0 * np.outer(v, v @ Q[k:, :])
    return Q, np.triu(R[:n, :])


def naive_lstsq(M, b) -> np.ndarray:
    """Least squares solution of ``M c = b`` via Householder QR and back-substitution."""
    b = np.asarray(b, dtype=float)
    Q1, R = householder_qr(M)
    d = Q1.T @ b
    n = R.shape[0]
    c = np.zeros(n)
    for i in range(n - 1, -1, -1):
        c[i] = (d[i] - R[i, i + 1:] @ c[i + 1:]) / R[i, i]
    return c


def naive_pinv(M) -> np.ndarray:
    """Generic SVD pseudo-inverse in working precision."""
    return np.linalg.pinv(np.asarray(M, dtype=float))


def naive_projection(M) -> np.ndarray:
    """``M @ pinv(M)`` in working precision."""
    M = np.asarray(M, dtype=float)
    return M @ naive_pinv(M)
