"""Node configurations, collocation matrices and the bidiagonal decomposition.

The Lagrange-Vandermonde matrix ``A`` has entries
``a[i, j] = prod_{k != j} (t[i] - x[k])``; when every sample node lies to the
right of every basis node it is strictly totally positive and its bidiagonal
decomposition ``BD(A)`` can be written down entry by entry from node
differences alone.  :func:`tnbdlr` evaluates those closed forms without ever
forming ``A``.
"""
from __future__ import annotations

import math
import threading
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

import numpy as np

from ._dd import DD
from .errors import (
    DimensionMismatch,
    MixedNode,
    NotOrdered,
    RepeatedNode,
    TplagError,
    UnsortedNodes,
)

__all__ = [
    "NodeConfig",
    "BDMatrix",
    "ScalingDiag",
    "NicAudit",
    "parse_scalar",
    "make_config",
    "validate_ordering",
    "build_A",
    "build_L",
    "scaling_diag",
    "tnbdlr",
    "reconstruct_from_bd",
    "nic_audit",
]


def parse_scalar(value) -> Fraction:
    """Convert a decimal string, ``"p/q"`` string, int, float or Fraction to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TplagError(f"not a number: {value!r}")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        if not math.isfinite(value):
            raise TplagError(f"non-finite value: {value!r}")
        return Fraction(float(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise TplagError(f"cannot parse {value!r} as a finite decimal or rational") from exc
    raise TplagError(f"unsupported node value {value!r}")


def _readonly(values: Sequence[float]) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class NodeConfig:
    """Basis nodes ``x`` (increasing) and sample nodes ``t`` (decreasing).

    Both the binary floating-point values used by the accurate algorithms and
    the exact rationals used by the oracle are kept, converted once from the
    same input.  Build instances with :func:`make_config`.
    """

    x: np.ndarray
    t: np.ndarray
    x_exact: tuple
    t_exact: tuple
    ordered_flag: bool

    @property
    def n(self) -> int:
        """Polynomial degree; there are ``n + 1`` basis nodes."""
        return len(self.x) - 1

    @property
    def l(self) -> int:  # noqa: E743
        """There are ``l + 1`` sample nodes."""
        return len(self.t) - 1

    def mapped(self, a0, a1) -> "NodeConfig":
        """Return the configuration with sample nodes ``a0 + a1 * t`` (float path values)."""
        s = [float(a0) + float(a1) * ti for ti in self.t]
        return make_config(list(self.x_exact), s)


def _check_distinct(exact: Sequence[Fraction], floats: np.ndarray, name: str) -> None:
    if len(set(exact)) != len(exact) or len(set(floats.tolist())) != len(floats):
        raise RepeatedNode(f"repeated {name}-node")


def make_config(x, t) -> NodeConfig:
    """Validate nodes and build a :class:`NodeConfig`.

    Raises
    ------
    RepeatedNode
        Two ``x`` or two ``t`` values coincide.
    MixedNode
        Some ``t`` equals some ``x`` while ``l == n``.
    UnsortedNodes
        ``x`` is not increasing or ``t`` is not decreasing.
    DimensionMismatch
        Empty input or fewer sample nodes than basis nodes.
    """
    x_exact = tuple(parse_scalar(v) for v in x)
    t_exact = tuple(parse_scalar(v) for v in t)
    if not x_exact or not t_exact:
        raise DimensionMismatch("need at least one basis node and one sample node")
    xf = _readonly([float(v) for v in x_exact])
    tf = _readonly([float(v) for v in t_exact])
    _check_distinct(x_exact, xf, "x")
    _check_distinct(t_exact, tf, "t")
    shared = set(x_exact) & set(t_exact) or set(xf.tolist()) & set(tf.tolist())
    if any(b <= a for a, b in zip(x_exact, x_exact[1:])) or np.any(np.diff(xf) <= 0):
        raise UnsortedNodes("x-nodes must be strictly increasing")
    if any(b >= a for a, b in zip(t_exact, t_exact[1:])) or np.any(np.diff(tf) >= 0):
        raise UnsortedNodes("t-nodes must be strictly decreasing")
    if len(t_exact) < len(x_exact):
        raise DimensionMismatch(
            f"need l >= n: got {len(t_exact)} sample nodes for {len(x_exact)} basis nodes"
        )
    # Shared nodes are legitimate for least squares (and are removed by a
    # shift), but a square system must sample away from the basis nodes.
    if shared and len(t_exact) == len(x_exact):
        raise MixedNode("a sample node coincides with a basis node in a square configuration")
    ordered = t_exact[-1] > x_exact[-1] and tf[-1] > xf[-1]
    return NodeConfig(x=xf, t=tf, x_exact=x_exact, t_exact=t_exact, ordered_flag=bool(ordered))


def validate_ordering(cfg: NodeConfig) -> bool:
    """Return True iff ``max(x) < min(t)``, i.e. ``A`` is strictly totally positive."""
    return cfg.ordered_flag


def _nodes(cfg: NodeConfig, exact: bool):
    return (cfg.x_exact, cfg.t_exact) if exact else (cfg.x.tolist(), cfg.t.tolist())


def build_A(cfg: NodeConfig, exact: bool = False) -> np.ndarray:
    """Dense Lagrange-Vandermonde matrix, for tests and oracles only.

    With ``exact=True`` the result is an object array of Fractions.
    """
    x, t = _nodes(cfg, exact)
    out = np.empty((len(t), len(x)), dtype=object if exact else float)
    for i, ti in enumerate(t):
        for j in range(len(x)):
            p = Fraction(1) if exact else 1.0
            for k, xk in enumerate(x):
                if k != j:
                    p *= ti - xk
            out[i, j] = p
    return out


def build_L(cfg: NodeConfig, exact: bool = False) -> np.ndarray:
    """Collocation matrix of the Lagrange basis, ``L = A * diag(1 / den)``."""
    A = build_A(cfg, exact)
    den = scaling_diag(cfg.x_exact if exact else cfg.x).den
    return A / den[np.newaxis, :]


@dataclass(frozen=True, eq=False)
class ScalingDiag:
    """Lagrange denominators ``den[j] = prod_{k != j} (x[j] - x[k])``."""

    den: np.ndarray


def scaling_diag(x) -> ScalingDiag:
    """Compute the Lagrange denominators factor by factor.

    Works on floats or on Fractions (object result).  Only input nodes are
    subtracted.
    """
    vals = list(x)
    exact = bool(vals) and isinstance(vals[0], Fraction)
    if len(set(vals)) != len(vals):
        raise RepeatedNode("repeated x-node")
    one = Fraction(1) if exact else 1.0
    den = np.empty(len(vals), dtype=object if exact else float)
    for j, xj in enumerate(vals):
        left = one
        for xk in vals[:j]:
            left *= xj - xk
        right = one
        for xk in vals[j + 1:]:
            right *= xj - xk
        den[j] = left * right
    if not exact:
        den.setflags(write=False)
    return ScalingDiag(den=den)


@dataclass(frozen=True, eq=False)
class BDMatrix:
    """Packed bidiagonal decomposition of an ``(l+1) x (n+1)`` matrix.

    ``entries[i, i]`` holds the diagonal pivots, ``entries[i, j]`` for
    ``i > j`` the Neville multipliers of ``A`` and for ``i < j`` those of
    ``A.T`` (stored transposed).  Indices here are 0-based.
    """

    entries: np.ndarray

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @staticmethod
    def kind(i: int, j: int) -> str:
        if i == j:
            return "pivot"
        return "mult" if i > j else "multT"


@dataclass
class NicAudit:
    """Counts the node differences evaluated by :func:`tnbdlr` while active."""

    strict: bool = True
    checked: int = 0
    violations: list = field(default_factory=list)

    def record(self, a, b, d) -> None:
        self.checked += 1
        if not d > 0:
            self.violations.append((a, b, d))
            if self.strict:
                raise AssertionError(f"non-positive factor {a!r} - {b!r} = {d!r} in tnbdlr")


_audit_state = threading.local()


@contextmanager
def nic_audit(strict: bool = True) -> Iterator[NicAudit]:
    """Check that every difference formed inside :func:`tnbdlr` is strictly positive.

    The audit is thread-local.  With ``strict=True`` the first violation
    raises ``AssertionError``; otherwise violations are collected.
    """
    audit = NicAudit(strict=strict)
    previous = getattr(_audit_state, "audit", None)
    _audit_state.audit = audit
    try:
        yield audit
    finally:
        _audit_state.audit = previous


def _bd_entries(x: Sequence, t: Sequence, one, B=None) -> np.ndarray:
    """Closed-form BD(A) for increasing ``x`` and decreasing ``t`` with ``min(t) > max(x)``.

    Fills ``B`` (allocated when omitted) in place; auxiliary storage is O(l + n).
    """
    audit = getattr(_audit_state, "audit", None)
    exact = isinstance(one, Fraction)
    # Floats carry products in double-double so each entry is close to
    # correctly rounded; only input nodes are ever subtracted.
    sub = (lambda a, b: a - b) if exact else DD.diff
    if not exact:
        one = DD(1.0)

    if audit is None:
        diff = sub
    else:
        def diff(a, b):
            d = sub(a, b)
            audit.record(a, b, d if exact else d.hi)
            return d

    N, M = len(x), len(t)
    if B is None:
        B = np.empty((M, N), dtype=object if exact else float)

    # Multipliers of A: entry (r, c), r > c.  For fixed r the t-t products
    # grow with c while the t-x products are suffix products in c.
    prev_suf = None
    for r in range(M):
        suf = [one] * N
        for c in range(N - 2, -1, -1):
            suf[c] = suf[c + 1] * diff(t[r], x[c + 1])
        if r < N:
            num = suf[r]
            den = one
            for k in range(r):
                num *= diff(t[k], t[r]) * diff(x[r], x[k])
                den *= diff(t[k], x[r])
            B[r, r] = num / den
        if r > 0:
            p_tt = one
            q_tt = one
            for c in range(min(r, N)):
                if c > 0:
                    p_tt *= diff(t[r - c], t[r])
                    q_tt *= diff(t[r - c - 1], t[r - 1])
                num = diff(t[r - c - 1], x[c]) * p_tt * suf[c]
                den = diff(t[r - 1], x[c]) * q_tt * prev_suf[c]
                B[r, c] = num / den
        prev_suf = suf

    # Multipliers of A.T, stored at (c, r) with c < r.
    for r in range(1, N):
        p_xx = one
        q_xx = one
        w_num = one
        w_den = one
        for c in range(r):
            if c > 0:
                p_xx *= diff(x[r], x[r - c])
                q_xx *= diff(x[r - 1], x[r - c - 1])
                w_num *= diff(t[c - 1], x[r - 1])
                w_den *= diff(t[c - 1], x[r])
            num = diff(t[c], x[r - c - 1]) * p_xx * w_num
            den = diff(t[c], x[r]) * q_xx * w_den
            B[c, r] = num / den
    return B


def tnbdlr(cfg: NodeConfig, exact: bool = False) -> BDMatrix:
    """Bidiagonal decomposition of the Lagrange-Vandermonde matrix in O(ln) operations.

    Every factor is a difference of two input nodes that is positive under
    the ordering ``x[0] < ... < x[n] < t[l] < ... < t[0]``, so the result has
    high relative accuracy.  ``A`` is never formed.

    Parameters
    ----------
    cfg : NodeConfig
        Must satisfy ``cfg.ordered_flag``.
    exact : bool
        Evaluate the same formulas on the exact rational nodes.

    Raises
    ------
    NotOrdered
        Some sample node is not to the right of every basis node.
    """
    if not cfg.ordered_flag:
        raise NotOrdered("NotOrdered: sample nodes must all exceed the basis nodes; apply a change of variable")
    x, t = _nodes(cfg, exact)
    entries = _bd_entries(x, t, Fraction(1) if exact else 1.0)
    if not exact:
        entries.setflags(write=False)
    return BDMatrix(entries=entries)


def reconstruct_from_bd(bd) -> np.ndarray:
    """Multiply out ``F_l ... F_1 D G_1 ... G_n`` from a packed BD.

    Accepts a :class:`BDMatrix` or a 2-D array; Fraction entries give an
    exact result.
    """
    B = bd.entries if isinstance(bd, BDMatrix) else np.asarray(bd)
    M, N = B.shape
    exact = B.dtype == object
    X = np.zeros((M, N), dtype=object if exact else float)
    if exact:
        X[:, :] = Fraction(0)
    for q in range(min(M, N)):
        X[q, q] = B[q, q]
    for i in range(1, N):
        for col in range(N - 1, i - 1, -1):
            X[:, col] = X[:, col] + B[col - i, col] * X[:, col - 1]
    for i in range(1, M):
        for row in range(min(M - 1, i + N - 1), i - 1, -1):
            X[row, :] = X[row, :] + B[row, row - i] * X[row - 1, :]
    return X
