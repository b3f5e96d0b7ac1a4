"""Least squares fitting in the Lagrange basis and the associated matrices.

With ``L = A * diag(1/den)`` every quantity for ``L`` is obtained from the
QR factorization of the totally positive ``A``:

* least squares:  ``c = den * z`` where ``z`` solves ``min ||b - A z||``,
* pseudo-inverse: ``pinv(L) = diag(den) @ inv(R) @ Q1.T``,
* projection:     ``H = Q1 @ Q1.T`` (the same for ``A`` and ``L``).

When the sample nodes are not all to the right of the basis nodes, the
sample sites are translated (``s = a0 + a1 t``) and the problem is solved in
the shifted denominator-free basis; the data vector is left untouched and
the fitted polynomial is evaluated through the same shift.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from ._dd import DD
from .bd_core import NodeConfig, parse_scalar, scaling_diag, tnbdlr
from .errors import DimensionMismatch, NotOrdered, TplagError
from .tn_kernels import QRFactors, tninverse_expand, tnqr, tnsolve

__all__ = [
    "LSSolution",
    "ChangeOfVariable",
    "FitModel",
    "ls_solve_A",
    "ls_solve_L",
    "mp_inverse_A",
    "mp_inverse_L",
    "projection_matrix",
    "make_change_of_variable",
    "fit",
    "evaluate",
    "evaluate_direct",
    "evaluation_scale",
    "project_data",
]


@dataclass(frozen=True, eq=False)
class LSSolution:
    z_bar: np.ndarray
    c_bar: np.ndarray
    residual_norm: float
    d1: np.ndarray
    d2: np.ndarray


def _require_ordered(cfg: NodeConfig) -> None:
    if not cfg.ordered_flag:
        raise NotOrdered("NotOrdered: sample nodes must all exceed the basis nodes")


def _qr(cfg: NodeConfig) -> QRFactors:
    _require_ordered(cfg)
    return tnqr(tnbdlr(cfg))


def _data(cfg: NodeConfig, b) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    if b.shape != (cfg.l + 1,):
        raise DimensionMismatch(f"data vector has shape {b.shape}, expected ({cfg.l + 1},)")
    return b


def ls_solve_A(cfg: NodeConfig, b):
    """Least squares solution of ``A z = b``.

    Returns
    -------
    z_bar, d1, d2, residual_norm
        ``[d1; d2] = Q.T @ b`` and ``residual_norm = ||d2||``.
    """
    b = _data(cfg, b)
    qr = _qr(cfg)
    d = qr.Q.T @ b
    N = cfg.n + 1
    d1, d2 = d[:N], d[N:]
    z = tnsolve(qr.R_bd, d1)
    return z, d1, d2, float(np.linalg.norm(d2))


def ls_solve_L(cfg: NodeConfig, b) -> LSSolution:
    """Least squares coefficients in the Lagrange basis, ``c = den * z``."""
    z, d1, d2, res = ls_solve_A(cfg, b)
    c = scaling_diag(cfg.x).den * z
    return LSSolution(z_bar=z, c_bar=c, residual_norm=res, d1=d1, d2=d2)


def mp_inverse_A(cfg: NodeConfig) -> np.ndarray:
    """Moore-Penrose inverse of ``A`` as ``inv(R) @ Q1.T``."""
    qr = _qr(cfg)
    return tninverse_expand(qr.R_bd) @ qr.Q1.T


def mp_inverse_L(cfg: NodeConfig) -> np.ndarray:
    """Moore-Penrose inverse of ``L``: row ``i`` of ``pinv(A)`` scaled by ``den[i]``."""
    return scaling_diag(cfg.x).den[:, np.newaxis] * mp_inverse_A(cfg)


def projection_matrix(cfg: NodeConfig) -> np.ndarray:
    """Orthogonal projector onto the column space of ``L``, ``Q1 @ Q1.T``."""
    Q1 = _qr(cfg).Q1
    return Q1 @ Q1.T


@dataclass(frozen=True)
class ChangeOfVariable:
    """Order-preserving map ``s = a0 + a1 * t`` of the sample sites."""

    a0: float = 0.0
    a1: float = 1.0
    applied: bool = False

    def __call__(self, t):
        if not self.applied:
            return t
        return self.a0 + self.a1 * t


def make_change_of_variable(cfg: NodeConfig, a0=None, a1=None) -> ChangeOfVariable:
    """Choose a shift that puts every sample site right of the last basis node.

    Ordered configurations get the identity.  Otherwise ``a1 = 1`` and
    ``a0 = max(x) - min(t) + gap`` with ``gap = 0.1 * max(1, spread)``,
    ``spread`` being the width of the hull of all nodes.  An explicit
    ``a0``/``a1`` overrides the rule and is checked for admissibility.

    Raises
    ------
    NotOrdered
        An explicit override does not produce the required ordering.
    """
    if a0 is not None or a1 is not None:
        a0f = float(parse_scalar(a0 if a0 is not None else 0))
        a1f = float(parse_scalar(a1 if a1 is not None else 1))
        if not a1f > 0:
            raise TplagError("the scale a1 must be positive")
        cov = ChangeOfVariable(a0=a0f, a1=a1f, applied=(a0f, a1f) != (0.0, 1.0))
        if not cfg.mapped(cov.a0, cov.a1).ordered_flag:
            raise NotOrdered(f"NotOrdered: shift a0={a0f!r}, a1={a1f!r} leaves sample nodes left of the basis nodes")
        return cov
    if cfg.ordered_flag:
        return ChangeOfVariable()
    lo = min(cfg.x[0], cfg.t[-1])
    hi = max(cfg.x[-1], cfg.t[0])
    gap = 0.1 * max(1.0, hi - lo)
    cov = ChangeOfVariable(a0=float(cfg.x[-1] - cfg.t[-1] + gap), a1=1.0, applied=True)
    assert cfg.mapped(cov.a0, cov.a1).ordered_flag
    return cov


@dataclass(frozen=True, eq=False)
class FitModel:
    """Result of :func:`fit`.

    ``y_bar`` are the coordinates in the shifted denominator-free basis
    ``prod_{k != j} (s - x_k)``; ``c_bar`` (Lagrange coefficients) is only
    available when no shift was needed.  The projection matrix is computed
    on first access and cached.
    """

    cfg: NodeConfig
    cov: ChangeOfVariable
    y_bar: np.ndarray
    c_bar: Optional[np.ndarray]
    residual_norm: float
    b: np.ndarray
    _h: list = field(default_factory=list, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def shifted(self) -> NodeConfig:
        if not self.cov.applied:
            return self.cfg
        return self.cfg.mapped(self.cov.a0, self.cov.a1)

    @property
    def h(self) -> np.ndarray:
        if not self._h:
            with self._lock:
                if not self._h:
                    H = projection_matrix(self.shifted)
                    H.setflags(write=False)
                    self._h.append(H)
        return self._h[0]

    def to_json(self) -> dict:
        return {
            "y_bar": [float(v) for v in self.y_bar],
            "c_bar": None if self.c_bar is None else [float(v) for v in self.c_bar],
            "residual_norm": float(self.residual_norm),
            "change_of_variable": {"a0": self.cov.a0, "a1": self.cov.a1},
        }


def fit(cfg: NodeConfig, b, a0=None, a1=None) -> FitModel:
    """Fit the least squares polynomial, shifting the sample sites if needed."""
    b = _data(cfg, b)
    cov = make_change_of_variable(cfg, a0, a1)
    if cov.applied:
        y, _, _, res = ls_solve_A(cfg.mapped(cov.a0, cov.a1), b)
        c = None
    else:
        sol = ls_solve_L(cfg, b)
        y, c, res = sol.z_bar, sol.c_bar, sol.residual_norm
    b = b.copy()
    b.setflags(write=False)
    y.setflags(write=False)
    return FitModel(cfg=cfg, cov=cov, y_bar=y, c_bar=c, residual_norm=res, b=b)


def evaluate(model: FitModel, t_star: float) -> float:
    """Evaluate the fitted polynomial with the first barycentric form, O(n).

    ``p = w(s) * sum_j y_j / (s - x_j)`` with ``w(s) = prod_k (s - x_k)`` and
    ``s = a0 + a1 * t_star``.  The sum cancels heavily when the basis is
    badly conditioned at ``s``, so it is accumulated in double-double; the
    result is then accurate relative to ``|p|`` for the given ``y_bar``.
    """
    s = model.cov(float(t_star))
    x = model.cfg.x.tolist()
    y = model.y_bar.tolist()
    for j, xj in enumerate(x):
        if xj == s:
            den = DD(y[j])
            for k, xk in enumerate(x):
                if k != j:
                    den = den * DD.diff(xj, xk)
            return float(den)
    omega = DD(1.0)
    total = DD(0.0)
    for xj, yj in zip(x, y):
        d = DD.diff(s, xj)
        omega = omega * d
        total = total + DD(yj).div(d)
    return float(omega * total)


def evaluate_direct(model: FitModel, t_star: float) -> float:
    """O(n^2) comparator ``sum_j y_j prod_{k != j} (s - x_k)`` in exact rational arithmetic.

    Uses the same binary ``y_bar`` and ``s`` as :func:`evaluate` and rounds once.
    """
    s = Fraction(model.cov(float(t_star)))
    x = [Fraction(v) for v in model.cfg.x.tolist()]
    total = Fraction(0)
    for j, yj in enumerate(model.y_bar.tolist()):
        total += Fraction(yj) * math.prod((s - xk for k, xk in enumerate(x) if k != j), start=Fraction(1))
    return float(total)


def evaluation_scale(model: FitModel, t_star: float) -> float:
    """``sum_j |y_j prod_{k != j} (s - x_k)|``, the magnitude of the terms summed by :func:`evaluate`.

    A relative perturbation of size ``u`` in ``y_bar`` moves ``p(t_star)`` by
    up to ``u`` times this amount, so ``scale / |p|`` is the condition number
    of the evaluation in the shifted basis.
    """
    s = model.cov(float(t_star))
    x = model.cfg.x
    return float(sum(abs(yj) * math.prod(abs(s - xk) for k, xk in enumerate(x) if k != j)
                     for j, yj in enumerate(model.y_bar)))


def project_data(cfg: NodeConfig, b, a0=None, a1=None) -> np.ndarray:
    """Fitted values at the sample sites, ``H @ b``; shifts the sites if needed."""
    b = _data(cfg, b)
    cov = make_change_of_variable(cfg, a0, a1)
    target = cfg.mapped(cov.a0, cov.a1) if cov.applied else cfg
    return projection_matrix(target) @ b
