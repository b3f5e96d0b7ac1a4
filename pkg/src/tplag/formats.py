"""Problem files, CSV writers and deterministic float formatting."""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .bd_core import BDMatrix, NodeConfig, make_config, parse_scalar
from .errors import DimensionMismatch, TplagError

__all__ = ["Problem", "format_float", "load_problem", "parse_problem", "bd_csv", "matrix_csv"]


@dataclass(frozen=True, eq=False)
class Problem:
    """A parsed problem file: nodes, optional data and optional shift."""

    cfg: NodeConfig
    b: Optional[np.ndarray]
    a0: Optional[str]
    a1: Optional[str]


def format_float(v) -> str:
    """Shortest round-trip decimal (at most 17 significant digits), ``3.0`` written as ``3``."""
    v = float(v)
    if v == 0.0:
        return "0"
    s = repr(v)
    if s.endswith(".0"):
        s = s[:-2]
    return s


def _strings(obj, key: str) -> list:
    vals = obj.get(key)
    if not isinstance(vals, list):
        raise TplagError(f"problem file: {key!r} must be an array")
    out = []
    for v in vals:
        if isinstance(v, bool) or not isinstance(v, (str, int, float)):
            raise TplagError(f"problem file: bad entry {v!r} in {key!r}")
        out.append(str(v) if not isinstance(v, str) else v)
    return out


def parse_problem(obj: dict) -> Problem:
    """Validate a decoded problem-file object."""
    if not isinstance(obj, dict):
        raise TplagError("problem file must hold a JSON object")
    cfg = make_config(_strings(obj, "x"), _strings(obj, "t"))
    b = None
    if obj.get("b") is not None:
        vals = _strings(obj, "b")
        if len(vals) != cfg.l + 1:
            raise DimensionMismatch(f"|b| = {len(vals)} but |t| = {cfg.l + 1}")
        b = np.array([float(parse_scalar(v)) for v in vals])
    a0 = a1 = None
    cov = obj.get("change_of_variable")
    if cov is not None:
        if not isinstance(cov, dict):
            raise TplagError("change_of_variable must be an object {a0, a1}")
        a0 = None if cov.get("a0") is None else str(cov["a0"])
        a1 = None if cov.get("a1") is None else str(cov["a1"])
        for v in (a0, a1):
            if v is not None:
                parse_scalar(v)
    return Problem(cfg=cfg, b=b, a0=a0, a1=a1)


def load_problem(path) -> Problem:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise TplagError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TplagError(f"{path}: invalid JSON ({exc.msg})") from exc
    return parse_problem(obj)


def bd_csv(bd: BDMatrix) -> str:
    """CSV with header ``i,j,value,kind``; indices are 1-based."""
    lines = ["i,j,value,kind"]
    for i in range(bd.rows):
        for j in range(bd.cols):
            lines.append(f"{i + 1},{j + 1},{format_float(bd.entries[i, j])},{bd.kind(i, j)}")
    return "\n".join(lines) + "\n"


def matrix_csv(M) -> str:
    """CSV with header ``i,j,value``; indices are 1-based."""
    M = np.asarray(M, dtype=float)
    lines = ["i,j,value"]
    for (i, j), v in np.ndenumerate(M):
        lines.append(f"{i + 1},{j + 1},{format_float(v)}")
    return "\n".join(lines) + "\n"
