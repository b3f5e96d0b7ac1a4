"""Bundled problem files and reference solutions for the two worked examples.

The data directory defaults to the package's ``data`` folder and can be
redirected with the ``TPLAG_REFDATA`` environment variable.  Running
``python3 -m tplag.refdata DIR`` regenerates every file with the exact and
100-digit oracles.
"""
from __future__ import annotations

import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import mpmath

from .bd_core import build_L, make_config
from .errors import MissingReference
from .oracle import (
    condition_number_2,
    decode_reference,
    encode_reference,
    exact_ls_solve,
    exact_pinv,
    exact_projection,
    hp_ls_solve,
    hp_matrix_A,
)

__all__ = [
    "EXAMPLE1_X",
    "EXAMPLE1_T",
    "EXAMPLE1_B1",
    "EXAMPLE1_B2",
    "example2_problem",
    "data_dir",
    "load_json",
    "load_problem_obj",
    "load_reference",
    "generate",
]

EXAMPLE1_X = (
    "-14 -12.9 -11.6 -11 -9.7 -8.4 -7.9 -7.2 -6.9 -6.4 -6 -5 -4.4 -3.5 -3 -1.5 -0.9 -0.4 0 0.1 0.23"
).split()
EXAMPLE1_T = (
    "9.9 9.6 9.2 9 8.7 8.4 8.1 8 7.75 7.5 7.25 7 6.8 6.3 6 5.9 5.6 5.2 5 4.5 4.1 3.7 3.2 3 "
    "2.8 2.3 2.1 1.6 1.25 1 0.8"
).split()
EXAMPLE1_B1 = (
    "0.39 -1.7 -5.8 -4 5 -5.7 6.3 -0.88 -3.9 6.9 -7 4.4 3 6.2 -5.7 -4.5 4.8 -0.85 4.8 2.4 -4 "
    "2.8 2.7 0.46 -2.7 -1.2 -1.1 -1.5 1.2 -0.84 -0.12"
).split()
EXAMPLE1_B2 = (
    "8.5 8.1 7.6 7.4 7.0 6.7 6.4 6.3 6.0 5.8 5.6 5.3 5.1 4.7 4.5 4.4 4.1 3.8 3.7 3.3 3.1 2.8 "
    "2.5 2.3 2.2 1.9 1.8 1.5 1.3 1.1 0.97"
).split()

EXAMPLE2_SHIFT = ("11/5", "1")
REFERENCE_DIGITS = 100


def _decimal17(v) -> str:
    # 17 significant digits round-trip to the correctly rounded double.
    if abs(v) < mpmath.mpf(10) ** -50:
        return "0"
    return mpmath.nstr(v, 17, strip_zeros=False, min_fixed=-5, max_fixed=5)


def example2_problem() -> dict:
    """Chebyshev points of the second kind with ``f(t) = exp(t) sin(15 t)``."""
    with mpmath.workdps(REFERENCE_DIGITS):
        x = [-mpmath.cos(j * mpmath.pi / 10) for j in range(11)]
        t = [mpmath.cos(i * mpmath.pi / 20) for i in range(21)]
        b = [mpmath.exp(v) * mpmath.sin(15 * v) for v in t]
        return {
            "x": [_decimal17(v) for v in x],
            "t": [_decimal17(v) for v in t],
            "b": [_decimal17(v) for v in b],
            "change_of_variable": {"a0": EXAMPLE2_SHIFT[0], "a1": EXAMPLE2_SHIFT[1]},
        }


def data_dir() -> Path:
    env = os.environ.get("TPLAG_REFDATA")
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "data"


def load_json(name: str) -> dict:
    path = data_dir() / name
    try:
        return json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise MissingReference(f"reference data not found: {path}") from exc
    except (OSError, json.JSONDecodeError) as exc:
        raise MissingReference(f"reference data unreadable: {path}") from exc


def load_problem_obj(example: int, variant: str = "") -> dict:
    """Problem-file object, e.g. ``load_problem_obj(1, "b2")``."""
    suffix = f"_{variant}" if variant else ""
    return load_json(f"example{example}{suffix}.json")


def load_reference(example: int) -> dict:
    """Decoded reference solutions: Fraction arrays for example 1, decimal strings for example 2."""
    return decode_reference(load_json(f"ref_example{example}.json"))


def _example1_refs() -> dict:
    cfg = make_config(EXAMPLE1_X, EXAMPLE1_T)
    L = build_L(cfg, exact=True)
    out = {"example": 1, "kind": "exact"}
    for key, b in (("c_bar_b1", EXAMPLE1_B1), ("c_bar_b2", EXAMPLE1_B2)):
        out[key] = exact_ls_solve(L, [Fraction(v) for v in b])
    out["pinv"] = exact_pinv(L)
    out["projection"] = exact_projection(L)
    out["kappa2"] = condition_number_2(L, digits=REFERENCE_DIGITS)
    return out


def _example2_refs(problem: dict) -> dict:
    a0, a1 = (Fraction(v) for v in EXAMPLE2_SHIFT)
    with mpmath.workdps(REFERENCE_DIGITS):
        s = [mpmath.mpf(a0.numerator) / a0.denominator + mpmath.mpf(a1.numerator) / a1.denominator * mpmath.mpf(v)
             for v in problem["t"]]
        A = hp_matrix_A(problem["x"], s, REFERENCE_DIGITS)
        y, hb = hp_ls_solve(A, problem["b"], REFERENCE_DIGITS)
    return {"example": 2, "kind": "decimal", "digits": REFERENCE_DIGITS, "y_bar": y, "projection_vector": hb}


def generate(directory) -> list[Path]:
    """Write the problem files and reference solutions into ``directory``."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    ex2 = example2_problem()
    files = {
        "example1_b1.json": {"x": EXAMPLE1_X, "t": EXAMPLE1_T, "b": EXAMPLE1_B1},
        "example1_b2.json": {"x": EXAMPLE1_X, "t": EXAMPLE1_T, "b": EXAMPLE1_B2},
        "example2.json": ex2,
        "ref_example1.json": encode_reference(_example1_refs(), REFERENCE_DIGITS),
        "ref_example2.json": encode_reference(_example2_refs(ex2), REFERENCE_DIGITS),
    }
    written = []
    for name, obj in files.items():
        path = directory / name
        path.write_text(json.dumps(obj, indent=1) + "\n")
        written.append(path)
    return written


if __name__ == "__main__":  # pragma: no cover
    target = sys.argv[1] if len(sys.argv) > 1 else str(Path(__file__).resolve().parent / "data")
    for p in generate(target):
        print(p)
