"""Command line interface: ``tplag decompose|fit|pinv|project|eval|repro``.

Exit codes are 0 on success, 2 for input or validation errors and 3 when
bundled reference data is missing.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import refdata
from .bd_core import build_A, build_L, tnbdlr
from .errors import MissingReference, NotOrdered, TplagError
from .formats import Problem, bd_csv, format_float, load_problem, matrix_csv, parse_problem
from .lagrange_ls import (
    evaluate,
    fit,
    make_change_of_variable,
    mp_inverse_L,
    project_data,
    projection_matrix,
)
from .naive import naive_lstsq, naive_pinv, naive_projection
from .oracle import decode_reference, rel_error_2norm

__all__ = ["main", "build_parser"]


class _Out:
    """Primary output goes to --output or stdout; diagnostics go wherever the primary output is not."""

    def __init__(self, path: Optional[str]):
        self.path = path

    def write(self, text: str) -> None:
        if self.path:
            Path(self.path).write_text(text)
        else:
            sys.stdout.write(text)

    def note(self, line: str) -> None:
        print(line, file=sys.stdout if self.path else sys.stderr)


def _shift(args, prob: Problem):
    """Explicit shift from the flags, else from the file, else None."""
    if args.a0 is not None or args.a1 is not None:
        return args.a0, args.a1
    return prob.a0, prob.a1


def _problem(args) -> Problem:
    if not args.input:
        raise TplagError("--input is required")
    return load_problem(args.input)


def _require_b(prob: Problem) -> np.ndarray:
    if prob.b is None:
        raise TplagError("the problem file has no data vector 'b'")
    return prob.b


def _check_against(out: _Out, args, key: str, value) -> None:
    if not args.reference:
        return
    try:
        ref = decode_reference(json.loads(Path(args.reference).read_text()))
    except (OSError, json.JSONDecodeError) as exc:
        raise TplagError(f"cannot read reference {args.reference}") from exc
    if key not in ref:
        raise TplagError(f"reference file has no {key!r} entry")
    out.note(f"relative_error_vs_reference={rel_error_2norm(value, ref[key]):.3e}")


def cmd_decompose(args) -> int:
    prob = _problem(args)
    a0, a1 = _shift(args, prob)
    cfg = prob.cfg
    if a0 is not None or a1 is not None or (args.autoshift and not cfg.ordered_flag):
        cov = make_change_of_variable(cfg, a0, a1)
        if cov.applied:
            cfg = cfg.mapped(cov.a0, cov.a1)
    _Out(args.output).write(bd_csv(tnbdlr(cfg)))
    return 0


def cmd_fit(args) -> int:
    prob = _problem(args)
    a0, a1 = _shift(args, prob)
    model = fit(prob.cfg, _require_b(prob), a0, a1)
    out = _Out(args.output)
    out.write(json.dumps(model.to_json(), indent=1) + "\n")
    out.note(f"residual_norm={format_float(model.residual_norm)}")
    out.note(f"change_of_variable={'applied' if model.cov.applied else 'none'}"
             f" a0={format_float(model.cov.a0)} a1={format_float(model.cov.a1)}")
    return 0


def cmd_pinv(args) -> int:
    prob = _problem(args)
    cfg = prob.cfg
    if not cfg.ordered_flag:
        raise NotOrdered("NotOrdered: the pseudo-inverse of L needs ordered nodes (a shift changes the matrix)")
    G = mp_inverse_L(cfg)
    out = _Out(args.output)
    out.write(matrix_csv(G))
    resid = np.abs(G @ build_L(cfg) - np.eye(cfg.n + 1)).max()
    out.note(f"max|pinv(L) L - I|={resid:.3e}")
    _check_against(out, args, "pinv", G)
    return 0


def cmd_project(args) -> int:
    prob = _problem(args)
    a0, a1 = _shift(args, prob)
    cov = make_change_of_variable(prob.cfg, a0, a1)
    cfg = prob.cfg.mapped(cov.a0, cov.a1) if cov.applied else prob.cfg
    H = projection_matrix(cfg)
    out = _Out(args.output)
    out.write(matrix_csv(H))
    out.note(f"max|H - H^T|={np.abs(H - H.T).max():.3e} max|H H - H|={np.abs(H @ H - H).max():.3e}"
             f" trace={format_float(np.trace(H))}")
    _check_against(out, args, "projection", H)
    return 0


def _points(text: Optional[str]) -> list[float]:
    if not text:
        raise TplagError("--points is required")
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise TplagError(f"bad --points list {text!r}") from exc


def cmd_eval(args) -> int:
    prob = _problem(args)
    a0, a1 = _shift(args, prob)
    points = _points(args.points)
    model = fit(prob.cfg, _require_b(prob), a0, a1)
    lo, hi = prob.cfg.t[-1], prob.cfg.t[0]
    lines = ["t,value,flag"]
    for p in points:
        flag = "" if lo <= p <= hi else "extrapolation"
        lines.append(f"{format_float(p)},{format_float(evaluate(model, p))},{flag}")
    _Out(args.output).write("\n".join(lines) + "\n")
    return 0


def _repro_example1() -> list[tuple[str, float, float]]:
    ref = refdata.load_reference(1)
    rows = []
    for variant in ("b1", "b2"):
        prob = parse_problem(refdata.load_problem_obj(1, variant))
        model = fit(prob.cfg, prob.b)
        exact = ref[f"c_bar_{variant}"]
        naive = naive_lstsq(build_L(prob.cfg), prob.b)
        rows.append((f"c_bar {variant}", rel_error_2norm(model.c_bar, exact), rel_error_2norm(naive, exact)))
    cfg = prob.cfg
    L = build_L(cfg)
    rows.append(("pinv(L)", rel_error_2norm(mp_inverse_L(cfg), ref["pinv"]),
                 rel_error_2norm(naive_pinv(L), ref["pinv"])))
    rows.append(("H", rel_error_2norm(projection_matrix(cfg), ref["projection"]),
                 rel_error_2norm(naive_projection(L), ref["projection"])))
    return rows


def _repro_example2() -> list[tuple[str, float, float]]:
    ref = refdata.load_reference(2)
    prob = parse_problem(refdata.load_problem_obj(2))
    model = fit(prob.cfg, prob.b, prob.a0, prob.a1)
    hb = project_data(prob.cfg, prob.b, prob.a0, prob.a1)
    M = build_A(model.shifted)
    return [
        ("y_bar (My=b)", rel_error_2norm(model.y_bar, ref["y_bar"]),
         rel_error_2norm(naive_lstsq(M, prob.b), ref["y_bar"])),
        ("H b", rel_error_2norm(hb, ref["projection_vector"]),
         rel_error_2norm(naive_projection(M) @ prob.b, ref["projection_vector"])),
    ]


def repro_rows(example: int) -> list[tuple[str, float, float]]:
    """Error rows ``(quantity, accurate, naive)`` for one worked example."""
    if example == 1:
        return _repro_example1()
    if example == 2:
        return _repro_example2()
    raise TplagError(f"unknown example {example}; choose 1 or 2")


def cmd_repro(args) -> int:
    rows = repro_rows(args.example)
    lines = [f"example {args.example}", f"{'quantity':<16}{'accurate':>12}{'naive':>12}"]
    for name, acc, nv in rows:
        lines.append(f"{name:<16}{acc:>12.1e}{nv:>12.1e}")
    if args.example == 1:
        lines.append(f"kappa2(L) = {refdata.load_reference(1)['kappa2']:.2e}")
    _Out(args.output).write("\n".join(lines) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="problem file (JSON with x, t and optionally b, change_of_variable)")
    common.add_argument("--output", help="write the result here instead of stdout")
    common.add_argument("--autoshift", action="store_true", help="apply the default change of variable when needed")
    common.add_argument("--a0", help="shift offset, decimal or p/q")
    common.add_argument("--a1", help="shift scale, decimal or p/q")
    common.add_argument("--points", help="comma-separated evaluation points")
    common.add_argument("--reference", help="JSON reference matrix file for an error report")

    parser = argparse.ArgumentParser(prog="tplag", description="Accurate least squares in the Lagrange basis.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, text in (
        ("decompose", cmd_decompose, "bidiagonal decomposition of A as CSV"),
        ("fit", cmd_fit, "least squares fit as JSON"),
        ("pinv", cmd_pinv, "Moore-Penrose inverse of L as CSV"),
        ("project", cmd_project, "projection matrix as CSV"),
        ("eval", cmd_eval, "evaluate the fitted polynomial at --points"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.set_defaults(func=func)
    p = sub.add_parser("repro", parents=[common], help="error tables for the worked examples")
    p.add_argument("example", type=int, choices=(1, 2))
    p.set_defaults(func=cmd_repro)
    return parser


def _message(exc: Exception) -> str:
    name = type(exc).__name__
    msg = str(exc)
    return msg if msg.startswith(name + ":") else f"{name}: {msg}"


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except MissingReference as exc:
        print(_message(exc), file=sys.stderr)
        return 3
    except TplagError as exc:
        print(_message(exc), file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
