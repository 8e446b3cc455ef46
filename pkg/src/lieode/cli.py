"""Command-line front end.

    lieode solve "dy/dx = y + exp(x)/y" [--ansatz auto] [--window -2 2]
                 [--special all] [--format text|json] [--seed 0]
                 [--samples 100] [--tol 1e-9]

Exit codes: 0 solved and verified, 1 symmetry found but no verified closed
form, 2 no nontrivial symmetry, 64 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

from . import expr as E
from .canonical import PipelineOptions, Report, solve_pipeline
from .parser import ParseError, parse_ode
from .symmetry import characteristic

EXIT_OK, EXIT_PARTIAL, EXIT_NO_SYMMETRY, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    ode: str
    ansatz: str = "auto"
    window: tuple = (-2, 2)
    special: str = "all"
    format: str = "text"
    seed: int = 0
    samples: int = 100
    tol: float = 1e-9

    def __post_init__(self):
        if self.window[0] > self.window[1]:
            raise UsageError("--window needs MIN <= MAX")
        if self.samples < 1:
            raise UsageError("--samples must be >= 1")

    def options(self) -> PipelineOptions:
        return PipelineOptions(
            ansatz=self.ansatz, window=tuple(self.window), special=self.special,
            seed=self.seed, samples=self.samples, tol=self.tol,
        )


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lieode", description="Solve first-order ODEs through Lie point symmetries.")
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("solve", help="find symmetries and solve dy/dx = h(x, y)")
    s.add_argument("ode", help='equation text, e.g. "dy/dx = y^2/x"')
    s.add_argument("--ansatz", choices=["auto", "restrictive", "quadratic", "functional", "none"], default="auto")
    s.add_argument("--window", nargs=2, type=int, metavar=("MIN", "MAX"), default=[-2, 2],
                   help="x-power window of the functional ansatz")
    s.add_argument("--special", choices=["all", "homogeneous", "linear", "none"], default="all",
                   help="special-form detectors tried after the ansatz ladder")
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--samples", type=int, default=100)
    s.add_argument("--tol", type=float, default=1e-9, help="tolerance for exact-identity checks")
    return p


# ---------------------------------------------------------------------------
# rendering


def _num(v: float):
    return v if math.isfinite(v) else None


def solution_dict(sol) -> dict | None:
    if sol is None:
        return None
    if sol.variant == "explicit":
        return {"variant": "explicit", "form": "y = expression",
                "expressions": [E.render(b) for b in sol.branches], "constant": sol.constant}
    if sol.variant == "implicit":
        return {"variant": "implicit", "form": "expression = 0",
                "expressions": [E.render(sol.relation)], "constant": sol.constant}
    return {"variant": "quadrature", "form": "ds/dr = expression",
            "expressions": [E.render(sol.F)], "constant": sol.constant,
            "r": E.render(sol.pair.r), "s": E.render(sol.pair.s)}


def report_dict(rep: Report) -> dict:
    h = rep.ode.h if rep.ode is not None else None
    fields = [
        {"xi": E.render(f.xi), "eta": E.render(f.eta), "Q": E.render(characteristic(h, f.xi, f.eta))}
        for f in rep.fields
    ]
    return {
        "input": {"ode": rep.ode_text, "h": E.render(h) if h is not None else None},
        "ansatz": {"kind": rep.ansatz_kind, "window": list(rep.window) if rep.window else None},
        "fields": fields,
        "chosen": rep.chosen,
        "canonical": {"r": E.render(rep.pair.r), "s": E.render(rep.pair.s)} if rep.pair else None,
        "canonical_ode": E.render(rep.canonical_ode) if rep.canonical_ode is not None else None,
        "antiderivative": E.render(rep.antiderivative) if rep.antiderivative is not None else None,
        "solution": solution_dict(rep.solution),
        "verification": [
            {k: (_num(v) if isinstance(v, float) else v) for k, v in vr.to_dict().items()}
            for vr in rep.verification
        ],
        "stages_completed": list(rep.stages_completed),
        "failure": {"stage": rep.failure[0], "reason": rep.failure[1]} if rep.failure else None,
        "exit_code": rep.exit_code,
    }


def report_text(rep: Report) -> str:
    lines = [f"ode: {rep.ode_text}"]
    if rep.ode is not None:
        lines.append(f"h(x, y) = {E.render(rep.ode.h)}")
    if rep.ansatz_kind:
        w = f" window {list(rep.window)}" if rep.window else ""
        lines.append(f"ansatz: {rep.ansatz_kind}{w}")
    for i, f in enumerate(rep.fields):
        mark = " <- chosen" if i == rep.chosen else ""
        Q = E.render(characteristic(rep.ode.h, f.xi, f.eta))
        lines.append(f"field {i}: xi = {E.render(f.xi)}, eta = {E.render(f.eta)}, Q = {Q}{mark}")
    if rep.pair is not None:
        lines.append(f"canonical: r = {E.render(rep.pair.r)}, s = {E.render(rep.pair.s)}")
    if rep.canonical_ode is not None:
        lines.append(f"ds/dr = {E.render(rep.canonical_ode)}")
    if rep.antiderivative is not None:
        lines.append(f"s = {E.render(rep.antiderivative)} + C")
    if rep.solution is not None:
        lines.append(f"solution ({rep.solution.variant}):")
        lines.extend(f"  {ln}" for ln in rep.solution.lines())
    if rep.verification:
        lines.append("verification:")
        lines.extend(f"  {v.summary()}" for v in rep.verification)
    lines.append("stages: " + ", ".join(rep.stages_completed))
    if rep.failure:
        lines.append(f"failure at {rep.failure[0]}: {rep.failure[1]}")
    return "\n".join(lines)


def _diagnostic(kind: str, message: str, fmt: str, offset=None, expected=()) -> None:
    if fmt == "json":
        body = {"error": {"kind": kind, "message": message, "offset": offset, "expected": list(expected)}}
        print(json.dumps(body, indent=2))
    else:
        print(f"error: {message}", file=sys.stderr)


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    fmt = "json" if "json" in argv and "--format" in argv else "text"
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig(args.ode, args.ansatz, tuple(args.window), args.special, args.format,
                        args.seed, args.samples, args.tol)
    except UsageError as exc:
        _diagnostic("usage", str(exc), fmt)
        return EXIT_USAGE
    try:
        ode = parse_ode(cfg.ode)
    except ParseError as exc:
        _diagnostic(type(exc).__name__, str(exc), cfg.format, exc.offset, exc.expected)
        return EXIT_USAGE
    try:
        rep = solve_pipeline(ode, cfg.options(), cfg.ode)
    except Exception as exc:  # never leak a traceback to the user
        _diagnostic("internal", f"{type(exc).__name__}: {exc}", cfg.format)
        return EXIT_PARTIAL
    if cfg.format == "json":
        print(json.dumps(report_dict(rep), indent=2))
    else:
        print(report_text(rep))
    return rep.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
