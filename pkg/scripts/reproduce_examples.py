"""Run the full pipeline on the worked examples and print what each stage found.

    python scripts/reproduce_examples.py [--json results/examples.json] [--seed 0]
"""

import argparse
import json
import time
from pathlib import Path

from lieode import expr as E
from lieode.canonical import PipelineOptions, solve_pipeline
from lieode.cli import report_dict
from lieode.parser import parse_ode

EXAMPLES = [
    ("ex1", "dy/dx = y^2/x", "quadratic"),
    ("ex2", "dy/dx = y + exp(x)/y", "restrictive"),
    ("ex4", "dy/dx = y/x + x", "restrictive"),
    ("ex5", "dy/dx = y/(x - y)", "restrictive"),
    ("ex6", "dy/dx = (1 - y^2)/(x*y) + 1", "functional"),
    ("homog", "dy/dx = (x + y)/(x - y)", "auto"),
]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--json", type=Path, default=None, help="write full reports here")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    out = {}
    for name, text, ansatz in EXAMPLES:
        t0 = time.perf_counter()
        rep = solve_pipeline(parse_ode(text), PipelineOptions(ansatz=ansatz, seed=args.seed), text)
        dt = time.perf_counter() - t0
        fields = ", ".join(f"({E.render(f.xi)}, {E.render(f.eta)})" for f in rep.fields) or "-"
        print(f"[{name}] {text}   ansatz={ansatz}  exit={rep.exit_code}  {dt:.2f}s")
        print(f"    fields: {fields}")
        if rep.pair is not None:
            print(f"    r = {E.render(rep.pair.r)}, s = {E.render(rep.pair.s)}")
        if rep.canonical_ode is not None:
            print(f"    ds/dr = {E.render(rep.canonical_ode)}")
        if rep.solution is not None:
            for line in rep.solution.lines():
                print(f"    {line}")
        worst = max((v.max_rel for v in rep.verification), default=float("nan"))
        print(f"    checks: {sum(v.passed for v in rep.verification)}/{len(rep.verification)} pass, worst rel {worst:.1e}")
        out[name] = report_dict(rep)

    if args.json:
        args.json.parent.mkdir(parents=True, exist_ok=True)
        args.json.write_text(json.dumps(out, indent=2))
        print(f"wrote {args.json}")


if __name__ == "__main__":
    main()
