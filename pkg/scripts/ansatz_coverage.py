"""How far each ansatz rung gets on a family of random rational right-hand sides.

For h = P(x, y)/Q(x, y) with small random coefficients, records which
templates yield nontrivial symmetries and the pipeline exit code.

    python scripts/ansatz_coverage.py --n 40 --seed 1
"""

import argparse
import random
import signal
from collections import Counter

from lieode import expr as E
from lieode.canonical import PipelineOptions, solve_pipeline
from lieode.parser import Ode
from lieode.symmetry import AnsatzSpec, solve_symmetries

X, Y = E.Sym("x"), E.Sym("y")


def random_h(rng: random.Random) -> E.Expr:
    def poly():
        terms = [E.Num(rng.randint(-2, 2)) * X ** rng.randint(0, 2) * Y ** rng.randint(0, 2) for _ in range(rng.randint(1, 3))]
        return E.normalize(E.Add(terms))

    while True:
        p, q = poly(), poly()
        if not E.is_zero(q) and not E.is_zero(p):
            return E.normalize(p / q)


class Timeout(Exception):
    pass


def _alarm(*_):
    raise Timeout


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=40)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--budget", type=int, default=10, help="seconds per equation")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    specs = {"restrictive": AnsatzSpec.restrictive(), "quadratic": AnsatzSpec.quadratic(),
             "functional": AnsatzSpec.functional(-2, 2)}
    hits, codes = Counter(), Counter()
    signal.signal(signal.SIGALRM, _alarm)
    for i in range(args.n):
        h = random_h(rng)
        ode = Ode(h)
        row = []
        signal.alarm(args.budget)
        try:
            for name, spec in specs.items():
                k = len(solve_symmetries(ode, spec))
                hits[name] += k > 0
                row.append(f"{name[:4]}={k}")
            code = solve_pipeline(ode, PipelineOptions(samples=50)).exit_code
        except Timeout:
            code = "timeout"
        finally:
            signal.alarm(0)
        codes[code] += 1
        print(f"{i:3d}  h = {E.render(h):40s} {' '.join(row)}  exit={code}")
    print()
    print("equations with a nontrivial field:", dict(hits))
    print("exit codes:", dict(codes))


if __name__ == "__main__":
    main()
