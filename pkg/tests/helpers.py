import random

import numpy as np

from lieode import expr as E


def field_values(f, pts):
    return [v for p in pts for v in (E.evaluate(f.xi, p), E.evaluate(f.eta, p))]


def in_span(fields, target, seed=1, n=12) -> bool:
    """Numeric span test: least squares of target against the fields at random points."""
    rng = random.Random(seed)
    pts = [{"x": rng.uniform(0.5, 2.5), "y": rng.uniform(0.5, 2.5)} for _ in range(n)]
    A = np.array([field_values(f, pts) for f in fields]).T
    b = np.array(field_values(target, pts))
    coef, *_ = np.linalg.lstsq(A, b, rcond=None)
    return float(np.max(np.abs(A @ coef - b))) < 1e-9 * max(1.0, float(np.max(np.abs(b))))
