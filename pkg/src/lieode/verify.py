"""Numeric cross-checks for everything the symbolic stages produce.

Each check samples points with a seeded ``random.Random``, skips points
near the singular locus (any denominator factor smaller than ``guard`` in
magnitude) and reports the worst residual.  A check passes when the worst
relative residual is within tolerance and fewer than half of the attempted
samples were skipped.
"""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass

from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from . import expr as E
from .errors import AllSamplesSingular, EmptyDomain
from .expr import rational as R
from .parser import Ode, denominator_factors
from .symmetry import TangentField, X, Y, characteristic

BOX = (-3.0, 3.0)
GUARD = 1e-3
_BAD = (E.SingularPoint, E.DomainError, ZeroDivisionError, OverflowError, ValueError)


@dataclass
class VerifyReport:
    check: str
    samples: int
    max_abs: float
    max_rel: float
    passed: bool
    skipped: int
    tol: float

    def to_dict(self) -> dict:
        return asdict(self)

    def summary(self) -> str:
        flag = "pass" if self.passed else "FAIL"
        return (
            f"{self.check}: {flag} (max rel {self.max_rel:.2e}, tol {self.tol:.0e}, "
            f"{self.samples} samples, {self.skipped} skipped)"
        )


def _finish(name: str, rels: list, abss: list, skipped: int, attempts: int, tol: float) -> VerifyReport:
    if not rels:
        raise AllSamplesSingular(f"{name}: all {attempts} samples hit the singular guard")
    max_rel = max(rels)
    return VerifyReport(
        check=name,
        samples=len(rels),
        max_abs=max(abss),
        max_rel=max_rel,
        passed=bool(max_rel <= tol and skipped < 0.5 * attempts),
        skipped=skipped,
        tol=tol,
    )


def _transcendental(exprs) -> bool:
    for e in exprs:
        rf = E.to_rf(E.as_expr(e))
        for g in rf.num.gens() | rf.den.gens():
            if isinstance(g, (R.LogG, R.RootG, R.FnExp)):
                return True
    return False


def _guards(exprs) -> list:
    out = []
    for e in exprs:
        for f in denominator_factors(E.as_expr(e)):
            if f not in out:
                out.append(f)
    return out


class Sampler:
    """Seeded points in the box, restricted to the positive quadrant on request."""

    def __init__(self, seed: int = 0, box=BOX, positive: bool = False, guard: float = GUARD):
        self.rng = random.Random(seed)
        lo, hi = box
        self.lo = max(lo, 0.0) if positive else lo
        self.hi = hi
        self.guard = guard

    def point(self) -> dict:
        return {"x": self.rng.uniform(self.lo, self.hi), "y": self.rng.uniform(self.lo, self.hi)}

    def ok(self, pt: dict, guards) -> bool:
        try:
            return all(abs(E.evaluate(g, pt)) >= self.guard for g in guards)
        except _BAD:
            return False


def _sampler_for(exprs, seed: int) -> Sampler:
    return Sampler(seed, positive=_transcendental(exprs))


# ---------------------------------------------------------------------------
# symmetry checks


def check_lsc_numeric(ode: Ode, f: TangentField, n: int = 100, tol: float = 1e-9, seed: int = 0) -> VerifyReport:
    """Evaluate the five terms of the symmetry condition separately at n points."""
    if n < 1:
        raise ValueError("n must be >= 1")
    h, xi, eta = ode.h, f.xi, f.eta
    pieces = [
        E.diff(eta, X),
        E.normalize(-E.diff(xi, Y) * h * h),
        E.normalize((E.diff(eta, Y) - E.diff(xi, X)) * h),
        E.normalize(-xi * E.diff(h, X)),
        E.normalize(-eta * E.diff(h, Y)),
    ]
    sampler = _sampler_for([h, xi, eta], seed)
    guards = _guards([h, xi, eta])
    rels, abss, skipped = [], [], 0
    for _ in range(n):
        pt = sampler.point()
        if not sampler.ok(pt, guards):
            skipped += 1
            continue
        try:
            vals = [E.evaluate(p, pt) for p in pieces]
        except _BAD:
            skipped += 1
            continue
        res = abs(sum(vals))
        abss.append(res)
        rels.append(res / max(1.0, sum(abs(v) for v in vals)))
    return _finish("lsc_numeric", rels, abss, skipped, n, tol)


def check_nontrivial(ode: Ode, f: TangentField, n: int = 20, seed: int = 0) -> bool:
    Q = characteristic(ode.h, f.xi, f.eta)
    if E.is_zero(Q):
        return False
    sampler = _sampler_for([ode.h, f.xi, f.eta], seed)
    guards = _guards([ode.h, Q])
    for _ in range(n):
        pt = sampler.point()
        if not sampler.ok(pt, guards):
            continue
        try:
            if abs(E.evaluate(Q, pt)) > 1e-6:
                return True
        except _BAD:
            continue
    return False


def check_derivative_fd(e, v, tol: float = 1e-6, n: int = 50, seed: int = 0, step: float = 1e-6) -> VerifyReport:
    """diff(e, v) against a central difference at n seeded points."""
    e = E.as_expr(e)
    name = v.name if isinstance(v, E.Sym) else v
    d = E.diff(e, name)
    sampler = _sampler_for([e], seed)
    guards = _guards([e, d])
    rels, abss, skipped = [], [], 0
    for _ in range(n):
        pt = sampler.point()
        if not sampler.ok(pt, guards):
            skipped += 1
            continue
        try:
            up = dict(pt, **{name: pt[name] + step})
            dn = dict(pt, **{name: pt[name] - step})
            fd = (E.evaluate(e, up) - E.evaluate(e, dn)) / (2 * step)
            dv = E.evaluate(d, pt)
        except _BAD:
            skipped += 1
            continue
        err = abs(dv - fd)
        abss.append(err)
        rels.append(err / max(1.0, abs(dv)))
    return _finish(f"derivative_fd[{name}]", rels, abss, skipped, n, tol)


# ---------------------------------------------------------------------------
# canonical coordinates


def check_canonical_identities(f: TangentField, pair, n: int = 100, tol: float = 1e-9, seed: int = 0) -> VerifyReport:
    """xi r_x + eta r_y = 0 and xi s_x + eta s_y = 1 at n seeded points."""
    terms = [
        (E.normalize(f.xi * E.diff(pair.r, X)), E.normalize(f.eta * E.diff(pair.r, Y)), 0.0),
        (E.normalize(f.xi * E.diff(pair.s, X)), E.normalize(f.eta * E.diff(pair.s, Y)), 1.0),
    ]
    exprs = [f.xi, f.eta, pair.r, pair.s]
    sampler = _sampler_for(exprs, seed)
    guards = _guards([t for a, b, _ in terms for t in (a, b)] + exprs)
    rels, abss, skipped = [], [], 0
    for _ in range(n):
        pt = sampler.point()
        if not sampler.ok(pt, guards):
            skipped += 1
            continue
        try:
            worst_abs = worst_rel = 0.0
            for a, b, target in terms:
                va, vb = E.evaluate(a, pt), E.evaluate(b, pt)
                err = abs(va + vb - target)
                worst_abs = max(worst_abs, err)
                worst_rel = max(worst_rel, err / max(1.0, abs(va) + abs(vb)))
        except _BAD:
            skipped += 1
            continue
        abss.append(worst_abs)
        rels.append(worst_rel)
    return _finish("canonical_identities", rels, abss, skipped, n, tol)


def check_s_independence(
    ode: Ode, f: TangentField, pair, F, n: int = 20, tol: float = 1e-8, seed: int = 0
) -> VerifyReport:
    """The raw quotient agrees at two points of one orbit and with F(r).

    The second point is reached by flowing along (xi, eta), which keeps r
    fixed and moves s.
    """
    from .canonical import canonical_quotient

    num, den = canonical_quotient(ode, pair)
    exprs = [ode.h, f.xi, f.eta, pair.r, pair.s]
    sampler = _sampler_for(exprs, seed)
    guards = _guards(exprs + [num, den])

    def rhs(_t, z):
        pt = {"x": z[0], "y": z[1]}
        return [E.evaluate(f.xi, pt), E.evaluate(f.eta, pt)]

    rels, abss, skipped = [], [], 0
    for _ in range(n):
        p0 = sampler.point()
        t1 = sampler.rng.uniform(0.05, 0.25)
        if not sampler.ok(p0, guards):
            skipped += 1
            continue
        try:
            sol = solve_ivp(rhs, (0.0, t1), [p0["x"], p0["y"]], method="DOP853", rtol=1e-12, atol=1e-12)
            if not sol.success:
                raise ValueError(sol.message)
            p1 = {"x": float(sol.y[0, -1]), "y": float(sol.y[1, -1])}
            if not sampler.ok(p1, guards) or (sampler.lo >= 0 and min(p1.values()) <= 0):
                raise ValueError("left the sampling domain")
            q0 = E.evaluate(num, p0) / E.evaluate(den, p0)
            q1 = E.evaluate(num, p1) / E.evaluate(den, p1)
            fr = E.evaluate(F, {"r": E.evaluate(pair.r, p0)})
        except _BAD:
            skipped += 1
            continue
        err = max(abs(q0 - q1), abs(q0 - fr))
        abss.append(err)
        rels.append(err / max(1.0, abs(q0)))
    return _finish("s_independence", rels, abss, skipped, n, tol)


# ---------------------------------------------------------------------------
# solutions


def _grid(lo: float, hi: float, k: int) -> list:
    return [lo + (hi - lo) * i / (k - 1) for i in range(k)]


def check_solution(
    ode: Ode, sol, C_values=(3, 5, 10), x_range=(0.1, 1.0), tol: float = 1e-6, points: int = 41, step: float = 1e-6
) -> VerifyReport:
    """Residual of a candidate solution family against dy/dx = h.

    Explicit branches: central difference of y(x) against h(x, y(x)).
    Implicit G = 0: on roots traced in y for each grid x, the relative size
    of G_x + G_y h.  Points outside the domain (negative radicand, no root)
    are not counted; guard rejections are.
    """
    if sol.variant == "explicit":
        return _check_explicit(ode, sol, C_values, x_range, tol, points, step)
    if sol.variant == "implicit":
        return _check_implicit(ode, sol, C_values, x_range, tol, points)
    raise ValueError("quadrature forms have no pointwise solution check")


def _check_explicit(ode, sol, C_values, x_range, tol, points, step) -> VerifyReport:
    rels, abss, skipped, attempts = [], [], 0, 0
    for b in sol.branches:
        guards = _guards([b])
        for cv in C_values:
            for x in _grid(*x_range, points):
                pt = {"x": x, "C": cv}
                try:
                    y = E.evaluate(b, pt)
                    up = E.evaluate(b, dict(pt, x=x + step))
                    dn = E.evaluate(b, dict(pt, x=x - step))
                except E.DomainError:
                    continue
                except _BAD:
                    attempts += 1
                    skipped += 1
                    continue
                attempts += 1
                full = {"x": x, "y": y, "C": cv}
                try:
                    if any(abs(E.evaluate(g, pt)) < GUARD for g in guards) or any(
                        abs(E.evaluate(g, full)) < GUARD for g in ode.denominators
                    ):
                        skipped += 1
                        continue
                    hv = E.evaluate(ode.h, full)
                except _BAD:
                    skipped += 1
                    continue
                fd = (up - dn) / (2 * step)
                err = abs(fd - hv)
                abss.append(err)
                rels.append(err / max(1.0, abs(hv)))
    if attempts == 0:
        raise EmptyDomain("no grid point lies in the domain of the solution")
    return _finish("solution", rels, abss, skipped, attempts, tol)


def _check_implicit(ode, sol, C_values, x_range, tol, points) -> VerifyReport:
    G = sol.relation
    Gx, Gy = E.diff(G, X), E.diff(G, Y)
    # ln|.| is defined on both sides of zero, so trace the whole window
    ys = _grid(BOX[0], BOX[1], 240)
    guards = list(ode.denominators) + _guards([G, Gx, Gy])
    rels, abss, skipped, attempts = [], [], 0, 0
    for cv in C_values:
        for x in _grid(*x_range, points):
            def g(y):
                return E.evaluate(G, {"x": x, "y": y, "C": cv})

            vals = []
            for y in ys:
                try:
                    vals.append((y, g(y)))
                except _BAD:
                    vals.append((y, None))
            for (ya, ga), (yb, gb) in zip(vals, vals[1:]):
                if ga is None or gb is None or ga == 0 or (ga > 0) == (gb > 0):
                    continue
                try:
                    root = brentq(g, ya, yb, xtol=1e-14)
                    if abs(g(root)) > 1e-8 * max(1.0, abs(ga), abs(gb)):
                        continue  # a pole, not a level-set crossing
                except _BAD:
                    continue
                attempts += 1
                pt = {"x": x, "y": root, "C": cv}
                try:
                    if any(abs(E.evaluate(q, pt)) < GUARD for q in guards):
                        skipped += 1
                        continue
                    gx, gy, hv = E.evaluate(Gx, pt), E.evaluate(Gy, pt), E.evaluate(ode.h, pt)
                except _BAD:
                    skipped += 1
                    continue
                err = abs(gx + gy * hv)
                scale = abs(gx) + abs(gy * hv)
                abss.append(err)
                rels.append(err / scale if scale > 0 else 0.0)
    if attempts == 0:
        raise EmptyDomain("no level-set points found in the sampling window")
    return _finish("solution", rels, abss, skipped, attempts, tol)


# ---------------------------------------------------------------------------
# pipeline bundle


def verify_report(ode: Ode, rep, options) -> list:
    """All checks that apply to a (partial) pipeline report."""
    out = []
    seed = options.seed
    for v in ("x", "y"):
        if v in E.free_symbols(ode.h):
            out.append(_safe(lambda v=v: check_derivative_fd(ode.h, v, options.fd_tol, seed=seed), f"derivative_fd[{v}]", options.fd_tol))
    if rep.chosen is None:
        return out
    f = rep.fields[rep.chosen]
    out.append(_safe(lambda: check_lsc_numeric(ode, f, options.samples, options.tol, seed), "lsc_numeric", options.tol))
    if rep.pair is not None:
        out.append(_safe(lambda: check_canonical_identities(f, rep.pair, options.samples, options.tol, seed), "canonical_identities", options.tol))
        if rep.canonical_ode is not None:
            out.append(_safe(lambda: check_s_independence(ode, f, rep.pair, rep.canonical_ode, seed=seed), "s_independence", 1e-8))
    if rep.solution is not None and rep.solution.variant != "quadrature":
        out.append(_safe(
            lambda: check_solution(ode, rep.solution, options.C_values, options.x_range, options.sol_tol),
            "solution", options.sol_tol,
        ))
    return out


def _safe(fn, name: str, tol: float) -> VerifyReport:
    try:
        return fn()
    except (AllSamplesSingular, EmptyDomain):
        return VerifyReport(name, 0, math.inf, math.inf, False, 0, tol)
