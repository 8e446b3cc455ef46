"""Canonical coordinates, the reduced quadrature and the way back.

Given a symmetry (xi, eta) we look for (r, s) with

    xi r_x + eta r_y = 0,    xi s_x + eta s_y = 1,

so that the symmetry becomes s -> s + eps and the ODE turns into
ds/dr = F(r).  Integrating F and undoing the change of variables gives
the solution.  Only orbit equations of separable type are attempted.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import expr as E
from .errors import (
    DivisionByZeroLocus,
    IntegrationFailed,
    LieOdeError,
    NotAutonomous,
    NotSeparable,
    TrivialSymmetry,
)
from .expr import rational as R
from .expr.poly import Poly
from .integrate import integrate_limited, integrate_rf
from .parser import Ode
from .symmetry import TangentField, X, Y

RVAR = E.Sym("r")
SVAR = E.Sym("s")
C = E.Sym("C")


@dataclass(frozen=True)
class CanonicalPair:
    r: E.Expr
    s: E.Expr
    inverse: dict | None = None  # {"x": Expr(r, s), "y": Expr(r, s)}

    def __post_init__(self):
        object.__setattr__(self, "r", E.normalize(E.as_expr(self.r)))
        object.__setattr__(self, "s", E.normalize(E.as_expr(self.s)))


@dataclass(frozen=True)
class SolutionForm:
    """explicit: y = b for b in branches; implicit: relation == 0;
    quadrature: ds/dr = F on the attached pair."""

    variant: str
    branches: tuple = ()
    relation: E.Expr | None = None
    F: E.Expr | None = None
    pair: CanonicalPair | None = None
    constant: str = "C"

    def __post_init__(self):
        if self.variant not in ("explicit", "implicit", "quadrature"):
            raise ValueError(f"unknown solution variant {self.variant!r}")

    def lines(self) -> list[str]:
        if self.variant == "explicit":
            return [f"y = {E.render(b)}" for b in self.branches]
        if self.variant == "implicit":
            return [_render_relation(self.relation)]
        return [
            f"s = integral of ({E.render(self.F)}) dr + C",
            f"r = {E.render(self.pair.r)}",
            f"s = {E.render(self.pair.s)}",
        ]


def _render_relation(G: E.Expr) -> str:
    """'lhs = C' when G = lhs - C, else 'G = 0'."""
    lhs = E.normalize(G + C)
    if "C" not in E.free_symbols(lhs):
        return f"{E.render(lhs)} = C"
    return f"{E.render(G)} = 0"


# ---------------------------------------------------------------------------
# solving G = 0 for one variable


def solve_for(G, v: str):
    """Real roots of G = 0 in ``v``, or None outside the supported shapes.

    Supported: the numerator of G, as a Laurent polynomial in v with
    v-free coefficients, has two powers p < q (v**(q-p) = -b/a, with a
    +/- pair for even q-p) or three consecutive powers (quadratic formula).
    """
    rf = E.to_rf(E.as_expr(G)) if isinstance(G, E.Expr) else G
    vg = R.Var(v)
    groups: dict = {}
    for m, c in rf.num.terms.items():
        e, rest = 0, []
        for g, ex in m:
            if g == vg:
                e = ex
            elif v in g.free:
                return None
            else:
                rest.append((g, ex))
        groups.setdefault(e, {})[tuple(rest)] = c
    powers = sorted(groups)
    coef = {p: R.make(Poly(groups[p])) for p in powers}
    if len(powers) == 2:
        p, q = powers
        k = q - p
        val = R.neg(R.div(coef[p], coef[q]))
        if k == 1:
            return [val]
        root = R.power(val, Fraction(1, k))
        return [root, R.neg(root)] if k % 2 == 0 else [root]
    if len(powers) == 3 and powers[2] - powers[0] == 2:
        c0, b, a = (coef[p] for p in powers)
        disc = R.add(R.mul(b, b), R.scale(R.mul(a, c0), -4))
        sq = R.power(disc, Fraction(1, 2))
        two_a = R.scale(a, 2)
        return [R.div(R.add(R.neg(b), sq), two_a), R.div(R.add(R.neg(b), R.neg(sq)), two_a)]
    return None


def _log_terms(rf: R.RatFunc, v: str):
    """Split a Laurent rf into (sum of a_i ln u_i with v in u_i, v-free rest).

    Returns None if v appears anywhere else.
    """
    if not rf.den.is_one():
        return None
    logs, rest = [], {}
    for m, c in rf.num.terms.items():
        vg = [(g, e) for g, e in m if v in g.free]
        if not vg:
            rest[m] = c
            continue
        if len(vg) != 1 or len(m) != 1 or not isinstance(m[0][0], R.LogG) or m[0][1] != 1:
            return None
        logs.append((m[0][0], c))
    return logs, R.make(Poly(rest))


def _absorb_constant(branches: list) -> list:
    """Rescale C so the C-linear part has coefficient content 1."""
    Cg = R.Var("C")
    core = branches[0]
    for g in sorted(core.num.gens() | core.den.gens(), key=lambda g: g.sort_key):
        if isinstance(g, R.RootG) and "C" in g.free:
            core = g.base
            break
    in_num, in_den = Cg in core.num.gens(), Cg in core.den.gens()
    if in_num == in_den:
        return branches
    poly = core.num if in_num else core.den
    lin = [c for m, c in poly.sorted_terms() if dict(m).get(Cg, 0) == 1]
    if not lin or lin[0] == 1:
        return branches
    mp = {"C": R.scale(R.var("C"), 1 / lin[0])}
    return [R.subs(b, mp) for b in branches]


def _drop_constant_terms(rf: R.RatFunc) -> R.RatFunc:
    if not rf.den.is_one():
        return rf
    keep = {m: c for m, c in rf.num.terms.items() if any(g.free & {"x", "y"} for g, _ in m)}
    return R.make(Poly(keep))


def solve_relation(lhs) -> SolutionForm:
    """Solutions of lhs(x, y) = C, explicit in y where possible."""
    lhs_rf = _drop_constant_terms(E.to_rf(E.as_expr(lhs)))
    G = R.add(lhs_rf, R.neg(R.var("C")))
    branches = solve_for(G, "y")
    if branches is None:
        split = _log_terms(lhs_rf, "y")
        if split is not None and split[0]:
            logs, rest = split
            a = logs[0][1]
            # a ln|u| + rest = C  ->  u = C exp(-rest/a), sign absorbed in C
            u = R.ONE
            for g, c in logs:
                u = R.mul(u, R.power(g.arg, Fraction(c) / a))
            G2 = R.add(u, R.neg(R.mul(R.var("C"), R.exp(R.scale(rest, -1 / Fraction(a)), branch=True))))
            branches = solve_for(G2, "y")
    if branches:
        branches = _absorb_constant(branches)
        return SolutionForm("explicit", branches=tuple(E.from_rf(b) for b in branches))
    return SolutionForm("implicit", relation=E.from_rf(G))


# ---------------------------------------------------------------------------
# canonical coordinates


def split_separable(f) -> tuple[E.Expr, E.Expr]:
    """(p(x), q(y)) with f = p q; raises NotSeparable."""
    rf = E.to_rf(E.as_expr(f))
    if rf.is_zero():
        return E.Num(0), E.Num(1)
    pn, qn = _split_poly(rf.num)
    pd, qd = _split_poly(rf.den)
    return E.from_rf(R.div(pn, pd)), E.from_rf(R.div(qn, qd))


def _split_poly(p: Poly) -> tuple[R.RatFunc, R.RatFunc]:
    groups: dict = {}
    for m, c in p.terms.items():
        xs, ys = [], []
        for g, e in m:
            if g.free <= {"x"}:
                xs.append((g, e))
            elif g.free <= {"y"}:
                ys.append((g, e))
            else:
                raise NotSeparable(f"factor {g!r} mixes x and y")
        groups.setdefault(tuple(xs), {})[tuple(ys)] = c
    items = list(groups.items())
    base = Poly(items[0][1])
    lc = base.lead()[1]
    base = base.scale(1 / lc)
    xpart = {}
    for xm, ys in items:
        yp = Poly(ys)
        ratio = yp.lead()[1]
        if yp != base.scale(ratio):
            raise NotSeparable("coefficients are not proportional")
        xpart[xm] = ratio
    return R.make(Poly(xpart)), R.make(base)


def _first_integral(I: R.RatFunc) -> R.RatFunc:
    """A nicer function of I: exp(I/a) when I = a ln(..) + ... with an x-only rest."""
    split = _log_terms(I, "y") if I.den.is_one() else None
    if split is not None:
        logs, rest = split
        if logs and rest.free <= {"x"} and not any(isinstance(g, R.FnExp) for g in rest.num.gens()):
            a = Fraction(logs[0][1])
            out = R.exp(R.scale(I, 1 / a), branch=True)
            if not any(isinstance(g, R.FnExp) for g in out.num.gens() | out.den.gens()):
                return _unit_lead(out)
    return _unit_lead(I)


def _unit_lead(rf: R.RatFunc) -> R.RatFunc:
    c = rf.num.lead()[1]
    return R.scale(rf, 1 / c) if c != 1 else rf


def _invert(pair_r: R.RatFunc, pair_s: R.RatFunc):
    """x, y as functions of (r, s) when both steps are single-branch solves."""
    for first, other in (("x", "y"), ("y", "x")):
        src, tgt = (pair_s, pair_r) if other not in pair_s.free else (pair_r, pair_s)
        if other in src.free:
            continue
        sym = "s" if src is pair_s else "r"
        sol1 = solve_for(R.add(src, R.neg(R.var(sym))), first)
        if not sol1 or len(sol1) != 1:
            continue
        rest = R.subs(tgt, {first: sol1[0]})
        sym2 = "r" if sym == "s" else "s"
        sol2 = solve_for(R.add(rest, R.neg(R.var(sym2))), other)
        if not sol2 or len(sol2) != 1:
            continue
        return {first: E.from_rf(sol1[0]), other: E.from_rf(sol2[0])}
    return None


def canonical_coords(f: TangentField) -> CanonicalPair:
    xi, eta = E.to_rf(f.xi), E.to_rf(f.eta)
    if xi.is_zero() and eta.is_zero():
        raise TrivialSymmetry("zero field")
    if xi.is_zero():
        r, s = R.var("x"), integrate_rf(R.div(R.ONE, eta), "y")
    elif eta.is_zero():
        r, s = R.var("y"), integrate_rf(R.div(R.ONE, xi), "x")
    else:
        p, q = split_separable(E.from_rf(R.div(eta, xi)))
        I = R.add(
            integrate_rf(R.div(R.ONE, E.to_rf(q)), "y"),
            R.neg(integrate_rf(E.to_rf(p), "x")),
        )
        r = _first_integral(I)
        if "y" not in xi.free:
            s = integrate_rf(R.div(R.ONE, xi), "x")
        else:
            ys = solve_for(R.add(r, R.neg(R.var("r"))), "y")
            if not ys:
                raise IntegrationFailed("cannot express y along orbits")
            along = R.subs(R.div(R.ONE, xi), {"y": ys[0]})
            s = R.subs(integrate_rf(along, "x"), {"r": r})
    pair = CanonicalPair(E.from_rf(r), E.from_rf(s), _invert(r, s))
    if not identities_hold(f, pair):
        raise LieOdeError("canonical identities failed")
    return pair


def identities_hold(f: TangentField, pair: CanonicalPair) -> bool:
    return E.is_zero(f.xi * E.diff(pair.r, X) + f.eta * E.diff(pair.r, Y)) and E.is_zero(
        f.xi * E.diff(pair.s, X) + f.eta * E.diff(pair.s, Y) - 1
    )


def canonical_quotient(ode: Ode, pair: CanonicalPair) -> tuple[E.Expr, E.Expr]:
    """(s_x + h s_y, r_x + h r_y)."""
    h = ode.h
    num = E.normalize(E.diff(pair.s, X) + h * E.diff(pair.s, Y))
    den = E.normalize(E.diff(pair.r, X) + h * E.diff(pair.r, Y))
    return num, den


def canonical_ode(ode: Ode, pair: CanonicalPair) -> E.Expr:
    """F(r) with ds/dr = F(r); raises NotAutonomous or DivisionByZeroLocus."""
    num, den = canonical_quotient(ode, pair)
    if E.is_zero(den):
        raise DivisionByZeroLocus("r_x + h r_y vanishes identically")
    Q = E.to_rf(num / den)
    rel = R.add(E.to_rf(pair.r), R.neg(R.var("r")))
    for v, other in (("y", "x"), ("x", "y")):
        sols = solve_for(rel, v)
        if not sols:
            continue
        F = R.subs(Q, {v: sols[0]})
        if not F.free & {"x", "y"}:
            return E.from_rf(F)
    raise NotAutonomous("quotient does not reduce to a function of r")


def back_substitute(pair: CanonicalPair, S, ode: Ode | None = None) -> SolutionForm:
    """s(x, y) = S(r(x, y)) + C, solved for y when possible."""
    lhs = E.normalize(pair.s - E.substitute(E.as_expr(S), RVAR, pair.r))
    return solve_relation(lhs)


# ---------------------------------------------------------------------------
# pipeline


STAGES = ("symmetries", "canonical_coords", "canonical_ode", "integrate", "back_substitute", "verify")


@dataclass
class PipelineOptions:
    ansatz: str = "auto"  # auto | restrictive | quadratic | functional | none
    window: tuple = (-2, 2)
    special: str = "all"  # all | homogeneous | linear | none
    seed: int = 0
    samples: int = 100
    tol: float = 1e-9
    fd_tol: float = 1e-6
    sol_tol: float = 1e-6
    C_values: tuple = (3, 5, 10)
    x_range: tuple = (0.1, 1.0)

    def __post_init__(self):
        if self.ansatz not in ("auto", "restrictive", "quadratic", "functional", "none"):
            raise ValueError(f"unknown ansatz {self.ansatz!r}")
        if self.special not in ("all", "homogeneous", "linear", "none"):
            raise ValueError(f"unknown special-form selection {self.special!r}")
        if self.window[0] > self.window[1]:
            raise ValueError("window needs m_min <= m_max")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")


@dataclass
class Report:
    ode_text: str
    ode: Ode | None = None
    ansatz_kind: str | None = None
    window: tuple | None = None
    fields: list = field(default_factory=list)
    chosen: int | None = None
    pair: CanonicalPair | None = None
    canonical_ode: E.Expr | None = None
    antiderivative: E.Expr | None = None
    solution: SolutionForm | None = None
    verification: list = field(default_factory=list)
    stages_completed: list = field(default_factory=list)
    failure: tuple | None = None  # (stage, reason)

    @property
    def verified(self) -> bool:
        return bool(self.verification) and all(v.passed for v in self.verification)

    @property
    def exit_code(self) -> int:
        if not self.fields:
            return 2
        if self.solution is not None and self.solution.variant != "quadrature" and self.verified:
            return 0
        return 1


def _rungs(options: PipelineOptions) -> list:
    from .symmetry import AnsatzSpec

    ladder = {
        "restrictive": [("restrictive", AnsatzSpec.restrictive())],
        "quadratic": [("quadratic", AnsatzSpec.quadratic())],
        "functional": [("functional", AnsatzSpec.functional(*options.window))],
        "none": [],
    }
    if options.ansatz == "auto":
        rungs = ladder["restrictive"] + ladder["quadratic"] + ladder["functional"]
    else:
        rungs = list(ladder[options.ansatz])
    if options.special in ("all", "linear"):
        rungs.append(("linear", None))
    if options.special in ("all", "homogeneous"):
        rungs.append(("homogeneous", None))
    return rungs


def _rung_fields(ode: Ode, kind: str, spec) -> list:
    from . import special_forms as SF
    from .symmetry import is_trivial, solve_symmetries

    if spec is not None:
        try:
            return solve_symmetries(ode, spec)
        except ValueError:
            # h outside the Laurent class for this template (NonLaurent)
            return []
    if kind == "linear":
        form = SF.detect_linear(ode)
        if form is None:
            return []
        try:
            f = SF.linear_symmetry(form)
        except IntegrationFailed:
            return []
    else:
        if SF.detect_homogeneous(ode) is None:
            return []
        f = SF.homogeneous_symmetry()
    return [] if is_trivial(ode.h, f) else [f]


def _attempt(ode: Ode, f: TangentField, rep: Report):
    """Run the canonical stages for one field, filling ``rep`` in place."""
    stage = "canonical_coords"
    try:
        rep.pair = canonical_coords(f)
        rep.stages_completed.append(stage)
        stage = "canonical_ode"
        rep.canonical_ode = canonical_ode(ode, rep.pair)
        rep.stages_completed.append(stage)
        stage = "integrate"
        try:
            rep.antiderivative = integrate_limited(rep.canonical_ode, "r")
        except IntegrationFailed as exc:
            rep.solution = SolutionForm("quadrature", F=rep.canonical_ode, pair=rep.pair)
            rep.failure = (stage, str(exc))
            return
        rep.stages_completed.append(stage)
        stage = "back_substitute"
        rep.solution = back_substitute(rep.pair, rep.antiderivative, ode)
        rep.stages_completed.append(stage)
    except LieOdeError as exc:
        rep.failure = (stage, f"{type(exc).__name__}: {exc}")


def solve_pipeline(ode: Ode, options: PipelineOptions | None = None, text: str | None = None) -> Report:
    from .symmetry import order_fields
    from .verify import verify_report

    options = options or PipelineOptions()
    best = None
    for kind, spec in _rungs(options):
        fields = _rung_fields(ode, kind, spec)
        if not fields:
            continue
        for f in order_fields(fields):
            rep = Report(text or str(ode), ode, kind, spec.window if spec is not None else None)
            rep.fields = fields
            rep.chosen = fields.index(f)
            rep.stages_completed = ["symmetries"]
            _attempt(ode, f, rep)
            if best is None or len(rep.stages_completed) > len(best.stages_completed):
                best = rep
            if rep.solution is not None and rep.solution.variant != "quadrature":
                best = rep
                break
        if best.solution is not None and best.solution.variant != "quadrature":
            break
    if best is None:
        rep = Report(text or str(ode), ode)
        rep.failure = ("symmetries", "no nontrivial symmetry found by any configured ansatz or special form")
        return rep
    best.verification = verify_report(ode, best, options)
    if best.verification and all(v.passed for v in best.verification):
        best.stages_completed.append("verify")
    elif best.failure is None:
        failed = [v.check for v in best.verification if not v.passed]
        best.failure = ("verify", "failed checks: " + ", ".join(failed))
    return best
