"""Two classical forms with symmetries known in advance.

* homogeneous: dy/dx = F(y/x), invariant under (x, y) -> (lam x, lam y)
* linear:      dy/dx + F(x) y = G(x), invariant under y -> y + eps u0(x)
  with u0 = exp(-int F dx)

These serve as a fallback when no ansatz produces a symmetry, and as an
independent cross-check on the ones that do.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import expr as E
from .canonical import CanonicalPair, SolutionForm, solve_relation
from .errors import IntegrationFailed
from .expr import rational as R
from .expr.poly import Poly
from .integrate import integrate_limited
from .parser import Ode
from .symmetry import TangentField, X, Y

RVAR = E.Sym("r")
LAM = E.Sym("lam")
C = E.Sym("C")


@dataclass(frozen=True)
class HomogeneousForm:
    F: E.Expr  # in r = y/x

    def rebuild(self) -> E.Expr:
        return E.substitute(self.F, RVAR, Y / X)


@dataclass(frozen=True)
class LinearForm:
    F: E.Expr  # in x
    G: E.Expr  # in x

    def rebuild(self) -> E.Expr:
        return E.normalize(self.G - self.F * Y)


def detect_homogeneous(ode: Ode):
    h = ode.h
    scaled = E.substitute(h, {X: LAM * X, Y: LAM * Y})
    if not E.is_zero(scaled - h):
        return None
    F = E.substitute(h, Y, RVAR * X)
    if "x" in E.free_symbols(F):
        # invariance guarantees x cancels; this only triggers on x-dependent logs of constants
        F = E.substitute(F, X, 1)
    return HomogeneousForm(F)


def homogeneous_symmetry() -> TangentField:
    return TangentField(X, Y)


def homogeneous_solution(form: HomogeneousForm) -> SolutionForm:
    """ln|x| = int dr/(F(r) - r) + C, back in x and y.

    F(r) = r gives the lines y = C x directly.
    """
    diff = E.normalize(form.F - RVAR)
    if E.is_zero(diff):
        return SolutionForm("explicit", branches=(E.normalize(C * X),))
    integrand = E.normalize(1 / diff)
    try:
        I = integrate_limited(integrand, "r")
    except IntegrationFailed:
        pair = CanonicalPair(E.normalize(Y / X), E.ln(X))
        return SolutionForm("quadrature", F=integrand, pair=pair)
    lhs = E.ln(X) - E.substitute(I, RVAR, Y / X)
    return solve_relation(lhs)


def detect_linear(ode: Ode):
    """F, G with h = G - F y, or None when h is not affine in y."""
    rf = E.to_rf(ode.h)
    if any("y" in g.free for g in rf.den.gens()):
        return None
    yg = R.Var("y")
    lin, rest = {}, {}
    for m, c in rf.num.terms.items():
        e = 0
        other = []
        for g, ex in m:
            if g == yg:
                e = ex
            elif "y" in g.free:
                return None
            else:
                other.append((g, ex))
        if e == 1:
            lin[tuple(other)] = c
        elif e == 0:
            rest[tuple(other)] = c
        else:
            return None
    den = R.RatFunc(rf.den, R.ONE_POLY)
    a = R.div(R.make(Poly(lin)), den)
    b = R.div(R.make(Poly(rest)), den)
    return LinearForm(E.from_rf(R.neg(a)), E.from_rf(b))


def linear_symmetry(form: LinearForm) -> TangentField:
    """(0, u0) with u0 = exp(-int F dx); raises IntegrationFailed."""
    I = integrate_limited(form.F, "x")
    # any solution of u' = -F u will do, so the sign branch of exp(-I) is free
    return TangentField(E.Num(0), E.from_rf(R.exp(R.neg(E.to_rf(I)), branch=True)))
