"""Exact symbolic expressions: construction, normal form, calculus, Laurent expansion."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import rational as R
from .poly import Poly
from .rational import DomainError, SingularPoint
from .tree import (
    Add,
    Exp,
    Expr,
    Log,
    Mul,
    Num,
    Pow,
    Sym,
    as_expr,
    from_rf,
    normalize,
    render,
    to_rf,
)

__all__ = [
    "Add", "Exp", "Expr", "Log", "Mul", "Num", "Pow", "Sym",
    "DomainError", "LaurentPoly", "NonLaurent", "SingularPoint",
    "as_expr", "as_laurent", "diff", "evaluate", "exp", "free_symbols",
    "is_zero", "ln", "normalize", "render", "substitute", "sym", "symbols",
]


class NonLaurent(ValueError):
    """Expression is not a finite Laurent polynomial in x, y and one exp kernel."""


def sym(name: str) -> Sym:
    return Sym(name)


def symbols(names: str) -> tuple[Sym, ...]:
    return tuple(Sym(n) for n in names.replace(",", " ").split())


def exp(e) -> Expr:
    return Exp(as_expr(e))


def ln(e) -> Expr:
    return Log(as_expr(e))


def diff(e, v) -> Expr:
    name = v.name if isinstance(v, Sym) else v
    return from_rf(R.diff(to_rf(as_expr(e)), name))


def substitute(e, v, f=None) -> Expr:
    """Replace symbols; ``substitute(e, v, f)`` or ``substitute(e, {v: f, ...})``.

    Replacement is simultaneous, so ``{x: y, y: x}`` swaps.
    """
    mapping = v if f is None else {v: f}
    mp = {}
    for k, val in mapping.items():
        name = k.name if isinstance(k, Sym) else k
        mp[name] = to_rf(as_expr(val))
    return from_rf(R.subs(to_rf(as_expr(e)), mp))


def is_zero(e) -> bool:
    return to_rf(as_expr(e)).is_zero()


def free_symbols(e) -> frozenset:
    return to_rf(as_expr(e)).free


def evaluate(e, point: dict, guard: float = 1e-12) -> float:
    """Floating value of ``e``; raises SingularPoint inside the guard band."""
    pt = {(k.name if isinstance(k, Sym) else k): float(v) for k, v in point.items()}
    return R.evalf(to_rf(as_expr(e)), pt, guard)


@dataclass
class LaurentPoly:
    """Exponent triple (x power, y power, kernel power) -> coefficient Expr."""

    terms: dict = field(default_factory=dict)
    kernel: str = "x"

    def to_expr(self) -> Expr:
        x, y = Sym("x"), Sym("y")
        parts = []
        for (i, j, k), c in self.terms.items():
            t = c * x ** i * y ** j
            if k:
                t = t * Exp(Num(k) * Sym(self.kernel))
            parts.append(t)
        return normalize(Add(parts)) if parts else Num(0)

    def __len__(self):
        return len(self.terms)


def as_laurent(e, kernel: str = "x") -> LaurentPoly:
    """Read an expression as a Laurent polynomial in x, y and exp(k*x).

    Other symbols (unknown coefficients, parameters) stay in the coefficients.
    """
    rf = to_rf(as_expr(e))
    if not rf.den.is_one():
        raise NonLaurent(f"expression has a non-monomial denominator: {render(from_rf(rf))}")
    kvar = R.Var(kernel)
    grouped: dict = {}
    for m, c in rf.num.terms.items():
        i = j = 0
        k = Fraction(0)
        rest = []
        for g, ex in m:
            if isinstance(g, R.Var) and g.name == "x":
                i = ex
            elif isinstance(g, R.Var) and g.name == "y":
                j = ex
            elif isinstance(g, R.Var):
                rest.append((g, ex))
            elif isinstance(g, R.ExpG) and g.mono == ((kvar, 1),):
                k = Fraction(ex)
            else:
                raise NonLaurent(f"unsupported factor {g!r} in Laurent expansion")
        kk = int(k) if k.denominator == 1 else k
        key = (i, j, kk)
        grouped.setdefault(key, {})
        grouped[key][tuple(rest)] = grouped[key].get(tuple(rest), 0) + c
    out = {}
    for key, coeff in grouped.items():
        rf_c = R.make(Poly(coeff))
        if not rf_c.is_zero():
            out[key] = from_rf(rf_c)
    return LaurentPoly(out, kernel)
