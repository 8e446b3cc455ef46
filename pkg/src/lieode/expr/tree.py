"""Immutable expression trees and the canonical tree form.

Trees are what users build, print and compare.  Every tree converts to a
canonical :class:`~lieode.expr.rational.RatFunc`; the normal form of a tree
is the tree rebuilt from that RatFunc, so two normalized trees are equal
exactly when their rational forms are.
"""

from __future__ import annotations

from fractions import Fraction

from . import rational as R
from .poly import Poly

# operator precedences used by the printer
_P_ADD, _P_MUL, _P_NEG, _P_POW, _P_ATOM = 1, 2, 3, 4, 5


class Expr:
    __slots__ = ("_h", "_rf")

    def _init(self, key):
        self._h = hash(key)
        self._rf = None

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        return isinstance(other, Expr) and self._h == other._h and self._skey() == other._skey()

    def _skey(self):
        raise NotImplementedError

    # arithmetic builds raw (un-normalized) trees
    def __add__(self, other):
        return Add((self, as_expr(other)))

    def __radd__(self, other):
        return Add((as_expr(other), self))

    def __sub__(self, other):
        return Add((self, -as_expr(other)))

    def __rsub__(self, other):
        return Add((as_expr(other), -self))

    def __mul__(self, other):
        return Mul((self, as_expr(other)))

    def __rmul__(self, other):
        return Mul((as_expr(other), self))

    def __truediv__(self, other):
        return Mul((self, Pow(as_expr(other), Fraction(-1))))

    def __rtruediv__(self, other):
        return Mul((as_expr(other), Pow(self, Fraction(-1))))

    def __neg__(self):
        return Mul((Num(Fraction(-1)), self))

    def __pow__(self, q):
        return Pow(self, Fraction(q))

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"Expr({render(self)!r})"


class Num(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        self.value = Fraction(value)
        self._init(("num", self.value))

    def _skey(self):
        return ("num", self.value)


class Sym(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self._init(("sym", name))

    def _skey(self):
        return ("sym", self.name)

    @property
    def kind(self) -> str:
        return "variable" if self.name in ("x", "y") else "parameter"


class Add(Expr):
    __slots__ = ("args",)

    def __init__(self, args):
        self.args = tuple(args)
        self._init(("add", self.args))

    def _skey(self):
        return ("add", self.args)


class Mul(Expr):
    __slots__ = ("args",)

    def __init__(self, args):
        self.args = tuple(args)
        self._init(("mul", self.args))

    def _skey(self):
        return ("mul", self.args)


class Pow(Expr):
    __slots__ = ("base", "exp")

    def __init__(self, base: Expr, exp):
        self.base = base
        self.exp = Fraction(exp)
        self._init(("pow", base, self.exp))

    def _skey(self):
        return ("pow", self.base, self.exp)


class Exp(Expr):
    __slots__ = ("arg",)

    def __init__(self, arg: Expr):
        self.arg = arg
        self._init(("exp", arg))

    def _skey(self):
        return ("exp", self.arg)


class Log(Expr):
    """Natural logarithm of the absolute value of its argument."""

    __slots__ = ("arg",)

    def __init__(self, arg: Expr):
        self.arg = arg
        self._init(("log", arg))

    def _skey(self):
        return ("log", self.arg)


def as_expr(v) -> Expr:
    if isinstance(v, Expr):
        return v
    if isinstance(v, str):
        return Sym(v)
    if isinstance(v, (int, Fraction)):
        return Num(v)
    raise TypeError(f"cannot use {type(v).__name__} in an expression; floats are not exact")


# ---------------------------------------------------------------------------
# tree <-> rational form


def to_rf(e: Expr) -> R.RatFunc:
    if e._rf is not None:
        return e._rf
    if isinstance(e, Num):
        rf = R.const(e.value)
    elif isinstance(e, Sym):
        rf = R.var(e.name)
    elif isinstance(e, Add):
        rf = R.rf_sum([to_rf(a) for a in e.args])
    elif isinstance(e, Mul):
        rf = R.ONE
        for a in e.args:
            rf = R.mul(rf, to_rf(a))
    elif isinstance(e, Pow):
        rf = R.power(to_rf(e.base), e.exp)
    elif isinstance(e, Exp):
        rf = R.exp(to_rf(e.arg))
    elif isinstance(e, Log):
        rf = R.log(to_rf(e.arg))
    else:
        raise TypeError(e)
    e._rf = rf
    return rf


def _gen_factor(g, e) -> Expr:
    if isinstance(g, R.Var):
        s = Sym(g.name)
        return s if e == 1 else Pow(s, e)
    if isinstance(g, R.LogG):
        f = Log(from_rf(g.arg))
        return f if e == 1 else Pow(f, e)
    if isinstance(g, R.RootG):
        return Pow(from_rf(g.base), Fraction(e, g.index))
    if isinstance(g, R.FnExp):
        f = Exp(from_rf(g.arg))
        return f if e == 1 else Pow(f, e)
    raise TypeError(g)


def _term_tree(m: tuple, c: Fraction) -> Expr:
    factors: list = []
    exp_arg: dict = {}
    for g, e in m:
        if isinstance(g, R.ExpG):
            exp_arg[g.mono] = exp_arg.get(g.mono, 0) + Fraction(e)
        else:
            factors.append(_gen_factor(g, e))
    if exp_arg:
        arg = from_rf(R.RatFunc(Poly(exp_arg), R.ONE_POLY))
        factors.append(Exp(arg))
    if c != 1 or not factors:
        factors.insert(0, Num(c))
    return factors[0] if len(factors) == 1 else Mul(factors)


def _poly_tree(p: Poly) -> Expr:
    if p.is_zero():
        return Num(0)
    terms = [_term_tree(m, c) for m, c in p.sorted_terms()]
    return terms[0] if len(terms) == 1 else Add(terms)


def from_rf(rf: R.RatFunc) -> Expr:
    if rf.tree is not None:
        return rf.tree
    n = _poly_tree(rf.num)
    if rf.den.is_one():
        t = n
    else:
        t = Mul((n, Pow(_poly_tree(rf.den), Fraction(-1))))
    t._rf = rf
    rf.tree = t
    return t


def normalize(e: Expr) -> Expr:
    return from_rf(to_rf(e))


# ---------------------------------------------------------------------------
# printer (output re-parses under the package grammar)


def _frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _wrap(s: str, prec: int, need: int) -> str:
    return f"({s})" if prec < need else s


def _render(e: Expr) -> tuple[str, int]:
    if isinstance(e, Num):
        v = e.value
        if v < 0:
            return "-" + _frac(-v), (_P_NEG if v.denominator == 1 else _P_MUL)
        return _frac(v), (_P_ATOM if v.denominator == 1 else _P_MUL)
    if isinstance(e, Sym):
        return e.name, _P_ATOM
    if isinstance(e, Exp):
        return f"exp({render(e.arg)})", _P_ATOM
    if isinstance(e, Log):
        return f"ln({render(e.arg)})", _P_ATOM
    if isinstance(e, Add):
        out = ""
        for i, a in enumerate(e.args):
            s, p = _render(a)
            s = _wrap(s, p, _P_ADD + 1) if p <= _P_ADD else s
            if i == 0:
                out = s
            elif s.startswith("-"):
                out += " - " + s[1:]
            else:
                out += " + " + s
        return out, _P_ADD
    if isinstance(e, Pow):
        b, p = _render(e.base)
        b = _wrap(b, p, _P_ATOM)
        q = e.exp
        if q == -1:
            return f"1/{b}", _P_MUL
        if q.denominator == 1 and q > 0:
            return f"{b}^{q.numerator}", _P_POW
        return f"{b}^({_frac(q)})", _P_POW
    if isinstance(e, Mul):
        numer, denom = [], []
        for a in e.args:
            if isinstance(a, Pow) and a.exp < 0:
                denom.append(Pow(a.base, -a.exp) if a.exp != -1 else a.base)
            else:
                numer.append(a)
        sign = ""
        parts = []
        for i, a in enumerate(numer):
            if i == 0 and isinstance(a, Num):
                if a.value == -1 and len(numer) > 1:
                    sign = "-"
                    continue
                if a.value < 0:
                    sign = "-"
                    a = Num(-a.value)
            s, p = _render(a)
            parts.append(_wrap(s, p, _P_MUL + (1 if parts else 0)) if p <= _P_MUL else s)
        top = "*".join(parts) if parts else "1"
        if not denom:
            return sign + top, (_P_NEG if sign else _P_MUL)
        dparts = []
        for a in denom:
            s, p = _render(a)
            dparts.append(_wrap(s, p, _P_MUL + 1))
        bottom = "*".join(dparts)
        if len(dparts) > 1:
            bottom = f"({bottom})"
        return f"{sign}{top}/{bottom}", (_P_NEG if sign else _P_MUL)
    raise TypeError(e)


def render(e: Expr) -> str:
    return _render(e)[0]
