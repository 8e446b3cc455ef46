"""Canonical rational functions over symbols and transcendental kernels.

A :class:`RatFunc` is ``num / den`` with both sides :class:`Poly` over the
generators below, ``gcd(num, den) = 1`` in the Laurent ring and ``den``
free of monomial content with lex-leading coefficient 1.  That makes
equality of RatFuncs mathematical equality on the supported class.

Generators:

* ``Var(name)``            a symbol (x, y, parameters, formal variables)
* ``ExpG(m)``              e**m for a monomial m of symbols; its exponent in a
                           term may be any rational, so ``ExpG(x)**k`` is the
                           kernel e**(k*x)
* ``LogG(u)``              ln|u| for a content-free, scale-normalised u
* ``RootG(u, b)``          u**(1/b); exponents reduced into ``range(b)``
* ``FnExp(a)``             e**a for arguments that are not Laurent polynomials
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .poly import ONE_MONO, Poly, mono_inv, reduce_fraction


class SingularPoint(ArithmeticError):
    """A denominator (or log argument) is within the guard of zero."""


class DomainError(ArithmeticError):
    """Evaluation left the real domain (even root of a negative number)."""


class Gen:
    __slots__ = ("sort_key", "free", "_h")

    def __hash__(self):
        return self._h

    def __eq__(self, other):
        return type(self) is type(other) and self.sort_key == other.sort_key

    def __lt__(self, other):
        return self.sort_key < other.sort_key


def _name_key(name: str):
    rank = {"x": 0, "y": 1}.get(name, 2)
    m = re.fullmatch(r"([A-Za-z_]*?)(\d+)", name)
    if m:
        return (rank, m.group(1), int(m.group(2)), name)
    return (rank, name, -1, name)


class Var(Gen):
    __slots__ = ("name",)

    def __init__(self, name: str):
        self.name = name
        self.sort_key = (0,) + _name_key(name)
        self.free = frozenset((name,))
        self._h = hash(self.sort_key)

    def __repr__(self):
        return self.name


class ExpG(Gen):
    __slots__ = ("mono",)

    def __init__(self, mono: tuple):
        self.mono = mono
        self.sort_key = (1, tuple((g.sort_key, e) for g, e in mono))
        self.free = frozenset().union(*(g.free for g, _ in mono)) if mono else frozenset()
        self._h = hash(self.sort_key)

    def __repr__(self):
        return f"exp({self.mono!r})"


class LogG(Gen):
    __slots__ = ("arg",)

    def __init__(self, arg: "RatFunc"):
        self.arg = arg
        self.sort_key = (2, arg.key)
        self.free = arg.free
        self._h = hash(self.sort_key)

    def __repr__(self):
        return f"ln({self.arg!r})"


class RootG(Gen):
    __slots__ = ("base", "index")

    def __init__(self, base: "RatFunc", index: int):
        self.base = base
        self.index = index
        self.sort_key = (3, index, base.key)
        self.free = base.free
        self._h = hash(self.sort_key)

    def __repr__(self):
        return f"root{self.index}({self.base!r})"


class FnExp(Gen):
    __slots__ = ("arg",)

    def __init__(self, arg: "RatFunc"):
        self.arg = arg
        self.sort_key = (4, arg.key)
        self.free = arg.free
        self._h = hash(self.sort_key)

    def __repr__(self):
        return f"exp({self.arg!r})"


def _norm_exp(e):
    if isinstance(e, Fraction) and e.denominator == 1:
        return int(e)
    return e


class RatFunc:
    __slots__ = ("num", "den", "_key", "_free", "_hash", "tree")

    def __init__(self, num: Poly, den: Poly):
        self.num = num
        self.den = den
        self._key = None
        self._free = None
        self._hash = None
        self.tree = None

    @property
    def key(self) -> tuple:
        if self._key is None:
            self._key = (self.num.key(), self.den.key())
        return self._key

    @property
    def free(self) -> frozenset:
        if self._free is None:
            gens = self.num.gens() | self.den.gens()
            self._free = frozenset().union(*(g.free for g in gens)) if gens else frozenset()
        return self._free

    def __eq__(self, other):
        return isinstance(other, RatFunc) and self.num == other.num and self.den == other.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self):
        return f"RatFunc({self.num!r} / {self.den!r})"

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_const(self) -> bool:
        return self.den.is_one() and self.num.is_const()

    def const_value(self) -> Fraction:
        return self.num.const_value()

    def is_laurent(self) -> bool:
        return self.den.is_one()

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, neg(other))

    def __mul__(self, other):
        return mul(self, other)

    def __truediv__(self, other):
        return div(self, other)

    def __neg__(self):
        return neg(self)


ONE_POLY = Poly.const(1)


def make(num: Poly, den: Poly = ONE_POLY) -> RatFunc:
    if den.is_one():
        if _needs_root_reduction(num):
            return _reduce_roots(num)
        return RatFunc(num, ONE_POLY)
    if _needs_root_reduction(num) or _needs_root_reduction(den):
        return div(_reduce_roots(num), _reduce_roots(den))
    n, d = reduce_fraction(num, den)
    return RatFunc(n, d)


def const(c) -> RatFunc:
    return RatFunc(Poly.const(c), ONE_POLY)


def var(name: str) -> RatFunc:
    return RatFunc(Poly.gen(Var(name)), ONE_POLY)


def gen_rf(g: Gen, e=1) -> RatFunc:
    if e == 0:
        return ONE
    if isinstance(g, ExpG) or e > 0:
        return make(Poly.gen(g, _norm_exp(e)))
    return make(Poly.gen(g, e))


ZERO = const(0)
ONE = const(1)


def neg(a: RatFunc) -> RatFunc:
    return RatFunc(-a.num, a.den)


def add(a: RatFunc, b: RatFunc) -> RatFunc:
    if a.num.is_zero():
        return b
    if b.num.is_zero():
        return a
    if a.den == b.den:
        if a.den.is_one():
            return RatFunc(a.num + b.num, ONE_POLY)
        return make(a.num + b.num, a.den)
    return make(a.num * b.den + b.num * a.den, a.den * b.den)


def rf_sum(items) -> RatFunc:
    """Sum many RatFuncs, pooling numerators over identical denominators."""
    groups: dict = {}
    for it in items:
        if it.num.is_zero():
            continue
        groups[it.den] = groups.get(it.den, Poly()) + it.num
    out = ZERO
    for d, n in groups.items():
        out = add(out, make(n, d) if not d.is_one() else RatFunc(n, ONE_POLY))
    return out


def mul(a: RatFunc, b: RatFunc) -> RatFunc:
    if a.num.is_zero() or b.num.is_zero():
        return ZERO
    if a.den.is_one() and b.den.is_one():
        return make(a.num * b.num)
    return make(a.num * b.num, a.den * b.den)


def div(a: RatFunc, b: RatFunc) -> RatFunc:
    if b.num.is_zero():
        raise ZeroDivisionError("division by an expression that normalizes to zero")
    return make(a.num * b.den, a.den * b.num)


def scale(a: RatFunc, c) -> RatFunc:
    return RatFunc(a.num.scale(Fraction(c)), a.den) if c else ZERO


def pow_int(a: RatFunc, n: int) -> RatFunc:
    if n == 0:
        return ONE
    if n < 0:
        return div(ONE, pow_int(a, -n))
    st = a.num.single_term()
    if a.den.is_one() and st is not None:
        m, c = st
        return make(Poly({tuple((g, _norm_exp(e * n)) for g, e in m): c ** n}))
    return make(a.num ** n, a.den ** n)


def power(a: RatFunc, q) -> RatFunc:
    """a**q for rational q; non-integer q goes through RootG."""
    q = Fraction(q)
    if q.denominator == 1:
        return pow_int(a, int(q))
    if a.num.is_zero():
        if q < 0:
            raise ZeroDivisionError("zero to a negative power")
        return ZERO
    p, b = q.numerator, q.denominator
    if a.is_const():
        c = a.const_value()
        r = _exact_root(c, b)
        if r is not None:
            return pow_int(const(r), p)
    st = a.num.single_term()
    if a.den.is_one() and st is not None:
        m, c = st
        r = _exact_root(c, b)
        # only exp kernels are safe to split: roots of symbol powers lose signs
        if r is not None and all(isinstance(g, ExpG) for g, _ in m):
            mm = tuple((g, _norm_exp(Fraction(e) * q)) for g, e in m)
            return make(Poly({mm: Fraction(r) ** p}))
    return make(Poly.gen(RootG(a, b), p))


def _exact_root(c: Fraction, b: int):
    if c < 0:
        if b % 2 == 0:
            return None
        r = _exact_root(-c, b)
        return -r if r is not None else None
    num = _iroot(c.numerator, b)
    den = _iroot(c.denominator, b)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def _iroot(n: int, b: int):
    if n < 2:
        return n
    r = round(n ** (1.0 / b))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** b == n:
            return cand
    return None


def _needs_root_reduction(p: Poly) -> bool:
    for m in p.terms:
        for g, e in m:
            if isinstance(g, RootG) and not 0 <= e < g.index:
                return True
    return False


def _reduce_roots(p: Poly) -> RatFunc:
    parts = []
    for m, c in p.terms.items():
        keep = []
        extra = ONE
        for g, e in m:
            if isinstance(g, RootG) and not 0 <= e < g.index:
                k, rem = divmod(e, g.index)
                extra = mul(extra, pow_int(g.base, k))
                if rem:
                    keep.append((g, rem))
            else:
                keep.append((g, e))
        parts.append(mul(RatFunc(Poly({tuple(keep): c}), ONE_POLY), extra))
    return rf_sum(parts)


# ---------------------------------------------------------------------------
# transcendental constructors


def exp(a: RatFunc, branch: bool = False) -> RatFunc:
    """exp(a), pulling out exp kernels of monomials and powers of log arguments.

    Since ln means ln|.|, exp(c ln|u|) = |u|**c.  That equals u**c only for
    even integer c or a positive constant u; other terms stay opaque unless
    ``branch`` is set, which picks u**c (correct up to a sign that is
    constant on each component of u != 0).
    """
    if not a.den.is_one():
        return gen_rf(FnExp(a))
    out_mono: dict = {}
    factors = []
    opaque: dict = {}
    for m, c in a.num.terms.items():
        if all(isinstance(g, Var) for g, _ in m):
            g = ExpG(m)
            out_mono[g] = out_mono.get(g, 0) + c
        elif len(m) == 1 and isinstance(m[0][0], LogG) and m[0][1] == 1 and (
            branch or m[0][0].arg.is_const() or (c.denominator == 1 and c.numerator % 2 == 0)
        ):
            factors.append(power(m[0][0].arg, c))
        else:
            opaque[m] = c
    mono = tuple(
        sorted(((g, _norm_exp(e)) for g, e in out_mono.items() if e), key=lambda ge: ge[0].sort_key)
    )
    res = RatFunc(Poly({mono: Fraction(1)}), ONE_POLY)
    for f in factors:
        res = mul(res, f)
    if opaque:
        res = mul(res, gen_rf(FnExp(RatFunc(Poly(opaque), ONE_POLY))))
    return res


def _factor_int(n: int) -> dict:
    out: dict = {}
    p = 2
    while p * p <= n and p < 100000:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _log_const(c: Fraction) -> RatFunc:
    c = abs(c)
    parts = []
    for n, sign in ((c.numerator, 1), (c.denominator, -1)):
        for p, k in _factor_int(n).items():
            parts.append(scale(gen_rf(LogG(const(p))), sign * k))
    return rf_sum(parts)


def _log_gen(g: Gen) -> RatFunc:
    if isinstance(g, Var):
        return gen_rf(LogG(RatFunc(Poly.gen(g), ONE_POLY)))
    if isinstance(g, ExpG):
        return RatFunc(Poly({g.mono: Fraction(1)}), ONE_POLY)
    if isinstance(g, RootG):
        return scale(log(g.base), Fraction(1, g.index))
    if isinstance(g, FnExp):
        return g.arg
    return gen_rf(LogG(gen_rf(g)))


def log_poly(p: Poly) -> RatFunc:
    if p.is_zero():
        raise ZeroDivisionError("logarithm of zero")
    m = p.monomial_content()
    rest = p.mul_mono(mono_inv(m))
    parts = []
    st = rest.single_term()
    if st is not None:
        c = st[1]
    else:
        c = rest.terms.get(ONE_MONO)
        if c is None:
            c = rest.lead()[1]
        rest = rest.scale(1 / c)
        parts.append(gen_rf(LogG(RatFunc(rest, ONE_POLY))))
    parts.append(_log_const(c))
    for g, e in m:
        parts.append(scale(_log_gen(g), e))
    return rf_sum(parts)


def log(a: RatFunc) -> RatFunc:
    """ln|a|, split over numerator and denominator factors."""
    if a.den.is_one():
        return log_poly(a.num)
    return add(log_poly(a.num), neg(log_poly(a.den)))


# ---------------------------------------------------------------------------
# calculus and substitution


def _dlog_gen(g: Gen, v: str) -> RatFunc:
    """g'/g with respect to v."""
    if isinstance(g, Var):
        return div(ONE, gen_rf(g)) if g.name == v else ZERO
    if isinstance(g, ExpG):
        return diff(RatFunc(Poly({g.mono: Fraction(1)}), ONE_POLY), v)
    if isinstance(g, LogG):
        return div(diff(g.arg, v), mul(g.arg, gen_rf(g)))
    if isinstance(g, RootG):
        return scale(div(diff(g.base, v), g.base), Fraction(1, g.index))
    if isinstance(g, FnExp):
        return diff(g.arg, v)
    raise TypeError(g)


def diff_poly(p: Poly, v: str) -> RatFunc:
    plain: dict = {}
    other = []
    dlog_cache: dict = {}
    for m, c in p.terms.items():
        for i, (g, e) in enumerate(m):
            if v not in g.free:
                continue
            if isinstance(g, Var):
                mm = m[:i] + (((g, e - 1),) if e != 1 else ()) + m[i + 1:]
                plain[mm] = plain.get(mm, 0) + c * e
            else:
                if g not in dlog_cache:
                    dlog_cache[g] = _dlog_gen(g, v)
                other.append(scale(mul(RatFunc(Poly({m: c}), ONE_POLY), dlog_cache[g]), e))
    return rf_sum([make(Poly(plain))] + other)


def diff(a: RatFunc, v: str) -> RatFunc:
    if v not in a.free:
        return ZERO
    dn = diff_poly(a.num, v)
    if a.den.is_one():
        return dn
    dd = diff_poly(a.den, v)
    den = RatFunc(a.den, ONE_POLY)
    return add(div(dn, den), neg(div(mul(RatFunc(a.num, ONE_POLY), dd), pow_int(den, 2))))


def _subs_gen_pow(g: Gen, e, mp: dict, cache: dict) -> RatFunc:
    if isinstance(g, ExpG):
        arg = subs(RatFunc(Poly({g.mono: Fraction(e)}), ONE_POLY), mp)
        return exp(arg)
    if g not in cache:
        if isinstance(g, Var):
            cache[g] = mp[g.name] if g.name in mp else gen_rf(g)
        elif isinstance(g, LogG):
            cache[g] = log(subs(g.arg, mp))
        elif isinstance(g, RootG):
            cache[g] = power(subs(g.base, mp), Fraction(1, g.index))
        elif isinstance(g, FnExp):
            cache[g] = exp(subs(g.arg, mp))
        else:
            raise TypeError(g)
    return pow_int(cache[g], e)


def subs_poly(p: Poly, mp: dict, cache: dict) -> RatFunc:
    keys = set(mp)
    untouched: dict = {}
    parts = []
    for m, c in p.terms.items():
        if not any(g.free & keys for g, _ in m):
            untouched[m] = c
            continue
        fixed = []
        t = const(c)
        for g, e in m:
            if g.free & keys:
                t = mul(t, _subs_gen_pow(g, e, mp, cache))
            else:
                fixed.append((g, e))
        if fixed:
            t = mul(t, RatFunc(Poly({tuple(fixed): Fraction(1)}), ONE_POLY))
        parts.append(t)
    if untouched:
        parts.append(make(Poly(untouched)))
    return rf_sum(parts)


def subs(a: RatFunc, mp: dict) -> RatFunc:
    """Simultaneous substitution ``{name: RatFunc}``."""
    mp = {k: v for k, v in mp.items() if k in a.free}
    if not mp:
        return a
    cache: dict = {}
    n = subs_poly(a.num, mp, cache)
    if a.den.is_one():
        return n
    return div(n, subs_poly(a.den, mp, cache))


# ---------------------------------------------------------------------------
# floating-point evaluation


def _eval_gen(g: Gen, point: dict, guard: float) -> float:
    if isinstance(g, Var):
        try:
            return float(point[g.name])
        except KeyError:
            raise KeyError(f"no value supplied for symbol {g.name!r}") from None
    if isinstance(g, ExpG):
        return _eval_mono(g.mono, point, guard)
    if isinstance(g, LogG):
        u = evalf(g.arg, point, guard)
        if abs(u) < guard:
            raise SingularPoint(f"log argument {u!r} within guard")
        return math.log(abs(u))
    if isinstance(g, RootG):
        u = evalf(g.base, point, guard)
        if u < 0:
            if g.index % 2 == 0:
                raise DomainError("even root of a negative value")
            return -((-u) ** (1.0 / g.index))
        return u ** (1.0 / g.index)
    if isinstance(g, FnExp):
        return math.exp(evalf(g.arg, point, guard))
    raise TypeError(g)


def _eval_mono(m: tuple, point: dict, guard: float, cache=None) -> float:
    v = 1.0
    for g, e in m:
        if cache is not None and g in cache:
            gv = cache[g]
        else:
            gv = _eval_gen(g, point, guard) if not isinstance(g, ExpG) else None
            if cache is not None and gv is not None:
                cache[g] = gv
        if isinstance(g, ExpG):
            try:
                v *= math.exp(float(e) * _eval_mono(g.mono, point, guard))
            except OverflowError:
                raise DomainError("exponential overflow") from None
            continue
        if e < 0 and abs(gv) < guard:
            raise SingularPoint(f"{g!r} within guard of zero")
        v *= gv ** e
    return v


def _eval_poly(p: Poly, point: dict, guard: float, cache: dict) -> float:
    return sum(float(c) * _eval_mono(m, point, guard, cache) for m, c in p.terms.items())


def evalf(a: RatFunc, point: dict, guard: float = 1e-12) -> float:
    cache: dict = {}
    n = _eval_poly(a.num, point, guard, cache)
    if a.den.is_one():
        return n
    d = _eval_poly(a.den, point, guard, cache)
    if abs(d) < guard:
        raise SingularPoint(f"denominator {d!r} within guard of zero")
    return n / d
