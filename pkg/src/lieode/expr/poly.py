"""Sparse Laurent polynomials over ordered generators, with exact gcd.

A monomial is a tuple of ``(generator, exponent)`` pairs sorted by the
generator's ``sort_key``; a polynomial maps monomials to ``Fraction``
coefficients.  Generators are opaque here: anything hashable carrying a
``sort_key`` tuple works.

The gcd runs on a dense integer-exponent image of the polynomials.  It
first tries the heuristic integer gcd (evaluate at a large integer, take
the integer gcd, interpolate back, confirm by exact division) and falls
back to primitive pseudo-remainder sequences, recursive in the number of
generators, when that gives up.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt, lcm

ONE_MONO: tuple = ()


def mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for g, e in b:
        s = d.get(g, 0) + e
        if s:
            d[g] = s
        else:
            del d[g]
    return tuple(sorted(d.items(), key=lambda ge: ge[0].sort_key))


def mono_pow(a: tuple, n) -> tuple:
    if n == 0:
        return ONE_MONO
    return tuple((g, e * n) for g, e in a)


def mono_inv(a: tuple) -> tuple:
    return tuple((g, -e) for g, e in a)


class Poly:
    """Immutable sparse polynomial; ``terms`` maps monomial -> Fraction."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        self.terms = {m: c for m, c in terms.items() if c != 0}
        self._hash = None

    @classmethod
    def const(cls, c) -> "Poly":
        c = Fraction(c)
        return cls({ONE_MONO: c} if c else {})

    @classmethod
    def gen(cls, g, e=1) -> "Poly":
        return cls({((g, e),): Fraction(1)})

    @classmethod
    def mono(cls, m: tuple, c=1) -> "Poly":
        return cls({m: Fraction(c)})

    def __eq__(self, other):
        return isinstance(other, Poly) and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __repr__(self):
        return f"Poly({self.terms!r})"

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and ONE_MONO in self.terms)

    def const_value(self) -> Fraction:
        return self.terms.get(ONE_MONO, Fraction(0))

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get(ONE_MONO) == 1

    def single_term(self):
        if len(self.terms) == 1:
            return next(iter(self.terms.items()))
        return None

    def gens(self) -> set:
        return {g for m in self.terms for g, _ in m}

    def __add__(self, other: "Poly") -> "Poly":
        t = dict(self.terms)
        for m, c in other.terms.items():
            t[m] = t.get(m, 0) + c
        return Poly(t)

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if len(other.terms) == 1 and ONE_MONO in other.terms:
            return self.scale(other.terms[ONE_MONO])
        if len(self.terms) == 1 and ONE_MONO in self.terms:
            return other.scale(self.terms[ONE_MONO])
        t: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = mono_mul(m1, m2)
                t[m] = t.get(m, 0) + c1 * c2
        return Poly(t)

    def scale(self, c) -> "Poly":
        if c == 1:
            return self
        return Poly({m: v * c for m, v in self.terms.items()})

    def mul_mono(self, m: tuple, c=1) -> "Poly":
        return Poly({mono_mul(k, m): v * c for k, v in self.terms.items()})

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        out = Poly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def monomial_content(self) -> tuple:
        """Largest monomial dividing every term (exponents may be negative)."""
        if not self.terms:
            return ONE_MONO
        it = iter(self.terms)
        low = dict(next(it))
        for m in it:
            d = dict(m)
            for g in set(low) | set(d):
                v = min(low.get(g, 0), d.get(g, 0))
                if v:
                    low[g] = v
                else:
                    low.pop(g, None)
        return tuple(sorted(low.items(), key=lambda ge: ge[0].sort_key))

    def sorted_terms(self) -> list:
        """Terms in descending lex order under the generator order."""
        gens = sorted(self.gens(), key=lambda g: g.sort_key)

        def key(item):
            d = dict(item[0])
            return tuple(-d.get(g, 0) for g in gens)

        return sorted(self.terms.items(), key=key)

    def lead(self):
        return self.sorted_terms()[0]

    def degree_in(self, g):
        return max((dict(m).get(g, 0) for m in self.terms), default=0)

    def low_degree_in(self, g):
        return min((dict(m).get(g, 0) for m in self.terms), default=0)

    def key(self) -> tuple:
        return tuple(
            (tuple((g.sort_key, e) for g, e in m), c) for m, c in self.sorted_terms()
        )


# ---------------------------------------------------------------------------
# dense image for gcd / exact division


def _to_dense(polys: list[Poly]):
    gens = sorted(set().union(*(p.gens() for p in polys)), key=lambda g: g.sort_key)
    idx = {g: i for i, g in enumerate(gens)}
    scale = [1] * len(gens)
    for p in polys:
        for m in p.terms:
            for g, e in m:
                if isinstance(e, Fraction) and e.denominator != 1:
                    scale[idx[g]] = lcm(scale[idx[g]], e.denominator)
    n = len(gens)
    dense = []
    shifts = []
    for p in polys:
        d = {}
        for m, c in p.terms.items():
            v = [0] * n
            for g, e in m:
                i = idx[g]
                v[i] = int(e * scale[i])
            d[tuple(v)] = c
        low = [min(k[i] for k in d) for i in range(n)] if d else [0] * n
        d = {tuple(k[i] - low[i] for i in range(n)): c for k, c in d.items()}
        dense.append(d)
        shifts.append(low)
    return gens, scale, dense, shifts


def _from_dense(d: dict, gens, scale, shift=None) -> Poly:
    out = {}
    for k, c in d.items():
        m = []
        for i, e in enumerate(k):
            if shift is not None:
                e = e + shift[i]
            if e:
                ee = Fraction(e, scale[i])
                if ee.denominator == 1:
                    ee = int(ee)
                m.append((gens[i], ee))
        out[tuple(m)] = c
    return Poly(out)


def _d_sub(a: dict, b: dict) -> dict:
    r = dict(a)
    for k, c in b.items():
        v = r.get(k, 0) - c
        if v:
            r[k] = v
        else:
            r.pop(k, None)
    return r


def _d_mul(a: dict, b: dict) -> dict:
    r: dict = {}
    for k1, c1 in a.items():
        for k2, c2 in b.items():
            k = tuple(x + y for x, y in zip(k1, k2))
            v = r.get(k, 0) + c1 * c2
            if v:
                r[k] = v
            else:
                r.pop(k, None)
    return r


def _d_scale(a: dict, c) -> dict:
    return {k: v * c for k, v in a.items()}


def _d_monic(a: dict) -> dict:
    if not a:
        return a
    return _d_scale(a, 1 / Fraction(a[max(a)]))


def d_divexact(a: dict, b: dict) -> dict:
    """Exact multivariate division a/b; raises ArithmeticError if inexact."""
    if not b:
        raise ZeroDivisionError
    lb = max(b)
    cb = Fraction(b[lb])
    q: dict = {}
    r = dict(a)
    while r:
        lr = max(r)
        diff = tuple(x - y for x, y in zip(lr, lb))
        if any(e < 0 for e in diff):
            raise ArithmeticError("inexact division")
        c = r[lr] / cb
        q[diff] = q.get(diff, 0) + c
        r = _d_sub(r, {tuple(x + y for x, y in zip(k, diff)): v * c for k, v in b.items()})
    return q


def _deg(a: dict, j: int) -> int:
    return max(k[j] for k in a)


def _coeffs(a: dict, j: int) -> dict:
    """Split a into {power of var j: coefficient poly (var j zeroed)}."""
    out: dict = {}
    for k, c in a.items():
        e = k[j]
        kk = k[:j] + (0,) + k[j + 1:]
        out.setdefault(e, {})[kk] = c
    return out


def _is_unit(a: dict) -> bool:
    return len(a) == 1 and not any(next(iter(a)))


def _present(a: dict) -> set:
    return {i for k in a for i, e in enumerate(k) if e}


def _split_by(a: dict, idx: set) -> list:
    """Coefficients of a viewed as a polynomial in the variables ``idx``."""
    out: dict = {}
    for k, c in a.items():
        key = tuple(k[i] for i in sorted(idx))
        kk = tuple(0 if i in idx else e for i, e in enumerate(k))
        out.setdefault(key, {})[kk] = c
    return list(out.values())


def _content(a: dict, j: int, n: int) -> dict:
    g = None
    for coef in _coeffs(a, j).values():
        g = coef if g is None else _gcd(g, coef, n)
        if _is_unit(g):
            return {next(iter(g)): Fraction(1)}
    return _d_monic(g)


def _primpart(a: dict, j: int, n: int) -> dict:
    c = _content(a, j, n)
    if _is_unit(c):
        return _d_monic(a)
    return _d_monic(d_divexact(a, c))


def _prem(a: dict, b: dict, j: int) -> dict:
    db = _deg(b, j)
    lb = _coeffs(b, j)[db]
    r = a
    while r and _deg(r, j) >= db:
        dr = _deg(r, j)
        lr = _coeffs(r, j)[dr]
        shift = tuple(dr - db if i == j else 0 for i in range(len(next(iter(b)))))
        t = _d_mul(lr, {k: v for k, v in b.items()})
        t = {tuple(x + y for x, y in zip(k, shift)): v for k, v in t.items()}
        r = _d_sub(_d_mul(lb, r), t)
    return r


def _gcd(a: dict, b: dict, n: int) -> dict:
    if not a:
        return _d_monic(b)
    if not b:
        return _d_monic(a)
    zero = (0,) * n
    pa, pb = _present(a), _present(b)
    # variables private to one side only enter through that side's content
    for p, q, other in ((pa - pb, a, b), (pb - pa, b, a)):
        if p:
            g = other
            for coef in _split_by(q, p):
                g = _gcd(g, coef, n)
                if _is_unit(g):
                    return {zero: Fraction(1)}
            return _d_monic(g)
    if not pa:
        return {zero: Fraction(1)}
    j = min(pa)
    ca = _content(a, j, n)
    cb = _content(b, j, n)
    c = _gcd(ca, cb, n)
    pa = _d_monic(d_divexact(a, ca))
    pb = _d_monic(d_divexact(b, cb))
    if _deg(pa, j) < _deg(pb, j):
        pa, pb = pb, pa
    while True:
        r = _prem(pa, pb, j)
        if not r:
            g = _primpart(pb, j, n)
            break
        if _deg(r, j) == 0:
            g = {zero: Fraction(1)}
            break
        pa, pb = pb, _primpart(r, j, n)
    return _d_monic(_d_mul(c, g))


# heuristic gcd over Z[x1..xn]; the evaluation point stays above
# 2 min(|a|, |b|) + 2 (max-norms), so a candidate dividing both inputs is the gcd


def _int_content(a: dict) -> int:
    g = 0
    for c in a.values():
        g = gcd(g, c)
    return g


def _heu_eval(a: dict, j: int, x: int) -> dict:
    out: dict = {}
    for k, c in a.items():
        kk = k[:j] + (0,) + k[j + 1:]
        v = out.get(kk, 0) + c * x ** k[j]
        if v:
            out[kk] = v
        else:
            out.pop(kk, None)
    return out


def _heu_interp(h: dict, j: int, x: int) -> dict:
    out: dict = {}
    half = x // 2
    for k, c in h.items():
        i = 0
        while c:
            d = c % x
            if d > half:
                d -= x
            if d:
                out[k[:j] + (i,) + k[j + 1:]] = d
            c = (c - d) // x
            i += 1
    return out


def _divides(b: dict, a: dict) -> bool:
    """b | a in Z[x1..xn]; b primitive, so a non-integral quotient term means no."""
    lb = max(b)
    cb = b[lb]
    r = dict(a)
    while r:
        lr = max(r)
        diff = tuple(x - y for x, y in zip(lr, lb))
        if any(e < 0 for e in diff):
            return False
        c, rem = divmod(r[lr], cb)
        if rem:
            return False
        for k, v in b.items():
            kk = tuple(x + y for x, y in zip(k, diff))
            w = r.get(kk, 0) - v * c
            if w:
                r[kk] = w
            else:
                r.pop(kk, None)
    return True


def _heu_gcd(a: dict, b: dict, n: int):
    """Integer gcd with positive leading coefficient, or None to give up."""
    present = _present(a) | _present(b)
    zero = (0,) * n
    ca, cb = _int_content(a), _int_content(b)
    gc = gcd(ca, cb)
    if not present:
        return {zero: gc}
    a = {k: c // ca for k, c in a.items()}
    b = {k: c // cb for k, c in b.items()}
    j = max(present)
    norm = min(max(abs(c) for c in a.values()), max(abs(c) for c in b.values()))
    x = 2 * norm + 29
    for _ in range(6):
        ea, eb = _heu_eval(a, j, x), _heu_eval(b, j, x)
        if ea and eb:
            h = _heu_gcd(ea, eb, n)
            if h is not None:
                H = _heu_interp(h, j, x)
                if H:
                    ch = _int_content(H)
                    if H[max(H)] < 0:
                        ch = -ch
                    H = {k: c // ch for k, c in H.items()}
                    if _divides(H, a) and _divides(H, b):
                        return {k: c * gc for k, c in H.items()}
        x = 73794 * x * isqrt(isqrt(x)) // 27011
    return None


def _to_int(a: dict) -> dict:
    den = 1
    for c in a.values():
        den = lcm(den, Fraction(c).denominator)
    return {k: int(c * den) for k, c in a.items()}


def _gcd_fast(a: dict, b: dict, n: int) -> dict:
    if a and b:
        h = _heu_gcd(_to_int(a), _to_int(b), n)
        if h is not None:
            return _d_monic({k: Fraction(c) for k, c in h.items()})
    return _gcd(a, b, n)


def reduce_fraction(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    """Cancel common factors of num/den over the Laurent ring.

    Returns ``(N, D)`` with D free of monomial content and with lex-leading
    coefficient 1.  A constant D comes back as the polynomial 1.
    """
    if den.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if num.is_zero():
        return Poly(), Poly.const(1)
    st = den.single_term()
    if st is not None:
        m, c = st
        return num.mul_mono(mono_inv(m), 1 / c), Poly.const(1)
    gens, scale, (dn, dd), (sn, sd) = _to_dense([num, den])
    n = len(gens)
    g = _gcd_fast(dn, dd, n)
    if not (len(g) == 1 and all(e == 0 for e in next(iter(g)))):
        dn = d_divexact(dn, g)
        dd = d_divexact(dd, g)
    lead = Fraction(dd[max(dd)])
    dn = _d_scale(dn, 1 / lead)
    dd = _d_scale(dd, 1 / lead)
    rel = [a - b for a, b in zip(sn, sd)]
    N = _from_dense(dn, gens, scale, rel)
    if len(dd) == 1:
        # content-free and single-term: the constant 1
        return N, Poly.const(1)
    return N, _from_dense(dd, gens, scale)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd of two polynomials, up to Laurent units (no monomial content)."""
    gens, scale, (da, db), _ = _to_dense([a, b])
    return _from_dense(_gcd_fast(da, db, len(gens)), gens, scale)


def poly_divexact(a: Poly, b: Poly) -> Poly:
    """Exact quotient a/b in the Laurent ring; raises ArithmeticError."""
    gens, scale, (da, db), (sa, sb) = _to_dense([a, b])
    q = d_divexact(da, db)
    return _from_dense(q, gens, scale, [x - y for x, y in zip(sa, sb)])
