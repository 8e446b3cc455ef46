"""Antiderivatives for a deliberately small class of integrands.

Supported, in one variable ``v`` (other symbols act as constants):

* Laurent polynomials: ``v**n`` for any integer n (``1/v`` gives ``ln|v|``)
* exp kernels ``exp(k*v)`` on their own
* rational functions whose denominator has rational coefficients and
  factors over Q into linear and irreducible quadratic pieces; quadratic
  pieces must appear in ``u'/u**j`` form, since arctangents are outside
  the kernel set

Anything else raises :class:`IntegrationFailed`.  Additive constants are
dropped from results.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, isqrt, lcm

from . import expr as E
from .errors import IntegrationFailed
from .expr import rational as R
from .expr.poly import Poly

# ---------------------------------------------------------------------------
# dense univariate polynomials over Q, coefficient lists low -> high


def _trim(p: list) -> list:
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _padd(a, b):
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])


def _pneg(a):
    return [-c for c in a]


def _pmul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, w in enumerate(b):
                out[i + j] += u * w
    return _trim(out)


def _pdivmod(a, b):
    a = _trim(a)
    b = _trim(b)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    while len(r) >= len(b) and r:
        k = len(r) - len(b)
        c = Fraction(r[-1]) / b[-1]
        q[k] = c
        r = _padd(r, _pneg(_pmul([Fraction(0)] * k + [c], b)))
    return _trim(q), r


def _pderiv(a):
    return _trim([i * a[i] for i in range(1, len(a))])


def _monic(a):
    a = _trim(a)
    return [Fraction(c) / a[-1] for c in a] if a else a


def _pgcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        a, b = b, _pdivmod(a, b)[1]
    return _monic(a)


def _squarefree(p) -> list:
    """Yun's algorithm: [(factor, multiplicity)] with squarefree factors."""
    p = _monic(p)
    dp = _pderiv(p)
    b = _pgcd(p, dp)
    c = _pdivmod(p, b)[0]
    d = _padd(_pdivmod(dp, b)[0], _pneg(_pderiv(c)))
    out = []
    i = 1
    while len(c) > 1:
        a = _pgcd(c, d)
        if len(a) > 1:
            out.append((a, i))
        c = _pdivmod(c, a)[0]
        d = _padd(_pdivmod(d, a)[0], _pneg(_pderiv(c)))
        i += 1
    return out


def _divisors(n: int) -> list:
    n = abs(n)
    small = [d for d in range(1, isqrt(n) + 1) if n % d == 0]
    return sorted(set(small + [n // d for d in small]))


def _rational_roots(p) -> list:
    den = 1
    for c in p:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(Fraction(c) * den) for c in p]
    if ints[0] == 0:
        k = next(i for i, c in enumerate(ints) if c)
        return [Fraction(0)] + _rational_roots(p[k:])
    if abs(ints[0]) > 10 ** 12 or abs(ints[-1]) > 10 ** 12:
        raise IntegrationFailed("coefficients too large for rational-root search")
    roots = []
    for pn in _divisors(ints[0]):
        for qd in _divisors(ints[-1]):
            for cand in (Fraction(pn, qd), Fraction(-pn, qd)):
                if cand not in roots and sum(c * cand ** i for i, c in enumerate(p)) == 0:
                    roots.append(cand)
    return roots


def _is_square(q: Fraction) -> bool:
    return q >= 0 and isqrt(q.numerator) ** 2 == q.numerator and isqrt(q.denominator) ** 2 == q.denominator


def factor_over_q(p) -> list:
    """[(monic factor, multiplicity)] into linear and irreducible quadratic factors."""
    out = []
    for sq, mult in _squarefree(p):
        rest = sq
        for root in _rational_roots(sq):
            lin = [-root, Fraction(1)]
            q, r = _pdivmod(rest, lin)
            if not r:
                out.append((lin, mult))
                rest = q
        rest = _monic(rest)
        if len(rest) == 3:
            disc = rest[1] ** 2 - 4 * rest[0]
            if _is_square(disc):
                raise IntegrationFailed("unexpected reducible quadratic")
            out.append((rest, mult))
        elif len(rest) > 3:
            raise IntegrationFailed("denominator has an irreducible factor of degree > 2")
    return out


def _solve(matrix, rhs) -> list:
    n = len(matrix)
    a = [list(row) + [b] for row, b in zip(matrix, rhs)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise IntegrationFailed("singular partial-fraction system")
        a[c], a[piv] = a[piv], a[c]
        pc = a[c][c]
        a[c] = [v / pc for v in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [u - f * w for u, w in zip(a[i], a[c])]
    return [a[i][n] for i in range(n)]


def partial_fractions(numer, denom) -> tuple[list, list]:
    """numer/denom = poly + sum A(v)/f**j.

    Returns ``(poly, [(f, j, A)])`` with deg A < deg f.
    """
    quot, rem = _pdivmod(numer, denom)
    lead = denom[-1]
    denom = _monic(denom)
    rem = [c / lead for c in rem]
    factors = factor_over_q(denom)
    cols, slots = [], []
    for f, m in factors:
        for j in range(1, m + 1):
            cof = _pdivmod(denom, _ppow(f, j))[0]
            for t in range(len(f) - 1):
                cols.append(_pmul([Fraction(0)] * t + [Fraction(1)], cof))
                slots.append((tuple(f), j, t))
    n = len(denom) - 1
    matrix = [[(col[i] if i < len(col) else Fraction(0)) for col in cols] for i in range(n)]
    rhs = [(rem[i] if i < len(rem) else Fraction(0)) for i in range(n)]
    sol = _solve(matrix, rhs) if n else []
    pieces: dict = {}
    for (f, j, t), val in zip(slots, sol):
        pieces.setdefault((f, j), [Fraction(0)] * (len(f) - 1))[t] = val
    return quot, [(list(f), j, _trim(a)) for (f, j), a in pieces.items() if _trim(a)]


def _ppow(a, n):
    out = [Fraction(1)]
    for _ in range(n):
        out = _pmul(out, a)
    return out


# ---------------------------------------------------------------------------
# assembling antiderivatives as RatFuncs


def _poly_rf(coeffs, v: str, shift: int = 0) -> R.RatFunc:
    g = R.Var(v)
    terms = {}
    for i, c in enumerate(coeffs):
        if c:
            e = i + shift
            terms[((g, e),) if e else ()] = Fraction(c)
    return R.make(Poly(terms))


def _drop_constants(rf: R.RatFunc, v: str) -> R.RatFunc:
    if not rf.den.is_one():
        return rf
    keep = {m: c for m, c in rf.num.terms.items() if any(v in g.free for g, _ in m)}
    return R.RatFunc(Poly(keep), R.ONE_POLY)


def _log_rf(poly, v: str) -> R.RatFunc:
    return _drop_constants(R.log(_poly_rf(poly, v)), v)


def _integrate_laurent(coeffs: dict, v: str) -> R.RatFunc:
    parts = []
    for n, c in coeffs.items():
        if n == -1:
            parts.append(R.scale(_log_rf([0, 1], v), c))
        else:
            parts.append(_poly_rf([Fraction(c) / (n + 1)], v, n + 1))
    return R.rf_sum(parts)


def _integrate_rational(numer: dict, denom: list, v: str) -> R.RatFunc:
    """numer is Laurent {power: coeff}; denom a dense poly with denom(0) != 0."""
    low = min(numer)
    shift = -low if low < 0 else 0
    num_dense = [Fraction(0)] * (max(numer) + shift + 1)
    for n, c in numer.items():
        num_dense[n + shift] = Fraction(c)
    den_dense = _pmul([Fraction(0)] * shift + [Fraction(1)], denom) if shift else list(denom)
    quot, pieces = partial_fractions(num_dense, den_dense)
    parts = [_integrate_laurent({i: c for i, c in enumerate(quot) if c}, v)] if quot else []
    for f, j, a in pieces:
        if len(f) == 2:
            c = a[0]
            lin = _poly_rf(f, v)
            if j == 1:
                parts.append(R.scale(_log_rf(f, v), c))
            else:
                parts.append(R.scale(R.pow_int(lin, 1 - j), c / (1 - j)))
        else:
            # A = B v + C over f = v^2 + p v + q; only the B/2 * f'/f part has a log antiderivative
            B = a[1] if len(a) > 1 else Fraction(0)
            C = a[0] if a else Fraction(0)
            p = f[1]
            if C - B * p / 2 != 0:
                raise IntegrationFailed("arctangent term required")
            quad = _poly_rf(f, v)
            if j == 1:
                parts.append(R.scale(_log_rf(f, v), B / 2))
            else:
                parts.append(R.scale(R.pow_int(quad, 1 - j), B / 2 / (1 - j)))
    return R.rf_sum(parts)


def _constant_quotient(numer: dict, den_dense) -> Fraction:
    """numer/den as a constant, or IntegrationFailed."""
    if den_dense is None:
        den_dense = [Fraction(1)]
    if min(numer) < 0:
        raise IntegrationFailed("exp kernel times a non-constant factor")
    num_dense = [Fraction(0)] * (max(numer) + 1)
    for n, c in numer.items():
        num_dense[n] = Fraction(c)
    q, r = _pdivmod(num_dense, den_dense)
    q = _trim(q)
    if _trim(r) or len(q) != 1:
        raise IntegrationFailed("exp kernel times a non-constant factor")
    return q[0]


def integrate_rf(rf: R.RatFunc, v: str) -> R.RatFunc:
    if v not in rf.free:
        return R.mul(rf, R.var(v))
    vg = R.Var(v)
    den = rf.den
    den_dense = None
    if not den.is_one():
        den_dense = []
        for m, c in den.terms.items():
            if any(g != vg for g, _ in m):
                raise IntegrationFailed("denominator is not a rational polynomial in the variable")
            e = m[0][1] if m else 0
            den_dense += [Fraction(0)] * (e + 1 - len(den_dense))
            den_dense[e] = c
    groups: dict = {}
    for m, c in rf.num.terms.items():
        n, k, rest = 0, Fraction(0), []
        for g, e in m:
            if g == vg:
                n = e
            elif isinstance(g, R.ExpG) and g.mono == ((vg, 1),):
                k = Fraction(e)
            elif v in g.free:
                raise IntegrationFailed(f"unsupported factor {g!r} in integrand")
            else:
                rest.append((g, e))
        groups.setdefault(tuple(rest), {})
        key = (n, k)
        groups[tuple(rest)][key] = groups[tuple(rest)].get(key, 0) + c
    parts = []
    for rest, coeffs in groups.items():
        coef_rf = R.RatFunc(Poly({rest: Fraction(1)}), R.ONE_POLY)
        plain = {n: c for (n, k), c in coeffs.items() if k == 0}
        kern = {(n, k): c for (n, k), c in coeffs.items() if k != 0}
        by_k: dict = {}
        for (n, k), c in kern.items():
            by_k.setdefault(k, {})[n] = c
        for k, numer in by_k.items():
            c = _constant_quotient(numer, den_dense)
            parts.append(R.mul(coef_rf, R.scale(R.exp(R.scale(R.var(v), k)), c / k)))
        if plain:
            if den_dense is None:
                piece = _integrate_laurent(plain, v)
            else:
                piece = _integrate_rational(plain, den_dense, v)
            parts.append(R.mul(coef_rf, piece))
    out = R.rf_sum(parts)
    if R.add(R.diff(out, v), R.neg(rf)).num.terms:
        raise IntegrationFailed("antiderivative check failed")
    return out


def integrate_limited(F, var="r") -> E.Expr:
    """Antiderivative of F with respect to ``var``, constants dropped."""
    name = var.name if isinstance(var, E.Sym) else var
    return E.from_rf(integrate_rf(E.to_rf(E.as_expr(F)), name))
