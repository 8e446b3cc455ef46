"""Lie point symmetries of dy/dx = h(x, y) from ansatz templates.

The linearized symmetry condition is

    eta_x - xi_y h^2 + (eta_y - xi_x) h - (xi h_x + eta h_y) = 0.

Substituting a template for (xi, eta) that is linear in unknown
coefficients c1, c2, ... turns it into one identity in x, y and exp(k x);
clearing the denominator and reading off every monomial coefficient gives a
homogeneous linear system whose exact nullspace spans the symmetries
reachable by that template.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm

from . import expr as E
from .expr import rational as R
from .parser import Ode

X, Y, YX = E.Sym("x"), E.Sym("y"), E.Sym("y_x")


@dataclass(frozen=True)
class TangentField:
    xi: E.Expr
    eta: E.Expr

    def __post_init__(self):
        object.__setattr__(self, "xi", E.normalize(E.as_expr(self.xi)))
        object.__setattr__(self, "eta", E.normalize(E.as_expr(self.eta)))

    def __str__(self):
        return f"({E.render(self.xi)}, {E.render(self.eta)})"


# ---------------------------------------------------------------------------
# symmetry condition, prolongation, characteristic


def lsc_residual(h, xi, eta) -> E.Expr:
    h, xi, eta = (E.to_rf(E.as_expr(v)) for v in (h, xi, eta))
    d = R.diff
    res = R.rf_sum([
        d(eta, "x"),
        R.neg(R.mul(d(xi, "y"), R.mul(h, h))),
        R.mul(R.add(d(eta, "y"), R.neg(d(xi, "x"))), h),
        R.neg(R.mul(xi, d(h, "x"))),
        R.neg(R.mul(eta, d(h, "y"))),
    ])
    return E.from_rf(res)


def prolong1_coeff(xi, eta) -> E.Expr:
    """eta^x = eta_x + (eta_y - xi_x) y_x - xi_y y_x^2, with y_x a formal symbol."""
    xi, eta = E.as_expr(xi), E.as_expr(eta)
    return E.normalize(
        E.diff(eta, X) + (E.diff(eta, Y) - E.diff(xi, X)) * YX - E.diff(xi, Y) * YX ** 2
    )


def prolongation_residual(h, xi, eta) -> E.Expr:
    """First prolongation of (xi, eta) applied to y_x - h(x, y)."""
    h, xi, eta = E.as_expr(h), E.as_expr(xi), E.as_expr(eta)
    return E.normalize(-xi * E.diff(h, X) - eta * E.diff(h, Y) + prolong1_coeff(xi, eta))


def characteristic(h, xi, eta) -> E.Expr:
    return E.normalize(E.as_expr(eta) - E.as_expr(h) * E.as_expr(xi))


def characteristic_residual(h, Q) -> E.Expr:
    """Q_x + h Q_y - h_y Q; vanishes iff Q is a symmetry characteristic."""
    h, Q = E.as_expr(h), E.as_expr(Q)
    return E.normalize(E.diff(Q, X) + h * E.diff(Q, Y) - E.diff(h, Y) * Q)


# ---------------------------------------------------------------------------
# ansatz templates


Triple = tuple  # (x power, y power, exp-kernel power)


@dataclass(frozen=True)
class AnsatzSpec:
    xi_monomials: tuple
    eta_monomials: tuple
    kind: str = "custom"
    window: tuple | None = None

    def __post_init__(self):
        xs = tuple(tuple(m) for m in self.xi_monomials)
        es = tuple(tuple(m) for m in self.eta_monomials)
        if len(set(xs)) != len(xs) or len(set(es)) != len(es):
            raise ValueError("duplicate monomial in ansatz")
        if not xs and not es:
            raise ValueError("ansatz needs at least one monomial")
        for m in xs + es:
            if len(m) != 3:
                raise ValueError(f"monomial {m!r} is not an exponent triple")
        object.__setattr__(self, "xi_monomials", xs)
        object.__setattr__(self, "eta_monomials", es)

    @classmethod
    def restrictive(cls) -> "AnsatzSpec":
        lin = ((1, 0, 0), (0, 1, 0), (0, 0, 0))
        return cls(lin, lin, "restrictive")

    @classmethod
    def quadratic(cls) -> "AnsatzSpec":
        quad = ((0, 2, 0), (1, 0, 0), (0, 1, 0), (0, 0, 0))
        return cls(quad, quad, "quadratic")

    @classmethod
    def functional(cls, m_min: int = -2, m_max: int = 2) -> "AnsatzSpec":
        """xi = alpha(x), eta = beta(x) y + gamma(x) as Laurent windows in x."""
        if m_min > m_max:
            raise ValueError("empty window")
        ms = range(m_min, m_max + 1)
        xi = tuple((m, 0, 0) for m in ms)
        eta = tuple((m, 1, 0) for m in ms) + tuple((m, 0, 0) for m in ms)
        return cls(xi, eta, "functional", (m_min, m_max))


def _monomial(triple) -> E.Expr:
    i, j, k = triple
    t = X ** i * Y ** j
    if k:
        t = t * E.Exp(E.Num(k) * X)
    return t


def build_ansatz(spec: AnsatzSpec):
    """Templates linear in fresh unknowns c1, c2, ... (xi monomials first)."""
    names = [f"c{i + 1}" for i in range(len(spec.xi_monomials) + len(spec.eta_monomials))]
    coeffs = [E.Sym(n) for n in names]
    nx = len(spec.xi_monomials)
    xi = E.Add([c * _monomial(m) for c, m in zip(coeffs[:nx], spec.xi_monomials)] or [E.Num(0)])
    eta = E.Add([c * _monomial(m) for c, m in zip(coeffs[nx:], spec.eta_monomials)] or [E.Num(0)])
    return E.normalize(xi), E.normalize(eta), tuple(names)


# ---------------------------------------------------------------------------
# determining system and exact nullspace


@dataclass
class LinearSystem:
    unknowns: tuple
    rows: list
    labels: list = field(default_factory=list)

    def __post_init__(self):
        for r in self.rows:
            if len(r) != len(self.unknowns):
                raise ValueError("row length does not match the number of unknowns")

    def apply(self, vec) -> list:
        return [sum((a * b for a, b in zip(r, vec)), Fraction(0)) for r in self.rows]


def determining_system(ode: Ode, spec: AnsatzSpec) -> LinearSystem:
    xi_t, eta_t, names = build_ansatz(spec)
    res = E.to_rf(lsc_residual(ode.h, xi_t, eta_t))
    # numerator of the cleared residual; the denominator depends on h only
    numer = E.from_rf(R.RatFunc(res.num, R.ONE_POLY))
    lp = E.as_laurent(numer)
    index = {n: i for i, n in enumerate(names)}
    rows, labels = [], []
    for triple in sorted(lp.terms, key=lambda t: tuple(-Fraction(v) for v in t)):
        coeff = E.to_rf(lp.terms[triple])
        if not coeff.den.is_one():
            raise ValueError("non-polynomial coefficient in determining system")
        row = [Fraction(0)] * len(names)
        for m, c in coeff.num.terms.items():
            if len(m) != 1 or m[0][1] != 1 or not isinstance(m[0][0], R.Var) or m[0][0].name not in index:
                raise ValueError(f"determining equation is not linear in the unknowns: {lp.terms[triple]}")
            row[index[m[0][0].name]] += c
        rows.append(row)
        labels.append(triple)
    return LinearSystem(names, rows, labels)


def _int_row(row) -> list:
    den = 1
    for v in row:
        den = lcm(den, Fraction(v).denominator)
    ints = [int(Fraction(v) * den) for v in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return [v // g for v in ints] if g > 1 else ints


def nullspace(sys: LinearSystem) -> list:
    """Exact basis of {v : A v = 0}, one vector per free unknown, in unknown order.

    Elimination stays in the integers (rows are cross-multiplied and divided
    by their content); fractions appear only in the final basis entries.
    """
    n = len(sys.unknowns)
    rows = [_int_row(r) for r in sys.rows if any(r)]
    pivots = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                a = rows[i][c]
                rows[i] = _int_row([p[c] * u - a * v for u, v in zip(rows[i], p)])
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    rows = rows[:r]
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, pc in zip(rows, pivots):
            v[pc] = Fraction(-row[f], row[pc])
        basis.append(v)
    return basis


def field_from_vector(spec: AnsatzSpec, vec) -> TangentField:
    nx = len(spec.xi_monomials)
    xi = E.Add([E.Num(c) * _monomial(m) for c, m in zip(vec[:nx], spec.xi_monomials)] or [E.Num(0)])
    eta = E.Add([E.Num(c) * _monomial(m) for c, m in zip(vec[nx:], spec.eta_monomials)] or [E.Num(0)])
    return TangentField(xi, eta)


def is_trivial(h, f: TangentField) -> bool:
    return E.is_zero(characteristic(h, f.xi, f.eta))


def normalize_field(f: TangentField) -> TangentField:
    """Scale so the leading coefficient of xi (of eta when xi == 0) is 1."""
    rf = E.to_rf(f.xi if not E.is_zero(f.xi) else f.eta)
    if rf.is_zero():
        return f
    c = rf.num.lead()[1]
    if c == 1:
        return f
    return TangentField(E.Num(1 / c) * f.xi, E.Num(1 / c) * f.eta)


def solve_symmetries(ode: Ode, spec: AnsatzSpec) -> list:
    """Nontrivial tangent fields spanning the ansatz solution space.

    Each basis vector becomes one field, scaled by :func:`normalize_field`.
    """
    basis = nullspace(determining_system(ode, spec))
    out = []
    for vec in basis:
        f = field_from_vector(spec, vec)
        if not is_trivial(ode.h, f):
            out.append(normalize_field(f))
    return out


# ---------------------------------------------------------------------------
# field selection


def _separable(f: E.Expr) -> bool:
    """f(x, y) = p(x) q(y) iff f f_xy - f_x f_y == 0."""
    if E.is_zero(f):
        return True
    fx = E.diff(f, X)
    return E.is_zero(f * E.diff(fx, Y) - fx * E.diff(f, Y))


def _size(e: E.Expr) -> int:
    rf = E.to_rf(e)
    return len(rf.num.terms) + (0 if rf.den.is_one() else len(rf.den.terms))


def selection_key(f: TangentField) -> tuple:
    xi0 = E.is_zero(f.xi)
    if xi0 and "y" not in E.free_symbols(f.eta):
        return (0, 0)
    if xi0:
        return (1, _size(f.eta))
    slope = E.normalize(f.eta / f.xi)
    if _separable(slope):
        return (2, _size(slope))
    return (3, _size(slope))


def order_fields(fields) -> list:
    """Fields in pipeline preference order; ties keep basis order."""
    return [f for _, f in sorted(enumerate(fields), key=lambda t: (selection_key(t[1]), t[0]))]
