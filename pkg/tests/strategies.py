"""Hypothesis strategies for random expressions plus a float oracle for raw trees."""

import math
import random
from fractions import Fraction

from hypothesis import assume
from hypothesis import strategies as st

from lieode import expr as E

X, Y = E.Sym("x"), E.Sym("y")

small_ints = st.integers(min_value=-4, max_value=4)
small_fracs = st.fractions(min_value=-4, max_value=4, max_denominator=3)


@st.composite
def poly_xy(draw, max_deg=2, max_terms=4):
    terms = draw(st.lists(st.tuples(small_ints, st.integers(0, max_deg), st.integers(0, max_deg)),
                          min_size=1, max_size=max_terms))
    return E.normalize(E.Add([E.Num(c) * X ** i * Y ** j for c, i, j in terms]))


@st.composite
def nonzero_poly_xy(draw, max_deg=2, max_terms=3):
    p = draw(poly_xy(max_deg, max_terms))
    assume(not E.is_zero(p))
    return p


@st.composite
def rational_xy(draw, max_deg=2):
    return E.normalize(draw(poly_xy(max_deg)) / draw(nonzero_poly_xy(max_deg)))


def _leaves():
    return st.one_of(small_fracs.map(E.Num), st.sampled_from([X, Y]))


def _extend(children):
    return st.one_of(
        st.lists(children, min_size=2, max_size=3).map(E.Add),
        st.lists(children, min_size=2, max_size=3).map(E.Mul),
        st.tuples(children, st.integers(-2, 3)).map(lambda t: E.Pow(t[0], t[1])),
        children.map(lambda c: E.Exp(c)),
        children.map(lambda c: E.Log(c)),
    )


raw_trees = st.recursive(_leaves(), _extend, max_leaves=6)


def rational_trees():
    """Trees without exp/ln: sums, products and integer powers."""
    return st.recursive(
        _leaves(),
        lambda ch: st.one_of(
            st.lists(ch, min_size=2, max_size=3).map(E.Add),
            st.lists(ch, min_size=2, max_size=3).map(E.Mul),
            st.tuples(ch, st.integers(-2, 3)).map(lambda t: E.Pow(t[0], t[1])),
        ),
        max_leaves=7,
    )


def normalized(tree):
    """Normal form of a tree, or reject it if it divides by zero / takes ln 0."""
    try:
        return E.normalize(tree)
    except (ZeroDivisionError, ArithmeticError, ValueError):
        assume(False)


def float_eval(e, pt):
    """Naive float evaluation of a raw tree, independent of the rational engine."""
    if isinstance(e, E.Num):
        return float(e.value)
    if isinstance(e, E.Sym):
        return pt[e.name]
    if isinstance(e, E.Add):
        return math.fsum(float_eval(a, pt) for a in e.args)
    if isinstance(e, E.Mul):
        out = 1.0
        for a in e.args:
            out *= float_eval(a, pt)
        return out
    if isinstance(e, E.Pow):
        b = float_eval(e.base, pt)
        q = e.exp
        if q.denominator == 1:
            return b ** int(q)
        if b < 0:
            raise ValueError("root of negative")
        return b ** float(q)
    if isinstance(e, E.Exp):
        return math.exp(float_eval(e.arg, pt))
    if isinstance(e, E.Log):
        return math.log(abs(float_eval(e.arg, pt)))
    raise TypeError(e)


def random_poly(rng: random.Random, max_deg=2, max_terms=3, names=("x", "y")):
    parts = []
    for _ in range(rng.randint(1, max_terms)):
        c = Fraction(rng.randint(-3, 3), rng.randint(1, 2))
        t = E.Num(c)
        for n in names:
            t = t * E.Sym(n) ** rng.randint(0, max_deg)
        parts.append(t)
    return E.normalize(E.Add(parts))


def random_rational(rng: random.Random, max_deg=2):
    while True:
        q = random_poly(rng, max_deg)
        if not E.is_zero(q):
            return E.normalize(random_poly(rng, max_deg) / q)
