import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from lieode import expr as E
from lieode.parser import parse_expr, parse_ode
from lieode.special_forms import (
    HomogeneousForm,
    LinearForm,
    detect_homogeneous,
    detect_linear,
    homogeneous_solution,
    homogeneous_symmetry,
    linear_symmetry,
)
from lieode.symmetry import TangentField, lsc_residual
from lieode.verify import check_lsc_numeric, check_solution
from strategies import X, Y

R_ = E.Sym("r")


def P(s):
    return parse_expr(s, ("x", "y", "r"))


@pytest.mark.parametrize("h, F", [("y/x", "r"), ("(x + y)/(x - y)", "(1 + r)/(1 - r)"), ("y^2/x^2 + 1", "r^2 + 1")])
def test_detect_homogeneous(h, F):
    form = detect_homogeneous(parse_ode(f"dy/dx = {h}"))
    assert form is not None
    assert E.is_zero(form.F - P(F))
    assert E.is_zero(form.rebuild() - P(h))


@pytest.mark.parametrize("h", ["y^2/x", "y + exp(x)/y", "x + y"])
def test_not_homogeneous(h):
    assert detect_homogeneous(parse_ode(f"dy/dx = {h}")) is None


def test_homogeneous_symmetry_is_a_symmetry():
    f = homogeneous_symmetry()
    for h in ("y/x", "(x + y)/(x - y)", "y^2/x^2 + 1"):
        assert E.is_zero(lsc_residual(P(h), f.xi, f.eta))


def test_homogeneous_F_equal_r_gives_lines():
    sol = homogeneous_solution(HomogeneousForm(R_))
    assert sol.variant == "explicit"
    assert sol.branches == (E.normalize(E.Sym("C") * X),)


def test_homogeneous_solution_quadratic():
    # F = r^2 + r: int dr/r^2 = -1/r so ln x + x/y = C
    ode = parse_ode("dy/dx = y^2/x^2 + y/x")
    sol = homogeneous_solution(detect_homogeneous(ode))
    assert sol.variant == "explicit"
    assert check_solution(ode, sol).passed


def test_homogeneous_quadrature_fallback():
    sol = homogeneous_solution(detect_homogeneous(parse_ode("dy/dx = (x + y)/(x - y)")))
    assert sol.variant == "quadrature"


@pytest.mark.parametrize(
    "h, F, G", [("y + x", "-1", "x"), ("y/x + x", "-1/x", "x"), ("exp(x) - 2*y", "2", "exp(x)"), ("x^2", "0", "x^2")]
)
def test_detect_linear(h, F, G):
    form = detect_linear(parse_ode(f"dy/dx = {h}"))
    assert E.is_zero(form.F - P(F)) and E.is_zero(form.G - P(G))
    assert E.is_zero(form.rebuild() - P(h))


@pytest.mark.parametrize("h", ["y^2", "1/y", "x/(x + y)", "exp(y)"])
def test_not_linear(h):
    assert detect_linear(parse_ode(f"dy/dx = {h}")) is None


def test_linear_symmetry_trivial_coefficients():
    assert linear_symmetry(LinearForm(E.Num(0), X)) == TangentField(0, 1)
    assert linear_symmetry(LinearForm(E.Num(1), X)) == TangentField(0, E.exp(-X))


@given(st.lists(st.integers(-2, 2), min_size=1, max_size=3), st.lists(st.integers(-2, 2), min_size=1, max_size=3))
def test_linear_symmetry_satisfies_condition(fc, gc):
    Fx = E.normalize(E.Add([E.Num(c) * X ** i for i, c in enumerate(fc)]))
    Gx = E.normalize(E.Add([E.Num(c) * X ** i for i, c in enumerate(gc)]))
    form = LinearForm(Fx, Gx)
    f = linear_symmetry(form)
    assert E.is_zero(lsc_residual(form.rebuild(), f.xi, f.eta))


def test_superposition():
    # difference of two solutions of y' = G - F y solves the homogeneous equation
    ode = parse_ode("dy/dx = x - y")
    form = detect_linear(ode)
    y1, y2 = P("x - 1"), P("x - 1 + 5*exp(-x)")
    for sol in (y1, y2):
        assert E.is_zero(E.diff(sol, X) - E.substitute(ode.h, Y, sol))
    u = E.normalize(y2 - y1)
    assert E.is_zero(E.diff(u, X) + form.F * u)
    f = linear_symmetry(form)
    assert E.is_zero(E.normalize(u / f.eta) - 5)
    assert check_lsc_numeric(ode, f).passed
