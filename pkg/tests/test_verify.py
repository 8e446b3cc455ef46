import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lieode import expr as E
from lieode.canonical import CanonicalPair, SolutionForm, canonical_coords, canonical_ode
from lieode.errors import AllSamplesSingular, EmptyDomain
from lieode.parser import parse_expr, parse_ode
from lieode.symmetry import TangentField
from lieode.verify import (
    Sampler,
    VerifyReport,
    check_canonical_identities,
    check_derivative_fd,
    check_lsc_numeric,
    check_nontrivial,
    check_s_independence,
    check_solution,
)
from strategies import X, Y, rational_xy

C = E.Sym("C")


def P(s):
    return parse_expr(s, ("x", "y", "r", "C"))


EX1 = parse_ode("dy/dx = y^2/x")
EX2 = parse_ode("dy/dx = y + exp(x)/y")


def test_true_symmetry_passes():
    rep = check_lsc_numeric(EX1, TangentField(X, 0), n=100, tol=1e-9)
    assert rep.passed and rep.samples + rep.skipped == 100


def test_false_symmetry_fails():
    rep = check_lsc_numeric(EX1, TangentField(1, 0), n=100, tol=1e-9)
    assert not rep.passed and rep.max_rel > 1e-3


def test_zero_samples_rejected():
    with pytest.raises(ValueError):
        check_lsc_numeric(EX1, TangentField(X, 0), n=0)


def test_seed_determinism():
    f = TangentField(1, 0)
    a = check_lsc_numeric(EX1, f, n=30, seed=7)
    b = check_lsc_numeric(EX1, f, n=30, seed=7)
    c = check_lsc_numeric(EX1, f, n=30, seed=8)
    assert a == b
    assert a.max_abs != c.max_abs


def test_guard_rejects_near_singular_points():
    s = Sampler(seed=0)
    assert not s.ok({"x": 5e-4, "y": 1.0}, [X])
    assert s.ok({"x": 0.5, "y": 1.0}, [X])


def test_positive_sampler_for_logs():
    s = Sampler(seed=1, positive=True)
    assert all(min(s.point().values()) >= 0 for _ in range(50))


def test_skips_counted_on_singular_points():
    ode = parse_ode("dy/dx = 1/x")
    rep = check_lsc_numeric(ode, TangentField(0, 1), n=200, tol=1e-9)
    assert rep.passed
    assert rep.samples + rep.skipped == 200


def test_all_samples_singular():
    # the radicand is negative on the whole positive quadrant
    ode = parse_ode("dy/dx = (-x - y - 1)^(1/2)")
    with pytest.raises(AllSamplesSingular):
        check_lsc_numeric(ode, TangentField(1, -1), n=10)


def test_nontriviality():
    h = P("y/x")
    ode = parse_ode("dy/dx = y/x")
    assert not check_nontrivial(ode, TangentField(X, Y))
    assert not check_nontrivial(ode, TangentField(1, h))
    assert check_nontrivial(ode, TangentField(0, X))


def test_derivative_fd():
    assert check_derivative_fd(P("x*exp(y) + ln(x)"), "y").passed
    assert check_derivative_fd(P("y^2/x"), "x").passed


def test_canonical_identity_check_detects_wrong_pair():
    f = TangentField(X, 0)
    assert check_canonical_identities(f, CanonicalPair(Y, E.ln(X))).passed
    assert not check_canonical_identities(f, CanonicalPair(Y, X)).passed


def test_s_independence():
    f = TangentField(1, Y / 2)
    pair = canonical_coords(f)
    F = canonical_ode(EX2, pair)
    assert check_s_independence(EX2, f, pair, F).passed
    assert not check_s_independence(EX2, f, pair, E.Num(1)).passed


def test_explicit_solutions():
    good = SolutionForm("explicit", branches=(P("(C*exp(2*x) - 2*exp(x))^(1/2)"),))
    bad = SolutionForm("explicit", branches=(P("(C*exp(2*x))^(1/2)"),))
    assert check_solution(EX2, good).passed
    assert not check_solution(EX2, bad).passed
    lines = SolutionForm("explicit", branches=(C * X,))
    assert check_solution(parse_ode("dy/dx = y/x"), lines).passed


def test_implicit_solution():
    ode = parse_ode("dy/dx = y/(x - y)")
    good = SolutionForm("implicit", relation=P("x/y + ln(y) - C"))
    bad = SolutionForm("implicit", relation=P("x*y + ln(y) - C"))
    assert check_solution(ode, good).passed
    assert not check_solution(ode, bad).passed


def test_empty_domain():
    sol = SolutionForm("explicit", branches=(P("(-1 - x^2)^(1/2)"),))
    with pytest.raises(EmptyDomain):
        check_solution(EX1, sol)


def test_quadrature_has_no_pointwise_check():
    sol = SolutionForm("quadrature", F=E.Num(1), pair=CanonicalPair(X, Y))
    with pytest.raises(ValueError):
        check_solution(EX1, sol)


def test_report_serialization():
    rep = VerifyReport("lsc_numeric", 10, 0.0, 0.0, True, 0, 1e-9)
    assert rep.to_dict()["check"] == "lsc_numeric"
    assert "pass" in rep.summary()
    rep = VerifyReport("solution", 0, math.inf, math.inf, False, 0, 1e-6)
    assert "FAIL" in rep.summary()


@settings(max_examples=30)
@given(rational_xy(1), rational_xy(1))
def test_symbolic_derivative_matches_fd(a, b):
    e = E.normalize(a * b)
    try:
        rep = check_derivative_fd(e, "x", tol=1e-5, n=20)
    except AllSamplesSingular:
        return
    assert rep.passed, rep
