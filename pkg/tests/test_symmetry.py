from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from lieode import expr as E
from lieode.parser import parse_expr, parse_ode
from lieode.symmetry import (
    YX,
    AnsatzSpec,
    LinearSystem,
    TangentField,
    build_ansatz,
    characteristic,
    characteristic_residual,
    determining_system,
    is_trivial,
    lsc_residual,
    normalize_field,
    nullspace,
    order_fields,
    prolong1_coeff,
    prolongation_residual,
    selection_key,
    solve_symmetries,
)
from lieode.verify import check_lsc_numeric
from helpers import in_span
from strategies import X, Y, rational_xy

P = parse_expr
EX1 = "dy/dx = y^2/x"
EX2 = "dy/dx = y + exp(x)/y"
EX4 = "dy/dx = y/x + x"
EX5 = "dy/dx = y/(x - y)"
EX6 = "dy/dx = (1 - y^2)/(x*y) + 1"


@pytest.mark.parametrize(
    "h, xi, eta",
    [
        ("y^2/x", "x", "0"),
        ("y + exp(x)/y", "1", "y/2"),
        ("y^2/x", "0", "y^2"),
        ("x*y + exp(x)", "0", "0"),
    ],
)
def test_lsc_vanishes_on_known_symmetries(h, xi, eta):
    assert E.is_zero(lsc_residual(P(h), P(xi), P(eta)))


def test_lsc_hand_expansion_for_a_non_symmetry():
    # (1, 0) on h = y^2/x leaves -h_x
    assert lsc_residual(P("y^2/x"), 1, 0) == P("y^2/x^2")


def test_prolongation_coefficient_formula():
    assert prolong1_coeff(X * Y, Y ** 2) == E.normalize(2 * Y * YX - Y * YX - X * YX ** 2)


def test_restrictive_template():
    xi, eta, names = build_ansatz(AnsatzSpec.restrictive())
    assert names == ("c1", "c2", "c3", "c4", "c5", "c6")
    assert xi == P("c1*x + c2*y + c3", ("x", "y", "c1", "c2", "c3"))
    assert eta == P("c4*x + c5*y + c6", ("x", "y", "c4", "c5", "c6"))


def test_quadratic_and_functional_templates():
    xi, eta, names = build_ansatz(AnsatzSpec.quadratic())
    assert len(names) == 8
    assert xi == P("c1*y^2 + c2*x + c3*y + c4", ("x", "y", "c1", "c2", "c3", "c4"))
    spec = AnsatzSpec.functional(-2, 2)
    assert len(spec.xi_monomials) == 5 and len(spec.eta_monomials) == 10


def test_ansatz_validation():
    with pytest.raises(ValueError):
        AnsatzSpec(((1, 0, 0), (1, 0, 0)), ())
    with pytest.raises(ValueError):
        AnsatzSpec((), ())
    with pytest.raises(ValueError):
        AnsatzSpec.functional(2, -2)


def _solution_set(ode_text, spec):
    return nullspace(determining_system(parse_ode(ode_text), spec))


def test_example1_determining_system():
    basis = _solution_set(EX1, AnsatzSpec.quadratic())
    # c2 (x in xi) and c5 (y^2 in eta) free, everything else zero
    assert len(basis) == 2
    for v in basis:
        assert all(v[i] == 0 for i in (0, 2, 3, 5, 6, 7))


def test_example2_determining_system():
    (v,) = _solution_set(EX2, AnsatzSpec.restrictive())
    c1, c2, c3, c4, c5, c6 = v
    assert c1 == c2 == c4 == c6 == 0 and 2 * c5 == c3 != 0


def test_all_zero_rows_when_template_misses_the_residual():
    # constant xi on h independent of x: every coefficient is free
    sys = determining_system(parse_ode("dy/dx = y"), AnsatzSpec(((0, 0, 0),), ()))
    assert all(not any(r) for r in sys.rows)
    assert len(nullspace(sys)) == 1


def test_nullspace_identity_like():
    assert nullspace(LinearSystem(("a", "b"), [[Fraction(1), Fraction(0)]])) == [[0, 1]]


def test_linear_system_rejects_ragged_rows():
    with pytest.raises(ValueError):
        LinearSystem(("a", "b"), [[1]])


@given(st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=0, max_size=5)
), st.integers(1, 5))
def test_nullspace_is_exact_and_complete(rows, n):
    n = len(rows[0]) if rows else n
    sys = LinearSystem(tuple(f"c{i}" for i in range(n)), [[Fraction(v) for v in r] for r in rows])
    basis = nullspace(sys)
    for v in basis:
        assert all(x == 0 for x in sys.apply(v))
    rank = np.linalg.matrix_rank(np.array(rows, dtype=float)) if rows else 0
    assert len(basis) == n - rank
    if basis:
        assert np.linalg.matrix_rank(np.array([[float(x) for x in v] for v in basis])) == len(basis)


def test_example1_fields():
    fields = solve_symmetries(parse_ode(EX1), AnsatzSpec.quadratic())
    assert {(E.render(f.xi), E.render(f.eta)) for f in fields} == {("x", "0"), ("0", "y^2")}


def test_example2_field_is_normalized():
    (f,) = solve_symmetries(parse_ode(EX2), AnsatzSpec.restrictive())
    assert f == TangentField(1, Y / 2)


def test_example4_span():
    fields = solve_symmetries(parse_ode(EX4), AnsatzSpec.restrictive())
    assert in_span(fields, TangentField(0, X))
    assert in_span(fields, TangentField(X, 2 * Y))


def test_example5_span():
    fields = solve_symmetries(parse_ode(EX5), AnsatzSpec.restrictive())
    assert TangentField(X, Y) in fields and TangentField(Y, 0) in fields


def test_example6_functional():
    fields = solve_symmetries(parse_ode(EX6), AnsatzSpec.functional(-2, 2))
    assert fields == [TangentField(1 / X, -Y / X ** 2)]


def test_empty_result_is_valid():
    assert solve_symmetries(parse_ode(EX6), AnsatzSpec.restrictive()) == []


def test_trivial_fields_are_filtered():
    h = P("y/x")
    assert is_trivial(h, TangentField(X, Y))
    assert is_trivial(h, TangentField(1, h))
    assert TangentField(X, Y) not in solve_symmetries(parse_ode("dy/dx = y/x"), AnsatzSpec.restrictive())


def test_normalize_field_scales_leading_coefficient():
    assert normalize_field(TangentField(2, Y)) == TangentField(1, Y / 2)
    assert normalize_field(TangentField(0, -3 * X)) == TangentField(0, X)


def test_selection_order():
    a, b, c = TangentField(X, 0), TangentField(0, Y ** 2), TangentField(0, X)
    assert order_fields([a, b, c]) == [c, b, a]
    assert selection_key(TangentField(X, X * Y + X ** 2 * Y ** 2 + 1))[0] == 3
    assert selection_key(TangentField(1, Y / 2))[0] == 2


@pytest.mark.parametrize("text", [EX1, EX2, EX4, EX5, EX6])
def test_returned_fields_are_sound_and_consistent(text):
    ode = parse_ode(text)
    for kind in (AnsatzSpec.restrictive(), AnsatzSpec.quadratic(), AnsatzSpec.functional()):
        for f in solve_symmetries(ode, kind):
            assert E.is_zero(lsc_residual(ode.h, f.xi, f.eta))
            assert E.is_zero(characteristic_residual(ode.h, characteristic(ode.h, f.xi, f.eta)))
            rep = check_lsc_numeric(ode, f, n=100, tol=1e-9, seed=3)
            assert rep.passed, rep


@given(rational_xy(), rational_xy(1), rational_xy(1))
def test_prolongation_matches_lsc(h, xi, eta):
    pro = prolongation_residual(h, xi, eta)
    assert E.substitute(pro, YX, h) == lsc_residual(h, xi, eta)
