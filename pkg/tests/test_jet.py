import random

import pytest
from hypothesis import given, settings, strategies as st

from symred import catalog
from symred.expr import ZERO, eval_numeric, parse, substitute, symbol
from symred.jet import (EvolutionaryField, JetOrderError, PointGenerator, check_lb_symmetry,
                        check_point_symmetry_pde, frechet_derivative, jet_order, lb_remainder,
                        total_derivative_x)
from symred.reduction import pde_operator

KAPPA_X = catalog.get_entry("kappa_over_x")
K_OP = total_derivative_x(parse("kappa/(x*u)"), 2)


def test_dx_of_u():
    assert total_derivative_x(parse("u")) == parse("u1")


def test_dx_chain_rule():
    assert total_derivative_x(parse("kappa/(x*u)")) == parse("-kappa/(x^2*u) - kappa*u1/(x*u^2)")


def test_dx2_expansion():
    want = parse("2*kappa/(x^3*u) + 2*kappa*u1/(x^2*u^2) + 2*kappa*u1^2/(x*u^3) - kappa*u2/(x*u^2)")
    assert K_OP == want


def test_dx2_against_central_differences():
    # u(x) = exp(x/3) + x^2 as a test profile
    import math
    prof = lambda x: math.exp(x / 3) + x * x
    d1 = lambda x: math.exp(x / 3) / 3 + 2 * x
    d2 = lambda x: math.exp(x / 3) / 9 + 2
    g = lambda x: 0.7 / (x * prof(x))
    rng = random.Random(11)
    h = 1e-4
    for _ in range(10):
        x = rng.uniform(0.5, 2.0)
        fd = (g(x + h) - 2 * g(x) + g(x - h)) / h ** 2
        val = eval_numeric(K_OP, {"kappa": 0.7, "x": x, "u": prof(x), "u1": d1(x), "u2": d2(x)})
        assert val == pytest.approx(fd, rel=1e-6)


def test_abstract_h_chain():
    assert total_derivative_x(parse("H0*u")) == parse("H1*u + H0*u1")


# ---------------------------------------------------------------- Lie-Baecklund

def test_kappa_over_x_admits_operator():
    rep = check_lb_symmetry(EvolutionaryField(K_OP), KAPPA_X.U)
    assert rep.passed and rep.remainder.is_zero()


def test_zero_characteristic_passes():
    assert check_lb_symmetry(EvolutionaryField(ZERO), KAPPA_X.U).passed
    assert check_lb_symmetry(EvolutionaryField(ZERO), parse("u2^2/u1 + x*u")).passed


def test_scaling_generator_passes():
    assert check_lb_symmetry(EvolutionaryField(parse("u")), KAPPA_X.U).passed


def test_translation_fails_on_x_dependent_equation():
    rep = check_lb_symmetry(EvolutionaryField(parse("u1")), KAPPA_X.U)
    assert not rep.passed
    assert not rep.remainder.is_zero()


def test_order_too_high_is_rejected():
    with pytest.raises(JetOrderError):
        check_lb_symmetry(EvolutionaryField(parse("u3")), KAPPA_X.U)
    with pytest.raises(JetOrderError):
        check_lb_symmetry(EvolutionaryField(parse("u")), parse("u3*u"))


def test_constraints_are_applied():
    # u_xxx = k*u1 admits u (linear) and also u1 for any k
    rep = check_lb_symmetry(EvolutionaryField(parse("x*u1")), parse("k*u1"), {"k": 0})
    assert rep.passed and rep.constraints == {"k": "0"}
    assert not check_lb_symmetry(EvolutionaryField(parse("x*u1")), parse("k*u1")).passed


def test_prolongation_order_bound():
    F = K_OP
    assert jet_order(total_derivative_x(F, 3)) <= 5
    rem = lb_remainder(parse("x*u1"), KAPPA_X.U)
    assert jet_order(rem) <= 2


@pytest.mark.parametrize("ode", ["kappa_over_x", "kappa_over_x2"])
def test_worked_generators_all_pass(ode):
    entry = catalog.get_entry(ode)
    reports = catalog.verify_generators(entry)
    assert len(reports) == 10
    assert all(r.passed for r in reports), [r.entry_id for r in reports if not r.passed]


@pytest.mark.parametrize("entry", [e.id for e in catalog.list_entries()])
def test_lambda_scaling_preserves_verdict(entry):
    e = catalog.get_entry(entry)
    base = catalog.verify_entry(e)
    scaled = check_lb_symmetry(e.operator.scaled(symbol("lam")), e.U)
    assert scaled.passed == base.passed


# ---------------------------------------------------------------- Frechet

def test_frechet_examples():
    assert frechet_derivative(parse("u2"), parse("u")) == parse("u2")
    assert frechet_derivative(parse("u*u1"), parse("u")) == parse("2*u*u1")
    assert frechet_derivative(K_OP, parse("u")) == -K_OP


# ---------------------------------------------------------------- point symmetries

CASE_A = catalog.get_case("A")


def test_x2_passes_on_case_a():
    X2 = PointGenerator(parse("2*x"), ZERO, parse("-3*u"), "X2")
    assert check_point_symmetry_pde(X2, CASE_A.K).passed


def test_x3_needs_a4_zero():
    X3 = PointGenerator(parse("-a2*x*exp((2*a1-3*a2)*t)"), parse("exp((2*a1-3*a2)*t)"),
                        parse("a1*u*exp((2*a1-3*a2)*t)"), "X3")
    assert check_point_symmetry_pde(X3, CASE_A.K, {"a4": 0}).passed
    rep = check_point_symmetry_pde(X3, CASE_A.K)
    assert not rep.passed
    a4 = symbol("a4")
    quotient = rep.remainder / a4
    assert quotient.free_symbols() >= {"x"}
    assert "a4" not in quotient.free_symbols()


def test_time_translation_on_autonomous_operator():
    dt = PointGenerator(ZERO, parse("1"), ZERO)
    assert check_point_symmetry_pde(dt, CASE_A.K).passed
    assert check_point_symmetry_pde(dt, parse("u2 + u*u1")).passed


def test_heat_equation_galilean_boost():
    X = PointGenerator(parse("2*t"), ZERO, parse("-x*u"))
    assert check_point_symmetry_pde(X, parse("u2")).passed
    assert not check_point_symmetry_pde(X, parse("u2 + u^2")).passed


def test_point_symmetry_order_check():
    with pytest.raises(JetOrderError):
        check_point_symmetry_pde(PointGenerator(ZERO, parse("1"), ZERO), parse("u3"))


# ---------------------------------------------------------------- properties

_coeffs = st.integers(-4, 4)


@st.composite
def jet_exprs(draw):
    e = ZERO
    for _ in range(draw(st.integers(1, 4))):
        c = draw(_coeffs)
        mono = parse(draw(st.sampled_from(["u", "u1", "u2", "u*u1", "u1^2/u", "x*u", "gamma*u2", "1/u"])))
        e = e + c * mono * symbol("x") ** draw(st.integers(0, 2))
    return e


@settings(max_examples=50, deadline=None)
@given(jet_exprs(), st.sampled_from(["gamma + 1", "kappa^2", "3/7", "gamma*kappa"]))
def test_dx_commutes_with_parameter_substitution(e, image):
    b = {"gamma": parse(image)}
    assert total_derivative_x(substitute(e, b)) == substitute(total_derivative_x(e), b)


@settings(max_examples=30, deadline=None)
@given(jet_exprs())
def test_frechet_is_linear_in_q(K):
    q1, q2 = parse("x*u1"), parse("u^2")
    lhs = frechet_derivative(K, q1 + 2 * q2)
    assert (lhs - frechet_derivative(K, q1) - 2 * frechet_derivative(K, q2)).is_zero()


def test_pde_operator_matches_double_total_derivative():
    assert pde_operator(parse("kappa/x"), ZERO) == K_OP
