from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from combideal.errors import ParseError
from combideal.polyring import (
    GRLEX,
    LEX,
    MonomialOrder,
    Polynomial,
    compare_monomials,
    divide,
    monomial_divides,
    parse_polynomial,
    s_polynomial,
)
from strategies import exponents, nonzero_polynomials, polynomials

XY = ["x", "y"]


def P(text, names=XY):
    return parse_polynomial(text, names)


def test_grlex_compares_total_degree_first():
    assert compare_monomials((1, 2, 0), (0, 3, 4), GRLEX) < 0


def test_lex_leftmost_variable_wins():
    assert compare_monomials((1, 0), (0, 5), LEX) > 0


def test_compare_equal():
    assert compare_monomials((2, 1), (2, 1), GRLEX) == 0


def test_compare_length_mismatch():
    with pytest.raises(ValueError):
        compare_monomials((1,), (1, 0), GRLEX)


def test_priority_changes_lex():
    order = MonomialOrder("lex", (1, 0))
    assert compare_monomials((1, 0), (0, 1), order) < 0


def test_leading_term_worked_example():
    f = P("x^2*y - x*y^2 + y")
    assert f.leading_term(GRLEX) == (Fraction(1), (2, 1))


def test_leading_term_constant_and_lex():
    assert Polynomial.constant(7, 2).leading_term(GRLEX) == (Fraction(7), (0, 0))
    assert P("x + y").leading_term(LEX) == (Fraction(1), (1, 0))


def test_leading_term_of_zero_fails():
    with pytest.raises(ValueError):
        Polynomial.zero(2).leading_term(GRLEX)


def test_division_worked_example():
    f = P("x^2*y - x*y^2 + y")
    qs, r = divide(f, [P("x^2"), P("x*y - 1")], GRLEX)
    assert qs == [P("y"), P("-y")]
    assert r.is_zero()


def test_division_other_divisor_order_gives_plus_x():
    # the worked example prints -x; expansion gives +x
    f = P("x^2*y - x*y^2 + y")
    f1, f2 = P("x*y - 1"), P("x^2")
    qs, r = divide(f, [f1, f2], GRLEX)
    assert r == P("x")
    assert qs[0] * f1 + qs[1] * f2 + r == f
    assert f - P("x - y") * f1 == P("x")


def test_division_by_self():
    f = P("x^2 + 3*y")
    qs, r = divide(f, [f], GRLEX)
    assert qs == [Polynomial.constant(1, 2)] and r.is_zero()


def test_division_by_zero_rejected():
    with pytest.raises(ValueError):
        divide(P("x"), [Polynomial.zero(2)], GRLEX)


def test_s_polynomial_fan_case():
    names = ["xi", "xj", "xk"]
    f = parse_polynomial("(xi - 1)*xj", names)
    g = parse_polynomial("(xi - 1)*(xk - 2)", names)
    xj, xk = Polynomial.variable(1, 3), Polynomial.variable(2, 3)
    s = s_polynomial(f, g, GRLEX)
    assert s == xk * f - xj * g
    assert s == f * 2


def test_s_polynomial_self_and_coprime():
    f = P("x^2 + y")
    assert s_polynomial(f, f, GRLEX).is_zero()
    a, b = P("x^2"), P("y^2")
    assert divide(s_polynomial(a, b, GRLEX), [a, b], GRLEX)[1].is_zero()


def test_parser_grammar():
    f = parse_polynomial("2*x1^2*x2 - 3/2*x2 + 1", ["x1", "x2"])
    assert f.coefficient((2, 1)) == 2
    assert f.coefficient((0, 1)) == Fraction(-3, 2)
    assert f.coefficient((0, 0)) == 1
    assert parse_polynomial("-(x1 + 1)^2", ["x1"]) == parse_polynomial("-x1^2 - 2*x1 - 1", ["x1"])


@pytest.mark.parametrize("bad", ["x +", "x ^ y", "2**x", "z", "(x", ""])
def test_parser_rejects(bad):
    with pytest.raises(ParseError):
        parse_polynomial(bad, XY)


def test_zero_coefficients_dropped():
    assert Polynomial({(1, 0): 0, (0, 1): 2}, 2).terms == {(0, 1): Fraction(2)}


@given(polynomials(), st.lists(nonzero_polynomials(), min_size=1, max_size=3), st.sampled_from([GRLEX, LEX]))
def test_division_identity_and_irreducible_remainder(f, divisors, order):
    qs, r = divide(f, divisors, order)
    total = r
    for q, d in zip(qs, divisors):
        total = total + q * d
    assert total == f
    lms = [d.leading_monomial(order) for d in divisors]
    assert not any(monomial_divides(lm, e) for e in r.terms for lm in lms)


@given(polynomials(), nonzero_polynomials(), st.sampled_from([GRLEX, LEX]))
def test_quotient_products_do_not_exceed_f(f, d, order):
    qs, _ = divide(f, [d], order)
    if qs[0] and f:
        lhs = (qs[0] * d).leading_monomial(order)
        assert compare_monomials(lhs, f.leading_monomial(order), order) <= 0


@given(exponents(3), exponents(3), exponents(3))
def test_grlex_is_a_total_order_refining_degree(a, b, c):
    assert compare_monomials(a, b, GRLEX) == -compare_monomials(b, a, GRLEX)
    if compare_monomials(a, b, GRLEX) <= 0 and compare_monomials(b, c, GRLEX) <= 0:
        assert compare_monomials(a, c, GRLEX) <= 0
    if sum(a) < sum(b):
        assert compare_monomials(a, b, GRLEX) < 0


@given(nonzero_polynomials(), nonzero_polynomials())
def test_s_polynomial_antisymmetric_for_monic(f, g):
    f, g = f.monic(GRLEX), g.monic(GRLEX)
    assert s_polynomial(f, g, GRLEX) == -s_polynomial(g, f, GRLEX)


@given(polynomials(), polynomials(), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_arithmetic_is_pointwise(f, g, pt):
    assert (f * g).evaluate(pt) == f.evaluate(pt) * g.evaluate(pt)
    assert (f - g).evaluate(pt) == f.evaluate(pt) - g.evaluate(pt)


@given(polynomials())
def test_to_str_round_trip(f):
    assert parse_polynomial(f.to_str(XY), XY) == f
