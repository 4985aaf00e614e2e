"""Hypothesis strategies shared by the test modules."""

from fractions import Fraction

from hypothesis import strategies as st

from combideal.polyring import Polynomial


def exponents(nvars, max_deg=3):
    return st.tuples(*[st.integers(0, max_deg)] * nvars)


def coefficients():
    return st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(bool)


@st.composite
def polynomials(draw, nvars=2, max_terms=4, max_deg=3):
    terms = draw(st.dictionaries(exponents(nvars, max_deg), coefficients(), max_size=max_terms))
    return Polynomial(terms, nvars)


@st.composite
def nonzero_polynomials(draw, nvars=2, max_terms=3, max_deg=2):
    p = draw(polynomials(nvars, max_terms, max_deg))
    if p.is_zero():
        p = Polynomial.constant(Fraction(draw(st.integers(1, 3))), nvars)
    return p
