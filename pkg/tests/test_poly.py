from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from nwkit.errors import ArityMismatch, ParseError
from nwkit.poly import SparsePoly, parse_poly

exps = st.tuples(*[st.integers(0, 3)] * 3)
coeffs = st.fractions(min_value=-9, max_value=9, max_denominator=5)
polys = st.dictionaries(exps, coeffs, max_size=6).map(lambda d: SparsePoly(3, d))

X = sympy.symbols("x0 x1 x2")


def to_sympy(P):
    return sum((sympy.Rational(c.numerator, c.denominator) * sympy.prod([x ** k for x, k in zip(X, e)])
                for e, c in P.terms.items()), sympy.Integer(0))


@settings(max_examples=60)
@given(polys, polys)
def test_ring_ops_against_sympy(P, Q):
    assert sympy.expand(to_sympy(P * Q) - to_sympy(P) * to_sympy(Q)) == 0
    assert sympy.expand(to_sympy(P - Q) - to_sympy(P) + to_sympy(Q)) == 0


@settings(max_examples=60)
@given(polys, polys)
def test_exact_division_recovers_factor(P, Q):
    if Q.is_zero():
        return
    assert (P * Q).divmod_exact(Q) == P


@given(polys)
def test_string_roundtrip(P):
    assert parse_poly(P.to_str(), 3) == P


@given(polys)
def test_json_roundtrip(P):
    assert SparsePoly.from_json(3, P.to_json()) == P


def test_non_divisor_detected():
    x = parse_poly("x0^2 + x1", 3)
    assert x.divmod_exact(parse_poly("x0 + 1", 3)) is None


def test_diff_and_degree():
    P = parse_poly("3 x0^2 x1 - x2^4 + 1/2", 3)
    assert P.degree() == 4
    assert P.diff(0) == parse_poly("6 x0 x1", 3)
    assert P.height() == 3
    assert not P.is_integral()


def test_primitive():
    P = parse_poly("-2/3 x0 + 4/9", 3)
    assert P.primitive() == parse_poly("3 x0 - 2", 3)


def test_evaluate():
    P = parse_poly("x0^2 x1 - 2 x2 + 1", 3)
    assert P.evaluate([Fraction(1, 2), 4, 3]) == -4
    with pytest.raises(ArityMismatch):
        P.evaluate([1, 2])


def test_named_variables_and_unicode_minus():
    P = parse_poly("x*y − 2 y^3", 2, ("x", "y"))
    assert P == SparsePoly(2, {(1, 1): 1, (0, 3): -2})


@pytest.mark.parametrize("bad", ["", "x0 +* ", "z^2", "x0 ^ "])
def test_parse_errors(bad):
    with pytest.raises(ParseError):
        parse_poly(bad, 3)


def test_arity_mismatch_in_arithmetic():
    with pytest.raises(ArityMismatch):
        SparsePoly.var(0, 2) + SparsePoly.var(0, 3)
