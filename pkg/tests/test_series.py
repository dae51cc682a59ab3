from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nwkit.errors import DivisorVanishes, OrderMismatch, ParseError, TruncationTooShort
from nwkit.series import (Indeterminate, LaurentTruncated, TruncatedSeries, ord_, q_derivative,
                          series_div, theta)

small = st.integers(-50, 50)
fracs = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def naive_mul(a, b, n):
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n + 1)]


@given(st.lists(small, min_size=1, max_size=30), st.lists(small, min_size=1, max_size=30))
def test_product_matches_schoolbook(a, b):
    s, t = TruncatedSeries(a), TruncatedSeries(b)
    n = min(len(a), len(b)) - 1
    assert list((s * t).coeffs) == naive_mul(a, b, n)


@given(st.lists(fracs, min_size=1, max_size=12), st.lists(fracs, min_size=1, max_size=12))
def test_rational_product_and_sum(a, b):
    s, t = TruncatedSeries(a), TruncatedSeries(b)
    n = min(len(a), len(b)) - 1
    assert list((s * t).coeffs) == naive_mul(a, b, n)
    assert list((s + t).coeffs) == [x + y for x, y in zip(a[: n + 1], b[: n + 1])]


def test_truncation_is_min_of_inputs():
    s = TruncatedSeries([1, 2, 3, 4, 5])
    t = TruncatedSeries([1, 1])
    assert (s * t).trunc_order == 1
    assert (s + t).trunc_order == 1


def test_big_coefficients_with_negatives():
    a = [10 ** 40, -(10 ** 39), 7, -3]
    b = [-(10 ** 35), 1, 10 ** 30, 5]
    assert list((TruncatedSeries(a) * TruncatedSeries(b)).coeffs) == naive_mul(a, b, 3)


def test_division_roundtrip():
    a = TruncatedSeries([3, 1, 4, 1, 5, 9, 2, 6])
    b = TruncatedSeries([2, 7, 1, 8, 2, 8, 1, 8])
    q = a / b
    assert (q * b) == a


def test_division_by_series_with_zero_constant_term():
    b = TruncatedSeries([0, 0, 1, 3, 5])
    a = b * TruncatedSeries([1, 2, 3, 4, 5])
    q = series_div(a, b)
    assert q.trunc_order == 2
    assert list(q.coeffs) == [1, 2, 3]


def test_division_errors():
    with pytest.raises(DivisorVanishes):
        TruncatedSeries([1, 2]) / TruncatedSeries([0, 0])
    with pytest.raises(OrderMismatch):
        TruncatedSeries([1, 2, 3]) / TruncatedSeries([0, 1, 0])
    with pytest.raises(DivisorVanishes):
        TruncatedSeries([1, 2]) / 0


def test_ord_and_indeterminate():
    assert ord_(TruncatedSeries([0, 0, 5])) == 2
    ind = ord_(TruncatedSeries([0, 0, 0]))
    assert isinstance(ind, Indeterminate) and ind.at == 2
    assert str(ind) == "indeterminate-at-2"


def test_theta_and_q_derivative():
    s = TruncatedSeries([5, 1, 1, 1, 1])
    assert list(theta(s).coeffs) == [0, 1, 2, 3, 4]
    assert list(q_derivative(s, 2).coeffs) == [0, 0, 2, 6, 12]
    assert q_derivative(s, 1) == theta(s)


def test_coeff_beyond_truncation_raises():
    s = TruncatedSeries([1, 2])
    with pytest.raises(TruncationTooShort):
        s.coeff(2)
    with pytest.raises(TruncationTooShort):
        s.truncate(3)


@settings(max_examples=50)
@given(st.lists(fracs, min_size=1, max_size=15))
def test_dumps_loads_roundtrip(a):
    s = TruncatedSeries(a)
    t = TruncatedSeries.loads(s.dumps())
    assert t == s and t.trunc_order == s.trunc_order


def test_loads_rejects_garbage():
    with pytest.raises(ParseError):
        TruncatedSeries.loads("0 1/1\n")
    with pytest.raises(ParseError):
        TruncatedSeries.loads("N=2\n0 abc\n")


def test_dumps_format():
    assert TruncatedSeries([1, Fraction(-1, 2)]).dumps() == "N=1\n0 1/1\n1 -1/2\n"


def test_laurent_product_and_pole():
    # (1/q + 2) * (q + q^2) = 1 + 3q + 2q^2
    L = LaurentTruncated(1, TruncatedSeries([1, 2, 0, 0]))
    s = TruncatedSeries([0, 1, 1, 0, 0])
    prod = (L * s).to_series()
    assert list(prod.coeffs[:3]) == [1, 3, 2]
    assert L.coeff(-1) == 1 and L.coeff(0) == 2
