import random
from fractions import Fraction

import pytest

from nwkit.derivations import (Derivation, NotInvariant, apply, charpoly, darboux_search, invariance_check,
                               iterated_wk, ramanujan_v, ramanujan_w, rational_roots)
from nwkit.eisenstein import compose_poly, phi_bundle
from nwkit.errors import ArityMismatch, DegreeRaisingField
from nwkit.poly import SparsePoly, parse_poly
from nwkit.selftest import bridge_ok
from nwkit.series import q_derivative, theta
from nwkit.zeroscope import random_polynomial

XY = ("x", "y")


def field2(a, b):
    return Derivation((parse_poly(a, 2, XY), parse_poly(b, 2, XY)), XY)


def test_w_on_coordinates():
    w = ramanujan_w()
    assert apply(w, parse_poly("x0")) == parse_poly("x0")
    assert apply(w, parse_poly("x2")) == parse_poly("1/3 x1 x2 - 1/3 x3")


def test_w_matches_theta_on_phi():
    # (w P) o phi = theta (P o phi): the single-step bridge
    b = phi_bundle(60)
    rng = random.Random(3)
    for _ in range(8):
        P = random_polynomial(rng, 3)
        assert compose_poly(apply(ramanujan_w(), P), b) == theta(compose_poly(P, b))


def test_invariance_of_discriminant():
    q = invariance_check(ramanujan_w(), parse_poly("x2^3 - x3^2"))
    assert q == parse_poly("x1")
    assert invariance_check(ramanujan_v(), parse_poly("x2^3 - x3^2", 3, ("x1", "x2", "x3"))) == \
        parse_poly("x1", 3, ("x1", "x2", "x3"))


def test_not_invariant():
    res = invariance_check(ramanujan_w(), parse_poly("x2"))
    assert isinstance(res, NotInvariant) and not res
    assert res.image == parse_poly("1/3 x1 x2 - 1/3 x3")


@pytest.mark.parametrize("seed", range(5))
def test_leibniz(seed):
    rng = random.Random(seed)
    w = ramanujan_w()
    P, Q = random_polynomial(rng, 3), random_polynomial(rng, 3)
    assert apply(w, P * Q) == apply(w, P) * Q + P * apply(w, Q)


def test_iterated_wk_small_cases():
    x0 = parse_poly("x0")
    assert iterated_wk(x0, 0) == x0
    # w^[2] x0 = 144 w(w - 1) x0 = 0 since w x0 = x0
    assert iterated_wk(x0, 2).is_zero()
    assert iterated_wk(parse_poly("x0^2"), 2) == parse_poly("288 x0^2")


@pytest.mark.parametrize("k", range(5))
def test_bridge(k):
    rng = random.Random(100 + k)
    for _ in range(3):
        assert bridge_ok(random_polynomial(rng, 3), k, 50)


def test_bridge_detects_wrong_operator():
    P = parse_poly("x0 x2 + x1^2")
    b = phi_bundle(30)
    wrong = compose_poly(apply(ramanujan_w(), apply(ramanujan_w(), P)) * 144, b)
    assert q_derivative(compose_poly(P, b), 2) * 144 != wrong


def test_example_field_darboux():
    D = field2("1", "y")
    assert [(p, lam) for p, lam in darboux_search(D, 1)] == [(parse_poly("y", 2, XY), 1)]
    assert [(p, lam) for p, lam in darboux_search(D, 4)] == [(parse_poly("y", 2, XY), 1)]


def test_diagonal_field_darboux():
    D = field2("x", "-y")
    found = sorted(((p.to_str(XY), lam) for p, lam in darboux_search(D, 1)), key=lambda t: t[1])
    assert found == [("y", -1), ("x", 1)]


def test_pencil_reported_separately():
    # x d/dx + y d/dy: every linear form is invariant with cofactor 1
    res = darboux_search(field2("x", "y"), 1)
    assert len(res) == 0 and len(res.pencils) == 1


def test_degree_raising_rejected():
    with pytest.raises(DegreeRaisingField):
        darboux_search(ramanujan_v(), 2)


def test_arity_checks():
    with pytest.raises(ArityMismatch):
        Derivation((SparsePoly.var(0, 2), SparsePoly.var(0, 3)))
    with pytest.raises(ArityMismatch):
        apply(ramanujan_w(), SparsePoly.var(0, 3))


def test_charpoly_and_rational_roots():
    M = [[Fraction(2), Fraction(1)], [Fraction(0), Fraction(-3)]]
    cp = charpoly(M)
    roots, rest = rational_roots(cp)
    assert roots == {Fraction(2): 1, Fraction(-3): 1}
