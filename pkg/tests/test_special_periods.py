import itertools
import random
from fractions import Fraction

import pytest
from flint import acb, arb

from nwkit import balls
from nwkit.errors import Degenerate, ParseError, PoleProximity, PrecisionExhausted
from nwkit.periods import (EllipticCurveQ, c5_segment, elliptic_periods, hyperelliptic_c5_periods,
                           lemniscatic_omega, prop47_check, zeta5)
from nwkit.quadrature import integrate, periodic_trapezoid
from nwkit.special import beta, beta_quadrature, gamma


@pytest.mark.parametrize("x", [Fraction(1, 4), Fraction(1, 3), Fraction(5, 2), Fraction(-7, 2), Fraction(17, 3), 1, 10])
def test_gamma_against_flint(x):
    bits = 200
    with balls.workprec(bits + 40):
        ref = acb(balls.exact(x)).gamma()
    v = gamma(x, bits)
    assert v.overlaps(ref) and balls.max_radius(v) < arb("1e-55")


def test_gamma_complex_argument():
    with balls.workprec(150):
        z = acb(arb(1) / 3, arb(2))
        ref = z.gamma()
    assert gamma(z, 150).overlaps(ref)


def test_gamma_half_and_reflection():
    bits = 200
    g = gamma(Fraction(1, 2), bits)
    with balls.workprec(bits):
        assert g.overlaps(acb(arb.pi().sqrt()))
        # Gamma(1/4) Gamma(3/4) = pi sqrt 2
        prod = gamma(Fraction(1, 4), bits) * gamma(Fraction(3, 4), bits)
        assert prod.overlaps(acb(arb.pi() * arb(2).sqrt()))


@pytest.mark.parametrize("x", [0, -3])
def test_gamma_poles(x):
    with pytest.raises(PoleProximity):
        gamma(x, 64)


PAIRS = [(Fraction(1, 5), Fraction(1, 2)), (Fraction(2, 5), Fraction(1, 2)), (Fraction(3, 5), Fraction(1, 2)),
         (Fraction(4, 5), Fraction(1, 2)), (Fraction(1, 2), Fraction(1, 2)), (Fraction(1, 3), Fraction(2, 3)),
         (Fraction(3, 2), Fraction(5, 4)), (2, 3), (Fraction(1, 4), Fraction(7, 3)), (Fraction(5, 3), Fraction(1, 6))]


@pytest.mark.parametrize("a,b", PAIRS)
def test_beta_quadrature_against_gamma_quotient(a, b):
    q = beta_quadrature(a, b, 120)
    g = beta(a, b, 120)
    assert q.overlaps(g) and balls.max_radius(q) < arb("1e-30")


def test_beta_closed_values():
    with balls.workprec(120):
        assert beta(Fraction(1, 2), Fraction(1, 2), 120).overlaps(acb(arb.pi()))
        assert beta(2, 3, 120).overlaps(acb(arb(1) / 12))


def test_clenshaw_curtis_polynomial_and_exp():
    with balls.workprec(150):
        v = integrate(lambda t: t ** 7 - 3 * t, 0, 2, 120)
        assert v.overlaps(acb(32 - 6))
        e = integrate(lambda t: t.exp(), 0, 1, 120)
        assert e.overlaps(acb(arb(1).exp() - 1)) and balls.max_radius(e) < arb("1e-30")


def test_clenshaw_curtis_bisects_near_singularity():
    # 1/(t + 1/1000) has a pole just left of the interval
    with balls.workprec(150):
        v = integrate(lambda t: 1 / (t + arb(1) / 1000), 0, 1, 100)
        ref = (arb(1001)).log()
        assert v.overlaps(acb(ref)) and balls.max_radius(v) < arb("1e-25")


def test_integrand_that_never_certifies():
    with pytest.raises(PrecisionExhausted):
        integrate(lambda t: None, 0, 1, 64)


def test_periodic_trapezoid():
    # int_0^pi 1/(2 + cos 2t) dt = pi / sqrt 3
    with balls.workprec(150):
        v = periodic_trapezoid(lambda t: 1 / (2 + (2 * t).cos()), 120, arb("0.5"))
        assert v.overlaps(acb(arb.pi() / arb(3).sqrt())) and balls.max_radius(v) < arb("1e-30")


def test_curve_validation():
    with pytest.raises(Degenerate):
        EllipticCurveQ(3, 1)
    with pytest.raises(ParseError):
        EllipticCurveQ.parse("1;2")
    assert EllipticCurveQ.parse("1/2, -3") == EllipticCurveQ(Fraction(1, 2), Fraction(-3))


def test_lemniscatic_curve():
    pd = elliptic_periods(EllipticCurveQ(4, 0), 300)
    assert pd.omega1.overlaps(lemniscatic_omega(300))
    assert pd.tau.overlaps(acb(0, 1))
    assert pd.legendre_residual.contains(0)


def test_equianharmonic_tau():
    pd = elliptic_periods(EllipticCurveQ(0, 4), 200)
    with balls.workprec(200):
        rho = acb(-arb(1) / 2, arb(3).sqrt() / 2)
    assert pd.tau.overlaps(rho) or pd.tau.overlaps(rho + 1)


@pytest.mark.parametrize("u,v", [(1, 1), (-3, 5), (7, -2), (Fraction(1, 2), Fraction(1, 3))])
def test_legendre_and_domain(u, v):
    pd = elliptic_periods(EllipticCurveQ(u, v), 200)
    assert pd.legendre_residual.contains(0) and balls.max_radius(pd.legendre_residual) < arb("1e-50")
    t = pd.tau
    with balls.workprec(200):
        tol = arb("1e-50")
        assert t.imag > 0
        assert abs(t.real) < arb(1) / 2 + tol and abs(t) > 1 - tol


def test_homogeneity():
    # (lambda^4 u, lambda^6 v): omega scales by 1/lambda, eta by lambda
    u, v, lam = 2, -1, 2
    a = elliptic_periods(EllipticCurveQ(u, v), 160)
    b = elliptic_periods(EllipticCurveQ(lam ** 4 * u, lam ** 6 * v), 160)
    with balls.workprec(160):
        assert b.tau.overlaps(a.tau)
        assert b.omega1.overlaps(a.omega1 / lam)
        assert b.eta1.overlaps(a.eta1 * lam)


@pytest.mark.parametrize("u,v", [(4, 0), (1, 1)])
def test_prop47(u, v):
    r = prop47_check(EllipticCurveQ(u, v), 200)
    assert r.all_contain_zero()
    assert max(balls.max_radius(x) for x in r.residuals) < arb("1e-40")


def test_prop47_sensitive_to_sign():
    # flipping the sign of v must break the E6 identity unless E6 vanishes
    r = prop47_check(EllipticCurveQ(1, 1), 150)
    with balls.workprec(150):
        assert not (r.lhs[2] + r.rhs[2]).contains(0)


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_c5_segment_is_beta_over_five(k):
    s = c5_segment(k, 120)
    with balls.workprec(160):
        assert s.overlaps(beta(Fraction(k, 5), Fraction(1, 2), 160) / 5)


def test_hyperelliptic_all_pairs_and_sum_over_l():
    bits = 120
    for k in range(1, 5):
        vals = [hyperelliptic_c5_periods(k, l, bits) for l in range(1, 5)]
        assert all(r.residual.contains(0) for r in vals)
        # sum over l = 1..5 of zeta^(k(l-1)) vanishes, so the four loops sum to -gamma_5
        with balls.workprec(bits + 20):
            total = sum((r.value for r in vals), acb(0))
            fifth = vals[0].value * zeta5(bits + 20) ** (4 * k)
            assert (total + fifth).contains(0)


def test_hyperelliptic_range():
    with pytest.raises(ValueError):
        hyperelliptic_c5_periods(5, 1, 64)
