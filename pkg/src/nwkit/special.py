"""Gamma and Beta with explicit remainders.

For Re x >= 1 split Gamma at a cut N:

    Gamma(x) = gamma(x, N) + Gamma(x, N),
    gamma(x, N) = N^x e^-N sum_{k>=0} N^k / (x (x+1) ... (x+k)),

the lower part by its convergent series and the upper part bounded by
|Gamma(x, N)| <= N^(s-1) e^-N / (1 - (s-1)/N) with s = Re x (s <= 1: no
denominator).  Smaller arguments are moved up by the recurrence.
"""

from __future__ import annotations

import math
from fractions import Fraction

from flint import acb, arb

from . import balls
from .errors import PoleProximity, PrecisionExhausted


def _upper_tail(s_hi: arb, N: int) -> arb:
    if s_hi <= 1:
        return arb(N) ** (s_hi - 1) * arb(-N).exp()
    if not s_hi - 1 < N:
        raise PrecisionExhausted("cut point too small for the upper incomplete gamma bound")
    return arb(N) ** (s_hi - 1) * arb(-N).exp() / (1 - (s_hi - 1) / N)


def _gamma_shifted(x: acb, bits: int) -> acb:
    """Gamma(x) for Re x >= 1, at the ambient precision."""
    s_hi = arb(x.real.upper())
    s_lo = arb(x.real.lower())
    target = arb(2) ** (-bits - 4)
    # e^-N N^(s-1) < target, with a margin for |x|
    N = int((bits + 8) * math.log(2)) + int(float(abs(x).upper())) + 8
    while not _upper_tail(s_hi, N) < target:
        N += 16
    prefactor = (x * arb(N).log()).exp() * arb(-N).exp()
    term = 1 / x
    total = term
    k = 0
    while True:
        k += 1
        term = term * N / (x + k)
        total += term
        ratio = arb(N) / (s_lo + k + 1)
        if ratio < arb(1) / 2:
            # remaining terms shrink at least geometrically by ratio
            rest = abs(term) * ratio / (1 - ratio)
            if (abs(prefactor) * rest).upper() < target.upper():
                break
        if k > 100 * (N + bits):
            raise PrecisionExhausted("gamma series failed to converge")
    lower = prefactor * (total + balls.error_ball(rest))
    return lower + balls.error_ball(_upper_tail(s_hi, N))


def gamma(x, bits: int | None = None) -> acb:
    """Gamma(x) as a complex ball."""
    bits = bits or balls.DEFAULT_BITS
    with balls.workprec(bits + 40):
        x = balls.cball(x)
        if x.contains_integer() and not x.real.lower() > 0:
            # the only integers that matter are the poles 0, -1, -2, ...
            lo = math.floor(float(x.real.lower()))
            for n in range(min(lo, 0), 1):
                if x.contains(n):
                    raise PoleProximity(f"argument ball contains the pole {n}")
        shift = 0
        denom = acb(1)
        while not x.real.lower() >= 1:
            denom = denom * x
            x = x + 1
            shift += 1
            if shift > 10_000:
                raise PrecisionExhausted("argument too far left of the axis")
        return _gamma_shifted(x, bits + 40) / denom


def beta(a, b, bits: int | None = None) -> acb:
    """B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)."""
    bits = bits or balls.DEFAULT_BITS
    with balls.workprec(bits + 20):
        a, b = balls.cball(a), balls.cball(b)
        if not (a.real > 0 and b.real > 0):
            raise PoleProximity("beta needs Re a > 0 and Re b > 0")
        return gamma(a, bits + 20) * gamma(b, bits + 20) / gamma(a + b, bits + 20)


def beta_quadrature(a: Fraction, b: Fraction, bits: int | None = None) -> acb:
    """Independent value of int_0^1 t^(a-1) (1-t)^(b-1) dt for rational a, b > 0.

    Near t = 0 put t = s^m (m the denominator of a), near t = 1 put
    1 - t = u^m' so both endpoint factors become polynomial; the middle
    piece is regular.
    """
    from .quadrature import integrate

    bits = bits or balls.DEFAULT_BITS
    a, b = Fraction(a), Fraction(b)
    if a <= 0 or b <= 0:
        raise PoleProximity("beta needs a > 0 and b > 0")
    ma, na = a.denominator, a.numerator
    mb, nb = b.denominator, b.numerator

    def principal_pow(w: acb, e: arb) -> acb | None:
        if not w.real > 0:
            return None
        return (e * w.log()).exp()

    def left(s: acb):
        # m s^(n-1) (1 - s^m)^(b-1)
        p = principal_pow(1 - s ** ma, balls.exact(b - 1))
        return None if p is None else ma * s ** (na - 1) * p

    def right(u: acb):
        p = principal_pow(1 - u ** mb, balls.exact(a - 1))
        return None if p is None else mb * u ** (nb - 1) * p

    def middle(t: acb):
        p = principal_pow(t, balls.exact(a - 1))
        q = principal_pow(1 - t, balls.exact(b - 1))
        return None if p is None or q is None else p * q

    half = Fraction(1, 2)
    t0 = half ** ma
    t1 = 1 - half ** mb
    pieces = [integrate(left, Fraction(0), half, bits),
              integrate(middle, t0, t1, bits),
              integrate(right, Fraction(0), half, bits)]
    with balls.workprec(bits + 30):
        return pieces[0] + pieces[1] + pieces[2]
