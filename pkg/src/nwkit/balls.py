"""Ball-arithmetic plumbing on top of python-flint's arb/acb types.

Every numeric routine in the package takes an explicit ``bits`` argument and
enters :func:`workprec` itself; nothing relies on an ambient precision.
"""

from __future__ import annotations

import math
import os
from contextlib import contextmanager
from fractions import Fraction

import flint
from flint import acb, arb, fmpq

ComplexBall = acb
RealBall = arb

DEFAULT_BITS = int(os.environ.get("NW_DEFAULT_BITS", "200"))


@contextmanager
def workprec(bits: int):
    old = flint.ctx.prec
    flint.ctx.prec = int(bits)
    try:
        yield
    finally:
        flint.ctx.prec = old


def exact(x) -> arb:
    """arb ball holding an int or Fraction.

    Non-dyadic rationals are rounded at the current precision, so call this
    inside the :func:`workprec` block that will use the value.
    """
    if isinstance(x, arb):
        return x
    x = Fraction(x)
    return arb(fmpq(x.numerator, x.denominator))


def cball(x, y=0) -> acb:
    if isinstance(x, acb):
        return x
    if isinstance(x, complex):
        x, y = Fraction(x.real), Fraction(x.imag)
    return acb(exact(x), exact(y))


def parse_complex(text: str) -> acb:
    """'re,im' with decimal or p/q components (exact rationals)."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) == 1:
        parts.append("0")
    return acb(exact(Fraction(parts[0])), exact(Fraction(parts[1])))


def error_ball(radius: arb) -> acb:
    """Complex ball centred at 0 containing the disc of the given radius."""
    r = arb(radius.upper())
    return acb(arb(0, r), arb(0, r))


def real_error(radius) -> arb:
    return arb(0, arb(radius).upper())


def abs_upper(z) -> arb:
    return arb(abs(z).upper())


def abs_lower(z) -> arb:
    return arb(abs(z).lower())


def contains_zero(z) -> bool:
    return z.contains(0)


def max_radius(z: acb) -> arb:
    return arb(max(z.real.rad(), z.imag.rad()))


def digits_for(bits: int) -> int:
    return int(math.ceil(bits * math.log10(2))) + 2


def _real_json(x: arb, digits: int) -> dict:
    if not x.is_finite():
        return {"mid": "nan", "rad": "inf"}
    mid = x.mid()
    text = mid.str(digits, radius=False)
    # printed midpoint is rounded; fold the rounding into the radius
    slack = abs(mid) * arb(10) ** (1 - digits) + x.rad()
    rad = arb(slack.upper()) * arb("1.001")
    return {"mid": text, "rad": arb(rad.upper()).str(4, radius=False)}


def ball_json(z, bits: int | None = None) -> dict:
    digits = digits_for(bits or flint.ctx.prec)
    if isinstance(z, arb):
        return _real_json(z, digits)
    return {"re": _real_json(z.real, digits), "im": _real_json(z.imag, digits)}


def pi() -> arb:
    return arb.pi()


def two_pi_i() -> acb:
    return acb(0, 2 * arb.pi())
