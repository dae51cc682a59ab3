"""Certified quadrature for analytic integrands.

Two rules, both with a remainder proved from a bound M on |f| over a
region of analyticity:

* Clenshaw-Curtis on [a, b] (n even).  If f is analytic with |f| <= M inside
  the Bernstein ellipse E_rho of the interval, its Chebyshev coefficients obey
  |a_k| <= 2 M rho^-k.  The rule is exact through degree n, and both the
  integral and the rule (positive weights summing to 2) map every T_k to a
  number of modulus <= 2, so the error is at most

      (b - a)/2 * sum_{k>n} 4 |a_k|  <=  (b - a)/2 * 8 M rho^-n / (rho - 1).

* The trapezoid rule for a pi-periodic integrand on [0, pi]; analytic with
  |f| <= M on |Im theta| <= s, the error is at most 2 pi M / (e^(2 s n) - 1).

M is obtained by evaluating f on a grid of boxes covering the region.  An
integrand signals that it cannot certify analyticity on a box by returning
None, which makes the caller shrink the region or split the interval.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

from flint import acb, arb

from . import balls
from .errors import PrecisionExhausted

Integrand = Callable[[acb], Optional[acb]]

MAX_NODES = 512
MAX_DEPTH = 48
RHOS = (8, 4, 2, Fraction(3, 2))


def box(re_lo: arb, re_hi: arb, im_lo: arb, im_hi: arb) -> acb:
    re = (re_lo + re_hi) / 2
    im = (im_lo + im_hi) / 2
    re_rad = arb(((re_hi - re_lo) / 2).upper())
    im_rad = arb(((im_hi - im_lo) / 2).upper())
    return acb(arb(re.mid(), re_rad + re.rad()), arb(im.mid(), im_rad + im.rad()))


def sup_on_grid(f: Integrand, re_lo: arb, re_hi: arb, im_lo: arb, im_hi: arb,
                nre: int, nim: int) -> arb | None:
    """Upper bound for |f| on the rectangle, or None if some box is not certified."""
    M = arb(0)
    dre = (re_hi - re_lo) / nre
    dim = (im_hi - im_lo) / nim
    for i in range(nre):
        for j in range(nim):
            b = box(re_lo + i * dre, re_lo + (i + 1) * dre, im_lo + j * dim, im_lo + (j + 1) * dim)
            v = f(b)
            if v is None or not v.is_finite():
                return None
            u = abs(v).upper()
            if u > M:
                M = arb(u)
    return M


@lru_cache(maxsize=64)
def cc_rule(n: int, prec: int) -> tuple[tuple[arb, ...], tuple[arb, ...]]:
    """Clenshaw-Curtis nodes cos(k pi/n) and weights on [-1, 1], n even."""
    if n % 2:
        raise ValueError("Clenshaw-Curtis rule needs even n")
    with balls.workprec(prec):
        cosines = [(arb(m) / n).cos_pi() for m in range(2 * n)]
        nodes = tuple(cosines[k] for k in range(n + 1))
        weights = []
        for k in range(n + 1):
            if k == 0 or k == n:
                weights.append(arb(1) / (n * n - 1))
                continue
            v = arb(1)
            for j in range(1, n // 2):
                v -= 2 * cosines[(2 * j * k) % (2 * n)] / (4 * j * j - 1)
            v -= cosines[(n * k) % (2 * n)] / (n * n - 1)
            weights.append(2 * v / n)
        return nodes, tuple(weights)


def _cc_panel(f: Integrand, a: arb, b: arb, bits: int) -> acb | None:
    """One certified panel, or None if no ellipse/node count works."""
    h = (b - a) / 2
    c = (a + b) / 2
    target = arb(2) ** (-bits - 6)
    for rho in RHOS:
        rho = balls.exact(rho)
        A = (rho + 1 / rho) / 2
        B = (rho - 1 / rho) / 2

        def g(z: acb) -> acb | None:
            return f(c + h * z)

        M = sup_on_grid(g, -A, A, -B, B, 12, 4)
        if M is None:
            continue
        # smallest even n with h * 8 M rho^-n / (rho - 1) < target
        need = (abs(h) * 8 * M / ((rho - 1) * target)).log() / rho.log()
        if not need.is_finite():
            continue
        n = max(4, int(math.ceil(float(need.upper()))) + 1)
        n += n % 2
        if n > MAX_NODES:
            continue
        nodes, weights = cc_rule(n, bits + 30)
        total = acb(0)
        for x, w in zip(nodes, weights):
            v = f(acb(c + h * x))
            if v is None:
                return None
            total += w * v
        err = abs(h) * 8 * M * rho ** (-n) / (rho - 1)
        return h * total + balls.error_ball(err)
    return None


def integrate(f: Integrand, a, b, bits: int | None = None) -> acb:
    """Certified ball for int_a^b f(t) dt along the real segment [a, b].

    f must be analytic near the segment; panels are bisected until each one
    admits a Bernstein ellipse on which f is certified bounded.
    """
    bits = bits or balls.DEFAULT_BITS
    with balls.workprec(bits + 30):
        a, b = balls.exact(a), balls.exact(b)
        if a == b:
            return acb(0)
        stack = [(a, b, 0)]
        total = acb(0)
        panels = 0
        while stack:
            lo, hi, depth = stack.pop()
            v = _cc_panel(f, lo, hi, bits + 4 + depth)
            if v is not None:
                total += v
                panels += 1
                continue
            if depth >= MAX_DEPTH:
                raise PrecisionExhausted("quadrature could not certify the integrand near "
                                         f"[{lo.mid()}, {hi.mid()}]")
            mid = (lo + hi) / 2
            stack.append((mid, hi, depth + 1))
            stack.append((lo, mid, depth + 1))
        return total


def periodic_trapezoid(f: Integrand, bits: int, strip: arb, grid: tuple[int, int] = (32, 8),
                       symmetric: bool = True) -> acb:
    """Certified ball for int_0^pi f(theta) d theta, f pi-periodic.

    ``strip`` is the half-width s of the strip on which f is bounded.  With
    ``symmetric`` the integrand is assumed invariant under theta -> -theta
    and theta -> pi - theta, so |f| need only be bounded over
    [0, pi/2] x [-s, s].
    """
    with balls.workprec(bits + 30):
        pi = arb.pi()
        target = arb(2) ** (-bits - 6)
        s = arb(strip)
        nre, nim = grid
        for _ in range(12):
            hi = pi / 2 if symmetric else pi
            M = sup_on_grid(f, arb(0), hi, -s, s, nre, nim)
            if M is None:
                # first refine the cover, then give up some strip width
                if nre < 256:
                    nre, nim = nre * 2, nim * 2
                else:
                    s = s / 2
                    nre, nim = grid
                continue
            need = (2 * pi * M / target + 1).log() / (2 * s)
            n = max(8, int(math.ceil(float(need.upper()))) + 1)
            if n > 200_000:
                raise PrecisionExhausted("periodic quadrature needs too many nodes")
            total = acb(0)
            step = pi / n
            for j in range(n):
                v = f(acb(j * step))
                if v is None:
                    raise PrecisionExhausted("integrand not certified on the real axis")
                total += v
            err = 2 * pi * M / ((2 * s * n).exp() - 1)
            return step * total + balls.error_ball(err)
        raise PrecisionExhausted("could not bound the integrand on any strip")
