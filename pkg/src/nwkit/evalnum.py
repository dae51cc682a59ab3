"""Certified evaluation of the Eisenstein series inside the unit disc.

Truncated q-series are summed in ball arithmetic and the neglected tail is
enclosed with the comparison bound

    sum_{m > N} m^a t^m  <=  (a+1)! (N+1)^a t^(N+1) / (1-t)^(a+1),

which follows from (N+1+j)^a <= (N+1)^a (j+1)...(j+a) and the binomial series.
Coefficient growth |c_m| <= C m^a comes from sigma_{w-1}(m) <= m^w.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from flint import acb, arb

from . import balls
from .auxpoly import construct_aux_poly
from .derivations import iterated_wk
from .eisenstein import eisenstein_series, normalising_constants
from .errors import NotUnimodular, OutsideDisk
from .poly import SparsePoly
from .series import TruncatedSeries, theta

MAX_TERMS = 400_000
WRAP_SAFE = arb("0.7")


def growth_constants(weight: int, derivative: int = 0) -> tuple[int, int]:
    """(C, a) with |coefficient m of theta^derivative E_weight| <= C m^a."""
    c = abs(normalising_constants()[(2, 4, 6).index(weight)])
    return c, weight + derivative


def tail_bound(C: int, a: int, N: int, t: arb) -> arb:
    """Upper bound for C * sum_{m>N} m^a t^m (t an upper bound for |z|, t < 1)."""
    t = arb(t.upper())
    if not t < 1:
        raise OutsideDisk("tail bound needs |z| < 1")
    val = C * math.factorial(a + 1) * arb(N + 1) ** a * t ** (N + 1) / (1 - t) ** (a + 1)
    return arb(val.upper())


def terms_needed(C: int, a: int, t: arb, bits: int, start: int = 8) -> int:
    """Smallest N (found by doubling then bisection) with tail < 2^(4-bits)."""
    target = arb(2) ** (4 - bits)
    lo, hi = 0, max(start, 1)
    while not tail_bound(C, a, hi, t) < target:
        lo, hi = hi, hi * 2
        if hi > MAX_TERMS:
            raise OutsideDisk(f"|z| too close to 1: more than {MAX_TERMS} terms needed")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if tail_bound(C, a, mid, t) < target:
            hi = mid
        else:
            lo = mid
    return hi


def _horner(coeffs: Sequence[Fraction], z: acb) -> acb:
    acc = acb(0)
    for c in reversed(coeffs):
        acc = acc * z + balls.exact(c)
    return acc


def horner_series(s: TruncatedSeries, z: acb) -> acb:
    # integer numerators then one division keeps the recurrence cheap
    if balls.abs_upper(z) > WRAP_SAFE:
        return blocked_series(s, z)
    acc = acb(0)
    for c in reversed(s.numerators):
        acc = acc * z + c
    return acc / s.denominator


def blocked_series(s: TruncatedSeries, z: acb) -> acb:
    """Sum of the series at z without long chains of complex products.

    Rectangular balls pick up a factor |Re z| + |Im z| per Horner step, which
    exceeds 1 near the unit circle.  Here z^(kB+j) = exp(kB log z) exp(j log z)
    with both factors computed directly, so every term sees two products.
    """
    nums = s.numerators
    n = len(nums)
    B = max(1, math.isqrt(n))
    L = z.log()
    baby = [acb(1)] + [(j * L).exp() for j in range(1, B)]
    total = acb(0)
    for k in range(0, n, B):
        block = acb(0)
        for j, c in enumerate(nums[k:k + B]):
            if c:
                block += c * baby[j]
        total += block if k == 0 else (k * L).exp() * block
    return total / s.denominator


def eval_series(s: TruncatedSeries, z: acb, weight: int, derivative: int = 0, bits: int | None = None) -> acb:
    """Ball for the full (untruncated) E-type series whose head is ``s``.

    ``s`` must be theta^derivative E_weight truncated at its order N; the
    tail beyond N is enclosed rigorously.
    """
    bits = bits or balls.DEFAULT_BITS
    with balls.workprec(bits):
        z = balls.cball(z)
        t = balls.abs_upper(z)
        if not t < 1:
            raise OutsideDisk("evaluation point must satisfy |z| + radius < 1")
        C, a = growth_constants(weight, derivative)
        head = horner_series(s, z)
        return head + balls.error_ball(tail_bound(C, a, s.trunc_order, t))


def eisenstein_at(weight: int, z, bits: int | None = None, derivative: int = 0) -> acb:
    """E_weight (or theta^derivative of it) at q = z, with N chosen from ``bits``."""
    bits = bits or balls.DEFAULT_BITS
    with balls.workprec(bits + 20):
        z = balls.cball(z)
        t = balls.abs_upper(z)
        if not t < 1:
            raise OutsideDisk("evaluation point must satisfy |z| + radius < 1")
        C, a = growth_constants(weight, derivative)
        N = terms_needed(C, a, t, bits)
    s = eisenstein_series(weight, N)
    for _ in range(derivative):
        s = theta(s)
    return eval_series(s, z, weight, derivative, bits + 20)


def q_of_tau(tau: acb, bits: int) -> acb:
    with balls.workprec(bits):
        return (2 * balls.cball(tau)).exp_pi_i()


def eisenstein_at_tau(weight: int, tau, bits: int) -> acb:
    with balls.workprec(bits + 20):
        tau = balls.cball(tau)
        if not tau.imag > 0:
            raise OutsideDisk("tau must lie in the upper half plane")
        q = q_of_tau(tau, bits + 20)
    return eisenstein_at(weight, q, bits)


@dataclass(frozen=True)
class TransformResidual:
    gamma: tuple[int, int, int, int]
    tau: acb
    residuals: tuple[acb, acb, acb]

    def all_contain_zero(self) -> bool:
        return all(r.contains(0) for r in self.residuals)

    def widths(self) -> list[arb]:
        return [balls.max_radius(r) for r in self.residuals]


def quasimodular_transform_check(gamma: Sequence[int], tau, bits: int = 150) -> TransformResidual:
    """Residuals of the weight 2/4/6 transformation laws at (gamma, tau).

    The E2 law is read off from the right action
    (t1, t2, t3).(x^-1 y; 0 x) = (-12xy + x^2 t1, x^4 t2, x^6 t3)
    with x = c tau + d and y = -c/(2 pi i):
        E2(gamma tau) = x^2 E2(tau) + 12 c x / (2 pi i).
    """
    a, b, c, d = (int(v) for v in gamma)
    if a * d - b * c != 1:
        raise NotUnimodular(f"det = {a * d - b * c}")
    with balls.workprec(bits + 30):
        tau = balls.cball(tau)
        if (a, b, c, d) == (1, 0, 0, 1):
            zero = acb(0)
            return TransformResidual((a, b, c, d), tau, (zero, zero, zero))
        if not tau.imag > 0:
            raise OutsideDisk("tau must lie in the upper half plane")
        gtau = (a * tau + b) / (c * tau + d)
        x = c * tau + d
        e = {w: eisenstein_at_tau(w, tau, bits + 30) for w in (2, 4, 6)}
        g = {w: eisenstein_at_tau(w, gtau, bits + 30) for w in (2, 4, 6)}
        y = -c / balls.two_pi_i()
        r2 = g[2] - (-12 * x * y + x ** 2 * e[2])
        r4 = g[4] - x ** 4 * e[4]
        r6 = g[6] - x ** 6 * e[6]
    return TransformResidual((a, b, c, d), tau, (r2, r4, r6))


def evaluate_on_phi(P: SparsePoly, z, bits: int) -> acb:
    """P(z, E2(z), E4(z), E6(z)) as a ball."""
    with balls.workprec(bits):
        z = balls.cball(z)
        vals = [z] + [eisenstein_at(w, z, bits) for w in (2, 4, 6)]
        total = acb(0)
        for e, coeff in P.terms.items():
            term = balls.cball(coeff)
            for v, k in zip(vals, e):
                if k:
                    term = term * v ** k
            total += term
        return total


def log_abs(x: acb) -> arb | None:
    """log|x| as a ball, or None when the ball contains 0."""
    if x.contains(0):
        return None
    return abs(x).log()


def philippon_window(z, d_range: Iterable[int], k_schedule, bits: int = 400,
                     window: tuple[float, float] | None = None) -> list[dict]:
    """Diagnostic rows (d, m_d, k, log|Q_d(phi(z))|, deg Q_d, log height Q_d).

    ``k_schedule`` is either an iterable of k values used for every d or a
    callable d -> iterable.  ``window = (a, b)`` flags rows whose
    log|Q_d(...)|/d^4 falls outside [-a, -b].  Purely illustrative.
    """
    rows = []
    for d in d_range:
        rep = construct_aux_poly(d)
        ks = k_schedule(d) if callable(k_schedule) else k_schedule
        for k in ks:
            Q = iterated_wk(rep.P, k)
            val = evaluate_on_phi(Q, z, bits)
            with balls.workprec(bits):
                la = log_abs(val)
                upper = abs(val).upper().log() if not val.contains(0) or abs(val).upper() > 0 else None
            h = Q.height()
            row = {
                "d": d,
                "m_d": rep.achieved_ord,
                "k": k,
                "log_abs_Q": la,
                "log_abs_Q_upper": upper,
                "deg_Q": Q.degree(),
                "log_height_Q": math.log(h) if h > 0 else float("-inf"),
            }
            if la is not None:
                ratio = float(la.mid()) / d ** 4
                row["ratio"] = ratio
                if window is not None:
                    row["in_window"] = -window[0] <= ratio <= -window[1]
            rows.append(row)
    return rows
