"""Liouville-type lower bounds |alpha - p/q| > c / q^d along continued-fraction convergents.

alpha is a real algebraic number given by its integer minimal polynomial and
isolated in an exact rational interval.  The constant is the one produced by
the mean value argument: c = min(1, 1/(2M)) with M = sum_{i>=1} |P^(i)(alpha)/i!|.
All gaps are exact rationals computed from the isolating interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import sympy
from flint import arb, fmpq

from . import balls
from .errors import NoRealRoot, ReduciblePolynomial


@dataclass(frozen=True)
class ConvergentRecord:
    p: int
    q: int
    gap: Fraction  # certified lower bound for q^d |alpha - p/q|
    passed: bool

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "gap_lower": _frac_str(self.gap),
                "gap_approx": float(self.gap), "pass": self.passed}


@dataclass(frozen=True)
class LiouvilleReport:
    minpoly: tuple[int, ...]
    degree: int
    root_interval: tuple[Fraction, Fraction]
    M: arb
    c: arb
    records: list[ConvergentRecord]

    @property
    def verdict(self) -> bool:
        return all(r.passed for r in self.records)

    def to_json(self, bits: int = 128) -> dict:
        return {
            "minpoly": list(self.minpoly),
            "degree": self.degree,
            "root_interval": [_frac_str(x) for x in self.root_interval],
            "M": balls.ball_json(self.M, bits),
            "c": balls.ball_json(self.c, bits),
            "convergents": [r.to_json() for r in self.records],
            "verdict": "pass" if self.verdict else "fail",
        }


def _frac_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _as_poly(coeffs: Sequence[int]) -> sympy.Poly:
    x = sympy.Symbol("x")
    coeffs = [int(c) for c in coeffs]
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]
    return sympy.Poly(coeffs, x, domain="ZZ")


def _check_irreducible(P: sympy.Poly) -> None:
    if P.degree() < 2:
        raise ReduciblePolynomial("need an irreducible polynomial of degree >= 2")
    _, factors = P.factor_list()
    if len(factors) != 1 or factors[0][1] != 1:
        raise ReduciblePolynomial(f"{P.as_expr()} factors over Q")


def isolate_root(P: sympy.Poly, which: int = -1, width: Fraction = Fraction(1, 2 ** 20)) -> tuple[Fraction, Fraction]:
    """Rational interval around a real root (default: the largest)."""
    ivs = P.intervals(eps=sympy.Rational(width.numerator, width.denominator))
    if not ivs:
        raise NoRealRoot(f"{P.as_expr()} has no real root")
    (lo, hi), _ = ivs[which]
    return Fraction(int(lo.p), int(lo.q)), Fraction(int(hi.p), int(hi.q))


def _refine(P: sympy.Poly, lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    Q = lambda t: sympy.Rational(t.numerator, t.denominator)  # noqa: E731
    a, b = P.refine_root(Q(lo), Q(hi), eps=Q(width))
    return Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))


def _cf(x: Fraction):
    n, d = x.numerator, x.denominator
    while d:
        a = n // d
        yield a
        n, d = d, n - a * d


def convergents(P: sympy.Poly, lo: Fraction, hi: Fraction, q_max: int) -> tuple[list[tuple[int, int]], Fraction, Fraction]:
    """Convergents p/q (q <= q_max) of the root in [lo, hi].

    A partial quotient is accepted only when both interval ends agree on it;
    otherwise the interval is refined, never guessed.
    """
    width = hi - lo
    while True:
        out = []
        p0, q0, p1, q1 = 0, 1, 1, 0
        decided = True
        for a, b in zip(_cf(lo), _cf(hi)):
            if a != b:
                decided = False
                break
            p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
            if q1 > q_max:
                return out, lo, hi
            out.append((p1, q1))
        else:
            decided = False
        if decided:
            return out, lo, hi
        width = min(width, hi - lo) / 2 ** 32
        lo, hi = _refine(P, lo, hi, width)


def derivative_sum(P: sympy.Poly, lo: Fraction, hi: Fraction, bits: int) -> arb:
    """Ball for M = sum_{i>=1} |P^(i)(alpha) / i!| with alpha in [lo, hi]."""
    with balls.workprec(bits):
        mid = (lo + hi) / 2
        alpha = arb(fmpq(mid.numerator, mid.denominator), arb(fmpq((hi - lo).numerator, (hi - lo).denominator)).upper())
        M = arb(0)
        D = P
        for i in range(1, P.degree() + 1):
            D = D.diff()
            val = arb(0)
            for c in D.all_coeffs():
                val = val * alpha + int(c)
            M += abs(val) / math.factorial(i)
        return M


def liouville_check(minpoly: Sequence[int], q_max: int, root: int = -1, bits: int = 128) -> LiouvilleReport:
    """Certify q^d |alpha - p/q| >= c for every convergent with q <= q_max.

    ``minpoly`` lists integer coefficients leading term first; ``root`` picks
    the real root by index in increasing order (default the largest).
    """
    P = _as_poly(minpoly)
    _check_irreducible(P)
    d = P.degree()
    lo, hi = isolate_root(P, root)
    convs, lo, hi = convergents(P, lo, hi, q_max)
    # tighten so M is sharp and every convergent lies strictly outside the interval
    lo, hi = _refine(P, lo, hi, Fraction(1, (q_max + 1) ** 2 * 2 ** bits))
    M = derivative_sum(P, lo, hi, bits)
    with balls.workprec(bits):
        c = arb(1) if not 2 * M > 1 else 1 / (2 * M)
        if (2 * M).contains(1):
            c = arb(1).union(1 / (2 * M))
        c_up = c.upper()
    records = []
    for p, q in convs:
        x = Fraction(p, q)
        while lo <= x <= hi:
            lo, hi = _refine(P, lo, hi, (hi - lo) / 2 ** 32)
        dist = lo - x if x < lo else x - hi
        gap = q ** d * dist
        with balls.workprec(bits):
            ok = bool(arb(fmpq(gap.numerator, gap.denominator)) >= c_up)
        records.append(ConvergentRecord(p, q, gap, ok))
    coeffs = tuple(int(c) for c in P.all_coeffs())
    return LiouvilleReport(coeffs, d, (lo, hi), M, c, records)
