"""Empirical vanishing orders of P(q, E2, E4, E6) and Cauchy-inequality checks."""

from __future__ import annotations

import math
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from flint import arb

from . import balls
from .auxpoly import construct_aux_poly
from .derivations import monomial_basis
from .eisenstein import compose_poly, normalising_constants, phi_bundle
from .errors import EnvelopeViolation, IndeterminateOrder, OutsideDisk, ParseError, TailBoundFailure
from .evalnum import evaluate_on_phi
from .poly import SparsePoly, parse_poly
from .series import Indeterminate, TruncatedSeries, ord_

ENVELOPE_C = 48
TRUNCATION_CEILING = 400_000


@dataclass(frozen=True)
class MultiplicityRecord:
    P: SparsePoly
    deg: int
    ord: int | Indeterminate
    truncation: int

    @property
    def determinate(self) -> bool:
        return not isinstance(self.ord, Indeterminate)

    @property
    def ratio(self) -> Fraction | None:
        if not self.determinate or self.deg <= 0:
            return None
        return Fraction(self.ord, self.deg ** 4)

    def to_json(self) -> dict:
        r = self.ratio
        return {
            "P": self.P.to_str(),
            "deg": self.deg,
            "ord": self.ord if self.determinate else str(self.ord),
            "ratio": None if r is None else _frac(r),
            "truncation": self.truncation,
        }


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def vanishing_order(P: SparsePoly, N: int = 64, ceiling: int = TRUNCATION_CEILING) -> tuple[int | Indeterminate, int]:
    """ord_0(P o phi), doubling the truncation while it is indeterminate."""
    n = max(N, 1)
    while True:
        k = ord_(compose_poly(P, phi_bundle(n)))
        if not isinstance(k, Indeterminate) or n >= ceiling:
            return k, n
        n = min(2 * n, ceiling)


def record_for(P: SparsePoly, N: int = 64, ceiling: int = TRUNCATION_CEILING) -> MultiplicityRecord:
    k, n = vanishing_order(P, N, ceiling)
    return MultiplicityRecord(P, P.degree(), k, n)


# -- families ----------------------------------------------------------------------

def coordinate_family() -> list[SparsePoly]:
    return [SparsePoly.var(i, 4) for i in range(4)]


def random_polynomial(rng: random.Random, maxdeg: int, centre: bool = False) -> SparsePoly:
    """Integer polynomial with coefficients in [-10, 10] and degree in [1, maxdeg].

    With ``centre`` the constant term of P o phi is cancelled (P(0,1,1,1) = 0)
    so the composition vanishes at q = 0.
    """
    deg = rng.randint(1, maxdeg)
    basis = monomial_basis(4, deg)
    top = [e for e in basis if sum(e) == deg]
    while True:
        terms = {rng.choice(top): rng.choice([c for c in range(-10, 11) if c])}
        for _ in range(rng.randint(0, 5)):
            terms[rng.choice(basis)] = rng.randint(-10, 10)
        P = SparsePoly(4, terms)
        if centre:
            at_zero = sum((c for e, c in P.terms.items() if e[0] == 0), Fraction(0))
            if at_zero:
                P = P - SparsePoly.const(at_zero, 4) * SparsePoly.monomial((0, 0, 0, 0))
        if P.degree() >= 1:
            return P


def random_family(count: int, maxdeg: int, seed: int) -> list[SparsePoly]:
    """Every other member is centred so that half the family has ord >= 1."""
    rng = random.Random(seed)
    return [random_polynomial(rng, maxdeg, centre=bool(i % 2)) for i in range(count)]


def aux_family(dmax: int) -> list[SparsePoly]:
    return [construct_aux_poly(d).P for d in range(1, dmax + 1)]


def file_family(path: str | Path) -> list[SparsePoly]:
    """One polynomial per line in x0..x3; blank lines and '#' comments skipped."""
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_poly(line, 4))
    return out


def parse_family(spec: str) -> list[SparsePoly]:
    kind, _, rest = spec.partition(":")
    try:
        if kind == "coords":
            return coordinate_family()
        if kind == "random":
            count, maxdeg, seed = (int(x) for x in rest.split(":"))
            return random_family(count, maxdeg, seed)
        if kind == "aux":
            return aux_family(int(rest))
        if kind == "file":
            return file_family(rest)
    except (ValueError, OSError) as exc:
        raise ParseError(f"bad family spec {spec!r}: {exc}") from exc
    raise ParseError(f"unknown family kind {kind!r}; expected coords, random, aux or file")


# -- scan --------------------------------------------------------------------------

def _sort_key(rec: MultiplicityRecord):
    r = rec.ratio
    return (r is None, -(r if r is not None else 0), rec.P.to_str())


def check_envelope(rec: MultiplicityRecord, C: int = ENVELOPE_C) -> None:
    if rec.determinate and rec.deg >= 1 and rec.ord > C * rec.deg ** 4:
        raise EnvelopeViolation(
            f"ord {rec.ord} > {C}*deg^4 = {C * rec.deg ** 4} for P = {rec.P.to_str()}")


def multiplicity_scan(family: Sequence[SparsePoly] | str, N: int = 64, jobs: int = 1,
                      ceiling: int = TRUNCATION_CEILING, envelope: int = ENVELOPE_C) -> tuple[list[MultiplicityRecord], dict]:
    """Records sorted by ratio (descending) and a summary.

    Every determinate record is confronted with ord <= envelope * deg^4;
    the first violation aborts the scan with EnvelopeViolation.
    """
    if isinstance(family, str):
        family = parse_family(family)
    family = list(family)
    if jobs > 1 and len(family) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            recs = list(ex.map(record_for, family, [N] * len(family), [ceiling] * len(family)))
    else:
        recs = [record_for(P, N, ceiling) for P in family]
    for rec in recs:
        check_envelope(rec, envelope)
    recs.sort(key=_sort_key)
    ratios = [r.ratio for r in recs if r.ratio is not None]
    max_ratio = max(ratios, default=None)
    summary = {
        "count": len(recs),
        "max_ratio": None if max_ratio is None else _frac(max_ratio),
        "empirical_C": None if max_ratio is None else float(max_ratio),
        "max_ord": max((r.ord for r in recs if r.determinate), default=None),
        "any_indeterminate": any(not r.determinate for r in recs),
        "envelope_C": envelope,
    }
    return recs, summary


# -- Cauchy inequality -------------------------------------------------------------

def _eulerian_sum(n: int, t: Fraction) -> Fraction:
    """sum_{m>=1} m^n t^m in closed form (0 <= t < 1)."""
    if n == 0:
        return t / (1 - t)
    num = Fraction(0)
    for k in range(n):
        a = sum((-1) ** j * math.comb(n + 1, j) * (k + 1 - j) ** n for j in range(k + 1))
        num += a * t ** k
    return t * num / (1 - t) ** (n + 1)


def majorant_series(weight: int, N: int) -> TruncatedSeries:
    """1 + |c_w| sum m^w q^m, a coefficientwise majorant of E_w."""
    c = abs(normalising_constants()[(2, 4, 6).index(weight)])
    return TruncatedSeries.from_ints([1] + [c * m ** weight for m in range(1, N + 1)], N)


def majorant_value(weight: int, t: Fraction) -> Fraction:
    c = abs(normalising_constants()[(2, 4, 6).index(weight)])
    return 1 + c * _eulerian_sum(weight, t)


def _abs_poly(P: SparsePoly) -> SparsePoly:
    return P.map_coeffs(abs)


def max_modulus_bound(P: SparsePoly, rho: Fraction, N: int) -> Fraction:
    """Exact rational upper bound for max_{|q| = rho} |P o phi (q)|.

    Stored coefficients contribute sum |f_i| rho^i; the tail is the tail of
    the majorant |P|(t, E2^, E4^, E6^), whose value at rho is known in closed
    form, minus its own stored head.
    """
    f = compose_poly(P, phi_bundle(N))
    head = sum((abs(c) * rho ** i for i, c in enumerate(f.coeffs) if c), Fraction(0))
    Pa = _abs_poly(P)
    one = TruncatedSeries.constant(1, N)
    maj = Pa.evaluate([TruncatedSeries.monomial(1, N)] + [majorant_series(w, N) for w in (2, 4, 6)], one=one)
    maj_head = sum((c * rho ** i for i, c in enumerate(maj.coeffs) if c), Fraction(0))
    maj_full = Pa.evaluate([rho] + [majorant_value(w, rho) for w in (2, 4, 6)], one=Fraction(1))
    tail = maj_full - maj_head
    if tail < 0:
        raise TailBoundFailure("majorant tail came out negative")
    return head + tail


@dataclass(frozen=True)
class CauchyGapReport:
    P: SparsePoly
    ord: int
    rho: Fraction
    M: Fraction
    lhs: arb          # log|f(z)|, or an upper bound ball when f(z) may vanish
    rhs: arb          # m log(|z|/rho) + log M(rho)
    passed: bool
    certified: bool

    def gap(self) -> arb:
        return self.rhs - self.lhs

    def to_json(self, bits: int) -> dict:
        return {
            "P": self.P.to_str(),
            "ord": self.ord,
            "rho": _frac(self.rho),
            "log_M_rho": balls.ball_json(balls.exact(self.M).log(), bits),
            "lhs_log_abs_f": balls.ball_json(self.lhs, bits),
            "rhs": balls.ball_json(self.rhs, bits),
            "gap": balls.ball_json(self.gap(), bits),
            "pass": self.passed,
            "strict": self.certified,
        }


def cauchy_gap_check(P: SparsePoly, z, rho, bits: int = 200, N: int | None = None) -> CauchyGapReport:
    """Check log|f(z)| <= m log(|z|/rho) + log M(rho) for f = P o phi.

    ``passed`` means the upper ends compare correctly (equality cases such as
    f = q are allowed to overlap); ``certified`` means lhs lies entirely below rhs.
    """
    rho = Fraction(rho)
    if not 0 < rho < 1:
        raise TailBoundFailure("need 0 < rho < 1")
    m, n = vanishing_order(P, 64 if N is None else N, ceiling=4096)
    if isinstance(m, Indeterminate):
        raise IndeterminateOrder(f"ord of P o phi undetermined up to {n}")
    n = max(n, 2 * m + 32)
    with balls.workprec(bits + 20):
        zb = balls.cball(z)
        if not balls.abs_upper(zb) < balls.exact(rho):
            raise OutsideDisk("need |z| < rho")
    M = max_modulus_bound(P, rho, n)
    if M <= 0:
        raise IndeterminateOrder("P o phi vanishes identically to the working truncation")
    fz = evaluate_on_phi(P, zb, bits + 20)
    with balls.workprec(bits + 20):
        absf = abs(fz)
        if absf.contains(0):
            up = absf.upper()
            lhs = arb(up).log() if up > 0 else arb("-inf")
        else:
            lhs = absf.log()
        rhs = m * (abs(zb) / balls.exact(rho)).log() + balls.exact(M).log()
        passed = bool(arb(lhs.upper()) <= arb(rhs.upper()))
        certified = bool(arb(lhs.upper()) < arb(rhs.lower()))
    return CauchyGapReport(P, m, rho, M, lhs, rhs, passed, certified)
