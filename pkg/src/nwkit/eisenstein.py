"""Exact q-expansions of E2, E4, E6, Delta and j.

The normalising constants of the Eisenstein series are not taken on trust:
they are solved for from the low-order coefficients of the Ramanujan system
and the resulting series are then checked against the full system to the
requested order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import isqrt

from .errors import TruncationTooShort
from .series import LaurentTruncated, TruncatedSeries, series_div, theta

WEIGHTS = (2, 4, 6)


def sigma(m: int, e: int) -> int:
    """Sum of ``d**e`` over the positive divisors ``d`` of ``m``."""
    if m < 1:
        raise ValueError("sigma needs m >= 1")
    total = 0
    for d in range(1, isqrt(m) + 1):
        if m % d == 0:
            total += d ** e
            other = m // d
            if other != d:
                total += other ** e
    return total


def _sigma_table(n: int, e: int) -> list[int]:
    # sieve form of sigma; agrees with sigma() (tested)
    table = [0] * (n + 1)
    for d in range(1, n + 1):
        p = d ** e
        for m in range(d, n + 1, d):
            table[m] += p
    return table


def _raw_series(weight: int, c: int, n: int) -> TruncatedSeries:
    tab = _sigma_table(n, weight - 1)
    coeffs = [1] + [c * tab[m] for m in range(1, n + 1)]
    return TruncatedSeries.from_ints(coeffs, n)


def ramanujan_residuals(e2: TruncatedSeries, e4: TruncatedSeries, e6: TruncatedSeries):
    """The three differences theta(E) - RHS of the Ramanujan system."""
    return (
        theta(e2) - (e2 * e2 - e4) / 12,
        theta(e4) - (e2 * e4 - e6) / 3,
        theta(e6) - (e2 * e6 - e4 * e4) / 2,
    )


@lru_cache(maxsize=1)
def normalising_constants() -> tuple[int, int, int]:
    """Solve for (c2, c4, c6) from the Ramanujan system.

    With E_w = 1 + c_w * sum sigma_{w-1}(m) q^m, the q^1 coefficients give
    the linear relations c4 = -10 c2 and c6 = c2 - 2 c4.  The q^2 coefficient
    of the E2 equation,
        12 * 2 s1 c2 = 2 s1 c2 + c2^2 - s3 c4     (s1 = sigma_1(2), s3 = sigma_3(2)),
    is quadratic in c2 and its nonzero root fixes the normalisation.
    """
    s1, s3 = sigma(2, 1), sigma(2, 3)
    c2 = Fraction(22 * s1 - 10 * s3)
    c4 = -10 * c2
    c6 = c2 - 2 * c4
    consts = (int(c2), int(c4), int(c6))
    e2, e4, e6 = (_raw_series(w, c, 4) for w, c in zip(WEIGHTS, consts))
    if any(not r.is_zero() for r in ramanujan_residuals(e2, e4, e6)):
        raise AssertionError("Ramanujan system fails for the solved constants")
    return consts


@lru_cache(maxsize=16)
def _validated(n: int) -> tuple[TruncatedSeries, TruncatedSeries, TruncatedSeries]:
    consts = normalising_constants()
    e2, e4, e6 = (_raw_series(w, c, n) for w, c in zip(WEIGHTS, consts))
    if any(not r.is_zero() for r in ramanujan_residuals(e2, e4, e6)):
        raise AssertionError(f"Ramanujan system fails at order {n}")
    return e2, e4, e6


def eisenstein_series(weight: int, N: int, validate: bool = True) -> TruncatedSeries:
    """E_weight to order ``N`` (N+1 coefficients)."""
    if weight not in WEIGHTS:
        raise ValueError(f"weight must be one of {WEIGHTS}")
    if N < 0:
        raise ValueError("N must be >= 0")
    if validate:
        return _validated(N)[WEIGHTS.index(weight)]
    return _raw_series(weight, normalising_constants()[WEIGHTS.index(weight)], N)


def delta_series(N: int) -> TruncatedSeries:
    """Delta = (E4^3 - E6^2)/1728 to order N."""
    if N < 1:
        raise ValueError("N must be >= 1")
    e4 = eisenstein_series(4, N)
    e6 = eisenstein_series(6, N)
    d = (e4 ** 3 - e6 * e6) / 1728
    if not d.is_integral():
        raise AssertionError("Delta lost integrality")
    return d


def j_series(N: int) -> LaurentTruncated:
    """j = E4^3/Delta with an explicit simple pole; body known to order N-1."""
    e4 = eisenstein_series(4, N)
    body = series_div(e4.truncate(N - 1) ** 3, delta_series(N).shift_down(1))
    return LaurentTruncated(1, body)


@dataclass(frozen=True)
class PhiBundle:
    """The curve q -> (q, E2, E4, E6) truncated at a common order."""

    q_series: TruncatedSeries
    e2: TruncatedSeries
    e4: TruncatedSeries
    e6: TruncatedSeries

    @property
    def trunc_order(self) -> int:
        return self.e2.trunc_order

    def coordinates(self) -> tuple[TruncatedSeries, ...]:
        return (self.q_series, self.e2, self.e4, self.e6)


@lru_cache(maxsize=8)
def phi_bundle(N: int) -> PhiBundle:
    e2, e4, e6 = _validated(N)
    return PhiBundle(TruncatedSeries.monomial(1, N), e2, e4, e6)


def compose_poly(P, bundle: PhiBundle, N: int | None = None) -> TruncatedSeries:
    """Substitute x0 <- q, x1 <- E2, x2 <- E4, x3 <- E6 exactly."""
    if N is None:
        N = bundle.trunc_order
    if N > bundle.trunc_order:
        raise TruncationTooShort(f"bundle known to order {bundle.trunc_order}, {N} requested")
    if P.nvars != 4:
        raise ValueError("compose_poly expects a polynomial in x0..x3")
    coords = [c.truncate(N) for c in bundle.coordinates()]
    return P.evaluate(coords, one=TruncatedSeries.constant(1, N))
