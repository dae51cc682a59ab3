"""Auxiliary polynomials vanishing to high order along q -> (q, E2, E4, E6)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .derivations import monomial_basis
from .eisenstein import compose_poly, phi_bundle
from .errors import NotUnderdetermined, TruncationTooShort
from .poly import SparsePoly
from .series import Indeterminate, TruncatedSeries, ord_
from .siegel import IntMatrix, siegel_bound, siegel_bound_holds, small_kernel


def monomial_count(d: int) -> int:
    return math.comb(d + 4, 4)


def default_order(d: int) -> int:
    return monomial_count(d) // 2


def quartic_order(d: int) -> int:
    """floor(d^4 / 4); only feasible (below the monomial count) for d <= 4."""
    return d ** 4 // 4


def columns(d: int) -> list[tuple[int, int, int, int]]:
    return monomial_basis(4, d)


def monomial_series(J: tuple[int, int, int, int], n: int) -> TruncatedSeries:
    """q^j0 E2^j1 E4^j2 E6^j3 to order n."""
    b = phi_bundle(n)
    return compose_poly(SparsePoly.monomial(J), b)


def build_coeff_matrix(d: int, r: int, N: int | None = None) -> IntMatrix:
    """r x s matrix whose column J holds the first r coefficients of x^J o phi."""
    if d < 1:
        raise ValueError("degree budget d must be >= 1")
    if N is None:
        N = r
    if N < r:
        raise TruncationTooShort(f"need truncation >= {r}, got {N}")
    n = max(r - 1, 0)
    b = phi_bundle(max(N, 1))
    e2, e4, e6 = (s.truncate(n) for s in (b.e2, b.e4, b.e6))
    one = TruncatedSeries.constant(1, n)
    pw = {1: [one], 2: [one], 3: [one]}
    for k in range(1, d + 1):
        pw[1].append(pw[1][-1] * e2)
        pw[2].append(pw[2][-1] * e4)
        pw[3].append(pw[3][-1] * e6)
    cols = []
    for J in columns(d):
        s = pw[1][J[1]] * pw[2][J[2]] * pw[3][J[3]]
        ints = s.int_coeffs()
        cols.append([0] * J[0] + list(ints[: max(r - J[0], 0)]))
    rows = [[col[i] if i < len(col) else 0 for col in cols] for i in range(r)]
    return IntMatrix.from_rows(rows, len(cols))


def bound_floor(r: int, s: int, b: int) -> int:
    """Largest integer H with H <= 2 (2 s b)^(r/(s-r))."""
    lo, hi = 1, 2
    while siegel_bound_holds(hi, r, s, b):
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if siegel_bound_holds(mid, r, s, b):
            lo = mid
        else:
            hi = mid
    return lo


@dataclass(frozen=True)
class AuxPolyReport:
    d: int
    r: int
    s: int
    P: SparsePoly
    achieved_ord: int
    height: int
    siegel_bound: int
    matrix_height: int

    @property
    def degree(self) -> int:
        return self.P.degree()

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "r": self.r,
            "s": self.s,
            "P_d": self.P.to_str(),
            "P_d_terms": self.P.to_json(),
            "degree": self.degree,
            "achieved_ord": self.achieved_ord,
            "height": self.height,
            "siegel_bound_floor": self.siegel_bound,
            "siegel_bound": siegel_bound(self.r, self.s, self.matrix_height),
            "matrix_height": self.matrix_height,
        }


def certify_order(P: SparsePoly, r: int) -> int:
    """ord of P o phi computed from scratch at truncation 2r+8 (doubling if needed)."""
    n = 2 * r + 8
    while True:
        k = ord_(compose_poly(P, phi_bundle(n)))
        if not isinstance(k, Indeterminate):
            return k
        n *= 2


def construct_aux_poly(d: int, r: int | None = None, quartic: bool = False) -> AuxPolyReport:
    """Small integer P_d of degree <= d with ord(P_d o phi) >= r."""
    if d < 1:
        raise ValueError("degree budget d must be >= 1")
    s = monomial_count(d)
    if r is None:
        r = quartic_order(d) if quartic else default_order(d)
    if r >= s:
        raise NotUnderdetermined(f"r = {r} equations but only s = {s} monomials")
    T = build_coeff_matrix(d, r)
    v = small_kernel(T)
    P = SparsePoly(4, dict(zip(columns(d), v)))
    achieved = certify_order(P, r)
    if achieved < r:
        raise AssertionError(f"certified order {achieved} below required {r}")
    b = T.height()
    return AuxPolyReport(d, r, s, P, achieved, int(P.height()), bound_floor(r, s, b), b)


def height_growth_table(d_range) -> list[dict]:
    rows = []
    for d in d_range:
        rep = construct_aux_poly(d)
        log_h = math.log(rep.height) if rep.height > 0 else 0.0
        scale = d * math.log(d)
        rows.append({
            "d": d,
            "r": rep.r,
            "log_height": log_h,
            "ratio_to_dlogd": (log_h / scale) if scale > 0 else None,
        })
    return rows
