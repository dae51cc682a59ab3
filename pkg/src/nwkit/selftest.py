"""The exact-identity suite behind ``nwkit selftest``."""

from __future__ import annotations

import random

from .derivations import apply, iterated_wk, ramanujan_w
from .eisenstein import compose_poly, delta_series, eisenstein_series, j_series, phi_bundle, ramanujan_residuals
from .series import TruncatedSeries, q_derivative, theta
from .zeroscope import random_polynomial


def _tally(results) -> dict:
    results = list(results)
    return {"passed": sum(bool(r) for r in results), "total": len(results)}


def ramanujan_ok(N: int) -> bool:
    e2, e4, e6 = (eisenstein_series(w, N) for w in (2, 4, 6))
    return all(r.is_zero() for r in ramanujan_residuals(e2, e4, e6))


def theta_log_delta_ok(N: int) -> bool:
    d = delta_series(N)
    return theta(d) == eisenstein_series(2, N) * d


def lemma_j_identities(N: int) -> list[bool]:
    """j, theta j, theta^2 j times E4^3 - E6^2 against their numerators."""
    e2, e4, e6 = (eisenstein_series(w, N) for w in (2, 4, 6))
    den = e4 ** 3 - e6 ** 2
    j = j_series(N + 1)
    tj = j.theta()
    ttj = tj.theta()
    rhs = (1728 * e4 ** 3,
           -1728 * e4 ** 2 * e6,
           288 * (-e2 * e4 ** 2 * e6 + 4 * e4 * e6 ** 2 + 3 * e4 ** 4))
    out = []
    for lhs, r in zip((j, tj, ttj), rhs):
        s = (lhs * den).to_series()
        n = min(s.trunc_order, r.trunc_order)
        out.append(s.truncate(n) == r.truncate(n))
    return out


def leibniz_checks(rng: random.Random, count: int) -> list[bool]:
    w = ramanujan_w()
    out = []
    for _ in range(count):
        P, Q = random_polynomial(rng, 3), random_polynomial(rng, 3)
        out.append(apply(w, P * Q) == apply(w, P) * Q + P * apply(w, Q))
    return out


def bridge_ok(P, k: int, N: int) -> bool:
    """(12 q)^k d^k/dq^k (P o phi) == (w^[k] P) o phi."""
    b = phi_bundle(N)
    lhs = q_derivative(compose_poly(P, b), k) * (12 ** k)
    return lhs == compose_poly(iterated_wk(P, k), b)


def bridge_checks(rng: random.Random, count: int, N: int) -> list[bool]:
    return [bridge_ok(random_polynomial(rng, 3), rng.randint(0, 4), N) for _ in range(count)]


def roundtrip_ok(N: int) -> bool:
    s = eisenstein_series(6, N) * TruncatedSeries([1, 0, 1], N) / 7
    return TruncatedSeries.loads(s.dumps()) == s


def run_selftest(N: int = 120, seed: int = 0) -> dict:
    rng = random.Random(seed)
    checks = {
        "ramanujan_system": _tally([ramanujan_ok(N)]),
        "theta_log_delta": _tally([theta_log_delta_ok(N)]),
        "j_identities": _tally(lemma_j_identities(N)),
        "leibniz": _tally(leibniz_checks(rng, 10)),
        "wk_bridge": _tally(bridge_checks(rng, 5, min(N, 60))),
        "series_roundtrip": _tally([roundtrip_ok(N)]),
    }
    return {"truncation": N, "seed": seed, "checks": checks,
            "all_passed": all(c["passed"] == c["total"] for c in checks.values())}
