"""One test per acceptance criterion; each prints a [PASS]/[FAIL] line."""

import itertools
import math
import random
import subprocess
import sys
import time
from fractions import Fraction

import pytest
from flint import acb, arb

from nwkit import balls
from nwkit.auxpoly import construct_aux_poly
from nwkit.derivations import Derivation, darboux_search, invariance_check, ramanujan_w
from nwkit.eisenstein import compose_poly, eisenstein_series, phi_bundle, ramanujan_residuals
from nwkit.evalnum import eisenstein_at_tau, quasimodular_transform_check
from nwkit.liouville import liouville_check
from nwkit.periods import (EllipticCurveQ, elliptic_periods, hyperelliptic_c5_periods,
                           lemniscatic_omega, prop47_check)
from nwkit.poly import SparsePoly, parse_poly
from nwkit.selftest import bridge_ok, lemma_j_identities, theta_log_delta_ok
from nwkit.series import Indeterminate, ord_
from nwkit.siegel import IntMatrix, siegel_bound_holds, small_kernel
from nwkit.special import gamma
from nwkit.zeroscope import aux_family, cauchy_gap_check, multiplicity_scan, random_polynomial


def test_ac01_ramanujan_system(verdict):
    t0 = time.perf_counter()
    e2, e4, e6 = (eisenstein_series(w, 500, validate=False) for w in (2, 4, 6))
    zero = all(r.is_zero() and r.trunc_order >= 499 for r in ramanujan_residuals(e2, e4, e6))
    dt = time.perf_counter() - t0
    ok = zero and dt < 10
    verdict("AC01", ok, f"(R) exact to N=500 in {dt:.2f}s")
    assert ok


def test_ac02_theta_log_delta_and_j(verdict):
    a = theta_log_delta_ok(500)
    b = lemma_j_identities(200)
    ok = a and all(b)
    verdict("AC02", ok, f"theta Delta = E2 Delta at N=500: {a}; j identities at N=200: {b}")
    assert ok


def test_ac03_wk_bridge(verdict):
    rng = random.Random(20261019)
    cases = []
    for _ in range(20):
        P = random_polynomial(rng, 3)
        k = rng.randint(0, 4)
        cases.append((P.degree(), k, bridge_ok(P, k, 100)))
    ok = len(cases) == 20 and all(c[2] for c in cases) and {c[1] for c in cases} >= {1, 4}
    verdict("AC03", ok, f"{sum(c[2] for c in cases)}/20 exact at N=100, k used {sorted({c[1] for c in cases})}")
    assert ok


def test_ac04_auxiliary_pipeline(verdict):
    t0 = time.perf_counter()
    details, ok = [], True
    for d in (1, 2, 3):
        rep = construct_aux_poly(d)
        s = math.comb(d + 4, 4)
        r = s // 2
        # independent recertification of the order at a generous truncation
        f = compose_poly(rep.P, phi_bundle(2 * r + 20))
        m = ord_(f)
        good = (rep.r == r and rep.s == s and not rep.P.is_zero() and rep.P.is_integral()
                and rep.P.degree() <= d and not isinstance(m, Indeterminate) and m >= r
                and siegel_bound_holds(int(rep.P.height()), r, s, rep.matrix_height))
        ok &= good
        details.append(f"d={d} r={r} ord={m} H={rep.P.height()}")
    dt = time.perf_counter() - t0
    ok &= dt < 300
    verdict("AC04", ok, "; ".join(details) + f" ({dt:.1f}s)")
    assert ok


def _brute_min_norm(T: IntMatrix) -> int:
    for rad in itertools.count(1):
        for v in itertools.product(range(-rad, rad + 1), repeat=T.ncols):
            if max(abs(x) for x in v) == rad and not any(T.apply(v)):
                return rad


def test_ac05_siegel_solver(verdict):
    rng = random.Random(5)
    passed = 0
    for _ in range(100):
        s = rng.randint(2, 40)
        r = rng.randint(1, max(1, (3 * s) // 4))
        b = rng.choice([1, 10, 1000, 10 ** 6])
        T = IntMatrix.from_rows([[rng.randint(-b, b) for _ in range(s)] for _ in range(r)], s)
        v = small_kernel(T)
        norm = max(abs(x) for x in v)
        if any(v) and not any(T.apply(v)) and siegel_bound_holds(norm, r, s, T.height()):
            passed += 1
    tiny_ok = tiny = 0
    for _ in range(40):
        s = rng.randint(2, 4)
        r = rng.randint(1, s - 1)
        T = IntMatrix.from_rows([[rng.randint(-3, 3) for _ in range(s)] for _ in range(r)], s)
        v = small_kernel(T)
        tiny += 1
        tiny_ok += (not any(T.apply(v))) and max(abs(x) for x in v) == _brute_min_norm(T)
    ok = passed == 100 and tiny_ok == tiny
    verdict("AC05", ok, f"{passed}/100 random instances; {tiny_ok}/{tiny} tiny instances match enumeration")
    assert ok


def test_ac06_zero_lemma_envelope(verdict):
    family = [random_polynomial(random.Random(600 + i), 4, centre=bool(i % 2)) for i in range(200)]
    family += aux_family(3)
    recs, summary = multiplicity_scan(family, N=64)
    ok = (summary["count"] == 203 and not summary["any_indeterminate"]
          and all(r.truncation <= 400_000 and r.ord <= 48 * r.deg ** 4 for r in recs))
    verdict("AC06", ok, f"{summary['count']} polynomials, max ord/deg^4 = {summary['max_ratio']}, "
                        f"max ord = {summary['max_ord']}")
    assert ok


def test_ac07_invariance_and_darboux(verdict):
    w = ramanujan_w()
    x0 = SparsePoly.var(0, 4)
    c0 = invariance_check(w, x0)
    disc = parse_poly("x2^3 - x3^2")
    c1 = invariance_check(w, disc)
    a = bool(c0) and c0 == SparsePoly.const(1, 4)
    b = bool(c1) and c1 == SparsePoly.var(1, 4)
    D = Derivation((parse_poly("1", 2, ("x", "y")), parse_poly("y", 2, ("x", "y"))), ("x", "y"))
    found = darboux_search(D, 4)
    y = SparsePoly.var(1, 2)
    c = [(p, lam) for p, lam in found] == [(y, 1)]
    ok = a and b and c
    verdict("AC07", ok, f"w(x0)=x0: {a}; w(x2^3-x3^2)=x1(x2^3-x3^2): {b}; darboux maxdeg 4 -> "
                        f"{[(p.to_str(('x', 'y')), str(lam)) for p, lam in found]}")
    assert ok


def _random_curves(count: int, seed: int):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        u, v = rng.randint(-10, 10), rng.randint(-10, 10)
        if u ** 3 != 27 * v ** 2 and (u, v) not in [(c.u, c.v) for c in out]:
            out.append(EllipticCurveQ(Fraction(u), Fraction(v)))
    return out


def test_ac08_legendre_relation(verdict):
    worst, slowest, ok = arb(0), 0.0, True
    for curve in _random_curves(20, 8):
        t0 = time.perf_counter()
        pd = elliptic_periods(curve, 400)
        dt = time.perf_counter() - t0
        with balls.workprec(400):
            res = pd.omega1 * pd.eta2 - pd.omega2 * pd.eta1 - balls.two_pi_i()
            err = balls.abs_upper(res)
            good = err < arb("1e-80") and dt < 30
        ok &= bool(good)
        slowest = max(slowest, dt)
        if err > worst:
            worst = err
    verdict("AC08", ok, f"20 curves, max |residual| <= {worst.mid().str(3)}, slowest {slowest:.2f}s")
    assert ok


def test_ac09_lemniscatic_example(verdict):
    bits = 400
    pd = elliptic_periods(EllipticCurveQ(Fraction(4), Fraction(0)), bits)
    with balls.workprec(bits):
        ref = gamma(Fraction(1, 4), bits) ** 2 / (2 * (2 * arb.pi()).sqrt())
        tight = balls.max_radius(pd.omega1) < arb("1e-80") and balls.max_radius(ref) < arb("1e-80")
        overlap = pd.omega1.overlaps(ref)
        tau_ok = balls.abs_upper(pd.tau - acb(0, 1)) < arb("1e-60") and pd.tau.overlaps(acb(0, 1))
    ok = bool(tight and overlap and tau_ok)
    verdict("AC09", ok, f"omega1 = {pd.omega1.real.str(20)}, tau contains i: {tau_ok}")
    assert ok


def test_ac10_prop47(verdict):
    curves = [(4, 0), (0, 4), (1, 1), (-3, 5), (7, -2)]
    results = [prop47_check(EllipticCurveQ(Fraction(u), Fraction(v)), 300) for u, v in curves]
    a = all(r.all_contain_zero() for r in results)
    bits = 200
    e4 = eisenstein_at_tau(4, acb(0, 1), bits)
    with balls.workprec(bits):
        # omega1 of the lemniscatic curve from Gamma(1/4), not from the period code
        om = gamma(Fraction(1, 4), bits) ** 2 / (2 * (2 * arb.pi()).sqrt())
        ind = 48 * (om / (2 * arb.pi())) ** 4
        diff = abs(arb(e4.real.mid()) - ind.mid())
    b = diff < arb("1e-20")
    ok = bool(a and b)
    verdict("AC10", ok, f"residuals contain 0 for {curves}: {a}; |E4(i) - 48(omega1/2pi)^4| = {diff.mid().str(3)}")
    assert ok


def _random_gamma(rng: random.Random):
    while True:
        c, d = rng.randint(-20, 20), rng.randint(-20, 20)
        if math.gcd(c, d) != 1:
            continue
        if c == 0:
            return (d, rng.randint(-20, 20), 0, d)
        # a d - b c = 1, then shift (a, b) by multiples of (c, d) into range
        a = pow(d, -1, abs(c)) if abs(c) > 1 else 0
        b = (a * d - 1) // c
        for k in range(-40, 41):
            aa, bb = a + k * c, b + k * d
            if abs(aa) <= 20 and abs(bb) <= 20:
                assert aa * d - bb * c == 1
                return (aa, bb, c, d)


def test_ac11_quasimodular_transformation(verdict):
    rng = random.Random(11)
    ok, n = True, 0
    widths = []
    while n < 10:
        g = _random_gamma(rng)
        a, b, c, d = g
        s = Fraction(rng.randint(50, 200), 100)
        if c:
            # Im tau and Im(gamma tau) both of size about 1/|c|
            tau = (Fraction(-d, c) + Fraction(rng.randint(-20, 20), 100 * abs(c)), s / abs(c))
        else:
            tau = (Fraction(rng.randint(-50, 50), 100), s)
        with balls.workprec(200):
            t = acb(balls.exact(tau[0]), balls.exact(tau[1]))
        res = quasimodular_transform_check(g, t, 150)
        width = max(float(w) for w in res.widths())
        # an unbounded ball contains 0 vacuously, so the radius is checked too
        ok &= res.all_contain_zero() and width < 1e-20
        widths.append(width)
        n += 1
    verdict("AC11", ok, f"10 (gamma, tau), all residuals contain 0; widest radius {max(widths):.1e}")
    assert ok


def test_ac12_hyperelliptic(verdict):
    ok, worst = True, 0.0
    for k, l in itertools.product(range(1, 5), repeat=2):
        r = hyperelliptic_c5_periods(k, l, 200)
        good = (r.value.overlaps(r.closed_form) and r.residual.contains(0)
                and balls.max_radius(r.residual) < arb("1e-30"))
        ok &= bool(good)
        worst = max(worst, float(balls.max_radius(r.residual)))
    verdict("AC12", ok, f"16 (k, l) pairs overlap the Beta closed form; widest residual radius {worst:.1e}")
    assert ok


def test_ac13_liouville(verdict):
    r2 = liouville_check([1, 0, -2], 10 ** 6)
    with balls.workprec(128):
        m_ref = 2 * arb(2).sqrt() + 1
        c_ref = 1 / (2 * m_ref)
    m_ok = r2.M.overlaps(m_ref) and r2.c.overlaps(c_ref)
    r3 = liouville_check([1, 0, 0, -2], 10 ** 6)
    qs = [rec.q for rec in r2.records]
    ok = bool(m_ok and r2.verdict and r3.verdict and max(qs) <= 10 ** 6 and len(r3.records) > 5)
    verdict("AC13", ok, f"sqrt2: {len(r2.records)} convergents, c = {r2.c.mid().str(6)}; "
                        f"cbrt2: {len(r3.records)} convergents, c = {r3.c.mid().str(6)}")
    assert ok


def test_ac14_cauchy_gap(verdict):
    bits = 240
    with balls.workprec(bits):
        z = acb(-2 * arb.pi()).exp()
    out, ok = [], True
    for d in (1, 2, 3):
        P = construct_aux_poly(d).P
        rep = cauchy_gap_check(P, z, Fraction(1, 2), bits=bits)
        ok &= rep.passed and rep.certified
        out.append(f"d={d} ord={rep.ord} gap={rep.gap().mid().str(5)}")
    verdict("AC14", ok, "; ".join(out))
    assert ok


DETERMINISM_RUNS = [
    ["qexp", "--weight", "j", "--terms", "20"],
    ["zeroscan", "--family", "random:30:3:7"],
    ["eval", "--weight", "4", "--z", "0.1,0.2", "--bits", "120"],
    ["periods", "--curve", "1,1", "--bits", "128"],
    ["liouville", "--minpoly", "1,0,-2", "--qmax", "1000"],
    ["selftest", "--truncation", "40"],
    ["auxpoly", "--degree", "1-2", "--report", "csv"],
]


def test_ac15_determinism(verdict):
    same = []
    for args in DETERMINISM_RUNS:
        outs = [subprocess.run([sys.executable, "-m", "nwkit.cli", *args], capture_output=True, check=True).stdout
                for _ in range(2)]
        same.append(outs[0] == outs[1] and len(outs[0]) > 0)
    ok = all(same)
    verdict("AC15", ok, f"{sum(same)}/{len(same)} subcommands byte-identical across two runs")
    assert ok
