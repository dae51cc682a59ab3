"""Periods and quasi-periods of y^2 = 4x^3 - ux - v and of y^2 = 1 - x^5.

Elliptic case.  For roots a, b, c of 4x^3 - ux - v the cycle around the
segment [a, b] has

    int dx/y = 2 int_a^b dx/y,   x = a + (b - a) sin^2 t,
    dx/y = -i dt / (sqrt(a - c) sqrt(1 + k sin^2 t)),   k = (b - a)/(a - c),

so the endpoint square roots disappear and the integrand is pi-periodic and
analytic in a strip: the trapezoid rule converges geometrically with a
provable remainder.  The square root is taken with its cut rotated away from
the segment 1 -> 1 + k traced by 1 + k sin^2 t for real t, so the branch is
continuous along the path.  The same substitution handles x dx/y.

The two cycles share a pivot root (the middle one after sorting by real then
imaginary part; for collinear roots this is the geometric middle), which
makes them a homology basis with intersection number +-1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from flint import acb, arb, fmpz_poly

from . import balls
from .errors import Degenerate, ParseError, PrecisionExhausted
from .evalnum import eisenstein_at
from .quadrature import integrate, periodic_trapezoid
from .special import beta


@dataclass(frozen=True)
class EllipticCurveQ:
    u: Fraction
    v: Fraction

    def __post_init__(self):
        object.__setattr__(self, "u", Fraction(self.u))
        object.__setattr__(self, "v", Fraction(self.v))
        if self.discriminant() == 0:
            raise Degenerate(f"u^3 - 27 v^2 = 0 for (u, v) = ({self.u}, {self.v})")

    def discriminant(self) -> Fraction:
        return self.u ** 3 - 27 * self.v ** 2

    @classmethod
    def parse(cls, text: str) -> "EllipticCurveQ":
        try:
            u, v = (Fraction(p.strip()) for p in text.split(","))
        except ValueError as exc:
            raise ParseError("curve must be given as 'u,v' with rational entries") from exc
        return cls(u, v)

    def cubic(self) -> fmpz_poly:
        """4x^3 - ux - v with denominators cleared (ascending coefficients)."""
        den = math.lcm(self.u.denominator, self.v.denominator)
        return fmpz_poly([int(-self.v * den), int(-self.u * den), 0, 4 * den])

    def roots(self, bits: int) -> list[acb]:
        with balls.workprec(bits):
            rts = [r for r, m in self.cubic().complex_roots()]
        return sorted(rts, key=lambda z: (float(z.real.mid()), float(z.imag.mid())))

    def __str__(self) -> str:
        return f"{self.u},{self.v}"


@dataclass(frozen=True)
class PeriodData:
    curve: EllipticCurveQ
    bits: int
    omega1: acb
    omega2: acb
    eta1: acb
    eta2: acb
    tau: acb
    legendre_residual: acb
    raw: tuple[acb, acb, acb, acb] = field(default=None, repr=False)

    def to_json(self) -> dict:
        j = lambda z: balls.ball_json(z, self.bits)  # noqa: E731
        out = {
            "curve": {"u": _frac(self.curve.u), "v": _frac(self.curve.v)},
            "omega1": j(self.omega1),
            "omega2": j(self.omega2),
            "eta1": j(self.eta1),
            "eta2": j(self.eta2),
            "tau": j(self.tau),
            "legendre_residual": j(self.legendre_residual),
            "legendre_contains_zero": self.legendre_residual.contains(0),
        }
        if self.raw is not None:
            w1, w2, _, _ = self.raw
            with balls.workprec(self.bits):
                out["tau_as_computed"] = j(w2 / w1)
        return out


def _frac(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def segment_cycle(a: acb, b: acb, c: acb, bits: int) -> tuple[acb, acb]:
    """(int dx/y, int x dx/y) over the cycle around [a, b]; c is the third root."""
    with balls.workprec(bits + 30):
        kappa = (b - a) / (a - c)
        w = 1 + kappa
        if w.real < 0 and w.imag.contains(0):
            raise Degenerate("third root lies on the integration segment")
        rot = (w / abs(w)).sqrt()       # e^{i beta}, beta = arg(w)/2
        half_rot = rot.sqrt()           # e^{i beta/2}
        pre = -acb(0, 1) / (a - c).sqrt()
        ba = b - a

        def root_u(t: acb) -> acb | None:
            s = t.sin()
            u = (1 + kappa * s * s) / rot
            if not u.real > 0:
                return None
            return half_rot * u.sqrt()

        def f_omega(t: acb) -> acb | None:
            r = root_u(t)
            return None if r is None else pre / r

        def f_eta(t: acb) -> acb | None:
            r = root_u(t)
            if r is None:
                return None
            s = t.sin()
            return pre * (a + ba * s * s) / r

        # zeros of 1 + k sin^2 t sit at |Im t| = |Im asin(sqrt(-1/k))|
        z0 = (-1 / kappa).sqrt().asin()
        dist = abs(z0.imag)
        strip = arb(min(3.0, 0.75 * float(dist.lower()))) if dist.lower() > 0 else arb("0.01")
        if not strip > 0:
            strip = arb("0.01")
        om = periodic_trapezoid(f_omega, bits + 10, strip)
        et = periodic_trapezoid(f_eta, bits + 10, strip)
        return om, et


def _apply(basis, m):
    """Right action on (w1, w2, e1, e2) of (a b; c d) sending tau to (a tau + b)/(c tau + d)."""
    w1, w2, e1, e2 = basis
    a, b, c, d = m
    return (c * w2 + d * w1, a * w2 + b * w1, c * e2 + d * e1, a * e2 + b * e1)


def _reduce(basis, bits):
    """Move tau = w2/w1 into the closed fundamental domain by S and T steps."""
    with balls.workprec(bits):
        for _ in range(10_000):
            tau = basis[1] / basis[0]
            n = round(float(tau.real.mid()))
            if n:
                basis = _apply(basis, (1, -n, 0, 1))
                continue
            if float(abs(tau).mid()) < 1 - 1e-30:
                basis = _apply(basis, (0, -1, 1, 0))
                continue
            return basis
    raise PrecisionExhausted("fundamental-domain reduction did not terminate")


def _in_closed_domain(tau: acb, tol: float = 1e-25) -> bool:
    x = float(tau.real.mid())
    r2 = float((tau.real.mid() ** 2 + tau.imag.mid() ** 2))
    return abs(x) <= 0.5 + tol and r2 >= 1 - tol


def _canonical(basis, bits):
    """Deterministic representative among bases whose tau lies in the closed domain.

    On the boundary of the domain several oriented bases give equally reduced
    tau; the one whose omega1 has the largest real part (then imaginary part)
    is kept.
    """
    words = [(1, 0, 0, 1), (0, -1, 1, 0), (1, 1, 0, 1), (1, -1, 0, 1), (0, -1, 1, 1),
             (0, -1, 1, -1), (1, -1, 1, 0), (-1, -1, 1, 0), (1, 1, -1, 0), (-1, 1, -1, 0)]
    best, best_key = None, None
    with balls.workprec(bits):
        for m in words:
            for sign in (1, -1):
                cand = tuple(sign * z for z in _apply(basis, m))
                tau = cand[1] / cand[0]
                if not _in_closed_domain(tau):
                    continue
                key = (round(float(cand[0].real.mid()), 12), round(float(cand[0].imag.mid()), 12))
                if best_key is None or key > best_key:
                    best, best_key = cand, key
    return best if best is not None else basis


def elliptic_periods(curve: EllipticCurveQ, bits: int | None = None, reduce: bool = True) -> PeriodData:
    """Periods, quasi-periods, tau and the Legendre residual of the curve.

    The basis is oriented so that Im tau > 0.  With ``reduce`` it is moved by
    SL2(Z) so that tau lies in the standard fundamental domain; the computed
    basis is kept in ``raw``.
    """
    bits = bits or balls.DEFAULT_BITS
    work = bits + 40
    r = curve.roots(work + 20)
    pivot, lo, hi = r[1], r[0], r[2]
    wA, eA = segment_cycle(pivot, lo, hi, work)
    wB, eB = segment_cycle(pivot, hi, lo, work)
    with balls.workprec(work):
        basis = (wA, wB, eA, eB)
        tau = wB / wA
        if tau.imag.contains(0):
            raise PrecisionExhausted("cannot decide the orientation of the period basis")
        if tau.imag < 0:
            basis = (wA, -wB, eA, -eB)
        raw = basis
        if reduce:
            basis = _canonical(_reduce(basis, work), work)
        w1, w2, e1, e2 = basis
        tau = w2 / w1
        leg = w1 * e2 - w2 * e1 - balls.two_pi_i()
    return PeriodData(curve, bits, w1, w2, e1, e2, tau, leg, raw)


@dataclass(frozen=True)
class Prop47Result:
    periods: PeriodData
    lhs: tuple[acb, acb, acb]      # E2, E4, E6 at tau
    rhs: tuple[acb, acb, acb]      # period expressions
    residuals: tuple[acb, acb, acb]

    def all_contain_zero(self) -> bool:
        return all(r.contains(0) for r in self.residuals)

    def to_json(self) -> dict:
        b = self.periods.bits
        names = ("E2", "E4", "E6")
        return {
            "periods": self.periods.to_json(),
            "values": {n: balls.ball_json(v, b) for n, v in zip(names, self.lhs)},
            "period_side": {n: balls.ball_json(v, b) for n, v in zip(names, self.rhs)},
            "residuals": {n: balls.ball_json(v, b) for n, v in zip(names, self.residuals)},
            "all_contain_zero": self.all_contain_zero(),
        }


def prop47_check(curve: EllipticCurveQ, bits: int | None = None) -> Prop47Result:
    """E2, E4, E6 at tau versus 12 (w1/2pi i)(e1/2pi i), 12u (w1/2pi i)^4, -216v (w1/2pi i)^6."""
    bits = bits or balls.DEFAULT_BITS
    pd = elliptic_periods(curve, bits + 20)
    work = bits + 40
    with balls.workprec(work):
        q = (2 * pd.tau).exp_pi_i()
        tpi = balls.two_pi_i()
        o = pd.omega1 / tpi
        e = pd.eta1 / tpi
        u, v = balls.exact(curve.u), balls.exact(curve.v)
        rhs = (12 * o * e, 12 * u * o ** 4, -216 * v * o ** 6)
    lhs = tuple(eisenstein_at(w, q, work) for w in (2, 4, 6))
    with balls.workprec(work):
        res = tuple(x - y for x, y in zip(lhs, rhs))
    return Prop47Result(replace(pd, bits=bits), lhs, rhs, res)


def lemniscatic_omega(bits: int) -> acb:
    """Gamma(1/4)^2 / (2 sqrt(2 pi)) from the Gamma routine."""
    from .special import gamma

    g = gamma(Fraction(1, 4), bits + 20)
    with balls.workprec(bits + 20):
        return g * g / (2 * (2 * arb.pi()).sqrt())


# -- the genus-2 curve y^2 = 1 - x^5 -------------------------------------------------

def c5_segment(k: int, bits: int | None = None) -> acb:
    """int_0^1 x^(k-1) (1 - x^5)^(-1/2) dx by certified quadrature.

    On [3/4, 1] substitute x = 1 - s^2, where 1 - x^5 = s^2 (5 - 10w + 10w^2 - 5w^3 + w^4)
    with w = s^2, removing the square-root singularity at x = 1.
    """
    if not 1 <= k <= 4:
        raise ValueError("k must be in 1..4")
    bits = bits or balls.DEFAULT_BITS

    def head(x: acb) -> acb | None:
        r = 1 - x ** 5
        if not r.real > 0:
            return None
        return x ** (k - 1) / r.sqrt()

    def tail(s: acb) -> acb | None:
        w = s * s
        phi = 5 - 10 * w + 10 * w ** 2 - 5 * w ** 3 + w ** 4
        if not phi.real > 0:
            return None
        return 2 * (1 - w) ** (k - 1) / phi.sqrt()

    a = integrate(head, Fraction(0), Fraction(3, 4), bits + 10)
    b = integrate(tail, Fraction(0), Fraction(1, 2), bits + 10)
    with balls.workprec(bits + 30):
        return a + b


@dataclass(frozen=True)
class HyperellipticResult:
    k: int
    l: int
    value: acb
    closed_form: acb
    residual: acb
    bits: int

    def to_json(self) -> dict:
        j = lambda z: balls.ball_json(z, self.bits)  # noqa: E731
        return {"k": self.k, "l": self.l, "quadrature": j(self.value), "closed_form": j(self.closed_form),
                "residual": j(self.residual), "contains_zero": self.residual.contains(0)}


def zeta5(bits: int) -> acb:
    with balls.workprec(bits):
        return acb(arb(2) / 5).exp_pi_i()


def hyperelliptic_c5_periods(k: int, l: int, bits: int | None = None) -> HyperellipticResult:
    """Loop integral of x^(k-1) dx / y over gamma_l = sigma^(l-1) gamma on y^2 = 1 - x^5.

    gamma = eps . (tau eps)^-1 . (sigma tau eps) . (sigma eps)^-1 with
    sigma(x, y) = (zeta x, y) and tau(x, y) = (x, -y); the pullbacks
    tau* w_k = -w_k and sigma* w_k = zeta^k w_k turn the four pieces into
    multiples of the base segment integral.
    """
    if not (1 <= k <= 4 and 1 <= l <= 4):
        raise ValueError("k and l must be in 1..4")
    bits = bits or balls.DEFAULT_BITS
    work = bits + 20
    I = c5_segment(k, work)
    B = beta(Fraction(k, 5), Fraction(1, 2), work)
    with balls.workprec(work):
        z = zeta5(work)
        zk = z ** k
        # eps, tau eps, sigma tau eps, sigma eps with signs from the composite path
        pieces = [(1, acb(1)), (-1, acb(-1)), (1, -zk), (-1, zk)]
        loop = sum((sign * fac * I for sign, fac in pieces), acb(0))
        shift = z ** (k * (l - 1))
        value = shift * loop
        closed = acb(2) / 5 * shift * (1 - zk) * B
        return HyperellipticResult(k, l, value, closed, value - closed, bits)
