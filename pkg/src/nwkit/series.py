"""Exact truncated power series in one variable q.

A :class:`TruncatedSeries` of truncation order ``N`` knows the coefficients of
``q^0 .. q^N`` exactly and nothing beyond.  Coefficients are rationals stored
as integer numerators over one shared positive denominator, which keeps the
hot paths (products, theta) in pure integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence, Union

from .errors import DivisorVanishes, OrderMismatch, ParseError, TruncationTooShort

Number = Union[int, Fraction]


@dataclass(frozen=True)
class Indeterminate:
    """Order sentinel: every stored coefficient up to ``at`` vanishes."""

    at: int

    def __str__(self) -> str:
        return f"indeterminate-at-{self.at}"


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


# -- Kronecker substitution --------------------------------------------------
# Coefficient lists are packed into one big integer, multiplied with CPython's
# Karatsuba, and unpacked as signed digits.  Packing/unpacking is done by
# divide and conquer so long series do not go quadratic in the bit length.

def _pack(c: Sequence[int], lo: int, hi: int, bits: int) -> int:
    if hi - lo <= 16:
        x = 0
        for i in range(hi - 1, lo - 1, -1):
            x = (x << bits) + c[i]
        return x
    mid = (lo + hi) // 2
    return _pack(c, lo, mid, bits) + (_pack(c, mid, hi, bits) << (bits * (mid - lo)))


def _unpack(z: int, count: int, bits: int, out: list[int]) -> None:
    if count <= 16:
        half = 1 << (bits - 1)
        mask = (1 << bits) - 1
        for _ in range(count):
            d = z & mask
            if d >= half:
                d -= 1 << bits
            out.append(d)
            z = (z - d) >> bits
        return
    k = count // 2
    width = bits * k
    low = z & ((1 << width) - 1)
    if low >= 1 << (width - 1):
        low -= 1 << width
    _unpack(low, k, bits, out)
    _unpack((z - low) >> width, count - k, bits, out)


def _convolve(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    """First ``n`` coefficients of the product of two integer sequences."""
    a = a[:n]
    b = b[:n]
    if not a or not b:
        return [0] * n
    if min(len(a), len(b)) <= 8:
        out = [0] * n
        for i, x in enumerate(a):
            if x:
                for j in range(min(len(b), n - i)):
                    out[i + j] += x * b[j]
        return out
    ma = max(abs(x) for x in a).bit_length()
    mb = max(abs(x) for x in b).bit_length()
    bits = ma + mb + min(len(a), len(b)).bit_length() + 2
    z = _pack(a, 0, len(a), bits) * _pack(b, 0, len(b), bits)
    out: list[int] = []
    _unpack(z, min(n, len(a) + len(b) - 1), bits, out)
    out.extend([0] * (n - len(out)))
    return out


class TruncatedSeries:
    """Power series in q known exactly up to ``q^N`` (``N = trunc_order``)."""

    __slots__ = ("_num", "_den", "trunc_order")

    def __init__(self, coeffs: Iterable[Number], trunc_order: int | None = None):
        fr = [Fraction(c) for c in coeffs]
        if trunc_order is None:
            trunc_order = len(fr) - 1
        if trunc_order < 0:
            raise ValueError("truncation order must be >= 0")
        if len(fr) > trunc_order + 1:
            fr = fr[: trunc_order + 1]
        fr.extend([Fraction(0)] * (trunc_order + 1 - len(fr)))
        den = 1
        for c in fr:
            den = _lcm(den, c.denominator)
        num = [c.numerator * (den // c.denominator) for c in fr]
        self._set(num, den, trunc_order)

    def _set(self, num: list[int], den: int, trunc_order: int) -> None:
        g = den
        for x in num:
            if g == 1:
                break
            g = gcd(g, x)
        if g > 1:
            num = [x // g for x in num]
            den //= g
        self._num = tuple(num)
        self._den = den
        self.trunc_order = trunc_order

    @classmethod
    def _raw(cls, num: list[int], den: int, trunc_order: int) -> "TruncatedSeries":
        s = cls.__new__(cls)
        s._set(num, den, trunc_order)
        return s

    @classmethod
    def from_ints(cls, coeffs: Sequence[int], trunc_order: int | None = None) -> "TruncatedSeries":
        if trunc_order is None:
            trunc_order = len(coeffs) - 1
        num = list(coeffs[: trunc_order + 1])
        num.extend([0] * (trunc_order + 1 - len(num)))
        return cls._raw(num, 1, trunc_order)

    @classmethod
    def constant(cls, c: Number, trunc_order: int) -> "TruncatedSeries":
        return cls([c], trunc_order)

    @classmethod
    def monomial(cls, k: int, trunc_order: int, c: Number = 1) -> "TruncatedSeries":
        coeffs = [Fraction(0)] * (trunc_order + 1)
        if k <= trunc_order:
            coeffs[k] = Fraction(c)
        return cls(coeffs, trunc_order)

    # -- access ---------------------------------------------------------------
    @property
    def N(self) -> int:
        return self.trunc_order

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        d = self._den
        return tuple(Fraction(x, d) for x in self._num)

    @property
    def numerators(self) -> tuple[int, ...]:
        return self._num

    @property
    def denominator(self) -> int:
        return self._den

    def is_integral(self) -> bool:
        return self._den == 1

    def int_coeffs(self) -> tuple[int, ...]:
        if self._den != 1:
            raise ValueError("series has non-integer coefficients")
        return self._num

    def coeff(self, i: int) -> Fraction:
        if i < 0:
            return Fraction(0)
        if i > self.trunc_order:
            raise TruncationTooShort(f"coefficient {i} requested, series known to order {self.trunc_order}")
        return Fraction(self._num[i], self._den)

    __getitem__ = coeff

    def truncate(self, n: int) -> "TruncatedSeries":
        if n > self.trunc_order:
            raise TruncationTooShort(f"cannot extend order {self.trunc_order} to {n}")
        return TruncatedSeries._raw(list(self._num[: n + 1]), self._den, n)

    def is_zero(self) -> bool:
        return not any(self._num)

    # -- ring operations -------------------------------------------------------
    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        if isinstance(other, (int, Fraction)):
            return TruncatedSeries.constant(other, self.trunc_order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = min(self.trunc_order, other.trunc_order)
        den = _lcm(self._den, other._den)
        fa, fb = den // self._den, den // other._den
        num = [self._num[i] * fa + other._num[i] * fb for i in range(n + 1)]
        return TruncatedSeries._raw(num, den, n)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries._raw([-x for x in self._num], self._den, self.trunc_order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            return TruncatedSeries._raw([x * c.numerator for x in self._num], self._den * c.denominator,
                                        self.trunc_order)
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.trunc_order, other.trunc_order)
        num = _convolve(self._num, other._num, n + 1)
        return TruncatedSeries._raw(num, self._den * other._den, n)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers: use series_div")
        result = TruncatedSeries.constant(1, self.trunc_order)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise DivisorVanishes("division by the zero constant")
            return self * (1 / Fraction(other))
        if isinstance(other, TruncatedSeries):
            return series_div(self, other)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.trunc_order == other.trunc_order and self._den == other._den
                and self._num == other._num)

    def __hash__(self):
        return hash((self._num, self._den, self.trunc_order))

    def agrees_with(self, other: "TruncatedSeries") -> bool:
        """Coefficientwise equality up to the common truncation order."""
        n = min(self.trunc_order, other.trunc_order)
        return self.truncate(n) == other.truncate(n)

    def __repr__(self) -> str:
        shown = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if self.trunc_order >= 6 else ""
        return f"TruncatedSeries([{shown}{more}], N={self.trunc_order})"

    # -- analysis -------------------------------------------------------------
    def theta(self) -> "TruncatedSeries":
        return theta(self)

    def ord(self) -> int | Indeterminate:
        return ord_(self)

    def shift_down(self, k: int) -> "TruncatedSeries":
        """Divide by q^k; the first k coefficients must vanish."""
        if any(self._num[:k]):
            raise OrderMismatch(f"series does not vanish to order {k}")
        return TruncatedSeries._raw(list(self._num[k:]), self._den, self.trunc_order - k)

    # -- serialization ----------------------------------------------------------
    def dumps(self) -> str:
        lines = [f"N={self.trunc_order}"]
        for i, c in enumerate(self.coeffs):
            lines.append(f"{i} {c.numerator}/{c.denominator}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "TruncatedSeries":
        rows = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not rows or not rows[0].startswith("N="):
            raise ParseError("missing 'N=<order>' header")
        n = int(rows[0][2:])
        coeffs = [Fraction(0)] * (n + 1)
        for ln in rows[1:]:
            try:
                idx, val = ln.split()
                coeffs[int(idx)] = Fraction(val)
            except (ValueError, IndexError) as exc:
                raise ParseError(f"bad series line {ln!r}") from exc
        return cls(coeffs, n)


def theta(s: TruncatedSeries) -> TruncatedSeries:
    """The Euler operator q d/dq."""
    return TruncatedSeries._raw([i * x for i, x in enumerate(s._num)], s._den, s.trunc_order)


def q_derivative(s: TruncatedSeries, k: int) -> TruncatedSeries:
    """q^k d^k/dq^k, i.e. coefficient n times n (n-1) ... (n-k+1)."""
    out = []
    for n, x in enumerate(s._num):
        f = 1
        for i in range(k):
            f *= n - i
        out.append(f * x)
    return TruncatedSeries._raw(out, s._den, s.trunc_order)


def ord_(s: TruncatedSeries) -> int | Indeterminate:
    for i, x in enumerate(s._num):
        if x:
            return i
    return Indeterminate(s.trunc_order)


def series_add(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a + b


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def series_div(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Exact quotient a/b after cancelling the common power of q.

    If ``ord(b) = k`` the result is known to order ``min(N_a, N_b) - k``.
    """
    k = ord_(b)
    if isinstance(k, Indeterminate):
        raise DivisorVanishes(f"divisor vanishes to its truncation order {b.trunc_order}")
    ka = ord_(a)
    if not isinstance(ka, Indeterminate) and ka < k:
        raise OrderMismatch(f"ord(numerator)={ka} < ord(divisor)={k}")
    n = min(a.trunc_order, b.trunc_order) - k
    if n < 0:
        raise OrderMismatch("numerator truncation shorter than divisor order")
    an = a._num[k:k + n + 1]
    bn = b._num[k:k + n + 1]
    b0 = bn[0]
    if abs(b0) == 1:
        out = [0] * (n + 1)
        for i in range(n + 1):
            acc = an[i]
            for j in range(1, i + 1):
                if bn[j]:
                    acc -= bn[j] * out[i - j]
            out[i] = acc * b0
        return TruncatedSeries._raw(out, a._den, n) * Fraction(b._den)
    outf = [Fraction(0)] * (n + 1)
    for i in range(n + 1):
        acc = Fraction(an[i])
        for j in range(1, i + 1):
            if bn[j]:
                acc -= bn[j] * outf[i - j]
        outf[i] = acc / b0
    return TruncatedSeries(outf, n) * Fraction(b._den, a._den)


class LaurentTruncated:
    """``q^(-pole_order) * body``; known up to exponent ``body.N - pole_order``."""

    __slots__ = ("pole_order", "body")

    def __init__(self, pole_order: int, body: TruncatedSeries):
        if pole_order < 0:
            raise ValueError("pole order must be >= 0")
        k = ord_(body)
        if pole_order > 0 and isinstance(k, Indeterminate):
            raise ValueError("zero body with a pole")
        if pole_order > 0 and k > 0:
            shift = min(k, pole_order)
            body = body.shift_down(shift)
            pole_order -= shift
        self.pole_order = pole_order
        self.body = body

    @property
    def top_exponent(self) -> int:
        return self.body.trunc_order - self.pole_order

    def coeff(self, e: int) -> Fraction:
        return self.body.coeff(e + self.pole_order)

    def theta(self) -> "LaurentTruncated":
        m = self.pole_order
        return LaurentTruncated(m, theta(self.body) - self.body * m)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return LaurentTruncated(self.pole_order, self.body * other)
        if isinstance(other, LaurentTruncated):
            return LaurentTruncated(self.pole_order + other.pole_order, self.body * other.body)
        if isinstance(other, (int, Fraction)):
            return LaurentTruncated(self.pole_order, self.body * other)
        return NotImplemented

    __rmul__ = __mul__

    def __add__(self, other):
        if isinstance(other, TruncatedSeries):
            other = LaurentTruncated(0, other)
        if not isinstance(other, LaurentTruncated):
            return NotImplemented
        m = max(self.pole_order, other.pole_order)
        a = _raise_pole(self, m)
        b = _raise_pole(other, m)
        return LaurentTruncated(m, a + b)

    def __sub__(self, other):
        return self + other * (-1)

    def to_series(self) -> TruncatedSeries:
        if self.pole_order:
            raise OrderMismatch(f"Laurent series has a pole of order {self.pole_order}")
        return self.body

    def __eq__(self, other):
        if not isinstance(other, LaurentTruncated):
            return NotImplemented
        return self.pole_order == other.pole_order and self.body == other.body

    def __repr__(self) -> str:
        return f"LaurentTruncated(pole_order={self.pole_order}, body={self.body!r})"


def _raise_pole(s: LaurentTruncated, m: int) -> TruncatedSeries:
    k = m - s.pole_order
    num = [0] * k + list(s.body._num)
    return TruncatedSeries._raw(num, s.body._den, s.body.trunc_order + k)
