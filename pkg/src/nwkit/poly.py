"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import ArityMismatch, ParseError

Exps = tuple[int, ...]


def default_names(nvars: int) -> tuple[str, ...]:
    if nvars == 2:
        return ("x", "y")
    return tuple(f"x{i}" for i in range(nvars))


def grlex_key(e: Exps):
    return (sum(e), e)


class SparsePoly:
    """Polynomial in ``nvars`` variables as a map exponent-vector -> Fraction."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[Exps, object] | None = None):
        self.nvars = nvars
        clean: dict[Exps, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(a) for a in e)
            if len(e) != nvars or min(e, default=0) < 0:
                raise ValueError(f"bad exponent vector {e} for {nvars} variables")
            c = Fraction(c)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
                if not clean[e]:
                    del clean[e]
        self.terms = clean

    @classmethod
    def _from_clean(cls, nvars: int, terms: dict[Exps, Fraction]) -> "SparsePoly":
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        return p

    @classmethod
    def var(cls, i: int, nvars: int) -> "SparsePoly":
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def const(cls, c, nvars: int) -> "SparsePoly":
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def monomial(cls, exps: Sequence[int], c=1) -> "SparsePoly":
        return cls(len(exps), {tuple(exps): c})

    # -- basic queries ----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def height(self) -> Fraction:
        return max((abs(c) for c in self.terms.values()), default=Fraction(0))

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.terms.values())

    def leading(self) -> tuple[Exps, Fraction]:
        e = max(self.terms, key=grlex_key)
        return e, self.terms[e]

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def sorted_terms(self) -> list[tuple[Exps, Fraction]]:
        return sorted(self.terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    # -- arithmetic ---------------------------------------------------------------
    def _check(self, other: "SparsePoly") -> None:
        if self.nvars != other.nvars:
            raise ArityMismatch(f"{self.nvars} vs {other.nvars} variables")

    def _lift(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return SparsePoly.const(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for e, c in other.terms.items():
            v = out.get(e, 0) + c
            if v:
                out[e] = v
            else:
                out.pop(e, None)
        return SparsePoly._from_clean(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly._from_clean(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return SparsePoly(self.nvars)
            return SparsePoly._from_clean(self.nvars, {e: c * other for e, c in self.terms.items()})
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        out: dict[Exps, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return SparsePoly._from_clean(self.nvars, out)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, (int, Fraction)):
            return self * (1 / Fraction(c))
        return NotImplemented

    def __pow__(self, k: int):
        out = SparsePoly.const(1, self.nvars)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SparsePoly.const(other, self.nvars)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def diff(self, i: int) -> "SparsePoly":
        out: dict[Exps, Fraction] = {}
        for e, c in self.terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = c * e[i]
        return SparsePoly._from_clean(self.nvars, out)

    def divmod_exact(self, divisor: "SparsePoly") -> "SparsePoly | None":
        """Quotient Q with self == Q*divisor, or None if divisor does not divide.

        Graded-lex division by a single polynomial decides membership in the
        principal ideal it generates.
        """
        self._check(divisor)
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lt_e, lt_c = divisor.leading()
        rem = dict(self.terms)
        quot: dict[Exps, Fraction] = {}
        while rem:
            e = max(rem, key=grlex_key)
            if any(a < b for a, b in zip(e, lt_e)):
                return None
            qe = tuple(a - b for a, b in zip(e, lt_e))
            qc = rem[e] / lt_c
            quot[qe] = qc
            for de, dc in divisor.terms.items():
                te = tuple(a + b for a, b in zip(qe, de))
                v = rem.get(te, 0) - qc * dc
                if v:
                    rem[te] = v
                else:
                    rem.pop(te, None)
        return SparsePoly._from_clean(self.nvars, quot)

    def primitive(self) -> "SparsePoly":
        """Scale to coprime integer coefficients with positive leading coefficient."""
        if self.is_zero():
            return self
        from math import gcd, lcm

        den = lcm(*(c.denominator for c in self.terms.values()))
        ints = {e: int(c * den) for e, c in self.terms.items()}
        g = 0
        for v in ints.values():
            g = gcd(g, v)
        if ints[self.leading()[0]] < 0:
            g = -g
        return SparsePoly._from_clean(self.nvars, {e: Fraction(v // g) for e, v in ints.items()})

    # -- evaluation -----------------------------------------------------------------
    def evaluate(self, values: Sequence, one=1):
        """Evaluate at ``values`` (any ring supporting + and *)."""
        if len(values) != self.nvars:
            raise ArityMismatch(f"{len(values)} values for {self.nvars} variables")
        powers: list[dict[int, object]] = [{0: one, 1: v} for v in values]

        def pw(i: int, k: int):
            cache = powers[i]
            if k not in cache:
                cache[k] = pw(i, k // 2) * pw(i, k - k // 2)
            return cache[k]

        total = None
        for e, c in self.sorted_terms():
            term = None
            for i, k in enumerate(e):
                if k:
                    term = pw(i, k) if term is None else term * pw(i, k)
            if term is None:
                term = one
            term = term * c
            total = term if total is None else total + term
        return one * 0 if total is None else total

    def map_coeffs(self, f: Callable[[Fraction], object]) -> "SparsePoly":
        return SparsePoly(self.nvars, {e: f(c) for e, c in self.terms.items()})

    # -- text ---------------------------------------------------------------------
    def to_str(self, names: Sequence[str] | None = None) -> str:
        names = names or default_names(self.nvars)
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mon = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
            mag = abs(c)
            if mon and mag == 1:
                body = mon
            elif mon:
                body = f"{mag}*{mon}"
            else:
                body = str(mag)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"SparsePoly({self.nvars}, {self.to_str()!r})"

    def to_json(self) -> list:
        return [[list(e), f"{c.numerator}/{c.denominator}"] for e, c in self.sorted_terms()]

    @classmethod
    def from_json(cls, nvars: int, data: Iterable) -> "SparsePoly":
        return cls(nvars, {tuple(e): Fraction(c) for e, c in data})


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>[A-Za-z_]\w*)(?:\s*\^\s*(?P<exp>\d+))?|(?P<op>[-+*]))")


def parse_poly(text: str, nvars: int = 4, names: Sequence[str] | None = None) -> SparsePoly:
    """Parse ``c * x0^a0 x1^a1 ... (+|-) ...``; factors may be separated by '*' or blanks."""
    names = list(names or default_names(nvars))
    index = {n: i for i, n in enumerate(names)}
    if nvars == 4:
        index.update({f"x{i}": i for i in range(4)})
    text = text.replace("−", "-").strip()
    if not text:
        raise ParseError("empty polynomial")
    pos = 0
    terms: dict[Exps, Fraction] = {}
    sign = 1
    coeff = Fraction(1)
    exps = [0] * nvars
    seen = False

    def flush():
        nonlocal coeff, exps, seen, sign
        if seen:
            key = tuple(exps)
            terms[key] = terms.get(key, Fraction(0)) + sign * coeff
        coeff, exps, seen, sign = Fraction(1), [0] * nvars, False, 1

    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"cannot parse polynomial near {text[pos:]!r}")
        pos = m.end()
        if m.group("num"):
            coeff *= Fraction(m.group("num"))
            seen = True
        elif m.group("var"):
            name = m.group("var")
            if name not in index:
                raise ParseError(f"unknown variable {name!r}")
            exps[index[name]] += int(m.group("exp") or 1)
            seen = True
        else:
            op = m.group("op")
            if op == "*":
                continue
            if seen:
                flush()
            if op == "-":
                sign = -sign
    if not seen:
        raise ParseError("dangling operator")
    flush()
    return SparsePoly(nvars, terms)
