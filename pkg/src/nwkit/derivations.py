"""Polynomial vector fields acting as derivations.

Houses the Ramanujan fields v (on x1, x2, x3) and w (on x0..x3), the
normalised iterate w^[k] = 12^k w(w-1)...(w-(k-1)), Darboux/invariance checks
and a constant-cofactor Darboux search for degree-preserving fields.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import isqrt
from typing import Sequence

from .errors import ArityMismatch, DegreeRaisingField
from .poly import SparsePoly, default_names, grlex_key, parse_poly


@dataclass(frozen=True)
class Derivation:
    """``sum_i components[i] * d/dx_i``."""

    components: tuple[SparsePoly, ...]
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        n = len(self.components)
        if any(c.nvars != n for c in self.components):
            raise ArityMismatch("each component must live in as many variables as the field has")

    @property
    def nvars(self) -> int:
        return len(self.components)

    def __call__(self, P: SparsePoly) -> SparsePoly:
        return apply(self, P)

    def to_str(self) -> str:
        names = self.names or default_names(self.nvars)
        parts = [f"({c.to_str(names)}) d/d{n}" for c, n in zip(self.components, names) if not c.is_zero()]
        return " + ".join(parts) or "0"


def apply(D: Derivation, P: SparsePoly) -> SparsePoly:
    if D.nvars != P.nvars:
        raise ArityMismatch(f"field has {D.nvars} variables, polynomial {P.nvars}")
    out = SparsePoly(P.nvars)
    for i, comp in enumerate(D.components):
        if comp.is_zero():
            continue
        dp = P.diff(i)
        if not dp.is_zero():
            out = out + comp * dp
    return out


def ramanujan_v() -> Derivation:
    """The Ramanujan field on (x1, x2, x3)."""
    names = ("x1", "x2", "x3")
    comps = (
        parse_poly("1/12 x1^2 - 1/12 x2", 3, names),
        parse_poly("1/3 x1 x2 - 1/3 x3", 3, names),
        parse_poly("1/2 x1 x3 - 1/2 x2^2", 3, names),
    )
    return Derivation(comps, names)


def ramanujan_w() -> Derivation:
    """x0 d/dx0 plus the Ramanujan field lifted to (x0, x1, x2, x3)."""
    lifted = tuple(SparsePoly(4, {(0,) + e: c for e, c in comp.terms.items()}) for comp in ramanujan_v().components)
    return Derivation((SparsePoly.var(0, 4),) + lifted)


def iterated_wk(P: SparsePoly, k: int, w: Derivation | None = None) -> SparsePoly:
    """12^k * w o (w - 1) o ... o (w - (k-1)) applied to P (rightmost factor first)."""
    if k < 0:
        raise ValueError("k must be >= 0")
    w = w or ramanujan_w()
    out = P
    for shift in range(k - 1, -1, -1):
        out = apply(w, out) - out * shift
    return out * (12 ** k)


@dataclass(frozen=True)
class NotInvariant:
    """Returned when D(P) is not a multiple of P; carries D(P)."""

    image: SparsePoly

    def __bool__(self) -> bool:
        return False


def invariance_check(D: Derivation, P: SparsePoly) -> SparsePoly | NotInvariant:
    """Cofactor Q with D(P) = Q*P, or :class:`NotInvariant`."""
    if P.is_zero():
        raise ValueError("the zero polynomial defines no variety")
    image = apply(D, P)
    q = image.divmod_exact(P)
    if q is None:
        return NotInvariant(image)
    return q


# -- Darboux search ------------------------------------------------------------

def monomial_basis(nvars: int, maxdeg: int) -> list[tuple[int, ...]]:
    """Exponent vectors of total degree <= maxdeg in graded-lex order."""
    basis = []
    for deg in range(maxdeg + 1):
        for combo in combinations_with_replacement(range(nvars), deg):
            e = [0] * nvars
            for i in combo:
                e[i] += 1
            basis.append(tuple(e))
    return sorted(set(basis), key=grlex_key)


def derivation_matrix(D: Derivation, basis: Sequence[tuple[int, ...]]) -> list[list[Fraction]]:
    """Matrix of D on span(basis); column j is D(basis[j])."""
    index = {e: i for i, e in enumerate(basis)}
    n = len(basis)
    M = [[Fraction(0)] * n for _ in range(n)]
    for j, e in enumerate(basis):
        img = apply(D, SparsePoly.monomial(e))
        for te, c in img.terms.items():
            if te not in index:
                raise DegreeRaisingField(f"D({e}) leaves the degree <= {sum(e)} space")
            M[index[te]][j] = c
    return M


def charpoly(M: list[list[Fraction]]) -> list[Fraction]:
    """Characteristic polynomial det(tI - M), coefficients from t^0 upward.

    Hessenberg reduction followed by the usual three-term recurrence.
    """
    n = len(M)
    H = [row[:] for row in M]
    for m in range(1, n - 1):
        piv = next((i for i in range(m, n) if H[i][m - 1] != 0), None)
        if piv is None:
            continue
        if piv != m:
            H[piv], H[m] = H[m], H[piv]
            for row in H:
                row[piv], row[m] = row[m], row[piv]
        t = H[m][m - 1]
        for i in range(m + 1, n):
            u = H[i][m - 1] / t
            if u:
                Hi, Hm = H[i], H[m]
                for j in range(n):
                    Hi[j] -= u * Hm[j]
                for row in H:
                    row[m] += u * row[i]
    polys: list[list[Fraction]] = [[Fraction(1)]]
    for m in range(1, n + 1):
        # p_m = (t - h_mm) p_{m-1} - sum_i h_{i,m} * prod(h_{k,k-1}) * p_{i-1}
        prev = polys[m - 1]
        pm = [Fraction(0)] + prev
        for i, c in enumerate(prev):
            pm[i] -= H[m - 1][m - 1] * c
        t = Fraction(1)
        for i in range(m - 1, 0, -1):
            t *= H[i][i - 1]
            if t == 0:
                break
            coef = t * H[i - 1][m - 1]
            if coef:
                for k, c in enumerate(polys[i - 1]):
                    pm[k] -= coef * c
        polys.append(pm)
    return polys[n]


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    for d in range(1, isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d != n // d:
                large.append(n // d)
    return small + large[::-1]


def _horner(p: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _deflate(p: list[Fraction], r: Fraction) -> list[Fraction]:
    # synthetic division by (t - r); p is low-to-high and r is a root
    n = len(p) - 1
    q = [Fraction(0)] * n
    acc = Fraction(0)
    for i in range(n, 0, -1):
        acc = acc * r + p[i]
        q[i - 1] = acc
    return q


def rational_roots(p: list[Fraction]) -> tuple[dict[Fraction, int], list[Fraction]]:
    """Rational roots with multiplicity, and the leftover cofactor polynomial."""
    from math import lcm

    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    roots: dict[Fraction, int] = {}
    while len(p) > 1 and p[0] == 0:
        p = p[1:]
        roots[Fraction(0)] = roots.get(Fraction(0), 0) + 1
    changed = True
    while len(p) > 1 and changed:
        changed = False
        den = lcm(*(c.denominator for c in p))
        ints = [int(c * den) for c in p]
        for a in _divisors(ints[0]):
            for b in _divisors(ints[-1]):
                for cand in (Fraction(a, b), Fraction(-a, b)):
                    if _horner(p, cand) == 0:
                        roots[cand] = roots.get(cand, 0) + 1
                        p = _deflate(p, cand)
                        changed = True
                        break
                if changed:
                    break
            if changed:
                break
    return roots, p


def nullspace(M: list[list[Fraction]]) -> list[list[Fraction]]:
    """Basis of the right kernel by exact reduced row echelon form."""
    rows = [r[:] for r in M]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -rows[i][fc]
        basis.append(v)
    return basis


def is_irreducible(P: SparsePoly) -> bool:
    """Irreducibility over Q (sympy factorisation)."""
    import sympy

    if P.degree() < 1:
        return False
    syms = sympy.symbols(f"z0:{P.nvars}")
    expr = sum(sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*(s ** k for s, k in zip(syms, e)))
               for e, c in P.terms.items())
    _, factors = sympy.factor_list(sympy.Poly(expr, *syms))
    return len(factors) == 1 and factors[0][1] == 1


@dataclass
class DarbouxSearch:
    """Outcome of :func:`darboux_search`.

    ``polynomials`` holds the irreducible Darboux polynomials that are unique
    (up to scalar) at their degree within their eigenspace.  When the
    eigenspace holds a family whose generic member is irreducible (a pencil
    of invariant curves, e.g. from a first integral) its basis goes to
    ``pencils`` instead.
    """

    polynomials: list[tuple[SparsePoly, Fraction]] = field(default_factory=list)
    pencils: list[tuple[list[SparsePoly], Fraction]] = field(default_factory=list)
    nonrational_eigenvalue: bool = False

    def __iter__(self):
        return iter(self.polynomials)

    def __len__(self):
        return len(self.polynomials)


def darboux_search(D: Derivation, maxdeg: int) -> DarbouxSearch:
    """Darboux polynomials of degree 1..maxdeg with constant cofactor."""
    for comp in D.components:
        if comp.degree() > 1:
            raise DegreeRaisingField("field raises total degree; constant-cofactor search does not apply")
    basis = monomial_basis(D.nvars, maxdeg)
    M = derivation_matrix(D, basis)
    roots, rest = rational_roots(charpoly(M))
    out = DarbouxSearch(nonrational_eigenvalue=len(rest) > 1)
    n = len(basis)
    for lam in sorted(roots):
        shifted = [[M[i][j] - (lam if i == j else 0) for j in range(n)] for i in range(n)]
        space = _echelon_by_degree(nullspace(shifted), basis)
        for k in range(1, maxdeg + 1):
            low = [v for v in space if v.degree() < k]
            new = [v for v in space if v.degree() == k]
            if not new:
                continue
            if not low and len(new) == 1:
                if is_irreducible(new[0]):
                    out.polynomials.append((new[0].primitive(), lam))
                continue
            family = low + new
            generic = sum((v * (i + 1) for i, v in enumerate(family)), SparsePoly(D.nvars))
            if is_irreducible(generic):
                out.pencils.append(([v.primitive() for v in family], lam))
    return out


def _echelon_by_degree(vectors: list[list[Fraction]], basis) -> list[SparsePoly]:
    # reduced echelon form with columns ordered by decreasing degree, so that
    # span of the rows of leading degree <= k is the eigenspace within degree k
    order = sorted(range(len(basis)), key=lambda j: grlex_key(basis[j]), reverse=True)
    rows = [[v[j] for j in order] for v in vectors]
    m = len(order)
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        r += 1
    polys = []
    for row in rows[:r]:
        polys.append(SparsePoly(len(basis[0]), {basis[order[j]]: x for j, x in enumerate(row)}))
    return polys
