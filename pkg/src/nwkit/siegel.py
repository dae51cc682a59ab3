"""Small integer kernel vectors of underdetermined integer systems.

The contract is the explicit pigeonhole bound

    ||v||_inf <= 2 * (2 * s * b) ** (r / (s - r)),     b = ||T||_inf,

for an r x s matrix T with r < s.  The solver finds a vector by lattice
reduction of the exact integer kernel and then verifies the bound with
integer arithmetic only.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NotUnderdetermined, ParseError
from .lattice import integer_kernel

EXHAUSTIVE_MAX_COLS = 6
EXHAUSTIVE_BUDGET = 200_000


@dataclass(frozen=True)
class IntMatrix:
    rows: tuple[tuple[int, ...], ...]
    ncols: int

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for an empty matrix")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(rows, ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    def height(self) -> int:
        return max((abs(x) for r in self.rows for x in r), default=0)

    def apply(self, v: Sequence[int]) -> list[int]:
        return [sum(a * b for a, b in zip(r, v)) for r in self.rows]

    def dumps(self) -> str:
        lines = [f"{self.nrows} {self.ncols}"]
        lines += [" ".join(str(x) for x in r) for r in self.rows]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "IntMatrix":
        lines = [ln.split() for ln in text.splitlines() if ln.strip()]
        try:
            r, s = int(lines[0][0]), int(lines[0][1])
            rows = [[int(x) for x in ln] for ln in lines[1:1 + r]]
        except (IndexError, ValueError) as exc:
            raise ParseError("matrix file: expected 'r s' header then r rows of s integers") from exc
        if len(rows) != r or any(len(row) != s for row in rows):
            raise ParseError("matrix file: row count or width does not match header")
        return cls.from_rows(rows, s)


def siegel_bound_holds(norm: int, r: int, s: int, b: int) -> bool:
    """Exact test of norm <= 2 (2 s b)^(r/(s-r))."""
    b = max(b, 1)
    return norm ** (s - r) <= 2 ** (s - r) * (2 * s * b) ** r


def siegel_bound(r: int, s: int, b: int) -> float:
    """The bound as a float, for display only."""
    b = max(b, 1)
    return 2.0 * (2.0 * s * b) ** (r / (s - r))


def _normalize(v: Sequence[int]) -> tuple[int, ...]:
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def _key(v: Sequence[int]):
    return (max(abs(x) for x in v), _normalize(v))


def _exhaustive(T: IntMatrix, radius: int) -> tuple[int, ...] | None:
    """Best kernel vector with ||v||_inf <= radius by enumeration, or None."""
    s = T.ncols
    if (2 * radius + 1) ** s > EXHAUSTIVE_BUDGET:
        return None
    best = None
    for rad in range(1, radius + 1):
        for v in itertools.product(range(-rad, rad + 1), repeat=s):
            if max(abs(x) for x in v) != rad or _normalize(v) != v:
                continue
            if not any(T.apply(v)):
                if best is None or v < best:
                    best = v
        if best is not None:
            return best
    return None


def small_kernel(T: IntMatrix | Sequence[Sequence[int]], ncols: int | None = None) -> tuple[int, ...]:
    """Nonzero integer v with T v = 0 within the pigeonhole bound.

    Among candidates the smallest sup-norm wins, ties broken by the
    lexicographically smallest sign-normalised vector.
    """
    if not isinstance(T, IntMatrix):
        T = IntMatrix.from_rows(T, ncols)
    r, s = T.nrows, T.ncols
    if r >= s:
        raise NotUnderdetermined(f"{r} equations in {s} unknowns")
    basis = integer_kernel(T.rows, s)
    if not basis:
        raise AssertionError("kernel of an underdetermined system cannot be trivial")
    candidates = list(basis)
    for u, w in itertools.combinations(basis[: min(len(basis), 12)], 2):
        candidates.append([a + b for a, b in zip(u, w)])
        candidates.append([a - b for a, b in zip(u, w)])
    best = _normalize(min(candidates, key=_key))
    if s <= EXHAUSTIVE_MAX_COLS:
        found = _exhaustive(T, max(abs(x) for x in best))
        if found is not None and _key(found) <= _key(best):
            best = found
    if any(T.apply(best)) or not any(best):
        raise AssertionError("solver produced a non-kernel vector")
    if not siegel_bound_holds(max(abs(x) for x in best), r, s, T.height()):
        raise AssertionError("kernel vector exceeds the pigeonhole bound")
    return best


def solve_report(T: IntMatrix) -> dict:
    v = small_kernel(T)
    norm = max(abs(x) for x in v)
    b = T.height()
    return {
        "r": T.nrows,
        "s": T.ncols,
        "matrix_height": b,
        "vector": list(v),
        "sup_norm": norm,
        "bound": siegel_bound(T.nrows, T.ncols, b),
        "bound_exponent": str(Fraction(T.nrows, T.ncols - T.nrows)),
        "within_bound": siegel_bound_holds(norm, T.nrows, T.ncols, b),
        "in_kernel": not any(T.apply(v)),
    }


def report_json(T: IntMatrix) -> str:
    return json.dumps(solve_report(T), sort_keys=True)
