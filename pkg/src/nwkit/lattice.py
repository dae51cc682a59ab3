"""Exact integer lattice tools: integral LLL and saturated integer kernels.

No floating point anywhere: the LLL variant keeps the Gram-Schmidt data as
integers (the d_i / lambda_ij formulation), so rounding can never corrupt a
kernel vector.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Vector = list[int]


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    return sum(x * y for x, y in zip(a, b))


def _round_div(a: int, b: int) -> int:
    # nearest integer to a/b for b > 0, ties away from zero irrelevant here
    return (2 * a + b) // (2 * b)


def lll_reduce(basis: Sequence[Sequence[int]], delta: Fraction = Fraction(99, 100)) -> list[Vector]:
    """LLL-reduce linearly independent integer row vectors.

    Integral version (Cohen, Algorithm 2.6.7): d_i are the Gram determinants
    and lam[k][j] = d_{j+1} * mu_{kj}, all integers.
    """
    b = [list(v) for v in basis]
    n = len(b)
    if n <= 1:
        return b
    p, q = delta.numerator, delta.denominator
    d = [0] * (n + 1)  # d[0] = 1, d[i+1] = Gram det of first i+1 vectors
    d[0] = 1
    lam = [[0] * n for _ in range(n)]

    def gram_schmidt(k: int) -> None:
        for j in range(k + 1):
            u = dot(b[k], b[j])
            for i in range(j):
                u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
            if j < k:
                lam[k][j] = u
            else:
                if u == 0:
                    raise ValueError("lll_reduce: vectors are linearly dependent")
                d[k + 1] = u

    def red(k: int, l: int) -> None:
        if 2 * abs(lam[k][l]) > d[l + 1]:
            r = _round_div(lam[k][l], d[l + 1])
            bk, bl = b[k], b[l]
            for t in range(len(bk)):
                bk[t] -= r * bl[t]
            lam[k][l] -= r * d[l + 1]
            for i in range(l):
                lam[k][i] -= r * lam[l][i]

    def swap(k: int, kmax: int) -> None:
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        lk = lam[k][k - 1]
        B = (d[k - 1] * d[k + 1] + lk * lk) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - lk * t) // d[k]
            lam[i][k - 1] = (B * t + lk * lam[i][k]) // d[k + 1]
        d[k] = B

    gram_schmidt(0)
    k, kmax = 1, 0
    while k < n:
        if k > kmax:
            kmax = k
            gram_schmidt(k)
        red(k, k - 1)
        lk = lam[k][k - 1]
        if q * d[k + 1] * d[k - 1] < p * d[k] * d[k] - q * lk * lk:
            swap(k, kmax)
            k = max(1, k - 1)
            continue
        for l in range(k - 2, -1, -1):
            red(k, l)
        k += 1
    return b


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        t = a // b
        a, b = b, a - t * b
        x0, x1 = x1, x0 - t * x1
        y0, y1 = y1, y0 - t * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def linear_form_kernel(a: Sequence[int]) -> list[Vector]:
    """A basis of {y in Z^n : a.y = 0} (saturated, built from extended gcds)."""
    n = len(a)
    kernel: list[Vector] = []
    g = 0
    comb = [0] * n  # sum comb[i] * a[i] == g
    for j in range(n):
        aj = a[j]
        ej = [0] * n
        ej[j] = 1
        if g == 0:
            if aj == 0:
                kernel.append(ej)
            else:
                g = abs(aj)
                comb = [0] * n
                comb[j] = 1 if aj > 0 else -1
            continue
        gj, x, y = _ext_gcd(g, aj)
        kernel.append([(aj // gj) * c - (g // gj) * e for c, e in zip(comb, ej)])
        comb = [x * c + y * e for c, e in zip(comb, ej)]
        g = gj
    return kernel


def integer_kernel(T: Sequence[Sequence[int]], ncols: int) -> list[Vector]:
    """LLL-reduced basis of the full integer kernel {v in Z^s : T v = 0}.

    Rows are imposed one at a time: the kernel of a single linear form on the
    current lattice is computed exactly, pulled back, and re-reduced so the
    entries stay small throughout.
    """
    basis: list[Vector] = [[int(i == j) for j in range(ncols)] for i in range(ncols)]
    for row in T:
        if not basis:
            break
        form = [dot(row, v) for v in basis]
        if not any(form):
            continue
        coeffs = linear_form_kernel(form)
        basis = [[sum(c * v[t] for c, v in zip(cvec, basis)) for t in range(ncols)] for cvec in coeffs]
        basis = lll_reduce(basis)
    return basis
