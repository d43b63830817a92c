"""Exact determinants and inverses over the rationals."""
from __future__ import annotations

import math
from fractions import Fraction


def fraction_det(A) -> Fraction:
    A = [[Fraction(x) for x in row] for row in A]
    n, det = len(A), Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            A[c], A[p] = A[p], A[c]
            det = -det
        piv = A[c][c]
        det *= piv
        for r in range(c + 1, n):
            if A[r][c] != 0:
                f = A[r][c] / piv
                Ar, Ac = A[r], A[c]
                for j in range(c, n):
                    if Ac[j]:
                        Ar[j] -= f * Ac[j]
    return det


def integer_det(A) -> int:
    """Fraction-free Bareiss elimination on an integer matrix (zero entries skipped)."""
    A = [list(map(int, row)) for row in A]
    n = len(A)
    sign, prev = 1, 1
    for c in range(n - 1):
        p = next((r for r in range(c, n) if A[r][c]), None)
        if p is None:
            return 0
        if p != c:
            A[c], A[p] = A[p], A[c]
            sign = -sign
        Ac, piv = A[c], A[c][c]
        nz = [j for j in range(c + 1, n) if Ac[j]]
        for r in range(c + 1, n):
            Ar = A[r]
            f = Ar[c]
            if f:
                for j in range(c + 1, n):
                    Ar[j] = Ar[j] * piv
                for j in nz:
                    Ar[j] -= f * Ac[j]
            elif piv != 1:
                for j in range(c + 1, n):
                    Ar[j] *= piv
            if prev != 1:
                for j in range(c + 1, n):
                    Ar[j] //= prev
        prev = piv
    return sign * A[n - 1][n - 1] if n else 1


def fraction_det_scaled(A) -> Fraction:
    """Determinant of a rational matrix through one common denominator and Bareiss."""
    A = [[Fraction(x) for x in row] for row in A]
    q = 1
    for row in A:
        for x in row:
            q = math.lcm(q, x.denominator)
    ints = [[int(x * q) for x in row] for row in A]
    return Fraction(integer_det(ints), q ** len(A))


def fraction_inverse(A) -> list[list[Fraction]]:
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[p] = M[p], M[c]
        piv = M[c][c]
        M[c] = [x / piv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                Mr, Mc = M[r], M[c]
                for j in range(c, 2 * n):
                    if Mc[j]:
                        Mr[j] -= f * Mc[j]
    return [row[n:] for row in M]
