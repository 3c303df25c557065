"""Exact linear algebra over the rationals, plus a ball-matrix determinant.

Matrices are lists of lists of Fractions (row major).  Everything here is
dense and small (dimensions bounded by the number-field degree, ten or so),
so plain Gaussian elimination over Fraction is exact and fast enough; the
characteristic polynomial uses the Faddeev-LeVerrier recurrence, which stays
in exact arithmetic and needs no pivoting at all.
"""

from __future__ import annotations

from fractions import Fraction
from typing import List, Optional

from .balls import RealBall

Matrix = List[List[Fraction]]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0])
    out = [[Fraction(0)] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        for t in range(k):
            c = ai[t]
            if c:
                bt = b[t]
                row = out[i]
                for j in range(m):
                    row[j] += c * bt[j]
    return out


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_pow(a: Matrix, n: int) -> Matrix:
    if n < 0:
        return mat_pow(mat_inv(a), -n)
    result = identity(len(a))
    base = [row[:] for row in a]
    while n:
        if n & 1:
            result = mat_mul(result, base)
        n >>= 1
        if n:
            base = mat_mul(base, base)
    return result


def det(a: Matrix) -> Fraction:
    """Exact determinant by fraction-free-ish Gaussian elimination."""
    n = len(a)
    m = [row[:] for row in a]
    sign = 1
    acc = Fraction(1)
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if m[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        p = m[col][col]
        acc *= p
        inv = 1 / p
        for r in range(col + 1, n):
            f = m[r][col] * inv
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return acc * sign


def mat_inv(a: Matrix) -> Matrix:
    n = len(a)
    m = [row[:] + ident_row[:] for row, ident_row in zip(a, identity(n))]
    for col in range(n):
        pivot = None
        for r in range(col, n):
            if m[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            raise ZeroDivisionError("singular matrix")
        m[col], m[pivot] = m[pivot], m[col]
        p = m[col][col]
        m[col] = [x / p for x in m[col]]
        for r in range(n):
            if r != col and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def rank(a: Matrix) -> int:
    if not a:
        return 0
    m = [row[:] for row in a]
    rows, cols = len(m), len(m[0])
    r = 0
    for col in range(cols):
        pivot = None
        for i in range(r, rows):
            if m[i][col] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        p = m[r][col]
        for i in range(r + 1, rows):
            if m[i][col]:
                f = m[i][col] / p
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return r


def charpoly(a: Matrix) -> List[Fraction]:
    """Characteristic polynomial det(yI - A), ascending coefficients, monic.

    Faddeev-LeVerrier: M_0 = I, c_n = 1, and for k = 1..n
        c_{n-k} = -tr(A M_{k-1}) / k,   M_k = A M_{k-1} + c_{n-k} I.
    """
    n = len(a)
    coeffs: List[Optional[Fraction]] = [None] * (n + 1)
    coeffs[n] = Fraction(1)
    m = identity(n)
    for k in range(1, n + 1):
        am = mat_mul(a, m)
        tr = sum(am[i][i] for i in range(n))
        c = -tr / k
        coeffs[n - k] = c
        m = am
        for i in range(n):
            m[i][i] += c
    return [x if x is not None else Fraction(0) for x in coeffs]


def ball_det(rows: List[List[RealBall]], prec: int) -> RealBall:
    """Enclosure of the determinant of a small matrix of RealBalls."""
    n = len(rows)
    m = [row[:] for row in rows]
    sign = 1
    acc = RealBall.one()
    for col in range(n):
        pivot = None
        best = None
        for r in range(col, n):
            entry = m[r][col]
            if not entry.contains_zero():
                mag = abs(entry.mid_float())
                if best is None or mag > best:
                    best = mag
                    pivot = r
        if pivot is None:
            # no invertible pivot: determinant enclosure must allow zero
            return RealBall.zero().hull(_naive_ball_det(m, col, prec), prec)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            sign = -sign
        p = m[col][col]
        acc = acc.mul(p, prec)
        for r in range(col + 1, n):
            f = m[r][col].div(p, prec)
            for c in range(col, n):
                m[r][c] = m[r][c].sub(f.mul(m[col][c], prec), prec)
    if sign < 0:
        acc = acc.neg()
    return acc


def _naive_ball_det(m: List[List[RealBall]], start: int, prec: int) -> RealBall:
    """Cofactor expansion over the remaining block; exponential but tiny."""
    size = len(m) - start
    if size == 0:
        return RealBall.one()
    if size == 1:
        return m[start][start]
    total = RealBall.zero()
    for j in range(start, len(m)):
        entry = m[start][j]
        sub = [
            [m[r][c] for c in range(start, len(m)) if c != j]
            for r in range(start + 1, len(m))
        ]
        minor = _ball_det_dense(sub, prec)
        term = entry.mul(minor, prec)
        if (j - start) % 2:
            term = term.neg()
        total = total.add(term, prec)
    return total


def _ball_det_dense(rows: List[List[RealBall]], prec: int) -> RealBall:
    n = len(rows)
    if n == 0:
        return RealBall.one()
    if n == 1:
        return rows[0][0]
    total = RealBall.zero()
    for j in range(n):
        sub = [[rows[r][c] for c in range(n) if c != j] for r in range(1, n)]
        term = rows[0][j].mul(_ball_det_dense(sub, prec), prec)
        if j % 2:
            term = term.neg()
        total = total.add(term, prec)
    return total
