"""Exact determinants over Q and over rings without cheap division."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = Sequence[Sequence]


def bareiss_det(matrix: Matrix) -> Fraction:
    """Fraction-free Gaussian elimination; entries are ints or Fractions."""
    n = len(matrix)
    if n == 0:
        return Fraction(1)
    # clear denominators row by row so the elimination stays in Z
    rows = []
    scale = Fraction(1)
    for row in matrix:
        row = [Fraction(x) for x in row]
        den = 1
        for x in row:
            den = den * x.denominator // _gcd(den, x.denominator)
        rows.append([int(x * den) for x in row])
        scale /= den
    a = rows
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return Fraction(0)
        pivot = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i = a[i]
            row_k = a[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1] * scale


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def minor(matrix: Matrix, row: int, col: int) -> list[list]:
    return [list(r[:col]) + list(r[col + 1 :]) for i, r in enumerate(matrix) if i != row]


def det_laplace(matrix: Matrix, one):
    """Cofactor expansion along rows with memoized minors (2^m states)."""
    n = len(matrix)
    if n == 0:
        return one
    zero = one * 0
    memo: dict[int, object] = {}

    def rec(row: int, used: int):
        if row == n:
            return one
        if used in memo:
            return memo[used]
        total = zero
        sign = 1
        for j in range(n):
            if used >> j & 1:
                continue
            entry = matrix[row][j]
            if not _is_zero(entry):
                sub = rec(row + 1, used | (1 << j))
                if not _is_zero(sub):
                    term = entry * sub
                    total = total + term if sign > 0 else total - term
            sign = -sign
        memo[used] = total
        return total

    return rec(0, 0)


def _is_zero(x) -> bool:
    if isinstance(x, (int, Fraction)):
        return x == 0
    z = getattr(x, "is_zero", None)
    return z() if z is not None else x == 0


def berkowitz(matrix: Matrix, one) -> list:
    """Characteristic polynomial det(xI - A) by Berkowitz, no divisions.

    Returns coefficients in descending powers: [1, c_1, ..., c_n].
    """
    n = len(matrix)
    zero = one * 0
    if n == 0:
        return [one]
    vec = [one, zero - matrix[0][0]]
    for k in range(1, n):
        # leading (k+1)x(k+1) block: [[A_k, C], [R, a]]
        a = matrix[k][k]
        R = [matrix[k][j] for j in range(k)]
        col = [matrix[i][k] for i in range(k)]
        toeplitz = [one, zero - a]
        for _ in range(k):
            toeplitz.append(zero - _dot(R, col, zero))
            col = [_dot(matrix[i][:k], col, zero) for i in range(k)]
        new = []
        for i in range(k + 2):
            acc = zero
            for j in range(min(i, k) + 1):
                if i - j < len(toeplitz):
                    acc = acc + toeplitz[i - j] * vec[j]
            new.append(acc)
        vec = new
    return vec


def _dot(row, col, zero):
    acc = zero
    for x, y in zip(row, col):
        if not (_is_zero(x) or _is_zero(y)):
            acc = acc + x * y
    return acc


def det_berkowitz(matrix: Matrix, one):
    n = len(matrix)
    c = berkowitz(matrix, one)[-1]
    return c if n % 2 == 0 else (one * 0) - c


def det(matrix: Matrix, one, laplace_limit: int = 8):
    """Division-free determinant: Laplace for small sizes, Berkowitz above."""
    if len(matrix) <= laplace_limit:
        return det_laplace(matrix, one)
    return det_berkowitz(matrix, one)


class UPoly:
    """Univariate polynomial with coefficients in any commutative ring."""

    __slots__ = ("coeffs", "zero")

    def __init__(self, coeffs: Sequence, zero=0):
        c = list(coeffs)
        while c and _is_zero(c[-1]):
            c.pop()
        self.coeffs = c
        self.zero = zero

    @classmethod
    def x(cls, one) -> UPoly:
        return cls([one * 0, one], one * 0)

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def _lift(self, other) -> UPoly:
        if isinstance(other, UPoly):
            return other
        return UPoly([other], self.zero)

    def __add__(self, other):
        o = self._lift(other)
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + [self.zero] * (n - len(self.coeffs))
        b = o.coeffs + [self.zero] * (n - len(o.coeffs))
        return UPoly([x + y for x, y in zip(a, b)], self.zero)

    __radd__ = __add__

    def __neg__(self):
        return UPoly([self.zero - c for c in self.coeffs], self.zero)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if not self.coeffs or not o.coeffs:
            return UPoly([], self.zero)
        out = [self.zero] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if _is_zero(x):
                continue
            for j, y in enumerate(o.coeffs):
                if not _is_zero(y):
                    out[i + j] = out[i + j] + x * y
        return UPoly(out, self.zero)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        result = UPoly([self.zero + 1], self.zero)
        for _ in range(k):
            result = result * self
        return result

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        o = self._lift(other) if not isinstance(other, UPoly) else other
        if len(self.coeffs) != len(o.coeffs):
            return False
        return all(x == y for x, y in zip(self.coeffs, o.coeffs))

    __hash__ = None

    def __call__(self, value):
        acc = self.zero
        for c in reversed(self.coeffs):
            acc = acc * value + c
        return acc

    def __repr__(self):
        return f"UPoly({[str(c) for c in self.coeffs]})"
