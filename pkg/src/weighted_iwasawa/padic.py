"""p-adic valuations of rationals, normalized so that v_p(p) = 1."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]

#: Valuation of zero. Absorbing under addition, larger than every finite value.
INFINITY = math.inf


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    k = 3
    while k * k <= n:
        if n % k == 0:
            return False
        k += 2
    return True


def check_prime(p: int) -> None:
    if not is_prime(p):
        raise ValueError(f"{p} is not a prime")


def val_int(n: int, p: int) -> float | int:
    if n == 0:
        return INFINITY
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def val_p_rational(q: Rational, p: int) -> float | int:
    """v_p(numerator) - v_p(denominator); INFINITY for zero."""
    q = Fraction(q)
    if q == 0:
        return INFINITY
    return val_int(q.numerator, p) - val_int(q.denominator, p)


def as_fraction(x) -> Fraction:
    """Parse ints, Fractions and strings like ``"3/4"`` into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, (int, str)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


def fraction_str(q: Rational) -> str:
    return str(Fraction(q))


def valuation_str(v) -> str:
    if v == INFINITY:
        return "inf"
    return str(Fraction(v))
