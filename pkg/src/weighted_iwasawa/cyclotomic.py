"""Exact arithmetic in the p-power cyclotomic fields Q(zeta_{p^N}).

Elements are stored in the power basis 1, z, ..., z^{phi-1} where z is a
primitive p^N-th root of unity and phi = phi(p^N).  Level 0 is Q itself.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb

from .padic import INFINITY, Rational, check_prime, val_p_rational


def totient_prime_power(p: int, level: int) -> int:
    if level == 0:
        return 1
    return (p - 1) * p ** (level - 1)


def cyclotomic_polynomial(p: int, level: int) -> list[Fraction]:
    """Coefficients (ascending) of Phi_{p^N}; Phi_1 = x - 1."""
    if level == 0:
        return [Fraction(-1), Fraction(1)]
    step = p ** (level - 1)
    coeffs = [Fraction(0)] * ((p - 1) * step + 1)
    for i in range(p):
        coeffs[i * step] = Fraction(1)
    return coeffs


# -- univariate polynomials over Q, ascending coefficient lists ------------


def _trim(a: list[Fraction]) -> list[Fraction]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _deg(a: list[Fraction]) -> int:
    return len(a) - 1


def _rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    """Remainder of a modulo b over Q."""
    r = list(a)
    db = _deg(b)
    lb = b[-1]
    while r and _deg(r) >= db:
        q = r[-1] / lb
        shift = _deg(r) - db
        for i, c in enumerate(b):
            r[i + shift] -= q * c
        r.pop()
        _trim(r)
    return r


def resultant(a: list[Rational], b: list[Rational]) -> Fraction:
    """Resultant of two polynomials over Q via Res(A, B) = (-1)^{ab} lc(B)^{a - r} Res(B, A mod B)."""
    a = _trim([Fraction(c) for c in a])
    b = _trim([Fraction(c) for c in b])
    if not a or not b:
        return Fraction(0)
    result = Fraction(1)
    while _deg(b) > 0:
        r = _rem(a, b)
        if not r:
            return Fraction(0)
        da, db, dr = _deg(a), _deg(b), _deg(r)
        if da * db % 2:
            result = -result
        result *= b[-1] ** (da - dr)
        a, b = b, r
    return result * b[0] ** _deg(a)


# -- the field element --------------------------------------------------------


class CyclotomicNumber:
    __slots__ = ("prime", "level", "coefficients", "_hash")

    def __init__(self, prime: int, level: int, coefficients):
        if level < 0:
            raise ValueError("level must be non-negative")
        self.prime = prime
        self.level = level
        self.coefficients = _reduce(prime, level, [Fraction(c) for c in coefficients])
        self._hash = None

    # construction helpers
    @classmethod
    def rational(cls, prime: int, level: int, value: Rational) -> CyclotomicNumber:
        return cls(prime, level, [value])

    @classmethod
    def zeta(cls, prime: int, level: int, power: int = 1) -> CyclotomicNumber:
        """zeta_{p^N}^power."""
        if level == 0:
            return cls(prime, 0, [1])
        e = power % prime**level
        coeffs = [Fraction(0)] * (e + 1)
        coeffs[e] = Fraction(1)
        return cls(prime, level, coeffs)

    @property
    def degree(self) -> int:
        return totient_prime_power(self.prime, self.level)

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coefficients[1:])

    def to_rational(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coefficients[0]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coefficients)

    # level changes
    def lift(self, level: int) -> CyclotomicNumber:
        """Embed into Q(zeta_{p^level}) via zeta_{p^N} = zeta_{p^M}^{p^(M-N)}."""
        if level < self.level:
            raise ValueError("cannot lift to a lower level; use reduce_level")
        if level == self.level:
            return self
        if self.level == 0:
            return CyclotomicNumber(self.prime, level, [self.coefficients[0]])
        step = self.prime ** (level - self.level)
        coeffs = [Fraction(0)] * ((len(self.coefficients) - 1) * step + 1)
        for i, c in enumerate(self.coefficients):
            coeffs[i * step] = c
        return CyclotomicNumber(self.prime, level, coeffs)

    def reduce_level(self, level: int) -> CyclotomicNumber:
        """Inverse of lift; raises if the element is not in the subfield."""
        if level > self.level:
            raise ValueError("cannot reduce to a higher level; use lift")
        if level == self.level:
            return self
        if level == 0:
            return CyclotomicNumber(self.prime, 0, [self.to_rational()])
        step = self.prime ** (self.level - level)
        out = []
        for i, c in enumerate(self.coefficients):
            if i % step:
                if c != 0:
                    raise ValueError(f"element does not lie in level {level}")
            else:
                out.append(c)
        return CyclotomicNumber(self.prime, level, out)

    def minimal_level(self) -> CyclotomicNumber:
        x = self
        while x.level > 0:
            try:
                x = x.reduce_level(x.level - 1)
            except ValueError:
                break
        return x

    def galois(self, k: int) -> CyclotomicNumber:
        """Image under zeta -> zeta^k, k a unit mod p."""
        if k % self.prime == 0:
            raise ValueError("Galois exponent must be prime to p")
        if self.level == 0:
            return self
        n = self.prime**self.level
        coeffs = [Fraction(0)] * n
        for i, c in enumerate(self.coefficients):
            coeffs[(i * k) % n] += c
        return CyclotomicNumber(self.prime, self.level, coeffs)

    # arithmetic
    def _coerce(self, other) -> tuple[CyclotomicNumber, CyclotomicNumber] | None:
        if isinstance(other, (int, Fraction)):
            return self, CyclotomicNumber(self.prime, self.level, [other])
        if not isinstance(other, CyclotomicNumber):
            return None
        a, b = self, other
        if a.prime != b.prime:
            if a.level == 0:
                a = CyclotomicNumber(b.prime, 0, a.coefficients)
            elif b.level == 0:
                b = CyclotomicNumber(a.prime, 0, b.coefficients)
            else:
                raise ValueError("cannot combine cyclotomic numbers over different primes")
        level = max(a.level, b.level)
        return a.lift(level), b.lift(level)

    def __add__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        n = max(len(a.coefficients), len(b.coefficients))
        ca = a.coefficients + [Fraction(0)] * (n - len(a.coefficients))
        cb = b.coefficients + [Fraction(0)] * (n - len(b.coefficients))
        return CyclotomicNumber(a.prime, a.level, [x + y for x, y in zip(ca, cb)])

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.prime, self.level, [-c for c in self.coefficients])

    def __sub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return pair[0] + (-pair[1])

    def __rsub__(self, other):
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        return pair[1] + (-pair[0])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.prime, self.level, [c * other for c in self.coefficients])
        pair = self._coerce(other)
        if pair is None:
            return NotImplemented
        a, b = pair
        ca, cb = a.coefficients, b.coefficients
        prod = [Fraction(0)] * (len(ca) + len(cb) - 1 if ca and cb else 0)
        for i, x in enumerate(ca):
            if x == 0:
                continue
            for j, y in enumerate(cb):
                if y:
                    prod[i + j] += x * y
        return CyclotomicNumber(a.prime, a.level, prod)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = CyclotomicNumber(self.prime, self.level, [1])
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inverse(self) -> CyclotomicNumber:
        """Inverse via the Galois conjugates: x^{-1} = prod_{k != 1} sigma_k(x) / N(x)."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        if self.level == 0:
            return CyclotomicNumber(self.prime, 0, [1 / self.coefficients[0]])
        n = self.prime**self.level
        acc = CyclotomicNumber(self.prime, self.level, [1])
        for k in range(2, n):
            if k % self.prime:
                acc = acc * self.galois(k)
        nrm = (acc * self).to_rational()
        return acc * (1 / nrm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, CyclotomicNumber):
            return self * other.inverse()
        return NotImplemented

    def __eq__(self, other):
        pair = self._coerce(other) if isinstance(other, (CyclotomicNumber, int, Fraction)) else None
        if pair is None:
            return NotImplemented
        a, b = pair
        return _strip(a.coefficients) == _strip(b.coefficients)

    def __hash__(self):
        if self._hash is None:
            x = self.minimal_level()
            self._hash = hash((x.level if x.level else 0, tuple(_strip(x.coefficients))))
        return self._hash

    def __repr__(self):
        return f"CyclotomicNumber({self.prime}, {self.level}, {[str(c) for c in self.coefficients]})"

    def __str__(self):
        if self.level == 0 or self.is_rational():
            return str(self.coefficients[0] if self.coefficients else 0)
        name = f"z{self.prime ** self.level}"
        parts = []
        for i, c in enumerate(self.coefficients):
            if c == 0:
                continue
            mono = "" if i == 0 else (name if i == 1 else f"{name}^{i}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    def to_json(self) -> dict:
        return {
            "prime": self.prime,
            "level": self.level,
            "coefficients": [str(c) for c in self.coefficients],
        }

    @classmethod
    def from_json(cls, data: dict) -> CyclotomicNumber:
        return cls(int(data["prime"]), int(data["level"]), [Fraction(c) for c in data["coefficients"]])


def _strip(c: list[Fraction]) -> list[Fraction]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _reduce(p: int, level: int, coeffs: list[Fraction]) -> list[Fraction]:
    """Reduce a coefficient list modulo Phi_{p^N}; result has length phi(p^N)."""
    check_prime(p)
    phi = totient_prime_power(p, level)
    if level == 0:
        total = sum(coeffs, Fraction(0))
        return [total]
    n = p**level
    # z^n = 1
    folded = [Fraction(0)] * n
    for i, c in enumerate(coeffs):
        if c:
            folded[i % n] += c
    # z^{(p-1)q + j} = -sum_{i<p-1} z^{iq + j},  q = p^{N-1}
    q = p ** (level - 1)
    for e in range(n - 1, phi - 1, -1):
        c = folded[e]
        if c:
            folded[e] = Fraction(0)
            base = e - (p - 1) * q
            for i in range(p - 1):
                folded[base + i * q] -= c
    return folded[:phi]


# -- norm and valuation ------------------------------------------------------


def cyclo_norm(x: CyclotomicNumber) -> Fraction:
    """Field norm to Q, as Res(Phi_{p^N}, representative of x)."""
    if x.level == 0:
        return x.coefficients[0]
    if x.is_zero():
        return Fraction(0)
    return resultant(cyclotomic_polynomial(x.prime, x.level), x.coefficients)


def val_p_cyclotomic(x: CyclotomicNumber):
    """The unique extension of v_p, computed as v_p(norm) / phi(p^N)."""
    if x.is_zero():
        return INFINITY
    v = val_p_rational(cyclo_norm(x), x.prime)
    return Fraction(v, x.degree)


def val_p_uniformizer(x: CyclotomicNumber):
    """Same valuation via the expansion of x in powers of pi = zeta - 1.

    1, pi, ..., pi^{phi-1} is an integral basis whose members have pairwise
    distinct valuations mod 1, so v(x) is the minimum over the terms.
    """
    if x.is_zero():
        return INFINITY
    if x.level == 0:
        return Fraction(val_p_rational(x.coefficients[0], x.prime))
    phi = x.degree
    c = x.coefficients
    best = None
    for i in range(phi):
        b = sum((c[j] * comb(j, i) for j in range(i, phi) if c[j]), Fraction(0))
        if b:
            v = val_p_rational(b, x.prime) + Fraction(i, phi)
            if best is None or v < best:
                best = v
    return best
