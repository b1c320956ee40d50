"""Sparse multivariate Laurent polynomials over Q and over F_p.

Variables are u_i = 1 + T_i, so tau(a) = u^a is a monomial and characteristic
elements have finite support.  Exponent vectors are tuples of ints.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb
from typing import Iterable, Mapping, Sequence

from .padic import Rational, check_prime, val_p_rational

Exponent = tuple


class LaurentPolynomial:
    """Element of Q[u_1^{+-1}, ..., u_d^{+-1}]. Immutable."""

    __slots__ = ("dims", "terms", "_hash")

    def __init__(self, dims: int, terms: Mapping[Exponent, Rational] | Iterable = ()):
        if dims < 1:
            raise ValueError("dims must be positive")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple, Fraction] = {}
        for exp, c in items:
            exp = tuple(int(e) for e in exp)
            if len(exp) != dims:
                raise ValueError(f"exponent {exp} does not have {dims} entries")
            acc[exp] = acc.get(exp, Fraction(0)) + Fraction(c)
        self.dims = dims
        self.terms = {e: acc[e] for e in sorted(acc) if acc[e] != 0}
        self._hash = None

    @classmethod
    def _raw(cls, dims: int, terms: dict) -> LaurentPolynomial:
        obj = cls.__new__(cls)
        obj.dims = dims
        obj.terms = {e: terms[e] for e in sorted(terms) if terms[e] != 0}
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, dims: int, c: Rational) -> LaurentPolynomial:
        return cls(dims, {(0,) * dims: c})

    @classmethod
    def monomial(cls, exponent: Sequence[int], c: Rational = 1) -> LaurentPolynomial:
        return cls(len(exponent), {tuple(exponent): c})

    @classmethod
    def variable(cls, dims: int, i: int) -> LaurentPolynomial:
        e = [0] * dims
        e[i] = 1
        return cls.monomial(e)

    def is_zero(self) -> bool:
        return not self.terms

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def coefficient(self, exponent: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exponent), Fraction(0))

    def _lift(self, other) -> LaurentPolynomial | None:
        if isinstance(other, LaurentPolynomial):
            if other.dims != self.dims:
                raise ValueError("dimension mismatch")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPolynomial.constant(self.dims, other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = out.get(e, 0) + c
        return LaurentPolynomial._raw(self.dims, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial._raw(self.dims, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return LaurentPolynomial._raw(self.dims, {e: c * other for e, c in self.terms.items()})
        o = self._lift(other)
        if o is None:
            return NotImplemented
        out: dict[tuple, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return LaurentPolynomial._raw(self.dims, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if not self.is_monomial():
                raise ValueError("only monomials are invertible")
            (e, c), = self.terms.items()
            return LaurentPolynomial.monomial([-x * (-k) for x in e], Fraction(1) / c ** (-k))
        result = LaurentPolynomial.constant(self.dims, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = LaurentPolynomial.constant(self.dims, other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self.dims == other.dims and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.dims, tuple(self.terms.items())))
        return self._hash

    def invert_variables(self) -> LaurentPolynomial:
        """u -> u^{-1} componentwise."""
        return LaurentPolynomial._raw(
            self.dims, {tuple(-x for x in e): c for e, c in self.terms.items()}
        )

    def shift(self, exponent: Sequence[int]) -> LaurentPolynomial:
        """Multiply by the monomial u^exponent."""
        return LaurentPolynomial._raw(
            self.dims, {tuple(a + b for a, b in zip(e, exponent)): c for e, c in self.terms.items()}
        )

    def min_exponents(self) -> tuple:
        if not self.terms:
            return (0,) * self.dims
        return tuple(min(e[i] for e in self.terms) for i in range(self.dims))

    def substitute(self, values: Sequence, one) -> object:
        """Evaluate with u_i := values[i] in any commutative ring containing Q.

        Negative exponents need invertible values (``x ** -k`` must work).
        """
        if len(values) != self.dims:
            raise ValueError("wrong number of values")
        cache: dict[tuple[int, int], object] = {}

        def power(i: int, k: int):
            key = (i, k)
            if key not in cache:
                cache[key] = values[i] ** k if k else one
            return cache[key]

        total = one * 0
        for e, c in self.terms.items():
            term = one * c
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            total = total + term
        return total

    def to_t_form(self) -> tuple[int, dict[int, Fraction]]:
        """d = 1 only: coefficients in T of u^{-s} F with u = 1+T, and s.

        Returns ``(shift, coeffs)`` with F = (1+T)^shift * sum coeffs[k] T^k.
        """
        if self.dims != 1:
            raise ValueError("T-form is only available for one variable")
        if not self.terms:
            return 0, {}
        low = min(e[0] for e in self.terms)
        out: dict[int, Fraction] = {}
        for (e,), c in self.terms.items():
            n = e - low
            for k in range(n + 1):
                out[k] = out.get(k, 0) + c * comb(n, k)
        return low, {k: v for k, v in sorted(out.items()) if v != 0}

    def __repr__(self):
        return f"LaurentPolynomial({self.dims}, {self.terms!r})"

    def __str__(self):
        return format_monomials(self.terms, self.dims)

    def to_json(self) -> list[dict]:
        return [{"exponents": list(e), "coefficient": str(c)} for e, c in self.terms.items()]

    @classmethod
    def from_json(cls, dims: int, data: list[dict]) -> LaurentPolynomial:
        return cls(dims, [(tuple(t["exponents"]), Fraction(t["coefficient"])) for t in data])


def format_monomials(terms: Mapping[tuple, object], dims: int, var: str = "u") -> str:
    if not terms:
        return "0"
    parts = []
    for e, c in terms.items():
        factors = []
        for i, k in enumerate(e):
            name = var if dims == 1 else f"{var}{i + 1}"
            if k == 1:
                factors.append(name)
            elif k:
                factors.append(f"{name}^{k}")
        mono = "*".join(factors)
        if not mono:
            parts.append(str(c))
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


def laurent_eval(F: LaurentPolynomial, zeta: Sequence):
    """Value of F at u_i := zeta_i (cyclotomic numbers), at their common level."""
    from .cyclotomic import CyclotomicNumber

    if len(zeta) != F.dims:
        raise ValueError("need one root of unity per variable")
    for z in zeta:
        if z == 0:
            raise ValueError("cannot evaluate a Laurent polynomial at zero")
    prime = next((z.prime for z in zeta if z.level), zeta[0].prime)
    level = max(z.level for z in zeta)
    one = CyclotomicNumber(prime, level, [1])
    return F.substitute([one * z for z in zeta], one)


def laurent_normalize(F: LaurentPolynomial, p: int) -> tuple[int, LaurentPolynomial]:
    """Return (mu, F0) with F = p^mu F0 and F0 having a p-adic unit coefficient."""
    check_prime(p)
    if F.is_zero():
        raise ValueError("mu is undefined for the zero element")
    mu = min(val_p_rational(c, p) for c in F.terms.values())
    scale = Fraction(p) ** (-mu)
    return mu, F * scale


# -- reduction mod p ----------------------------------------------------------


class ModpLaurent:
    """Element of F_p[u_1^{+-1}, ..., u_d^{+-1}]. Immutable."""

    __slots__ = ("dims", "p", "terms")

    def __init__(self, dims: int, p: int, terms: Mapping[tuple, int] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[tuple, int] = {}
        for e, c in items:
            e = tuple(e)
            if len(e) != dims:
                raise ValueError("exponent length mismatch")
            acc[e] = (acc.get(e, 0) + c) % p
        self.dims = dims
        self.p = p
        self.terms = {e: acc[e] for e in sorted(acc) if acc[e]}

    def is_zero(self) -> bool:
        return not self.terms

    def __mul__(self, other: ModpLaurent) -> ModpLaurent:
        out: dict[tuple, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return ModpLaurent(self.dims, self.p, out)

    def __pow__(self, k: int) -> ModpLaurent:
        result = ModpLaurent(self.dims, self.p, {(0,) * self.dims: 1})
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, ModpLaurent):
            return NotImplemented
        return (self.dims, self.p, self.terms) == (other.dims, other.p, other.terms)

    def __hash__(self):
        return hash((self.dims, self.p, tuple(self.terms.items())))

    def normalized(self) -> ModpLaurent:
        """Shift by a monomial unit so every minimum exponent is 0."""
        if not self.terms:
            return self
        low = [min(e[i] for e in self.terms) for i in range(self.dims)]
        return ModpLaurent(
            self.dims, self.p, {tuple(a - b for a, b in zip(e, low)): c for e, c in self.terms.items()}
        )

    def __str__(self):
        return format_monomials(self.terms, self.dims)

    def __repr__(self):
        return f"ModpLaurent({self.dims}, {self.p}, {self.terms!r})"


def sigma_minus_one(a: Sequence[int], p: int) -> ModpLaurent:
    """u^a - 1 over F_p."""
    d = len(a)
    return ModpLaurent(d, p, {tuple(a): 1, (0,) * d: -1})


def mod_p_reduce(F0: LaurentPolynomial, p: int) -> ModpLaurent:
    """Coefficient-wise reduction; every coefficient must be p-integral."""
    out = {}
    for e, c in F0.terms.items():
        if val_p_rational(c, p) < 0:
            raise ValueError(f"coefficient {c} is not p-integral for p={p}")
        out[e] = c.numerator * pow(c.denominator, -1, p) % p
    return ModpLaurent(F0.dims, p, out)


def ord_T_d1(G: ModpLaurent) -> int:
    """Order of vanishing at T = 0 after writing u = 1 + T (one variable)."""
    if G.dims != 1:
        raise ValueError("ord_T_d1 needs a one-variable element")
    if G.is_zero():
        raise ValueError("order of the zero element is infinite")
    p = G.p
    g = G.normalized()
    tcoeffs: dict[int, int] = {}
    for (n,), c in g.terms.items():
        for k in range(n + 1):
            b = comb(n, k) % p
            if b:
                tcoeffs[k] = (tcoeffs.get(k, 0) + c * b) % p
    return min(k for k, c in tcoeffs.items() if c)


def _poly_exact_divide(f: dict[tuple, int], g: dict[tuple, int], p: int) -> dict[tuple, int] | None:
    """Exact division f / g in F_p[u_1..u_d] (lex order), or None."""
    lead_g = max(g)
    inv_lc = pow(g[lead_g], -1, p)
    rem = dict(f)
    quot: dict[tuple, int] = {}
    while rem:
        lead = max(rem)
        if any(a < b for a, b in zip(lead, lead_g)):
            return None
        shift = tuple(a - b for a, b in zip(lead, lead_g))
        coef = rem[lead] * inv_lc % p
        quot[shift] = (quot.get(shift, 0) + coef) % p
        for e, c in g.items():
            key = tuple(a + b for a, b in zip(e, shift))
            v = (rem.get(key, 0) - coef * c) % p
            if v:
                rem[key] = v
            else:
                rem.pop(key, None)
    return quot


def _sigma_poly(a: tuple, p: int) -> dict[tuple, int]:
    # u^a - 1 = u^{-a_minus} (u^{a_plus} - u^{a_minus}); the bracket is a polynomial
    plus = tuple(max(x, 0) for x in a)
    minus = tuple(max(-x, 0) for x in a)
    return dict(ModpLaurent(len(a), p, {plus: 1, minus: -1}).terms)


def trial_divide_sigma(G: ModpLaurent, a: Sequence[int]) -> int:
    """Largest k with (u^a - 1)^k dividing G in the Laurent ring over F_p."""
    a = tuple(int(x) for x in a)
    if len(a) != G.dims:
        raise ValueError("exponent length mismatch")
    p = G.p
    if all(x % p == 0 for x in a):
        raise ValueError(f"{a} is 0 mod p: not in Gamma minus Gamma^p")
    if G.is_zero():
        raise ValueError("the zero element is divisible by everything")
    divisor = _sigma_poly(a, p)
    f = dict(G.normalized().terms)
    k = 0
    while True:
        q = _poly_exact_divide(f, divisor, p)
        if q is None:
            return k
        k += 1
        f = q


def divide_sigma_power(G: ModpLaurent, a: Sequence[int], k: int) -> ModpLaurent:
    """G / (u^a - 1)^k up to a monomial unit, raising if the division is not exact."""
    divisor = _sigma_poly(tuple(a), G.p)
    f = dict(G.normalized().terms)
    for _ in range(k):
        q = _poly_exact_divide(f, divisor, G.p)
        if q is None:
            raise ValueError(f"{sigma_minus_one(a, G.p)} does not divide {G}")
        f = q
    return ModpLaurent(G.dims, G.p, f)
