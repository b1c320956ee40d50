from __future__ import annotations

import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from weighted_iwasawa import (
    INFINITY,
    CyclotomicNumber,
    LaurentPolynomial,
    ModpLaurent,
    cyclo_norm,
    laurent_eval,
    laurent_normalize,
    mod_p_reduce,
    ord_T_d1,
    trial_divide_sigma,
    val_p_cyclotomic,
    val_p_rational,
)
from weighted_iwasawa.cyclotomic import resultant, val_p_uniformizer
from weighted_iwasawa.laurent import divide_sigma_power, sigma_minus_one
from weighted_iwasawa.linalg import UPoly, bareiss_det, berkowitz, det, det_berkowitz, det_laplace

Z = CyclotomicNumber.zeta
u = LaurentPolynomial.monomial((1,))
u_inv = LaurentPolynomial.monomial((-1,))
u1, u2 = LaurentPolynomial.monomial((1, 0)), LaurentPolynomial.monomial((0, 1))


def lp(d, terms):
    return LaurentPolynomial(d, terms)


rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)


def cyclo(p, level, data):
    return CyclotomicNumber(p, level, data)


# -- valuations ----------------------------------------------------------------


def test_val_p_rational_examples():
    assert val_p_rational(12, 2) == 2
    assert val_p_rational(0, 5) == INFINITY
    assert val_p_rational(Fraction(1, 2), 2) == -1


def test_cyclo_norm_examples():
    assert cyclo_norm(Z(2, 2) - 1) == 2
    assert cyclo_norm(CyclotomicNumber(2, 3, [0])) == 0
    assert cyclo_norm(CyclotomicNumber.rational(3, 1, 3)) == 9


def test_val_p_cyclotomic_examples():
    assert val_p_cyclotomic(Z(2, 1) - 1) == 1
    assert val_p_cyclotomic(Z(2, 2) - 1) == Fraction(1, 2)
    assert val_p_cyclotomic(Z(3, 1) - 1) == Fraction(1, 2)
    assert val_p_cyclotomic(CyclotomicNumber(3, 2, [0])) == INFINITY


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_valuation_of_zeta_minus_one(p, n):
    want = Fraction(1, p ** (n - 1) * (p - 1))
    x = Z(p, n) - 1
    assert val_p_cyclotomic(x) == want
    assert val_p_uniformizer(x) == want


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)]), st.data())
def test_valuation_multiplicative_and_uniformizer_agrees(field, data):
    p, level = field
    size = p**level
    xs = data.draw(st.lists(rationals, min_size=size, max_size=size))
    ys = data.draw(st.lists(rationals, min_size=size, max_size=size))
    x, y = cyclo(p, level, xs), cyclo(p, level, ys)
    if x.is_zero() or y.is_zero():
        return
    assert val_p_cyclotomic(x * y) == val_p_cyclotomic(x) + val_p_cyclotomic(y)
    assert val_p_uniformizer(x) == val_p_cyclotomic(x)


# -- norms and resultants against sympy -----------------------------------------


def _sylvester_det(a: list[Fraction], b: list[Fraction]):
    """Res(A, B) from its definition as the Sylvester determinant."""
    da, db = len(a) - 1, len(b) - 1
    size = da + db
    rows = []
    for i in range(db):
        rows.append([0] * i + list(reversed(a)) + [0] * (size - da - 1 - i))
    for i in range(da):
        rows.append([0] * i + list(reversed(b)) + [0] * (size - db - 1 - i))
    return sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) if isinstance(x, Fraction) else x for x in r] for r in rows]).det()


@pytest.mark.parametrize("seed", range(20))
def test_resultant_matches_sylvester_determinant(seed):
    rng = random.Random(seed)
    a = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(rng.randint(2, 6))]
    b = [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(rng.randint(2, 6))]
    a[-1] = a[-1] or Fraction(1)
    b[-1] = b[-1] or Fraction(1)
    got = resultant(a, b)
    assert sympy.Rational(got.numerator, got.denominator) == _sylvester_det(a, b)


def test_resultant_of_a_constant():
    assert resultant([3], [1, 0, 1]) == 9
    assert resultant([1, 1], [0]) == 0


@pytest.mark.parametrize("p,level", [(2, 2), (2, 3), (3, 1), (3, 2), (5, 1)])
def test_norm_matches_sympy_field_norm(p, level):
    rng = random.Random(p * 10 + level)
    x = sympy.Symbol("x")
    phi_poly = sympy.cyclotomic_poly(p**level, x)
    for _ in range(5):
        coeffs = [Fraction(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(p**level)]
        value = CyclotomicNumber(p, level, coeffs)
        poly = sum(sympy.Rational(c.numerator, c.denominator) * x**i for i, c in enumerate(coeffs))
        want = sympy.resultant(phi_poly, poly, x)
        got = cyclo_norm(value)
        assert sympy.Rational(got.numerator, got.denominator) == want


# -- field arithmetic ----------------------------------------------------------------


def test_zeta_has_the_right_order():
    z = Z(2, 3)
    assert z**8 == 1
    assert z**4 == -1
    assert Z(3, 2) ** 9 == 1 and Z(3, 2) ** 3 != 1


def test_inverse_and_galois():
    x = CyclotomicNumber(3, 2, [1, 2, 0, Fraction(1, 3)])
    assert x * x.inverse() == 1
    assert x.galois(2) * x.galois(2).inverse() == 1
    assert cyclo_norm(x.galois(4)) == cyclo_norm(x)


@pytest.mark.parametrize("p,low,high", [(2, 1, 3), (2, 0, 2), (3, 1, 2), (2, 2, 4)])
def test_lift_then_reduce_is_identity(p, low, high):
    rng = random.Random(low + high)
    x = CyclotomicNumber(p, low, [rng.randint(-5, 5) for _ in range(p**low)])
    lifted = x.lift(high)
    assert lifted.reduce_level(low) == x
    assert cyclo_norm(lifted) == cyclo_norm(x) ** (lifted.degree // x.degree)


def test_mixed_levels_lift_automatically():
    assert Z(2, 1) + Z(2, 2) ** 2 == -2
    assert (Z(2, 2) * Z(2, 3) ** 2).level == 3


def test_cyclotomic_json_round_trip():
    x = CyclotomicNumber(3, 1, [Fraction(1, 2), -3])
    assert CyclotomicNumber.from_json(x.to_json()) == x


# -- Laurent polynomials -------------------------------------------------------------


def test_laurent_canonical_form():
    F = lp(1, {(1,): 1, (0,): 0, (-1,): 2})
    assert F.terms == {(-1,): 2, (1,): 1}
    assert F == lp(1, [((1,), 1), ((-1,), 1), ((-1,), 1)])
    assert (u - u).is_zero()


def test_laurent_eval_examples():
    F = u - 2 + u_inv
    assert laurent_eval(F, [CyclotomicNumber(2, 0, [1])]) == 0
    assert laurent_eval(F, [Z(2, 1)]) == -4
    assert laurent_eval(u1 * u2 - 1, [Z(2, 2), Z(2, 2)]) == -2
    with pytest.raises(ValueError):
        laurent_eval(F, [CyclotomicNumber(2, 1, [0])])


def _random_laurent(rng, d, size=4):
    return lp(d, {tuple(rng.randint(-2, 2) for _ in range(d)): Fraction(rng.randint(-5, 5), rng.randint(1, 3)) for _ in range(size)})


@pytest.mark.parametrize("seed", range(15))
def test_laurent_eval_is_a_ring_homomorphism(seed):
    rng = random.Random(seed)
    d = rng.randint(1, 2)
    p = rng.choice([2, 3])
    zeta = [Z(p, rng.randint(0, 2), rng.randint(0, 8)) for _ in range(d)]
    F, G = _random_laurent(rng, d), _random_laurent(rng, d)
    assert laurent_eval(F * G, zeta) == laurent_eval(F, zeta) * laurent_eval(G, zeta)
    assert laurent_eval(F + G, zeta) == laurent_eval(F, zeta) + laurent_eval(G, zeta)


def test_laurent_normalize_examples():
    assert laurent_normalize(2 * u - 4 + 2 * u_inv, 2) == (1, u - 2 + u_inv)
    F = u - 2 + u_inv
    assert laurent_normalize(F, 3) == (0, F)
    assert laurent_normalize(Fraction(1, 2) * u - 1, 2) == (-1, u - 2)
    with pytest.raises(ValueError):
        laurent_normalize(u - u, 2)


@pytest.mark.parametrize("seed", range(15))
def test_laurent_normalize_round_trip(seed):
    rng = random.Random(seed)
    F = _random_laurent(rng, rng.randint(1, 3))
    if F.is_zero():
        return
    for p in (2, 3, 5):
        mu, F0 = laurent_normalize(F, p)
        assert F0 * Fraction(p) ** mu == F
        assert min(val_p_rational(c, p) for c in F0.terms.values()) == 0


def test_mod_p_reduce_examples():
    assert mod_p_reduce(u - 2 + u_inv, 2) == ModpLaurent(1, 2, {(1,): 1, (-1,): 1})
    assert mod_p_reduce(3 * u, 3).is_zero()
    assert mod_p_reduce(u1 + u2 - 2, 2) == ModpLaurent(2, 2, {(1, 0): 1, (0, 1): 1})
    with pytest.raises(ValueError):
        mod_p_reduce(Fraction(1, 2) * u, 2)


def test_ord_T_examples():
    assert ord_T_d1(ModpLaurent(1, 2, {(1,): 1, (-1,): 1})) == 2
    assert ord_T_d1(ModpLaurent(1, 2, {(0,): 1})) == 0
    assert ord_T_d1(ModpLaurent(1, 3, {(1,): 1, (0,): -1})) == 1
    with pytest.raises(ValueError):
        ord_T_d1(ModpLaurent(1, 2, {}))


EX63_REDUCTION = sigma_minus_one((1, 1), 2) * sigma_minus_one((1, -1), 2)


def test_trial_divide_examples():
    assert trial_divide_sigma(EX63_REDUCTION, (1, 1)) == 1
    assert trial_divide_sigma(EX63_REDUCTION, (1, -1)) == 1
    assert trial_divide_sigma(EX63_REDUCTION, (1, 0)) == 0
    with pytest.raises(ValueError):
        trial_divide_sigma(EX63_REDUCTION, (2, 0))


@pytest.mark.parametrize("seed", range(10))
def test_trial_divide_counts_planted_factors(seed):
    rng = random.Random(seed)
    p = rng.choice([2, 3])
    a = (1, rng.randint(-2, 2))
    k = rng.randint(0, 3)
    cofactor = ModpLaurent(2, p, {(0, 0): 1, (rng.randint(2, 3), 0): 1, (0, 5): 1})
    G = cofactor * sigma_minus_one(a, p) ** k
    shift = ModpLaurent(2, p, {(rng.randint(-3, 3), rng.randint(-3, 3)): 1})
    assert trial_divide_sigma(G * shift, a) == k
    negated = tuple(-x for x in a)
    assert trial_divide_sigma(G, negated) == trial_divide_sigma(G, a)
    assert (divide_sigma_power(G, a, k) * sigma_minus_one(a, p) ** k).normalized() == G.normalized()


# -- exact linear algebra ------------------------------------------------------------


@pytest.mark.parametrize("seed", range(10))
def test_determinants_agree_with_sympy(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 6)
    M = [[Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
    want = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in M]).det()
    for got in (bareiss_det(M), det_laplace(M, Fraction(1)), det_berkowitz(M, Fraction(1)), det(M, Fraction(1))):
        assert sympy.Rational(got.numerator, got.denominator) == want
    cp = berkowitz(M, Fraction(1))
    lam = sympy.Symbol("x")
    want_cp = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in M]).charpoly(lam)
    assert [sympy.Rational(c.numerator, c.denominator) for c in cp] == want_cp.all_coeffs()


def test_upoly_arithmetic():
    t = UPoly([0, 1])
    assert (1 - t) * (1 + t) == 1 - t * t
    assert ((1 + t) ** 3)(2) == 27
    assert UPoly([1, 0, 0]) == UPoly([1])
