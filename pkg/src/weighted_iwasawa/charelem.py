"""The characteristic element Q^W = det(D^W - W_tau) over Laurent polynomials in u_i = 1 + T_i."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .complexity import ConsistencyError, h_value
from .cyclotomic import CyclotomicNumber
from .graph import Orientation, VoltageAssignment, WeightedGraph, weighted_matrices
from .groups import AbelianGroup, Character
from .laurent import LaurentPolynomial
from .linalg import det

LAPLACE_LIMIT = 10


@dataclass(frozen=True)
class CharElement:
    poly: LaurentPolynomial
    route: str
    a: Fraction | None = None  # set for the quantum-walk variant Q_a

    @property
    def dims(self) -> int:
        return self.poly.dims

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __str__(self):
        return str(self.poly)


def _tau_matrix(X: WeightedGraph, alpha: VoltageAssignment) -> list[list[LaurentPolynomial]]:
    d = alpha.group.rank
    m = len(X.vertices)
    terms: list[list[dict]] = [[{} for _ in range(m)] for _ in range(m)]
    for e, dart in enumerate(X.darts):
        cell = terms[dart.origin][dart.terminus]
        a = alpha(e)
        cell[a] = cell.get(a, 0) + dart.weight
    return [[LaurentPolynomial(d, terms[i][j]) for j in range(m)] for i in range(m)]


def char_element_direct(X: WeightedGraph, alpha: VoltageAssignment, a=None) -> CharElement:
    """det(D^W - W_tau), or det(a^2 I - a W_tau + D^W - I) when ``a`` is given."""
    d = alpha.group.rank
    _, D = weighted_matrices(X)
    Wt = _tau_matrix(X, alpha)
    m = len(D)
    one = LaurentPolynomial.constant(d, 1)
    if a is None:
        M = [[(D[i][j] - Wt[i][j]) if i == j else -Wt[i][j] for j in range(m)] for i in range(m)]
    else:
        a = Fraction(a)
        M = [
            [(a * a + D[i][i] - 1 - Wt[i][j] * a) if i == j else -(Wt[i][j] * a) for j in range(m)]
            for i in range(m)
        ]
    return CharElement(det(M, one, LAPLACE_LIMIT), "direct", a)


@dataclass
class Section5Data:
    values: list[tuple]  # b_1, ..., b_N
    P: LaurentPolynomial  # det M^W in X_1..X_N, Y_1..Y_N (as exponent slots 0..2N-1)


def section5_polynomial(X: WeightedGraph, S: Orientation, alpha: VoltageAssignment) -> Section5Data:
    """Build M^W = D^W - B^W - C^W - P^W and return its determinant in 2N indeterminates.

    The C^W and Y-coefficients use w(s-bar), which coincides with w(s) for strongly
    symmetric weights.
    """
    m = len(X.vertices)
    values = sorted({alpha(s) for s in S})
    N = len(values)
    dims = max(2 * N, 1)
    pos = {b: k for k, b in enumerate(values)}
    _, D = weighted_matrices(X)
    const = [[Fraction(0)] * m for _ in range(m)]  # D - B - C
    lin: list[list[dict]] = [[{} for _ in range(m)] for _ in range(m)]  # P entries
    for i in range(m):
        const[i][i] += D[i][i]

    def var(slot: int) -> tuple:
        e = [0] * dims
        e[slot] = 1
        return tuple(e)

    for s in S:
        ds = X.darts[s]
        wbar = X.darts[X.inverse[s]].weight
        i, j = ds.origin, ds.terminus
        k = pos[alpha(s)]
        const[i][j] -= ds.weight  # B_ij
        const[j][i] -= wbar  # C_ji = sum over S_ij of w(s-bar)
        gx = lin[i][j]
        gx[var(k)] = gx.get(var(k), 0) + ds.weight  # gamma_ij^(k) X_k
        gy = lin[j][i]
        gy[var(N + k)] = gy.get(var(N + k), 0) + wbar  # gamma_ji^(k) Y_k
    zero = (0,) * dims
    M = []
    for i in range(m):
        row = []
        for j in range(m):
            terms = {e: -c for e, c in lin[i][j].items()}
            terms[zero] = terms.get(zero, 0) + const[i][j]
            row.append(LaurentPolynomial(dims, terms))
        M.append(row)
    P = det(M, LaurentPolynomial.constant(dims, 1), LAPLACE_LIMIT)
    return Section5Data(values, P)


def char_element_sec5(
    X: WeightedGraph, S: Orientation, alpha: VoltageAssignment, check: bool = True
) -> CharElement:
    """Q^W via the 2N-indeterminate determinant, then X_k := u^{b_k} - 1, Y_k := u^{-b_k} - 1."""
    d = alpha.group.rank
    data = section5_polynomial(X, S, alpha)
    one = LaurentPolynomial.constant(d, 1)
    subs = [LaurentPolynomial.monomial(b) - 1 for b in data.values]
    subs += [LaurentPolynomial.monomial([-x for x in b]) - 1 for b in data.values]
    if not subs:
        subs = [one * 0]
    Q = data.P.substitute(subs, one)
    result = CharElement(Q, "sec5")
    if check:
        direct = char_element_direct(X, alpha).poly
        if direct != Q:
            raise ConsistencyError("orientation algorithm agrees with the direct determinant", Q, direct)
    return result


# -- evaluation at p-power roots of unity --------------------------------------


def eval_at_exponents(F: LaurentPolynomial, p: int, level: int, ks: Sequence[int]) -> CyclotomicNumber:
    """F(zeta^{k_1}, ..., zeta^{k_d}) with zeta a primitive p^level-th root of unity.

    Every monomial becomes a power of zeta, so the value is accumulated directly.
    """
    n = p**level
    acc = [Fraction(0)] * n
    for e, c in F.terms.items():
        acc[sum(x * k for x, k in zip(e, ks)) % n] += c
    return CyclotomicNumber(p, level, acc)


def character_exponents(psi: Character) -> tuple[int, list[int]]:
    """(level, [k_i]) with psi(e_i) = zeta_{p^level}^{k_i}."""
    G = psi.group
    r = len(G.moduli)
    ks = []
    for i in range(r):
        unit = tuple(1 if j == i else 0 for j in range(r))
        ks.append(psi.exponent(unit))
    return psi.level, ks


def eval_char_element(
    Q: CharElement,
    psi: Character,
    X: WeightedGraph | None = None,
    alpha: VoltageAssignment | None = None,
) -> CyclotomicNumber:
    """Q(zeta_psi - 1); with (X, alpha) given, asserts it equals h of the layer character."""
    level, ks = character_exponents(psi)
    value = eval_at_exponents(Q.poly, psi.prime, level, ks)
    if X is not None and alpha is not None:
        G = psi.group
        alpha_n = alpha.map(G, G.reduce)
        if Q.a is None:
            h = h_value(X, alpha_n, psi)
        else:
            h = qwalk_h_value(X, alpha_n, psi, Q.a)
        if h != value:
            raise ConsistencyError(f"Q(zeta_psi - 1) = h(psi) at {psi}", value, h)
    return value


def qwalk_h_value(X: WeightedGraph, alpha: VoltageAssignment, psi: Character, a) -> CyclotomicNumber:
    """det(a^2 I - a W_psi + D^W - I)."""
    from .complexity import character_matrix

    a = Fraction(a)
    one = CyclotomicNumber(psi.prime, psi.level, [1])
    _, D = weighted_matrices(X)
    Wpsi = character_matrix(X, alpha, psi)
    m = len(D)
    A = [
        [(one * (a * a + D[i][i] - 1) - Wpsi[i][j] * a) if i == j else -(Wpsi[i][j] * a) for j in range(m)]
        for i in range(m)
    ]
    return det(A, one)


def tower_characters(p: int, n: int, d: int) -> list[Character]:
    return AbelianGroup.tower(p, n, d).characters(p)


def is_reciprocal(F: LaurentPolynomial) -> bool:
    """F(u^{-1}) equals +-F up to a monomial unit."""
    if F.is_zero():
        return True
    G = F.invert_variables()
    shift = [a - b for a, b in zip(F.min_exponents(), G.min_exponents())]
    G = G.shift(shift)
    return G == F or G == -F
