"""Iwasawa invariants of characteristic elements and growth of v_p(kappa_n) in towers."""

from __future__ import annotations

import itertools
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .charelem import CharElement, char_element_direct, eval_at_exponents
from .complexity import ConsistencyError, kappa_matrix_tree
from .covers import cover_is_connected, derived_cover, tower_layer
from .cyclotomic import cyclo_norm, totient_prime_power, val_p_cyclotomic, val_p_uniformizer
from .graph import VoltageAssignment, WeightedGraph
from .groups import AbelianGroup, DirectProduct
from .laurent import (
    LaurentPolynomial,
    ModpLaurent,
    divide_sigma_power,
    laurent_normalize,
    mod_p_reduce,
    ord_T_d1,
    trial_divide_sigma,
)
from .padic import INFINITY, check_prime, val_p_rational, valuation_str

DEFAULT_BOX = 4


def _poly(Q) -> LaurentPolynomial:
    return Q.poly if isinstance(Q, CharElement) else Q


def mu_invariant(Q, p: int) -> int:
    return laurent_normalize(_poly(Q), p)[0]


def reduction(Q, p: int) -> ModpLaurent:
    """F0 mod p, where F = p^mu F0."""
    _, F0 = laurent_normalize(_poly(Q), p)
    return mod_p_reduce(F0, p)


def primitive_vectors(d: int, box: int) -> list[tuple]:
    """Primitive integer vectors with sup-norm <= box, one from each +- pair."""
    out = []
    for a in itertools.product(range(-box, box + 1), repeat=d):
        first = next((x for x in a if x), 0)
        if first <= 0:
            continue
        g = 0
        for x in a:
            g = gcd(g, x)
        if g == 1:
            out.append(a)
    return out


@dataclass
class LambdaResult:
    lambda_q: int
    tower_lambda: int
    certificate: dict
    box: int | None = None

    def to_json(self) -> dict:
        return {
            "lambda_Q": self.lambda_q,
            "tower_lambda": self.tower_lambda,
            "certificate": [{"divisor": list(a), "multiplicity": k} for a, k in self.certificate.items()],
            "box": self.box,
        }


def lambda_invariant(Q, p: int, box: int = DEFAULT_BOX, tower_shift: bool = True) -> LambdaResult:
    """lambda(Q) = sum of ord_(sigma - 1) of the reduction; tower lambda subtracts 1 when d = 1.

    For d >= 2 only primes u^a - 1 with |a| <= box are tried.
    """
    F = _poly(Q)
    G = reduction(F, p)
    if F.dims == 1:
        lam = ord_T_d1(G)
        cert = {(1,): lam} if lam else {}
        used_box = None
    else:
        cert = {}
        for a in primitive_vectors(F.dims, box):
            k = trial_divide_sigma(G, a)
            if k:
                cert[a] = k
        lam = sum(cert.values())
        used_box = box
    tower = lam - 1 if (F.dims == 1 and tower_shift) else lam
    return LambdaResult(lam, tower, cert, used_box)


def certificate_is_valid(G: ModpLaurent, certificate: dict) -> bool:
    """The certified product divides G and the cofactor has no certified prime left."""
    rest = G
    try:
        for a, k in certificate.items():
            rest = divide_sigma_power(rest, a, k)
    except ValueError:
        return False
    return all(trial_divide_sigma(rest, a) == 0 for a in certificate)


# -- valuation sums over roots of unity ---------------------------------------


class VanishingError(ArithmeticError):
    def __init__(self, level: int, exponents: tuple):
        super().__init__(f"characteristic element vanishes at zeta_{{p^{level}}}^{list(exponents)}")
        self.level = level
        self.exponents = exponents


def orbit_representatives(p: int, n: int, d: int) -> list[tuple[int, tuple]]:
    """Galois-orbit representatives of nontrivial points of (Z/p^n)^d.

    Returns (j, k) with k a vector of exact order p^j, written at level j and
    scaled so its first unit coordinate is 1; the orbit has phi(p^j) members.
    """
    reps = []
    for j in range(1, n + 1):
        q = p**j
        for i in range(d):
            before = [range(0, q, p)] * i
            after = [range(q)] * (d - i - 1)
            for head in itertools.product(*before):
                for tail in itertools.product(*after):
                    reps.append((j, tuple(head) + (1,) + tuple(tail)))
    return reps


def _orbit_term(F: LaurentPolynomial, p: int, j: int, k: tuple):
    value = eval_at_exponents(F, p, j, k)
    if value.is_zero():
        raise VanishingError(j, k)
    return totient_prime_power(p, j) * val_p_uniformizer(value)


def valuation_sum(Q, p: int, n: int, include_trivial: bool = False, orbits: bool = True) -> Fraction:
    """sum over nontrivial zeta in W_n^d of v_p(Q(zeta - 1)); Galois orbits evaluated once."""
    F = _poly(Q)
    d = F.dims
    total = Fraction(0)
    if include_trivial:
        v = val_p_rational(sum(F.terms.values(), Fraction(0)), p)
        if v == INFINITY:
            raise VanishingError(0, (0,) * d)
        total += v
    if orbits:
        for j, k in orbit_representatives(p, n, d):
            total += _orbit_term(F, p, j, k)
        return total
    q = p**n
    for k in itertools.product(range(q), repeat=d):
        if not any(k):
            continue
        value = eval_at_exponents(F, p, n, k)
        if value.is_zero():
            raise VanishingError(n, k)
        total += val_p_cyclotomic(value)
    return total


def character_norm_product(Q, p: int, n: int) -> Fraction:
    """prod over nontrivial zeta in W_n^d of Q(zeta - 1), as a product of orbit norms."""
    F = _poly(Q)
    out = Fraction(1)
    for j, k in orbit_representatives(p, n, F.dims):
        out *= cyclo_norm(eval_at_exponents(F, p, j, k))
    return out


def find_vanishing(Q, p: int, n: int):
    """First (level, exponents) in W_n^d at which Q vanishes, or None."""
    F = _poly(Q)
    for j, k in orbit_representatives(p, n, F.dims):
        if eval_at_exponents(F, p, j, k).is_zero():
            return j, k
    return None


# -- fitting the growth formula ------------------------------------------------


def growth_basis(n: int, p: int, d: int) -> list[int]:
    """Monomials multiplying (mu, lambda, mu_1, lambda_1, ..., mu_{d-1}, lambda_{d-1}, nu)."""
    row = [p ** (d * n), n * p ** ((d - 1) * n)]
    for i in range(1, d):
        row += [p ** ((d - i) * n), n * p ** ((d - i - 1) * n)]
    return row + [1]


def growth_value(coeffs: Sequence, n: int, p: int, d: int) -> Fraction:
    return sum((Fraction(c) * b for c, b in zip(coeffs, growth_basis(n, p, d))), Fraction(0))


def _solve(A: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(A, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return [M[r][n] for r in range(n)]


@dataclass
class GrowthFit:
    mu: Fraction
    lam: Fraction
    secondary: list  # [(mu_i, lambda_i) for i = 1..d-1]
    nu: Fraction
    consistent: bool
    stable_from: int | None
    window: tuple
    verified: list

    @property
    def coefficients(self) -> list[Fraction]:
        out = [self.mu, self.lam]
        for m, l in self.secondary:
            out += [m, l]
        return out + [self.nu]

    def predict(self, n: int, p: int, d: int) -> Fraction:
        return growth_value(self.coefficients, n, p, d)

    def to_json(self) -> dict:
        return {
            "mu": str(self.mu),
            "lambda": str(self.lam),
            "secondary": [{"mu": str(m), "lambda": str(l)} for m, l in self.secondary],
            "nu": str(self.nu),
            "consistent": self.consistent,
            "stable_from": self.stable_from,
            "fit_window": list(self.window),
            "verified_at": list(self.verified),
        }


class SingularFit(ValueError):
    pass


def fit_growth(points: Sequence[tuple[int, Fraction]], p: int, d: int) -> GrowthFit:
    """Solve for the 2d+1 growth coefficients on consecutive windows of points.

    The first window whose solution also matches every later point wins; its
    stable_from is pushed back over earlier points that still match.
    """
    pts = sorted((int(n), Fraction(v)) for n, v in points)
    k = 2 * d + 1
    if len(pts) < k + 1:
        raise ValueError(f"need at least {k + 1} points for d = {d}")
    first_solution = None
    for s in range(len(pts) - k + 1):
        window = pts[s : s + k]
        sol = _solve([growth_basis(n, p, d) for n, _ in window], [v for _, v in window])
        if sol is None:
            continue
        if first_solution is None:
            first_solution = (sol, window)
        later = pts[s + k :]
        if all(growth_value(sol, n, p, d) == v for n, v in later):
            start = s
            while start > 0 and growth_value(sol, pts[start - 1][0], p, d) == pts[start - 1][1]:
                start -= 1
            return _fit(sol, d, bool(later), pts[start][0], window, [n for n, _ in later])
    if first_solution is None:
        raise SingularFit("every window gives a singular system")
    sol, window = first_solution
    return _fit(sol, d, False, None, window, [])


def _fit(sol, d, consistent, stable_from, window, verified) -> GrowthFit:
    secondary = [(sol[2 * i], sol[2 * i + 1]) for i in range(1, d)]
    return GrowthFit(sol[0], sol[1], secondary, sol[-1], consistent, stable_from, (window[0][0], window[-1][0]), verified)


# -- tower reports ---------------------------------------------------------------


@dataclass
class LayerRow:
    n: int
    kappa_direct: Fraction | None
    kappa_product: Fraction | None
    valuation: object
    chain_valuation: object
    source: str

    def to_json(self) -> dict:
        s = lambda x: None if x is None else str(x)
        return {
            "n": self.n,
            "kappa_direct": s(self.kappa_direct),
            "kappa_product": s(self.kappa_product),
            "valuation": valuation_str(self.valuation),
            "chain_valuation": None if self.chain_valuation is None else valuation_str(self.chain_valuation),
            "source": self.source,
        }


@dataclass
class IwasawaReport:
    p: int
    d: int
    char_element: LaurentPolynomial
    mu: object = None
    lam: int | None = None
    lambda_q: int | None = None
    certificate: dict = field(default_factory=dict)
    fit: GrowthFit | None = None
    table: list = field(default_factory=list)
    zero_case: dict | None = None
    remark_bound: int | None = None
    warnings: list = field(default_factory=list)

    @property
    def stable_from(self):
        return self.fit.stable_from if self.fit else None

    def to_json(self) -> dict:
        out = {
            "p": self.p,
            "d": self.d,
            "char_element": self.char_element.to_json(),
            "char_element_text": str(self.char_element),
            "mu": None if self.mu is None else str(self.mu),
            "lambda": self.lam,
            "lambda_Q": self.lambda_q,
            "certificate": [{"divisor": list(a), "multiplicity": k} for a, k in self.certificate.items()],
            "secondary_note": "empirical (stable for computed range)",
            "fit": self.fit.to_json() if self.fit else None,
            "table": [row.to_json() for row in self.table],
            "zero_case": self.zero_case,
            "remark_bound": self.remark_bound,
            "warnings": list(self.warnings),
        }
        return out


def _layer_kappa(args):
    X, alpha, p, n = args
    return kappa_matrix_tree(tower_layer(X, alpha, p, n, check=False).graph)


def _map(fn, items, jobs: int):
    items = list(items)
    if jobs > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]


def remark_bound(lambda_q: int, p: int) -> int:
    """Smallest n >= 1 with phi(p^n) >= lambda(Q)."""
    n = 1
    while totient_prime_power(p, n) < lambda_q:
        n += 1
    return n


def tower_report(
    X: WeightedGraph,
    alpha: VoltageAssignment,
    p: int,
    nmax: int,
    box: int = DEFAULT_BOX,
    fit_nmax: int | None = None,
    jobs: int = 1,
) -> IwasawaReport:
    """Iwasawa-type formula on a Z_p^d tower: direct layers up to nmax, chained sums beyond."""
    check_prime(p)
    d = alpha.group.rank
    if not cover_is_connected(X, alpha.group, alpha, p):
        raise ValueError("the tower is not connected: net voltages do not span F_p^d")
    Q = char_element_direct(X, alpha).poly
    report = IwasawaReport(p, d, Q)
    kappas = _map(_layer_kappa, [(X, alpha, p, n) for n in range(nmax + 1)], jobs)
    k0 = kappas[0]
    if fit_nmax is None:
        fit_nmax = max(nmax, 2 * d + 3)

    hit = None if Q.is_zero() else find_vanishing(Q, p, max(nmax, 1))
    if Q.is_zero() or hit is not None:
        n0 = 1 if Q.is_zero() else hit[0]
        report.zero_case = {
            "n0": n0,
            "reason": "characteristic element is zero" if Q.is_zero() else "characteristic element vanishes at a root of unity",
            "vanishing_character": None if hit is None else {"level": hit[0], "exponents": list(hit[1])},
        }
        if hit is not None:
            report.warnings.append(
                f"nonzero characteristic element vanishes at zeta_{{{p}^{hit[0]}}}^{list(hit[1])}"
            )
        for n, kd in enumerate(kappas):
            if n >= n0 and kd != 0:
                raise ConsistencyError(f"kappa_{n} vanishes in the zero case", kd, 0)
            report.table.append(LayerRow(n, kd, Fraction(0) if n >= n0 else kd, val_p_rational(kd, p), None, "direct"))
        return report
    if k0 == 0:
        raise ValueError("kappa(X) = 0; the base graph has vanishing weighted complexity")

    v0 = val_p_rational(k0, p)
    for n, kd in enumerate(kappas):
        prod = character_norm_product(Q, p, n) if n else Fraction(1)
        kp = k0 / p ** (d * n) * prod
        if kp != kd:
            raise ConsistencyError(f"matrix-tree and product formula for kappa_{n}", kd, kp)
        chain = v0 - d * n + valuation_sum(Q, p, n)
        direct_v = val_p_rational(kd, p)
        if chain != direct_v:
            raise ConsistencyError(f"v_p(kappa_{n}) = v_p(kappa_0) - dn + valuation sum", direct_v, chain)
        report.table.append(LayerRow(n, kd, kp, direct_v, chain, "direct"))
    for n in range(nmax + 1, fit_nmax + 1):
        chain = v0 - d * n + valuation_sum(Q, p, n)
        report.table.append(LayerRow(n, None, None, chain, chain, "chain"))

    report.mu = mu_invariant(Q, p)
    lam = lambda_invariant(Q, p, box)
    report.fit = fit_growth([(row.n, row.valuation) for row in report.table], p, d)
    if d >= 2 and report.fit.lam != lam.tower_lambda:
        bigger = lambda_invariant(Q, p, 2 * box)
        if bigger.tower_lambda != lam.tower_lambda:
            lam = bigger
    if report.fit.lam != lam.tower_lambda or report.fit.mu != report.mu:
        msg = (
            f"fitted (mu, lambda) = ({report.fit.mu}, {report.fit.lam}) differs from "
            f"the characteristic element's ({report.mu}, {lam.tower_lambda})"
        )
        report.warnings.append(msg)
        warnings.warn(msg)
    report.lam = lam.tower_lambda
    report.lambda_q = lam.lambda_q
    report.certificate = lam.certificate
    if d == 1:
        report.remark_bound = remark_bound(lam.lambda_q, p)
    return report


# -- Kida's formula ------------------------------------------------------------


@dataclass
class KidaReport:
    degree: int
    d: int
    p: int
    mu_x: object = None
    mu_y: object = None
    lambda_x: int | None = None
    lambda_y: int | None = None
    hypotheses: dict = field(default_factory=dict)
    relation_holds: bool | None = None
    expected_lambda_y: int | None = None
    certificate_y: dict = field(default_factory=dict)
    char_element_x: LaurentPolynomial | None = None
    char_element_y: LaurentPolynomial | None = None

    @property
    def hypotheses_hold(self) -> bool:
        return all(self.hypotheses.values())

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "p": self.p,
            "d": self.d,
            "mu_X": None if self.mu_x is None else str(self.mu_x),
            "mu_Y": None if self.mu_y is None else str(self.mu_y),
            "lambda_X": self.lambda_x,
            "lambda_Y": self.lambda_y,
            "expected_lambda_Y": self.expected_lambda_y,
            "hypotheses": dict(self.hypotheses),
            "relation_holds": self.relation_holds,
            "certificate_Y": [{"divisor": list(a), "multiplicity": k} for a, k in self.certificate_y.items()],
            "char_element_X": str(self.char_element_x) if self.char_element_x is not None else None,
            "char_element_Y": str(self.char_element_y) if self.char_element_y is not None else None,
        }


def pullback_voltage(cover, alpha: VoltageAssignment) -> VoltageAssignment:
    """alpha o pi on the cover, on the orientation lifted from alpha's."""
    Y = cover.graph
    values = {}
    for s in alpha.orientation:
        for g in cover.elements:
            values[cover.dart(s, g)] = alpha(s)
    from .graph import Orientation

    return VoltageAssignment(Y, alpha.group, Orientation(Y, sorted(values)), values)


def kida_expected(lambda_x: int, degree: int, d: int) -> int:
    return degree * lambda_x if d >= 2 else degree * (lambda_x + 1) - 1


def kida_verify(
    X: WeightedGraph,
    alpha: VoltageAssignment,
    G,
    beta: VoltageAssignment,
    p: int,
    box: int = DEFAULT_BOX,
) -> KidaReport:
    """Kida's formula for Y = X(G, beta) over the tower of alpha, with hypotheses reported separately."""
    check_prime(p)
    d = alpha.group.rank
    report = KidaReport(G.order, d, p)
    gp = G.prime_of_order()
    report.hypotheses["degree is a power of p"] = gp in (1, p)
    report.hypotheses["Y is connected"] = cover_is_connected(X, G, beta)
    report.hypotheses["X tower is connected"] = cover_is_connected(X, alpha.group, alpha, p)
    # Y_n = X(G x Gamma_n); for a p-group it suffices that G x Gamma_1 is generated
    gamma1 = AbelianGroup.tower(p, 1, d)
    both = DirectProduct(G, gamma1)
    joint = VoltageAssignment(
        X, both, alpha.orientation, {s: (beta(s), gamma1.reduce(alpha(s))) for s in alpha.orientation}
    )
    report.hypotheses["Y contains no X_n as a subcover"] = cover_is_connected(X, both, joint)
    Qx = char_element_direct(X, alpha).poly
    report.char_element_x = Qx
    report.hypotheses["Q(X) is nonzero"] = not Qx.is_zero()
    if not Qx.is_zero():
        report.mu_x = mu_invariant(Qx, p)
        report.hypotheses["mu(X) = 0"] = report.mu_x == 0
    if not report.hypotheses_hold:
        return report
    cover = derived_cover(X, G, beta.reorient(alpha.orientation))
    alpha_y = pullback_voltage(cover, alpha)
    Qy = char_element_direct(cover.graph, alpha_y).poly
    report.char_element_y = Qy
    lx = lambda_invariant(Qx, p, box)
    report.lambda_x = lx.tower_lambda
    report.expected_lambda_y = kida_expected(lx.tower_lambda, G.order, d)
    if Qy.is_zero():
        report.hypotheses["Q(Y) is nonzero"] = False
        return report
    report.mu_y = mu_invariant(Qy, p)
    ly = lambda_invariant(Qy, p, box)
    report.lambda_y = ly.tower_lambda
    report.certificate_y = ly.certificate
    report.relation_holds = report.mu_y == 0 and report.lambda_y == report.expected_lambda_y
    return report
