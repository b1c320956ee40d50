"""Weighted complexity, character twists of W, and the determinant identities."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .covers import derived_cover
from .cyclotomic import CyclotomicNumber
from .graph import VoltageAssignment, WeightedGraph, euler_characteristic, weighted_matrices
from .groups import AbelianGroup, Character
from .linalg import UPoly, bareiss_det, berkowitz, det


class ConsistencyError(AssertionError):
    """Two independent computations of the same quantity disagree."""

    def __init__(self, identity: str, left, right):
        super().__init__(f"{identity}: {left} != {right}")
        self.identity = identity
        self.left = left
        self.right = right


def laplacian(X: WeightedGraph) -> list[list[Fraction]]:
    W, D = weighted_matrices(X)
    m = len(W)
    return [[D[i][j] - W[i][j] for j in range(m)] for i in range(m)]


def kappa_matrix_tree(X: WeightedGraph, k: int = 0) -> Fraction:
    """det of D^W - W with row and column k removed."""
    L = laplacian(X)
    sub = [row[:k] + row[k + 1 :] for i, row in enumerate(L) if i != k]
    return bareiss_det(sub)


def _one(psi: Character) -> CyclotomicNumber:
    return CyclotomicNumber(psi.prime, psi.level, [1])


def character_matrix(X: WeightedGraph, alpha: VoltageAssignment, psi: Character) -> list[list[CyclotomicNumber]]:
    """W_psi: entry (i, j) is the sum of psi(alpha(e)) w(e) over darts i -> j."""
    one = _one(psi)
    m = len(X.vertices)
    cache = {}
    M = [[one * 0 for _ in range(m)] for _ in range(m)]
    for e, d in enumerate(X.darts):
        a = alpha(e)
        if a not in cache:
            cache[a] = psi(a) * one
        M[d.origin][d.terminus] = M[d.origin][d.terminus] + cache[a] * d.weight
    return M


def h_value(X: WeightedGraph, alpha: VoltageAssignment, psi: Character) -> CyclotomicNumber:
    """h_X(psi, 1, alpha) = det(D^W - W_psi)."""
    _, D = weighted_matrices(X)
    Wpsi = character_matrix(X, alpha, psi)
    m = len(D)
    A = [[(D[i][j] - Wpsi[i][j]) if i == j else -Wpsi[i][j] for j in range(m)] for i in range(m)]
    return det(A, _one(psi))


@dataclass
class ProductReport:
    kappa_base: Fraction
    kappa_product: Fraction
    kappa_direct: Fraction | None
    order: int
    h_values: list = field(default_factory=list)

    @property
    def vanishing(self) -> list:
        return [psi for psi, h in self.h_values if h.is_zero() and not psi.is_trivial()]

    def to_json(self) -> dict:
        from .padic import valuation_str
        from .cyclotomic import val_p_uniformizer

        return {
            "kappa_base": str(self.kappa_base),
            "kappa_direct": None if self.kappa_direct is None else str(self.kappa_direct),
            "kappa_product": str(self.kappa_product),
            "group_order": self.order,
            "h_values": [
                {
                    "character": list(psi.images),
                    "value": h.to_json(),
                    "valuation": valuation_str(val_p_uniformizer(h)),
                }
                for psi, h in self.h_values
            ],
        }


def product_formula_kappa(
    X: WeightedGraph, G: AbelianGroup, alpha: VoltageAssignment, direct: bool = True
) -> ProductReport:
    """kappa(X(G, alpha)) = kappa(X)/|G| * prod_{psi != 1} h(psi), checked against matrix-tree."""
    base = kappa_matrix_tree(X)
    hs = []
    total = None
    for psi in G.characters():
        h = h_value(X, alpha, psi)
        hs.append((psi, h))
        if psi.is_trivial():
            if not h.is_zero():
                raise ConsistencyError("h(trivial character) = 0", h, 0)
            continue
        total = h if total is None else total * h
    if total is None:
        prod = Fraction(1)
    else:
        if not total.is_rational():
            raise ConsistencyError("product of h-values is rational", total, "a rational number")
        prod = total.to_rational()
    kappa_product = base / G.order * prod
    kappa_direct = None
    if direct:
        cover = derived_cover(X, G, alpha)
        kappa_direct = kappa_matrix_tree(cover.graph)
        if kappa_direct != kappa_product:
            raise ConsistencyError("product formula for the cover's complexity", kappa_direct, kappa_product)
    return ProductReport(base, kappa_product, kappa_direct, G.order, hs)


# -- three-term determinant formula -------------------------------------------


def edge_matrix(X: WeightedGraph, alpha: VoltageAssignment, psi: Character) -> list[list[CyclotomicNumber]]:
    """sum_sigma (B_sigma - C_sigma) psi(sigma), a 2l x 2l matrix indexed by darts."""
    one = _one(psi)
    zero = one * 0
    n = len(X.darts)
    A = [[zero] * n for _ in range(n)]
    for i, di in enumerate(X.darts):
        s = psi(alpha(i)) * one
        row = A[i]
        for j, dj in enumerate(X.darts):
            entry = dj.weight if di.terminus == dj.origin else Fraction(0)
            if X.inverse[i] == j:
                entry -= 1
            if entry:
                row[j] = s * entry
    return A


def three_term_sides(X: WeightedGraph, alpha: VoltageAssignment, psi: Character) -> tuple[UPoly, UPoly]:
    """Both sides of the identity as polynomials in t, after clearing (1 - t^2)^chi."""
    one = _one(psi)
    zero = one * 0
    A = edge_matrix(X, alpha, psi)
    cp = berkowitz(A, one)  # det(xI - A) = sum cp[k] x^{n-k}; det(I - tA) = sum cp[k] t^k
    left = UPoly(cp, zero)
    W, D = weighted_matrices(X)
    Wpsi = character_matrix(X, alpha, psi)
    m = len(W)
    pone = UPoly([one], zero)
    t = UPoly.x(one)
    M = []
    for i in range(m):
        row = []
        for j in range(m):
            entry = UPoly([zero], zero) - t * UPoly([Wpsi[i][j]], zero)
            if i == j:
                entry = entry + pone + t * t * UPoly([one * (D[i][i] - 1)], zero)
            row.append(entry)
        M.append(row)
    right = det(M, pone)
    chi = euler_characteristic(X)
    factor = UPoly([one, zero, zero - one], zero) ** abs(chi)  # 1 - t^2
    if chi <= 0:
        right = right * factor
    else:
        left = left * factor
    return left, right


def three_term_check(X: WeightedGraph, G: AbelianGroup, alpha: VoltageAssignment, psi: Character) -> bool:
    """det(I - t sum (B - C) psi) == (1 - t^2)^{-chi} det(I - t W_psi + t^2 (D - I))."""
    left, right = three_term_sides(X, alpha, psi)
    return left == right
