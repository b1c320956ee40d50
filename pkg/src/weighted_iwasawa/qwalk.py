"""Grover-type discrete-time quantum walks on symmetric digraphs and their towers."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .charelem import char_element_direct
from .complexity import ConsistencyError
from .covers import cover_is_connected, tower_layer
from .graph import Dart, InvalidGraph, VoltageAssignment, WeightedGraph, euler_characteristic, validate_graph, weighted_matrices
from .invariants import (
    DEFAULT_BOX,
    GrowthFit,
    VanishingError,
    _map,
    fit_growth,
    lambda_invariant,
    mu_invariant,
    remark_bound,
    valuation_sum,
)
from .linalg import UPoly, bareiss_det, berkowitz, det
from .padic import as_fraction, check_prime, val_p_rational, valuation_str


def qwalk_weights(X: WeightedGraph, require_symmetric: bool = True) -> WeightedGraph:
    """Reweight every dart e by 2 / d_{o(e)}; D^W becomes 2I."""
    deg = [0] * len(X.vertices)
    for d in X.darts:
        deg[d.origin] += 1
    if any(k == 0 for k in deg):
        raise InvalidGraph("every vertex needs at least one dart")
    darts = [Dart(d.id, d.origin, d.terminus, Fraction(2, deg[d.origin])) for d in X.darts]
    Y = WeightedGraph(X.vertices, darts, X.inverse)
    if require_symmetric:
        report = validate_graph(Y)
        if not report:
            raise InvalidGraph(f"quantum-walk weights are not admissible: {report}")
    return Y


def transition_matrix(X: WeightedGraph) -> list[list[Fraction]]:
    """U on darts: 2/d_{o(e_i)} if o(e_i) = t(e_j) and e_j != e_i-bar; 2/d_{o(e_i)} - 1 on the backtrack."""
    deg = [0] * len(X.vertices)
    for d in X.darts:
        deg[d.origin] += 1
    n = len(X.darts)
    U = [[Fraction(0)] * n for _ in range(n)]
    for i, di in enumerate(X.darts):
        w = Fraction(2, deg[di.origin])
        for j, dj in enumerate(X.darts):
            if di.origin == dj.terminus:
                U[i][j] = w - 1 if X.inverse[i] == j else w
    return U


def spectral_sides(X: WeightedGraph) -> tuple[UPoly, UPoly]:
    """det(uI - U) and det(u^2 I - uW + D - I) with the (u^2 - 1)^{l - m} factor moved to one side."""
    U = transition_matrix(X)
    one = Fraction(1)
    left = UPoly(list(reversed(berkowitz(U, one))), Fraction(0))
    Y = qwalk_weights(X, require_symmetric=False)
    W, D = weighted_matrices(Y)
    m = len(W)
    u = UPoly([0, 1])
    M = [
        [(u * u + (D[i][i] - 1) - u * W[i][j]) if i == j else (u * (-W[i][j])) for j in range(m)]
        for i in range(m)
    ]
    right = det(M, UPoly([1]))
    k = len(X.darts) // 2 - m
    factor = UPoly([-1, 0, 1]) ** abs(k)
    if k >= 0:
        right = right * factor
    else:
        left = left * factor
    return left, right


def spectral_identity_check(X: WeightedGraph) -> bool:
    left, right = spectral_sides(X)
    return left == right


def charpoly_at(U: list[list[Fraction]], a) -> Fraction | None:
    """det(aI - U), or None when a is an eigenvalue of U."""
    a = as_fraction(a)
    n = len(U)
    value = bareiss_det([[(a if i == j else 0) - U[i][j] for j in range(n)] for i in range(n)])
    return None if value == 0 else value


class EigenvalueHit(ValueError):
    def __init__(self, n: int, a):
        super().__init__(f"a = {a} is an eigenvalue of the transition matrix at layer {n}")
        self.n = n
        self.a = a


@dataclass
class QRow:
    n: int
    det: Fraction | None
    valuation: object
    factorized: object
    source: str

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "det": None if self.det is None else str(self.det),
            "valuation": valuation_str(self.valuation),
            "factorized": valuation_str(self.factorized),
            "source": self.source,
        }


@dataclass
class GrowthReport:
    a: Fraction
    p: int
    d: int
    chi: int
    mu_qa: object = None
    lambda_qa: int | None = None
    mu_predicted: object = None
    fit: GrowthFit | None = None
    table: list = field(default_factory=list)
    remark_bound: int | None = None
    char_element: object = None
    warnings: list = field(default_factory=list)

    def prediction(self, n: int):
        return self.fit.predict(n, self.p, self.d) if self.fit else None

    def to_json(self) -> dict:
        return {
            "a": str(self.a),
            "p": self.p,
            "d": self.d,
            "chi": self.chi,
            "char_element": None if self.char_element is None else self.char_element.to_json(),
            "mu_Qa": None if self.mu_qa is None else str(self.mu_qa),
            "lambda_Qa": self.lambda_qa,
            "mu_decomposition": {
                "mu_Qa": None if self.mu_qa is None else str(self.mu_qa),
                "minus_chi_v_a2_minus_1": str(-self.chi * val_p_rational(self.a * self.a - 1, self.p))
                if self.a * self.a != 1
                else "0",
            },
            "mu_predicted": None if self.mu_predicted is None else str(self.mu_predicted),
            "fit": self.fit.to_json() if self.fit else None,
            "table": [row.to_json() for row in self.table],
            "remark_bound": self.remark_bound,
            "warnings": list(self.warnings),
        }


def _layer_det(args):
    X, alpha, p, n, a = args
    layer = tower_layer(X, alpha, p, n, check=False)
    return charpoly_at(transition_matrix(layer.graph), a)


def qwalk_growth(
    X: WeightedGraph,
    alpha: VoltageAssignment,
    p: int,
    a,
    nmax: int,
    fit_nmax: int | None = None,
    box: int = DEFAULT_BOX,
    jobs: int = 1,
) -> GrowthReport:
    """v_p(det(aI - U_n)) directly and via -p^{dn} chi v_p(a^2-1) + sum_psi v_p(Q_a(zeta_psi))."""
    check_prime(p)
    a = as_fraction(a)
    d = alpha.group.rank
    Xw = qwalk_weights(X)
    if not cover_is_connected(Xw, alpha.group, alpha, p):
        raise ValueError("the tower is not connected: net voltages do not span F_p^d")
    chi = euler_characteristic(Xw)
    alpha = VoltageAssignment(Xw, alpha.group, alpha.orientation, dict(alpha.values))
    report = GrowthReport(a, p, d, chi)
    if a * a == 1 and chi != 0:
        raise EigenvalueHit(0, a)
    va = val_p_rational(a * a - 1, p) if a * a != 1 else 0
    Qa = char_element_direct(Xw, alpha, a=a).poly
    report.char_element = Qa
    if fit_nmax is None:
        fit_nmax = max(nmax, 2 * d + 3)

    def factorized(n: int):
        try:
            s = valuation_sum(Qa, p, n, include_trivial=True)
        except VanishingError:
            raise EigenvalueHit(n, a) from None
        return -(p ** (d * n)) * chi * va + s

    dets = _map(_layer_det, [(Xw, alpha, p, n, a) for n in range(nmax + 1)], jobs)
    for n, value in enumerate(dets):
        if value is None:
            raise EigenvalueHit(n, a)
        v = val_p_rational(value, p)
        f = factorized(n)
        if f != v:
            raise ConsistencyError(f"direct and factorized v_p(det(aI - U_{n}))", v, f)
        report.table.append(QRow(n, value, v, f, "direct"))
    for n in range(nmax + 1, fit_nmax + 1):
        f = factorized(n)
        report.table.append(QRow(n, None, f, f, "factorized"))

    report.mu_qa = mu_invariant(Qa, p)
    lam = lambda_invariant(Qa, p, box, tower_shift=False)
    report.lambda_qa = lam.lambda_q
    report.mu_predicted = report.mu_qa - chi * va
    report.fit = fit_growth([(row.n, row.valuation) for row in report.table], p, d)
    if report.fit.mu != report.mu_predicted:
        raise ConsistencyError("fitted mu = mu(Q_a) - chi v_p(a^2 - 1)", report.fit.mu, report.mu_predicted)
    if report.fit.lam != report.lambda_qa:
        report.warnings.append(f"fitted lambda {report.fit.lam} differs from lambda(Q_a) = {report.lambda_qa}")
    if d == 1:
        report.remark_bound = remark_bound(lam.lambda_q, p)
    return report
