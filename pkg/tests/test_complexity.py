from __future__ import annotations

import random
from fractions import Fraction

import pytest
from helpers import b2, fixture, k3, random_graph

from weighted_iwasawa import (
    AbelianGroup,
    ConsistencyError,
    VoltageAssignment,
    character_matrix,
    derived_cover,
    enumerate_arborescences,
    h_value,
    kappa_matrix_tree,
    product_formula_kappa,
    three_term_check,
    tower_layer,
    weighted_matrices,
)
from weighted_iwasawa.complexity import laplacian
from weighted_iwasawa.cyclotomic import CyclotomicNumber
from weighted_iwasawa.groups import Character
from weighted_iwasawa.linalg import bareiss_det

FIXTURES = ["ex61", "ex61-2-6", "ex61-zero", "ex61-1-2", "ex62-trivial", "ex62", "ex62-2-3-5", "ex62-half", "ex63", "ex64", "ex75"]
GROUPS = [AbelianGroup([2]), AbelianGroup([4]), AbelianGroup([2, 2]), AbelianGroup([3])]
Z2 = AbelianGroup([2])


def nontrivial_z2():
    return Character(Z2, (1,), 2)


def on_z2(alpha):
    return alpha.map(Z2, Z2.reduce)


def test_kappa_examples():
    a, b, c = Fraction(2), Fraction(-3), Fraction(1, 5)
    assert kappa_matrix_tree(k3(a, b, c)[0]) == a * b + b * c + c * a
    X, alpha = b2(1, 1)
    assert kappa_matrix_tree(X) == 1
    assert kappa_matrix_tree(tower_layer(X, alpha, 2, 2).graph) == 32


@pytest.mark.parametrize("seed", range(50))
def test_matrix_tree_matches_arborescences(seed):
    rng = random.Random(seed)
    X = random_graph(rng, max_vertices=6)
    # nonzero integer weights in [-2, 3]
    X = X.with_weights([rng.choice([-2, -1, 1, 2, 3]) for _ in range(X.num_edges)])
    assert kappa_matrix_tree(X) == enumerate_arborescences(X)[1]


@pytest.mark.parametrize("name", FIXTURES)
def test_cofactor_independence_and_singular_laplacian(name):
    gf = fixture(name)
    for n in range(3):
        Y = tower_layer(gf.graph, gf.alpha, gf.p, n, check=False).graph
        if len(Y.vertices) > 16:
            break
        values = {kappa_matrix_tree(Y, k) for k in range(len(Y.vertices))}
        assert len(values) == 1
        assert bareiss_det(laplacian(Y)) == 0


def test_character_matrix_examples():
    a, b, c = 2, 3, 5
    X, alpha = k3(a, b, c)
    trivial = Character(Z2, (0,), 2)
    W, _ = weighted_matrices(X)
    assert character_matrix(X, on_z2(alpha), trivial) == W
    assert character_matrix(X, on_z2(alpha), nontrivial_z2()) == [[0, b, -a], [b, 0, c], [-a, c, 0]]
    X, alpha = b2(a, b)
    assert character_matrix(X, on_z2(alpha), nontrivial_z2()) == [[-2 * a - 2 * b]]


def test_h_value_examples():
    X, alpha = b2(2, 7)
    assert h_value(X, on_z2(alpha), Character(Z2, (0,), 2)) == 0
    assert h_value(X, on_z2(alpha), nontrivial_z2()) == 4 * (2 + 7)
    X, alpha = k3(1, 1, 1)
    # det [[2, -1, 1], [-1, 2, -1], [1, -1, 2]] = 4
    assert h_value(X, on_z2(alpha), nontrivial_z2()) == 4


def test_product_formula_examples():
    X, alpha = b2(1, 1)
    r = product_formula_kappa(X, Z2, on_z2(alpha))
    assert (r.kappa_base, r.kappa_product, r.kappa_direct) == (1, 4, 4)
    assert [h for psi, h in r.h_values if not psi.is_trivial()] == [8]
    X, alpha = b2(1, -1)
    r = product_formula_kappa(X, Z2, on_z2(alpha))
    assert r.kappa_product == r.kappa_direct == 0 and len(r.vanishing) == 1
    X, alpha = k3(1, 1, 1)
    r = product_formula_kappa(X, Z2, on_z2(alpha))
    assert (r.kappa_base, r.kappa_product, r.kappa_direct) == (3, 6, 6)


@pytest.mark.parametrize("name", FIXTURES)
@pytest.mark.parametrize("G", GROUPS, ids=repr)
def test_product_formula_two_paths(name, G):
    gf = fixture(name)
    rng = random.Random(name + repr(G))
    for trial in range(3):
        values = {s: G.reduce(tuple(rng.randint(0, 5) for _ in G.moduli)) for s in gf.alpha.orientation}
        beta = VoltageAssignment(gf.graph, G, gf.alpha.orientation, values)
        r = product_formula_kappa(gf.graph, G, beta)
        assert r.kappa_direct == r.kappa_product


def test_product_formula_detects_a_wrong_path(monkeypatch):
    X, alpha = b2(1, 1)
    import weighted_iwasawa.complexity as cx

    monkeypatch.setattr(cx, "kappa_matrix_tree", lambda Y, k=0: Fraction(5))
    with pytest.raises(ConsistencyError):
        cx.product_formula_kappa(X, Z2, on_z2(alpha))


@pytest.mark.parametrize("G", [AbelianGroup([4]), AbelianGroup([3]), AbelianGroup([8])], ids=repr)
def test_conjugate_character_gives_galois_conjugate(G):
    gf = fixture("ex62-2-3-5")
    beta = gf.alpha.map(G, G.reduce)
    total = None
    for psi in G.characters():
        h = h_value(gf.graph, beta, psi)
        hbar = h_value(gf.graph, beta, psi.conjugate())
        assert hbar == h.galois(-1)
        if not psi.is_trivial():
            total = h if total is None else total * h
    assert total.is_rational()


@pytest.mark.parametrize("name", ["ex62-trivial", "ex62-2-3-5", "ex62-half", "ex61", "ex61-zero", "ex61-2-6"])
@pytest.mark.parametrize("G", GROUPS + [AbelianGroup([8])], ids=repr)
def test_three_term_identity(name, G):
    gf = fixture(name)
    beta = gf.alpha.map(G, lambda v: G.reduce((v[0],) * len(G.moduli)))  # diagonal image of Z
    for psi in G.characters():
        assert three_term_check(gf.graph, G, beta, psi)


def test_three_term_trivial_group():
    X, alpha = k3(1, 1, 1)
    G = AbelianGroup([1])
    beta = alpha.map(G, G.reduce)
    assert three_term_check(X, G, beta, G.characters()[0])


def test_three_term_detects_a_wrong_side():
    from weighted_iwasawa.complexity import three_term_sides

    X, alpha = k3(2, 3, 5)
    left, right = three_term_sides(X, on_z2(alpha), nontrivial_z2())
    assert left == right
    assert left != right * 2


def test_weighted_triangle_double_cover():
    X, alpha = k3(2, 3, 5)
    Y = derived_cover(X, Z2, on_z2(alpha)).graph
    assert kappa_matrix_tree(Y) == enumerate_arborescences(Y)[1]
    one = CyclotomicNumber(2, 1, [1])
    assert h_value(X, on_z2(alpha), nontrivial_z2()) * one * kappa_matrix_tree(X) / 2 == kappa_matrix_tree(Y)
