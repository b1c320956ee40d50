from __future__ import annotations

import random
from fractions import Fraction

import pytest
from helpers import b2, b2_plane, b4, fixture, k3, random_graph, random_voltage

from weighted_iwasawa import (
    AbelianGroup,
    FreeAbelian,
    VoltageAssignment,
    WeightedGraph,
    cover_is_connected,
    derived_cover,
    enumerate_arborescences,
    euler_characteristic,
    quaternion_group,
    tower_layer,
    validate_graph,
    weighted_matrices,
)
from weighted_iwasawa.covers import DisconnectedCover
from weighted_iwasawa.graph import Dart, is_connected
from weighted_iwasawa.groups import dihedral_group, parse_group

FIXTURES = ["ex61", "ex61-zero", "ex62", "ex62-half", "ex63", "ex64", "ex75"]


def is_cycle(X: WeightedGraph, length: int) -> bool:
    if len(X.vertices) != length or X.num_edges != length or not is_connected(X):
        return False
    return all(X.degree(v) == 2 for v in range(length)) and all(d.origin != d.terminus for d in X.darts)


# -- validation and matrices -------------------------------------------------------


def test_validate_examples():
    X, _ = b2(1, 1)
    assert validate_graph(X)
    asym = WeightedGraph.from_edges(["a", "b", "c"], [("x", "a", "b", 1, 2), ("y", "b", "c", 1), ("z", "c", "a", 1)])
    report = validate_graph(asym)
    assert not report and report.axiom == "symmetric weighted matrix"
    report = validate_graph(WeightedGraph.from_edges(["a", "b"], []))
    assert not report and report.axiom == "connectivity"


def test_validate_rejects_broken_involution():
    darts = [Dart("e", 0, 1, Fraction(1)), Dart("f", 1, 0, Fraction(1))]
    assert validate_graph(WeightedGraph(["a", "b"], darts, [0, 1])).axiom == "involution"
    assert validate_graph(WeightedGraph(["a", "b"], darts, [1, 1])).axiom == "involution"
    bad = [Dart("e", 0, 1, Fraction(1)), Dart("f", 0, 1, Fraction(1))]
    assert validate_graph(WeightedGraph(["a", "b"], bad, [1, 0])).axiom == "involution"


def test_asymmetric_pair_accepted_when_w_stays_symmetric():
    # two parallel pairs with swapped weights keep W symmetric
    X = WeightedGraph.from_edges(["a", "b"], [("x", "a", "b", 1, 2), ("y", "a", "b", 2, 1)])
    assert validate_graph(X)


def test_weighted_matrices_examples():
    a, b, c = 2, 3, 5
    X, _ = k3(a, b, c)
    W, D = weighted_matrices(X)
    assert W == [[0, b, a], [b, 0, c], [a, c, 0]]
    assert [D[i][i] for i in range(3)] == [sum(row) for row in W]
    X, _ = b2(Fraction(1, 3), 4)
    W, D = weighted_matrices(X)
    assert W == [[2 * (Fraction(1, 3) + 4)]] and D == W
    X = WeightedGraph.from_edges(["v1", "v2"], [("e", "v1", "v2", 3)])
    assert weighted_matrices(X) == ([[0, 3], [3, 0]], [[3, 0], [0, 3]])


def test_euler_characteristic_examples():
    assert euler_characteristic(k3(1, 1, 1)[0]) == 0
    assert euler_characteristic(b2(1, 1)[0]) == -1
    assert euler_characteristic(b4(1, 1, 1, 1)[0]) == -3


# -- covers --------------------------------------------------------------------------


def test_bouquet_double_cover():
    X, alpha = b2(1, 1)
    G = AbelianGroup([2])
    cover = derived_cover(X, G, alpha.map(G, G.reduce))
    Y = cover.graph
    assert len(Y.vertices) == 2 and Y.num_edges == 4
    assert all(d.origin != d.terminus for d in Y.darts)
    assert validate_graph(Y)


def test_triangle_covers_are_cycles():
    X, alpha = k3(1, 1, 1)
    G = AbelianGroup([2])
    assert is_cycle(derived_cover(X, G, alpha.map(G, G.reduce)).graph, 6)
    assert is_cycle(tower_layer(X, alpha, 2, 2).graph, 12)


def test_trivial_group_gives_a_copy():
    X, alpha = k3(2, 3, 5)
    G = AbelianGroup([1])
    cover = derived_cover(X, G, alpha.map(G, G.reduce))
    assert weighted_matrices(cover.graph) == weighted_matrices(X)


def test_layer_zero_is_the_base():
    X, alpha = b2(1, 1)
    assert tower_layer(X, alpha, 2, 0).graph is X


def test_plane_layer_one():
    X, alpha = b2_plane(1, 1)
    Y = tower_layer(X, alpha, 2, 1).graph
    assert len(Y.vertices) == 4 and Y.num_edges == 8 and validate_graph(Y)


def test_connectivity_examples():
    X, alpha = b2(1, 1)
    assert cover_is_connected(X, alpha.group, alpha, 2)
    X, alpha = b2_plane(1, 1)
    assert cover_is_connected(X, alpha.group, alpha, 2)
    X, alpha = k3(1, 1, 1, voltages=((0,), (0,), (0,)))
    G = AbelianGroup([2])
    assert not cover_is_connected(X, G, alpha.map(G, G.reduce))
    assert not cover_is_connected(X, alpha.group, alpha, 2)
    with pytest.raises(DisconnectedCover):
        tower_layer(X, alpha, 2, 1)


@pytest.mark.parametrize("seed", range(25))
def test_connectivity_criterion_matches_brute_force(seed):
    rng = random.Random(seed)
    X = random_graph(rng, max_vertices=4, extra=3)
    G = rng.choice([AbelianGroup([2]), AbelianGroup([4]), AbelianGroup([2, 2]), AbelianGroup([3]), quaternion_group()])
    elements = G.elements()
    S = X.default_orientation()
    beta = VoltageAssignment(X, G, S, {s: rng.choice(elements[: rng.randint(1, len(elements))]) for s in S})
    assert cover_is_connected(X, G, beta) == is_connected(derived_cover(X, G, beta).graph)


@pytest.mark.parametrize("seed", range(10))
def test_tower_connectivity_matches_layers(seed):
    rng = random.Random(100 + seed)
    X = random_graph(rng, max_vertices=3, extra=2)
    d = rng.choice([1, 2])
    alpha = random_voltage(rng, X, d=d, spread=2)
    claim = cover_is_connected(X, alpha.group, alpha, 2)
    for n in (1, 2):
        assert is_connected(tower_layer(X, alpha, 2, n, check=False).graph) == claim


@pytest.mark.parametrize("name", FIXTURES)
@pytest.mark.parametrize("group", ["Z/2", "Z/3", "Z/2xZ/2", "Q8", "D4"])
def test_cover_sizes_and_deck_action(name, group):
    gf = fixture(name)
    X = gf.graph
    G = parse_group(group)
    rng = random.Random(name + group)
    elements = G.elements()
    beta = VoltageAssignment(X, G, X.default_orientation(), {s: rng.choice(elements) for s in X.default_orientation()})
    cover = derived_cover(X, G, beta)
    Y = cover.graph
    assert len(Y.vertices) == len(X.vertices) * G.order
    assert len(Y.darts) == len(X.darts) * G.order
    assert not validate_graph(Y) or is_connected(Y)
    # covering map: locally bijective on out-darts, weights pulled back
    for v in range(len(Y.vertices)):
        base = cover.vertex_projection[v]
        assert sorted(cover.dart_projection[e] for e in Y.out_darts(v)) == sorted(X.out_darts(base))
    for e, d in enumerate(Y.darts):
        assert d.weight == X.darts[cover.dart_projection[e]].weight
        assert Y.inverse[Y.inverse[e]] == e
    # deck transformations preserve structure and commute with the projection
    for g in elements:
        verts, darts = cover.deck(g)
        for e, d in enumerate(Y.darts):
            image = Y.darts[darts[e]]
            assert (image.origin, image.terminus, image.weight) == (verts[d.origin], verts[d.terminus], d.weight)
            assert darts[Y.inverse[e]] == Y.inverse[darts[e]]
            assert cover.dart_projection[darts[e]] == cover.dart_projection[e]


@pytest.mark.parametrize("name,n", [("ex61", 1), ("ex61", 2), ("ex62", 1), ("ex62", 2), ("ex63", 1), ("ex75", 2)])
def test_tower_functoriality(name, n):
    """X_n is the quotient of X_{n+1} by the kernel of reduction mod p^n."""
    gf = fixture(name)
    p, d = gf.p, gf.d
    big = tower_layer(gf.graph, gf.alpha, p, n + 1)
    small = tower_layer(gf.graph, gf.alpha, p, n)
    q = p**n

    def down(vertex_index_big):
        v = big.vertex_projection[vertex_index_big]
        g = big.elements[vertex_index_big % big.degree]
        return small.vertex(v, tuple(x % q for x in g))

    fibres = {}
    for v in range(len(big.graph.vertices)):
        fibres.setdefault(down(v), set()).add(v)
    assert all(len(f) == p**d for f in fibres.values())
    for e, dart in enumerate(big.graph.darts):
        base_e = big.dart_projection[e]
        g = big.elements[e % big.degree]
        image = small.graph.darts[small.dart(base_e, tuple(x % q for x in g))]
        assert (image.origin, image.terminus) == (down(dart.origin), down(dart.terminus))


# -- arborescences -------------------------------------------------------------


def test_arborescence_examples():
    a, b, c = Fraction(2), Fraction(3), Fraction(5)
    X, _ = k3(a, b, c)
    for root in range(3):
        trees, total = enumerate_arborescences(X, root)
        assert len(trees) == 3 and total == a * b + b * c + c * a
    single = WeightedGraph.from_edges(["v"], [])
    assert enumerate_arborescences(single) == ([()], 1)
    X, alpha = b2(1, -1)
    assert enumerate_arborescences(tower_layer(X, alpha, 2, 1).graph)[1] == 0


def test_arborescence_size_cap():
    X = WeightedGraph.from_edges([f"v{i}" for i in range(13)], [(f"e{i}", f"v{i}", f"v{i + 1}", 1) for i in range(12)])
    with pytest.raises(ValueError):
        enumerate_arborescences(X)


@pytest.mark.parametrize("seed", range(15))
def test_arborescence_sum_is_root_independent(seed):
    X = random_graph(random.Random(seed), max_vertices=5)
    totals = {enumerate_arborescences(X, r)[1] for r in range(len(X.vertices))}
    assert len(totals) == 1


def test_arborescence_root_independent_on_fixture_layers():
    for name in FIXTURES:
        gf = fixture(name)
        Y = tower_layer(gf.graph, gf.alpha, gf.p, 1, check=False).graph
        if len(Y.vertices) <= 8:
            assert len({enumerate_arborescences(Y, r)[1] for r in range(len(Y.vertices))}) == 1


# -- groups ----------------------------------------------------------------------------


@pytest.mark.parametrize("make", [quaternion_group, dihedral_group])
def test_builtin_groups(make):
    G = make()
    assert G.order == 8 and not G.is_abelian() and G.prime_of_order() == 2
    e = G.elements()[0]
    for x in G.elements():
        assert G.mul(x, G.inv(x)) == e


def test_quaternion_relations():
    G = quaternion_group()
    s, t = "s", "t"
    assert G.mul(t, t) == G.mul(s, s) != G.elements()[0]
    assert G.mul(t, s) == G.mul(G.inv(s), t)
    D = dihedral_group()
    assert D.mul(t, t) == D.elements()[0]


def test_table_group_validation():
    with pytest.raises(ValueError):
        parse_group({"table": {"elements": ["e", "a"], "table": [["e", "a"], ["a", "a"]]}})


def test_free_abelian_parsing():
    Z2 = FreeAbelian(2)
    assert Z2.parse("1,-2") == (1, -2) and Z2.parse([3, 4]) == (3, 4)
    with pytest.raises(ValueError):
        Z2.parse([1])
