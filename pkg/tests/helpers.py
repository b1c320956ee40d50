"""Shared builders for the test suite: small named graphs and random graphs."""

from __future__ import annotations

import random
from fractions import Fraction

from weighted_iwasawa import FreeAbelian, VoltageAssignment, WeightedGraph
from weighted_iwasawa.formats import load_graph


def fixture(name: str):
    return load_graph(name)


def bouquet(weights, voltages, d: int = 1):
    """One vertex with a loop pair per weight."""
    edges = [(f"s{i + 1}", "v", "v", w) for i, w in enumerate(weights)]
    X = WeightedGraph.from_edges(["v"], edges)
    return X, VoltageAssignment.on_default(X, FreeAbelian(d), voltages)


def b2(a, b):
    return bouquet([a, b], [[1], [1]])


def b2_plane(a, b):
    return bouquet([a, b], [[0, 1], [1, 0]], d=2)


def b4(a1, a2, a3, a4):
    return bouquet([a1, a2, a3, a4], [[0, 1], [1, 0], [0, 0], [0, 0]], d=2)


def k3(a, b, c, voltages=((0,), (0,), (1,))):
    """Triangle with W = [[0, b, a], [b, 0, c], [a, c, 0]]."""
    edges = [("s1", "v1", "v2", b), ("s2", "v2", "v3", c), ("s3", "v3", "v1", a)]
    X = WeightedGraph.from_edges(["v1", "v2", "v3"], edges)
    return X, VoltageAssignment.on_default(X, FreeAbelian(len(voltages[0])), [list(v) for v in voltages])


def random_weight(rng: random.Random) -> Fraction:
    while True:
        w = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        if w:
            return w


def random_graph(rng: random.Random, max_vertices: int = 6, loops: bool = True, extra: int = 6) -> WeightedGraph:
    """Connected graph with nonzero rational weights and symmetric W (equal weights on e and e-bar)."""
    m = rng.randint(max(1, max_vertices - 3), max_vertices)
    names = [f"v{i}" for i in range(m)]
    edges = []
    for v in range(1, m):
        edges.append((v, rng.randrange(v)))
    for _ in range(rng.randint(1, extra)):
        a, b = rng.randrange(m), rng.randrange(m)
        if a == b and not loops:
            continue
        edges.append((a, b))
    return WeightedGraph.from_edges(
        names, [(f"e{k}", names[a], names[b], random_weight(rng)) for k, (a, b) in enumerate(edges)]
    )


def random_voltage(rng: random.Random, X: WeightedGraph, d: int = 1, spread: int = 3) -> VoltageAssignment:
    values = [[rng.randint(-spread, spread) for _ in range(d)] for _ in range(X.num_edges)]
    return VoltageAssignment.on_default(X, FreeAbelian(d), values)


def random_regular(rng: random.Random, m: int, cycles: int, matching: bool = False) -> WeightedGraph:
    """Regular multigraph: each random permutation adds 2 to every degree, a perfect matching adds 1."""
    names = [f"v{i}" for i in range(m)]
    edges = []
    for _ in range(cycles):
        perm = list(range(m))
        rng.shuffle(perm)
        edges += [(v, perm[v]) for v in range(m)]
    if matching:
        order = list(range(m))
        rng.shuffle(order)
        edges += [(order[i], order[i + 1]) for i in range(0, m - 1, 2)]
    return WeightedGraph.from_edges(names, [(f"e{k}", names[a], names[b], 1) for k, (a, b) in enumerate(edges)])
