"""Derived (voltage) covers, connectivity criteria, tower layers, arborescences."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .groups import AbelianGroup, FreeAbelian
from .graph import Dart, VoltageAssignment, WeightedGraph, is_connected


@dataclass
class Cover:
    graph: WeightedGraph
    base: WeightedGraph
    group: object
    elements: list
    vertex_projection: list[int]
    dart_projection: list[int]

    @property
    def degree(self) -> int:
        return len(self.elements)

    def vertex(self, v: int, g) -> int:
        return v * len(self.elements) + self._pos[g]

    def dart(self, e: int, g) -> int:
        return e * len(self.elements) + self._pos[g]

    def __post_init__(self):
        self._pos = {g: i for i, g in enumerate(self.elements)}

    def deck(self, g) -> tuple[list[int], list[int]]:
        """Left multiplication by g as permutations of cover vertices and darts."""
        G = self.group
        m, n = len(self.base.vertices), len(self.base.darts)
        verts = [self.vertex(v, G.mul(g, s)) for v in range(m) for s in self.elements]
        darts = [self.dart(e, G.mul(g, s)) for e in range(n) for s in self.elements]
        return verts, darts


class DisconnectedCover(ValueError):
    pass


def derived_cover(X: WeightedGraph, G, alpha: VoltageAssignment) -> Cover:
    """X(G, alpha): t((e, s)) = (t(e), s alpha(e)), inverse (e-bar, s alpha(e))."""
    elements = list(G.elements())
    pos = {g: i for i, g in enumerate(elements)}
    k = len(elements)
    values = alpha.dart_values()
    vertices = [f"{v}@{G.format(g)}" for v in X.vertices for g in elements]
    darts = []
    inverse = []
    for e, d in enumerate(X.darts):
        a = values[e]
        for g in elements:
            h = G.mul(g, a)
            darts.append(Dart(f"{d.id}@{G.format(g)}", d.origin * k + pos[g], d.terminus * k + pos[h], d.weight))
            inverse.append(X.inverse[e] * k + pos[h])
    graph = WeightedGraph(vertices, darts, inverse)
    return Cover(
        graph,
        X,
        G,
        elements,
        [v for v in range(len(X.vertices)) for _ in elements],
        [e for e in range(len(X.darts)) for _ in elements],
    )


def _spanning_potentials(X: WeightedGraph, G, alpha: VoltageAssignment):
    """BFS tree from vertex 0; returns potentials phi(v) and the set of tree darts."""
    if not is_connected(X):
        raise ValueError("base graph is not connected")
    phi = {0: G.identity}
    tree = set()
    queue = deque([0])
    out = [[] for _ in X.vertices]
    for i, d in enumerate(X.darts):
        out[d.origin].append(i)
    while queue:
        v = queue.popleft()
        for i in out[v]:
            t = X.darts[i].terminus
            if t not in phi:
                phi[t] = G.mul(phi[v], alpha(i))
                tree.add(i)
                tree.add(X.inverse[i])
                queue.append(t)
    return phi, tree


def net_voltages(X: WeightedGraph, G, alpha: VoltageAssignment) -> list:
    """Net voltage of each fundamental cycle (non-tree edge closed by tree paths)."""
    phi, tree = _spanning_potentials(X, G, alpha)
    nets = []
    for i in alpha.orientation:
        if i in tree:
            continue
        d = X.darts[i]
        nets.append(G.mul(G.mul(phi[d.origin], alpha(i)), G.inv(phi[d.terminus])))
    return nets


def rank_mod_p(vectors, p: int) -> int:
    rows = [[x % p for x in v] for v in vectors]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        pivot = next((r for r in range(rank, len(rows)) if rows[r][c]), None)
        if pivot is None:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        inv = pow(rows[rank][c], -1, p)
        rows[rank] = [x * inv % p for x in rows[rank]]
        for r in range(len(rows)):
            if r != rank and rows[r][c]:
                f = rows[r][c]
                rows[r] = [(x - f * y) % p for x, y in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def cover_is_connected(X: WeightedGraph, G, alpha: VoltageAssignment, p: int | None = None) -> bool:
    """Net-voltage criterion.

    For a finite G: the net voltages generate G.  For Z^d voltages and a prime
    p: every layer (Z/p^n)^d is connected iff the net voltages span F_p^d.
    """
    nets = net_voltages(X, G, alpha)
    if isinstance(G, FreeAbelian):
        if p is None:
            raise ValueError("a prime is needed for a Z^d tower")
        return rank_mod_p(nets, p) == G.rank
    return len(G.subgroup_generated(nets)) == G.order


def tower_layer(X: WeightedGraph, alpha: VoltageAssignment, p: int, n: int, check: bool = True) -> Cover:
    """Layer X_n = X((Z/p^n)^d, alpha mod p^n); layer 0 is X itself."""
    d = alpha.group.rank
    if check and not cover_is_connected(X, alpha.group, alpha, p):
        raise DisconnectedCover(f"net voltages do not span F_{p}^{d}: the tower is disconnected")
    if n == 0:
        G = AbelianGroup([1] * d)
        ident = list(range(len(X.vertices))), list(range(len(X.darts)))
        return Cover(X, X, G, G.elements(), *ident)
    G = AbelianGroup.tower(p, n, d)
    return derived_cover(X, G, alpha.map(G, G.reduce))


def layer_voltage(alpha: VoltageAssignment, p: int, n: int) -> tuple[AbelianGroup, VoltageAssignment]:
    G = AbelianGroup.tower(p, n, alpha.group.rank)
    return G, alpha.map(G, G.reduce)


# -- spanning arborescences (exponential oracle) ------------------------------

ARBORESCENCE_LIMIT = 12


def enumerate_arborescences(X: WeightedGraph, root: int = 0, limit: int = ARBORESCENCE_LIMIT):
    """All spanning arborescences towards ``root`` and the sum of their weight products.

    Each non-root vertex keeps exactly one out-dart and every path ends at the
    root; this is the orientation counted by the cofactor of D^W - W.
    """
    m = len(X.vertices)
    if m > limit:
        raise ValueError(f"{m} vertices exceeds the enumeration limit of {limit}")
    choices = [[i for i in X.out_darts(v) if X.darts[i].terminus != v] for v in range(m)]
    order = [v for v in range(m) if v != root]
    parent = [-1] * m
    chosen: list[int] = []
    found: list[tuple[int, ...]] = []
    total = Fraction(0)

    def reaches_self(v: int, t: int) -> bool:
        while t != root and parent[t] != -1:
            if t == v:
                return True
            t = parent[t]
        return t == v

    def rec(k: int, weight: Fraction):
        nonlocal total
        if k == len(order):
            found.append(tuple(chosen))
            total += weight
            return
        v = order[k]
        for i in choices[v]:
            t = X.darts[i].terminus
            if reaches_self(v, t):
                continue
            parent[v] = t
            chosen.append(i)
            rec(k + 1, weight * X.darts[i].weight)
            chosen.pop()
            parent[v] = -1

    rec(0, Fraction(1))
    return found, total
