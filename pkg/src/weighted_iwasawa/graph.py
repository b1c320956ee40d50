"""Weighted symmetric digraphs.

A graph is a list of named vertices and a list of darts (directed edges) with a
fixed-point-free involution ``inverse``.  Origins and termini are stored as
vertex indices.  Weights are Fractions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .padic import as_fraction


@dataclass(frozen=True)
class Dart:
    id: str
    origin: int
    terminus: int
    weight: Fraction


@dataclass
class ValidationReport:
    ok: bool
    problem: str = ""
    axiom: str = ""

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "ok" if self.ok else f"{self.axiom}: {self.problem}"


class InvalidGraph(ValueError):
    pass


class WeightedGraph:
    def __init__(self, vertices: Sequence[str], darts: Sequence[Dart], inverse: Sequence[int]):
        self.vertices = tuple(vertices)
        self.darts = tuple(darts)
        self.inverse = tuple(inverse)
        self._index = {v: i for i, v in enumerate(self.vertices)}

    @classmethod
    def from_edges(cls, vertices: Sequence[str], edges: Sequence) -> WeightedGraph:
        """Build from oriented edges ``(id, from, to, weight[, weight_rev])``.

        Dart k < l is edge k as given; dart l + k is its inverse, with id
        ``id'`` and weight ``weight_rev`` (defaulting to ``weight``).
        """
        index = {v: i for i, v in enumerate(vertices)}
        if len(index) != len(vertices):
            raise InvalidGraph("duplicate vertex names")
        fwd, rev = [], []
        for edge in edges:
            eid, a, b, w = edge[:4]
            wr = edge[4] if len(edge) > 4 and edge[4] is not None else w
            try:
                o, t = index[a], index[b]
            except KeyError as exc:
                raise InvalidGraph(f"edge {eid!r} uses unknown vertex {exc.args[0]!r}") from None
            fwd.append(Dart(str(eid), o, t, as_fraction(w)))
            rev.append(Dart(f"{eid}'", t, o, as_fraction(wr)))
        l = len(fwd)
        inverse = list(range(l, 2 * l)) + list(range(l))
        return cls(vertices, fwd + rev, inverse)

    # -- basic data ----------------------------------------------------------
    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        """Number of involution pairs l (half the number of darts)."""
        return len(self.darts) // 2

    def vertex_index(self, name: str) -> int:
        return self._index[name]

    def dart_index(self, dart_id: str) -> int:
        for i, d in enumerate(self.darts):
            if d.id == dart_id:
                return i
        raise KeyError(dart_id)

    def out_darts(self, v: int) -> list[int]:
        return [i for i, d in enumerate(self.darts) if d.origin == v]

    def degree(self, v: int) -> int:
        return len(self.out_darts(v))

    def default_orientation(self) -> Orientation:
        return Orientation(self, [i for i in range(len(self.darts)) if i < self.inverse[i]])

    def with_weights(self, weights: Sequence) -> WeightedGraph:
        darts = [Dart(d.id, d.origin, d.terminus, as_fraction(w)) for d, w in zip(self.darts, weights)]
        return WeightedGraph(self.vertices, darts, self.inverse)

    def __repr__(self):
        return f"WeightedGraph({len(self.vertices)} vertices, {len(self.darts)} darts)"


def validate_graph(X: WeightedGraph) -> ValidationReport:
    n = len(X.darts)
    if len(X.inverse) != n:
        return ValidationReport(False, "inverse map has the wrong length", "involution")
    for i, j in enumerate(X.inverse):
        if not 0 <= j < n:
            return ValidationReport(False, f"dart {X.darts[i].id} has no inverse", "involution")
        if j == i:
            return ValidationReport(False, f"dart {X.darts[i].id} is its own inverse", "involution")
        if X.inverse[j] != i:
            return ValidationReport(False, f"inverse of {X.darts[i].id} is not an involution", "involution")
        if X.darts[i].origin != X.darts[j].terminus:
            return ValidationReport(False, f"o({X.darts[i].id}) != t(inverse)", "involution")
    m = len(X.vertices)
    for d in X.darts:
        if not (0 <= d.origin < m and 0 <= d.terminus < m):
            return ValidationReport(False, f"dart {d.id} has an endpoint outside V", "incidence")
    W, _ = _raw_matrices(X)
    for i in range(m):
        for j in range(i + 1, m):
            if W[i][j] != W[j][i]:
                a, b = X.vertices[i], X.vertices[j]
                return ValidationReport(
                    False, f"W[{a}][{b}] = {W[i][j]} but W[{b}][{a}] = {W[j][i]}", "symmetric weighted matrix"
                )
    if not is_connected(X):
        return ValidationReport(False, "graph is not connected", "connectivity")
    return ValidationReport(True)


def check_graph(X: WeightedGraph) -> WeightedGraph:
    report = validate_graph(X)
    if not report:
        raise InvalidGraph(str(report))
    return X


def is_connected(X: WeightedGraph) -> bool:
    m = len(X.vertices)
    if m == 0:
        return False
    adj: list[list[int]] = [[] for _ in range(m)]
    for d in X.darts:
        adj[d.origin].append(d.terminus)
        adj[d.terminus].append(d.origin)
    seen = {0}
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for u in adj[v]:
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return len(seen) == m


def _raw_matrices(X: WeightedGraph):
    m = len(X.vertices)
    W = [[Fraction(0)] * m for _ in range(m)]
    D = [[Fraction(0)] * m for _ in range(m)]
    for d in X.darts:
        W[d.origin][d.terminus] += d.weight
        D[d.origin][d.origin] += d.weight
    return W, D


def weighted_matrices(X: WeightedGraph) -> tuple[list[list[Fraction]], list[list[Fraction]]]:
    """(W, D^W): summed weights per vertex pair, and the diagonal of out-weights."""
    return _raw_matrices(X)


def euler_characteristic(X: WeightedGraph) -> int:
    return len(X.vertices) - len(X.darts) // 2


class Orientation:
    """One dart from each involution pair."""

    def __init__(self, X: WeightedGraph, darts: Sequence[int]):
        darts = list(darts)
        chosen = set(darts)
        if len(chosen) != len(darts):
            raise ValueError("orientation repeats a dart")
        for i in range(len(X.darts)):
            if (i in chosen) == (X.inverse[i] in chosen):
                raise ValueError(f"orientation must contain exactly one of {X.darts[i].id} and its inverse")
        self.graph = X
        self.darts = darts
        self.members = frozenset(darts)

    def __iter__(self):
        return iter(self.darts)

    def __len__(self):
        return len(self.darts)

    def contains(self, i: int) -> bool:
        return i in self.members


@dataclass
class VoltageAssignment:
    """Group values on an orientation; inverse darts get inverse values."""

    graph: WeightedGraph
    group: object
    orientation: Orientation
    values: dict = field(default_factory=dict)

    def __post_init__(self):
        missing = [self.graph.darts[i].id for i in self.orientation if i not in self.values]
        if missing:
            raise ValueError(f"no voltage given for {', '.join(missing)}")
        extra = [i for i in self.values if not self.orientation.contains(i)]
        if extra:
            raise ValueError("voltages must be given on the orientation only")

    @classmethod
    def on_default(cls, X: WeightedGraph, group, values: Sequence) -> VoltageAssignment:
        """Values listed in the order of the default orientation's darts."""
        S = X.default_orientation()
        if len(values) != len(S):
            raise ValueError(f"expected {len(S)} voltages, got {len(values)}")
        return cls(X, group, S, {i: group.parse(v) for i, v in zip(S, values)})

    def __call__(self, i: int):
        if i in self.values:
            return self.values[i]
        return self.group.inv(self.values[self.graph.inverse[i]])

    def dart_values(self) -> list:
        return [self(i) for i in range(len(self.graph.darts))]

    def map(self, group, f) -> VoltageAssignment:
        """Compose with a homomorphism f into ``group``."""
        return VoltageAssignment(self.graph, group, self.orientation, {i: f(v) for i, v in self.values.items()})

    def reorient(self, orientation: Orientation) -> VoltageAssignment:
        return VoltageAssignment(self.graph, self.group, orientation, {i: self(i) for i in orientation})
