"""Voltage groups: Z^d, finite abelian groups, and explicit multiplication tables.

Every group exposes ``identity``, ``mul``, ``inv``, ``parse`` and ``format``;
finite ones also ``elements()`` (a fixed, documented order) and ``order``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import prod
from typing import Hashable, Sequence

from .cyclotomic import CyclotomicNumber
from .padic import is_prime

Element = Hashable


class FreeAbelian:
    """Z^d with elements as integer tuples; the source of tower voltages."""

    finite = False

    def __init__(self, rank: int):
        if rank < 1:
            raise ValueError("rank must be positive")
        self.rank = rank
        self.identity = (0,) * rank

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def parse(self, value) -> tuple:
        if isinstance(value, int) and self.rank == 1:
            value = [value]
        if isinstance(value, str):
            value = [int(x) for x in value.split(",")] if value else []
        v = tuple(int(x) for x in value)
        if len(v) != self.rank:
            raise ValueError(f"voltage {value!r} does not have {self.rank} components")
        return v

    def format(self, a) -> str:
        return ",".join(str(x) for x in a)

    def __repr__(self):
        return f"FreeAbelian({self.rank})"

    def __eq__(self, other):
        return isinstance(other, FreeAbelian) and other.rank == self.rank

    def __hash__(self):
        return hash(("Z", self.rank))


class FiniteGroup:
    finite = True

    def elements(self) -> list:
        raise NotImplementedError

    @property
    def order(self) -> int:
        return len(self.elements())

    def is_abelian(self) -> bool:
        els = self.elements()
        return all(self.mul(a, b) == self.mul(b, a) for a in els for b in els)

    def prime_of_order(self) -> int | None:
        """p if the order is a power of the prime p, else None (1 for trivial)."""
        n = self.order
        if n == 1:
            return 1
        for p in range(2, n + 1):
            if n % p == 0:
                while n % p == 0:
                    n //= p
                return p if n == 1 else None
        return None

    def subgroup_generated(self, gens: Sequence) -> set:
        seen = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return seen


class AbelianGroup(FiniteGroup):
    """Z/n_1 x ... x Z/n_r, elements as residue tuples in lexicographic order."""

    def __init__(self, moduli: Sequence[int]):
        moduli = tuple(int(n) for n in moduli)
        if any(n < 1 for n in moduli):
            raise ValueError("moduli must be positive")
        self.moduli = moduli
        self.identity = (0,) * len(moduli)
        self._elements = list(itertools.product(*(range(n) for n in moduli)))

    @classmethod
    def tower(cls, p: int, n: int, d: int) -> AbelianGroup:
        """Gamma_n = (Z/p^n)^d."""
        return cls([p**n] * d)

    def elements(self) -> list:
        return self._elements

    @property
    def order(self) -> int:
        return prod(self.moduli)

    def mul(self, a, b):
        return tuple((x + y) % n for x, y, n in zip(a, b, self.moduli))

    def inv(self, a):
        return tuple(-x % n for x, n in zip(a, self.moduli))

    def reduce(self, vector: Sequence[int]) -> tuple:
        return tuple(int(x) % n for x, n in zip(vector, self.moduli))

    def parse(self, value) -> tuple:
        if isinstance(value, int) and len(self.moduli) == 1:
            value = [value]
        if isinstance(value, str):
            value = [int(x) for x in value.split(",")] if value else []
        v = tuple(int(x) for x in value)
        if len(v) != len(self.moduli):
            raise ValueError(f"element {value!r} has the wrong length for {self}")
        return self.reduce(v)

    def format(self, a) -> str:
        return ",".join(str(x) for x in a)

    def characters(self, prime: int | None = None) -> list[Character]:
        """All characters; needs a p-group so values lie in Q(zeta_{p^N})."""
        p = self.prime_of_order()
        if p is None:
            raise ValueError(f"{self} is not a p-group; characters need p-power roots of unity")
        if p == 1:
            p = prime or 2
        return [Character(self, k, p) for k in self.elements()]

    def __repr__(self):
        return f"AbelianGroup({list(self.moduli)})"

    def __eq__(self, other):
        return isinstance(other, AbelianGroup) and other.moduli == self.moduli

    def __hash__(self):
        return hash(("A", self.moduli))


class TableGroup(FiniteGroup):
    """A finite group given by named elements and a multiplication table.

    ``table[i][j]`` is the name of ``names[i] * names[j]``.
    """

    def __init__(self, names: Sequence[str], table: Sequence[Sequence[str]], label: str = "table"):
        self.names = list(names)
        self.label = label
        index = {n: i for i, n in enumerate(self.names)}
        if len(index) != len(self.names):
            raise ValueError("duplicate element names")
        if len(table) != len(self.names) or any(len(r) != len(self.names) for r in table):
            raise ValueError("multiplication table must be square over the element list")
        try:
            self._table = [[index[x] for x in row] for row in table]
        except KeyError as exc:
            raise ValueError(f"table is not closed: unknown element {exc.args[0]!r}") from None
        n = len(self.names)
        ids = [e for e in range(n) if all(self._table[e][x] == x == self._table[x][e] for x in range(n))]
        if not ids:
            raise ValueError("table has no identity element")
        self._id = ids[0]
        self._inv = []
        for x in range(n):
            inv = [y for y in range(n) if self._table[x][y] == self._id]
            if len(inv) != 1 or self._table[inv[0]][x] != self._id:
                raise ValueError(f"element {self.names[x]!r} has no two-sided inverse")
            self._inv.append(inv[0])
        self._check_associative()
        self.identity = self.names[self._id]

    def _check_associative(self, samples: int = 4000) -> None:
        n = len(self.names)
        t = self._table
        if n**3 <= samples:
            triples = itertools.product(range(n), repeat=3)
        else:
            rng = random.Random(0)
            triples = ((rng.randrange(n), rng.randrange(n), rng.randrange(n)) for _ in range(samples))
        for a, b, c in triples:
            if t[t[a][b]][c] != t[a][t[b][c]]:
                names = self.names
                raise ValueError(f"table is not associative at ({names[a]}, {names[b]}, {names[c]})")

    def elements(self) -> list:
        return list(self.names)

    @property
    def order(self) -> int:
        return len(self.names)

    def _i(self, a) -> int:
        try:
            return self.names.index(a)
        except ValueError:
            raise ValueError(f"{a!r} is not an element of {self.label}") from None

    def mul(self, a, b):
        return self.names[self._table[self._i(a)][self._i(b)]]

    def inv(self, a):
        return self.names[self._inv[self._i(a)]]

    def parse(self, value) -> str:
        value = str(value)
        self._i(value)
        return value

    def format(self, a) -> str:
        return str(a)

    def to_json(self) -> dict:
        t = self._table
        return {
            "elements": list(self.names),
            "table": [[self.names[x] for x in row] for row in t],
        }

    def __repr__(self):
        return f"TableGroup({self.label}, order={self.order})"


def _dicyclic_like(label: str, tau_squared_is_s2: bool) -> TableGroup:
    # elements s^i t^j, index i + 4j; relations s^4 = 1, t s = s^{-1} t,
    # t^2 = s^2 (Q8) or t^2 = 1 (D4)
    names = ["1", "s", "s2", "s3", "t", "st", "s2t", "s3t"]

    def mul(x: tuple, y: tuple) -> tuple:
        i1, j1 = x
        i2, j2 = y
        if j1 == 0:
            return ((i1 + i2) % 4, j2)
        # s^i1 t s^i2 t^j2 = s^{i1 - i2} t^{1 + j2}
        i = (i1 - i2) % 4
        if j2 == 0:
            return (i, 1)
        return ((i + (2 if tau_squared_is_s2 else 0)) % 4, 0)

    pairs = [(i, j) for j in range(2) for i in range(4)]
    table = [[names[(lambda r: r[0] + 4 * r[1])(mul(x, y))] for y in pairs] for x in pairs]
    return TableGroup(names, table, label)


def quaternion_group() -> TableGroup:
    """Q8 = <s, t | s^4 = 1, t^2 = s^2, t s = s^{-1} t>; order 1, s, s2, s3, t, st, s2t, s3t."""
    return _dicyclic_like("Q8", True)


def dihedral_group() -> TableGroup:
    """D4 = <s, t | s^4 = t^2 = 1, t s = s^{-1} t>; same element order as Q8."""
    return _dicyclic_like("D4", False)


BUILTIN_GROUPS = {"Q8": quaternion_group, "D4": dihedral_group}


class DirectProduct(FiniteGroup):
    """G x H with pairs as elements."""

    def __init__(self, left: FiniteGroup, right: FiniteGroup):
        self.left = left
        self.right = right
        self.identity = (left.identity, right.identity)

    def elements(self) -> list:
        return [(a, b) for a in self.left.elements() for b in self.right.elements()]

    @property
    def order(self) -> int:
        return self.left.order * self.right.order

    def mul(self, a, b):
        return (self.left.mul(a[0], b[0]), self.right.mul(a[1], b[1]))

    def inv(self, a):
        return (self.left.inv(a[0]), self.right.inv(a[1]))

    def format(self, a) -> str:
        return f"{self.left.format(a[0])}|{self.right.format(a[1])}"

    def __repr__(self):
        return f"DirectProduct({self.left!r}, {self.right!r})"


def parse_group(spec) -> FiniteGroup:
    """Group from a JSON-style spec: "Q8", "D4", {"moduli": [...]}, or {"table": ...}."""
    if isinstance(spec, str):
        if spec in BUILTIN_GROUPS:
            return BUILTIN_GROUPS[spec]()
        if spec.startswith("Z/"):
            return AbelianGroup([int(x.strip().removeprefix("Z/")) for x in spec.split("x")])
        raise ValueError(f"unknown group {spec!r}")
    if isinstance(spec, dict):
        if "moduli" in spec:
            return AbelianGroup(spec["moduli"])
        if "table" in spec:
            t = spec["table"]
            if isinstance(t, dict):
                return TableGroup(t["elements"], t["table"], t.get("name", "table"))
            return TableGroup(spec["elements"], t, spec.get("name", "table"))
    raise ValueError(f"cannot interpret group spec {spec!r}")


@dataclass(frozen=True)
class Character:
    """psi(x) = zeta_{p^L}^{sum_j k_j x_j p^L / n_j} on Z/n_1 x ... x Z/n_r."""

    group: AbelianGroup
    images: tuple
    prime: int

    def __post_init__(self):
        if not is_prime(self.prime):
            raise ValueError("characters need a prime")
        for n in self.group.moduli:
            m = n
            while m % self.prime == 0:
                m //= self.prime
            if m != 1:
                raise ValueError(f"Z/{n} is not a {self.prime}-group")

    @property
    def level(self) -> int:
        top = max(self.group.moduli, default=1)
        level = 0
        while self.prime**level < top:
            level += 1
        return level

    def exponent(self, x) -> int:
        """psi(x) = zeta_{p^level}^exponent."""
        big = self.prime**self.level
        return sum(k * a * (big // n) for k, a, n in zip(self.images, x, self.group.moduli)) % big

    def __call__(self, x) -> CyclotomicNumber:
        return CyclotomicNumber.zeta(self.prime, self.level, self.exponent(x))

    def is_trivial(self) -> bool:
        return all(k % n == 0 for k, n in zip(self.images, self.group.moduli))

    def conjugate(self) -> Character:
        return Character(self.group, self.group.inv(self.images), self.prime)

    def __str__(self):
        return "psi(" + ",".join(str(k) for k in self.images) + ")"
