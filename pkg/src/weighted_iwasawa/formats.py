"""JSON graph and voltage files."""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .graph import InvalidGraph, Orientation, VoltageAssignment, WeightedGraph
from .groups import FreeAbelian, parse_group
from .padic import as_fraction, is_prime


class InputError(ValueError):
    pass


@dataclass
class GraphFile:
    graph: WeightedGraph
    alpha: VoltageAssignment
    p: int
    d: int


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture; ``name`` may omit the .json suffix."""
    if not name.endswith(".json"):
        name += ".json"
    return Path(str(resources.files("weighted_iwasawa") / "fixtures" / name))


def _read(path) -> dict:
    path = Path(path)
    if not path.exists() and not path.is_absolute() and fixture_path(path.name).exists() and path.parent == Path("."):
        path = fixture_path(path.name)
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from None


def parse_graph(data: dict, p: int | None = None, d: int | None = None) -> GraphFile:
    try:
        p = int(p if p is not None else data.get("p", 2))
        d = int(d if d is not None else data.get("d", 1))
        vertices = [str(v) for v in data["vertices"]]
        edges = []
        voltages = []
        for e in data["edges"]:
            weight = as_fraction(e.get("weight", "1"))
            rev = as_fraction(e["weight_rev"]) if e.get("weight_rev") is not None else None
            edges.append((str(e["id"]), str(e["from"]), str(e["to"]), weight, rev))
            voltages.append(e.get("voltage", [0] * d))
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"malformed graph file: {exc!r}") from None
    if not is_prime(p):
        raise InputError(f"p = {p} is not prime")
    if d < 1:
        raise InputError("d must be at least 1")
    ids = [e[0] for e in edges]
    if len(set(ids)) != len(ids):
        raise InputError("edge ids must be unique")
    try:
        X = WeightedGraph.from_edges(vertices, edges)
        alpha = VoltageAssignment.on_default(X, FreeAbelian(d), voltages)
    except (InvalidGraph, ValueError) as exc:
        raise InputError(str(exc)) from None
    return GraphFile(X, alpha, p, d)


def load_graph(path, p: int | None = None, d: int | None = None) -> GraphFile:
    return parse_graph(_read(path), p, d)


def graph_to_json(X: WeightedGraph, alpha: VoltageAssignment | None = None, p: int = 2, d: int = 1) -> dict:
    """Inverse of parse_graph on an orientation (alpha's if given, else the default)."""
    S = alpha.orientation if alpha is not None else X.default_orientation()
    edges = []
    for s in S:
        dart = X.darts[s]
        rev = X.darts[X.inverse[s]]
        entry = {
            "id": dart.id,
            "from": X.vertices[dart.origin],
            "to": X.vertices[dart.terminus],
            "weight": str(dart.weight),
        }
        if rev.weight != dart.weight:
            entry["weight_rev"] = str(rev.weight)
        entry["voltage"] = list(alpha(s)) if alpha is not None else [0] * d
        edges.append(entry)
    return {"p": p, "d": d, "vertices": list(X.vertices), "edges": edges}


def parse_beta(data: dict, X: WeightedGraph, orientation: Orientation | None = None):
    """(G, beta) from {"group": ..., "beta": {edge id: element}}; unlisted edges get the identity."""
    try:
        G = parse_group(data["group"])
    except (KeyError, ValueError, TypeError) as exc:
        raise InputError(f"bad group specification: {exc}") from None
    S = orientation or X.default_orientation()
    ids = {X.darts[s].id: s for s in S}
    raw = data.get("beta", {})
    unknown = [k for k in raw if k not in ids]
    if unknown:
        raise InputError(f"beta names unknown edges: {', '.join(unknown)}")
    try:
        values = {s: G.parse(raw[i]) if i in raw else G.identity for i, s in ids.items()}
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return G, VoltageAssignment(X, G, S, values)


def load_beta(path, X: WeightedGraph, orientation: Orientation | None = None):
    return parse_beta(_read(path), X, orientation)


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, default=_default) + "\n"


def _default(x):
    if isinstance(x, Fraction):
        return str(x)
    raise TypeError(f"cannot serialize {type(x).__name__}")
