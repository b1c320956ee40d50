"""Command-line interface: ``weighted-iwasawa <command> --graph FILE ...``.

Exit status: 0 success, 1 a verified identity failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import formats
from .charelem import char_element_direct, char_element_sec5, is_reciprocal
from .complexity import ConsistencyError, kappa_matrix_tree, product_formula_kappa, three_term_check
from .covers import DisconnectedCover, cover_is_connected, derived_cover, enumerate_arborescences, tower_layer
from .graph import euler_characteristic, validate_graph, weighted_matrices
from .groups import AbelianGroup
from .invariants import kida_verify, lambda_invariant, pullback_voltage, tower_report
from .laurent import laurent_normalize
from .padic import as_fraction
from .qwalk import EigenvalueHit, qwalk_growth

SIZE_LIMIT = 2500

OK, MISMATCH, BAD_INPUT = 0, 1, 2


class InvalidInput(formats.InputError):
    """Bad input that still produced a report worth printing."""

    def __init__(self, report: dict, message: str):
        super().__init__(message)
        self.report = report


class Mismatch(Exception):
    def __init__(self, report: dict, message: str):
        super().__init__(message)
        self.report = report


def _matrix(M) -> list[list[str]]:
    return [[str(x) for x in row] for row in M]


def _load(args):
    return formats.load_graph(args.graph, args.prime, args.dims)


def _check_size(args, gf, nmax: int) -> None:
    size = len(gf.graph.vertices) * gf.p ** (gf.d * nmax)
    if size > SIZE_LIMIT and not args.force_size:
        raise formats.InputError(
            f"top layer would have {size} vertices (limit {SIZE_LIMIT}); pass --force-size to override"
        )


def _require_valid(gf) -> None:
    report = validate_graph(gf.graph)
    if not report:
        raise formats.InputError(f"invalid graph: {report}")


def _require_connected_tower(gf) -> None:
    if not cover_is_connected(gf.graph, gf.alpha.group, gf.alpha, gf.p):
        raise formats.InputError(f"net voltages do not span F_{gf.p}^{gf.d}: the tower is disconnected")


# -- commands -------------------------------------------------------------------


def cmd_validate(args) -> dict:
    gf = _load(args)
    report = validate_graph(gf.graph)
    out = {
        "valid": report.ok,
        "axiom": report.axiom or None,
        "problem": report.problem or None,
        "vertices": len(gf.graph.vertices),
        "edges": gf.graph.num_edges,
    }
    if report.ok:
        W, D = weighted_matrices(gf.graph)
        out["euler_characteristic"] = euler_characteristic(gf.graph)
        out["W"] = _matrix(W)
        out["D"] = [str(D[i][i]) for i in range(len(D))]
        out["tower_connected"] = cover_is_connected(gf.graph, gf.alpha.group, gf.alpha, gf.p)
    else:
        raise InvalidInput(out, f"invalid graph: {report}")
    return out


def cmd_cover(args) -> dict:
    gf = _load(args)
    _require_valid(gf)
    X = gf.graph
    if args.beta:
        G, beta = formats.load_beta(args.beta, X, gf.alpha.orientation)
        cover = derived_cover(X, G, beta)
        connected = cover_is_connected(X, G, beta)
        label = repr(G)
    else:
        n = args.nmax if args.nmax is not None else 1
        _check_size(args, gf, n)
        cover = tower_layer(X, gf.alpha, gf.p, n)
        connected = True
        label = f"(Z/{gf.p}^{n})^{gf.d}"
    alpha_y = pullback_voltage(cover, gf.alpha) if cover.graph is not X else gf.alpha
    return {
        "group": label,
        "degree": cover.degree,
        "connected": connected,
        "vertices": len(cover.graph.vertices),
        "edges": cover.graph.num_edges,
        "graph": formats.graph_to_json(cover.graph, alpha_y, gf.p, gf.d),
    }


def cmd_kappa(args) -> dict:
    gf = _load(args)
    _require_valid(gf)
    X = gf.graph
    kappa = kappa_matrix_tree(X)
    out = {"kappa": str(kappa)}
    if len(X.vertices) <= 8:
        _, total = enumerate_arborescences(X)
        out["kappa_arborescences"] = str(total)
        if total != kappa:
            raise Mismatch(out, f"matrix-tree theorem: {kappa} != {total}")
    return out


def cmd_charelem(args) -> dict:
    gf = _load(args)
    _require_valid(gf)
    Q = char_element_direct(gf.graph, gf.alpha).poly
    out = {"Q": str(Q), "Q_terms": Q.to_json()}
    try:
        Q5 = char_element_sec5(gf.graph, gf.alpha.orientation, gf.alpha, check=False).poly
    except Exception as exc:  # pragma: no cover - surfaced as a mismatch below
        Q5 = exc
    out["sec5_agrees"] = Q5 == Q
    if gf.d == 1 and not Q.is_zero():
        shift, coeffs = Q.to_t_form()
        out["T_form"] = {"u_shift": shift, "coefficients": {str(k): str(c) for k, c in coeffs.items()}}
    out["reciprocal"] = is_reciprocal(Q)
    if Q.is_zero():
        out["mu"] = None
        out["note"] = "Q is zero: kappa_n vanishes for n >= 1"
    else:
        mu, F0 = laurent_normalize(Q, gf.p)
        lam = lambda_invariant(Q, gf.p, args.box)
        out.update({"mu": str(mu), "F0": str(F0), **lam.to_json()})
    if Q5 != Q:
        raise Mismatch(out, "orientation algorithm disagrees with the direct determinant")
    return out


def cmd_tower(args) -> dict:
    gf = _load(args)
    _require_valid(gf)
    _require_connected_tower(gf)
    nmax = args.nmax if args.nmax is not None else 3
    _check_size(args, gf, nmax)
    report = tower_report(gf.graph, gf.alpha, gf.p, nmax, box=args.box, jobs=args.jobs)
    return report.to_json()


def cmd_kida(args) -> dict:
    gf = _load(args)
    _require_valid(gf)
    if not args.beta:
        raise formats.InputError("kida needs --beta")
    G, beta = formats.load_beta(args.beta, gf.graph, gf.alpha.orientation)
    report = kida_verify(gf.graph, gf.alpha, G, beta, gf.p, args.box)
    out = report.to_json()
    if report.hypotheses_hold and not report.relation_holds:
        raise Mismatch(out, "Kida's formula fails")
    out["status"] = "verified" if report.relation_holds else "hypothesis failure"
    return out


def cmd_qwalk(args) -> dict:
    gf = _load(args)
    _require_valid(gf)
    if args.a is None:
        raise formats.InputError("qwalk needs --a")
    _require_connected_tower(gf)
    nmax = args.nmax if args.nmax is not None else 3
    _check_size(args, gf, nmax)
    try:
        report = qwalk_growth(gf.graph, gf.alpha, gf.p, as_fraction(args.a), nmax, box=args.box, jobs=args.jobs)
    except EigenvalueHit as exc:
        raise formats.InputError(str(exc)) from None
    out = report.to_json()
    for row in out["table"]:
        row["predicted"] = str(report.prediction(row["n"]))
    return out


def cmd_product_check(args) -> dict:
    gf = _load(args)
    _require_valid(gf)
    if not args.beta:
        raise formats.InputError("product-check needs --beta with an abelian group")
    G, beta = formats.load_beta(args.beta, gf.graph, gf.alpha.orientation)
    if not isinstance(G, AbelianGroup):
        raise formats.InputError("product-check needs a finite abelian group")
    try:
        chars = G.characters(gf.p)
    except ValueError as exc:
        raise formats.InputError(str(exc)) from None
    try:
        report = product_formula_kappa(gf.graph, G, beta)
    except ConsistencyError as exc:
        raise Mismatch({"identity": exc.identity, "left": str(exc.left), "right": str(exc.right)}, str(exc))
    out = report.to_json()
    out["three_term"] = [
        {"character": list(psi.images), "holds": three_term_check(gf.graph, G, beta, psi)} for psi in chars
    ]
    if not all(t["holds"] for t in out["three_term"]):
        raise Mismatch(out, "three-term determinant formula fails")
    return out


COMMANDS = {
    "validate": cmd_validate,
    "cover": cmd_cover,
    "kappa": cmd_kappa,
    "charelem": cmd_charelem,
    "tower": cmd_tower,
    "kida": cmd_kida,
    "qwalk": cmd_qwalk,
    "product-check": cmd_product_check,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weighted-iwasawa", description=__doc__.splitlines()[0])
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--graph", required=True, help="graph JSON file (or a bundled fixture name)")
    parser.add_argument("--beta", help="finite-group voltage JSON file")
    parser.add_argument("--prime", type=int, help="override p from the graph file")
    parser.add_argument("--dims", type=int, help="override d from the graph file")
    parser.add_argument("--nmax", type=int, help="largest tower layer computed directly")
    parser.add_argument("--box", type=int, default=4, help="sup-norm bound for lambda trial division")
    parser.add_argument("--a", help="rational point for the quantum-walk characteristic polynomial")
    parser.add_argument("--out", help="write the report here instead of stdout")
    parser.add_argument("--format", choices=["text", "json", "csv"], default="text")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for layer computations")
    parser.add_argument("--force-size", action="store_true", help="allow layers beyond the size guideline")
    return parser


# -- rendering ----------------------------------------------------------------------


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return formats.dumps(report)
    if fmt == "csv":
        return _render_csv(report)
    return _render_text(report)


def _render_csv(report: dict) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    table = report.get("table")
    if table:
        keys = list(table[0])
        writer.writerow(keys)
        for row in table:
            writer.writerow([row.get(k) for k in keys])
    else:
        writer.writerow(["key", "value"])
        for k, v in report.items():
            writer.writerow([k, v if isinstance(v, (str, int, bool)) or v is None else formats.dumps(v).strip()])
    return buf.getvalue()


def _render_text(report: dict) -> str:
    lines = []
    for k, v in report.items():
        if k == "table":
            continue
        if isinstance(v, (dict, list)):
            v = json.dumps(v)
        lines.append(f"{k}: {v}")
    table = report.get("table")
    if table:
        keys = [k for k in table[0] if k not in ("kappa_direct", "kappa_product", "det")]
        cells = [[str(row.get(k)) for k in keys] for row in table]
        widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
        lines.append("  ".join(k.rjust(w) for k, w in zip(keys, widths)))
        for c in cells:
            lines.append("  ".join(x.rjust(w) for x, w in zip(c, widths)))
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return BAD_INPUT if exc.code else OK
    status = OK
    try:
        report = COMMANDS[args.command](args)
    except formats.InputError as exc:
        if isinstance(exc, InvalidInput):
            sys.stdout.write(render(exc.report, args.format))
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except DisconnectedCover as exc:
        print(f"error: {exc}", file=sys.stderr)
        return BAD_INPUT
    except Mismatch as exc:
        report = dict(exc.report)
        report["mismatch"] = str(exc)
        status = MISMATCH
    except ConsistencyError as exc:
        report = {"mismatch": exc.identity, "left": str(exc.left), "right": str(exc.right)}
        status = MISMATCH
    text = render(report, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if status == MISMATCH:
        print(f"verification failed: {report['mismatch']}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
