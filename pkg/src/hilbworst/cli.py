"""Command-line surface: generator/family exports, verification pipelines,
subspace reports and table evaluation.

Every JSON document carries a top-level {"schema": "hilbworst/1"} marker and
is emitted with sorted keys, so output is byte-stable for fixed flags and
seed.  ``verify`` streams one JSON line per check and exits 0 only when all
requested checks pass; the first failure is named on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import based, dgla, ideal, lifting, oracle, subspaces, taylor

SCHEMA = "hilbworst/1"


def _emit(doc: dict, out) -> None:
    out.write(json.dumps(doc, sort_keys=True) + "\n")


def _poly_texts(polys, fmt: str) -> list:
    return [p.text(cas=(fmt == "cas")) for p in polys]


def _presentation_doc(pres, fmt: str) -> dict:
    doc = pres.to_json_dict()
    if fmt == "cas":
        doc["generators"] = [g.text(cas=True) for g in pres.generators]
    doc["schema"] = SCHEMA
    return doc


def _open_out(path):
    return open(path, "w") if path else sys.stdout


def cmd_gens(args, out) -> int:
    pres = ideal.ideal_generators(args.n, args.flavor)
    if args.format == "text":
        for lab, g in zip(pres.labels, pres.generators):
            out.write(f"{lab}: {g.text()}\n")
    else:
        _emit(_presentation_doc(pres, args.format), out)
    return 0


def cmd_family(args, out) -> int:
    gens = lifting.universal_family(args.n, args.flavor)
    if args.format == "text":
        for g in gens:
            out.write(g.text() + "\n")
    else:
        doc = {
            "schema": SCHEMA,
            "n": args.n,
            "flavor": args.flavor,
            "generators": _poly_texts(gens, args.format),
        }
        _emit(doc, out)
    return 0


def cmd_subspaces(args, out) -> int:
    res = subspaces.max_linear_dim(args.n)
    smooth = subspaces.smoothing_dim(args.n)
    doc = {
        "schema": SCHEMA,
        "n": args.n,
        "max_linear_dim": res.dim,
        "m": res.m,
        "count_lower_bound": res.count_lower_bound,
        "maximizers": list(res.maximizers),
        "case_formula_matches": res.case_formula_matches,
        "smoothing_dim": smooth,
        "reducible_flag": res.dim > smooth,
    }
    if args.list:
        cap = min(res.count_lower_bound, args.list)
        doc["subspaces"] = [
            {"A": sorted(s.A), "B": sorted(s.B), "dim": subspaces.subspace_dim(s)}
            for s in subspaces.optimal_specs(args.n, cap)
        ]
    _emit(doc, out)
    return 0


def cmd_table(args, out) -> int:
    data = json.loads(Path(args.input).read_text())
    n = data["n"]
    tvals = {(i, j, k): Fraction(v) for i, j, k, v in data.get("t", [])}
    table = based.table_from_point(tvals, n)
    residuals = based.associativity_residual(table)
    doc = based.table_to_json_dict(table)
    doc["schema"] = SCHEMA
    doc["associative"] = based.is_associative(table)
    doc["nonzero_residuals"] = sorted(
        list(key) for key, vec in residuals.items() if any(v != 0 for v in vec)
    )
    _emit(doc, out)
    return 0


def _check(name: str, n: int, ok: bool, detail: str = "") -> dict:
    doc = {"schema": SCHEMA, "check": name, "n": n, "status": "ok" if ok else "fail"}
    if detail:
        doc["detail"] = detail
    return doc


def _route_classical(n: int):
    res = lifting.first_order_residual(n)
    yield _check("first_order_residual", n, all(p.is_zero for p in res.values()))
    system = lifting.second_order_obstruction(n)
    equal, _ = ideal.span_equal_degree2(system.equations, ideal.ideal_generators(n))
    yield _check("second_order_span", n, equal)
    ok = True
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(j + 1, n + 1):
                cert = lifting.syzygy_certificate(n, i, j, k)
                ok = ok and cert.member
    yield _check("cubic_syzygy_certificates", n, ok)
    yield _check("flatness", n, lifting.flatness_residual(n).ok)
    koszul = lifting.koszul_full_residual(n)
    yield _check("koszul_trivial_lift", n, all(p.is_zero for p in koszul.values()))


def _sym_name(sym) -> str:
    from .taylor import FreeModElt

    return FreeModElt._sym_text(sym) if isinstance(sym, tuple) and sym else str(sym)


def _route_dgla(n: int):
    # per-generator reports: {check, generator, residual, status}
    closed = dgla.closedness_residual(n)
    for sym, res in sorted(closed.items(), key=lambda kv: (kv[0][0], str(kv[0]))):
        doc = _check("derivation_closedness", n, res.is_zero)
        doc["generator"] = _sym_name(sym)
        doc["residual"] = res.text()
        yield doc
    cup = dgla.cup_product(n)
    R = ideal.PolyRing.get(n)
    for sym, value in sorted(cup.wedge_values.items()):
        i, j, k = taylor.nonkoszul_triple(sym)
        expected = R.zero()
        for l in range(1, n + 1):
            expected = expected + ideal.set_diagonal_zero(
                ideal.obstruction_quadric(n, i, j, k, l)
            ) * R.x(l)
        residual = value - expected
        doc = _check("cup_product", n, residual.is_zero)
        doc["generator"] = _sym_name(sym)
        doc["residual"] = residual.text()
        yield doc
    for sym, q in sorted(cup.curly_values.items()):
        doc = _check("cup_product_exterior_square", n, q.is_zero)
        doc["generator"] = _sym_name(sym)
        doc["residual"] = q.rep.text()
        yield doc
    locus = dgla.kuranishi_quadratic_locus(n).equations
    mini = ideal.ideal_generators(n, "miniversal")
    equal, _ = ideal.span_equal_degree2(locus, mini)
    yield _check("kuranishi_span", n, equal)
    yield _check("classical_vs_dgla", n, dgla.compare_classical_dgla(n).equal)


def _route_based(n: int):
    report = based.verify_structure_correspondence(n)
    yield _check(
        "structure_correspondence",
        n,
        report.ok,
        detail="; ".join(f"{side}:{lab}" for side, lab in report.failures),
    )


def _route_oracle(n: int, seed: int, samples: int):
    trials = oracle.run_samples(n, seed=seed, samples=samples)
    bad = 0
    for idx, trial in enumerate(trials):
        doc = _check("oracle_sample", n, trial["agree"])
        doc["sample"] = idx
        doc.update(trial)
        bad += not trial["agree"]
        yield doc
    yield _check("oracle_agreement", n, not bad, detail=f"{len(trials)} samples")


def cmd_verify(args, out) -> int:
    routes = (
        ["classical", "dgla", "based", "oracle"]
        if args.route == "all"
        else [args.route]
    )
    failures = []
    for route in routes:
        if route == "classical":
            checks = _route_classical(args.n)
        elif route == "dgla":
            checks = _route_dgla(args.n)
        elif route == "based":
            checks = _route_based(args.n)
        else:
            checks = _route_oracle(args.n, args.seed, args.samples)
        for doc in checks:
            doc["route"] = route
            _emit(doc, out)
            if doc["status"] != "ok":
                failures.append(doc)
    if failures:
        first = failures[0]
        print(
            f"verification failed: {first['route']}/{first['check']} at n={first['n']}",
            file=sys.stderr,
        )
        return 1
    return 0


def cmd_export(args, out) -> int:
    outdir = Path(args.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for flavor in ("hilbert", "miniversal"):
        pres = ideal.ideal_generators(args.n, flavor)
        path = outdir / f"gens_{flavor}_n{args.n}.json"
        path.write_text(
            json.dumps(_presentation_doc(pres, args.format), sort_keys=True) + "\n"
        )
        written.append(path.name)
        fam = {
            "schema": SCHEMA,
            "n": args.n,
            "flavor": flavor,
            "generators": _poly_texts(
                lifting.universal_family(args.n, flavor), args.format
            ),
        }
        path = outdir / f"family_{flavor}_n{args.n}.json"
        path.write_text(json.dumps(fam, sort_keys=True) + "\n")
        written.append(path.name)
    dims = taylor.tangent_dims(args.n)
    path = outdir / f"tangent_n{args.n}.json"
    path.write_text(
        json.dumps(
            {
                "schema": SCHEMA,
                "n": args.n,
                "hom_dim": dims.hom_dim,
                "t1_dim": dims.t1_dim,
            },
            sort_keys=True,
        )
        + "\n"
    )
    written.append(path.name)
    _emit({"schema": SCHEMA, "written": sorted(written)}, out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hilbworst",
        description=(
            "exact local equations of the Hilbert scheme of n+1 points at "
            "its most degenerate point, with machine verification"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, flavor=False):
        p.add_argument("--n", type=int, required=True)
        p.add_argument(
            "--format", choices=("json", "text", "cas"), default="json"
        )
        p.add_argument(
            "--json",
            dest="format",
            action="store_const",
            const="json",
            help="shorthand for --format json",
        )
        p.add_argument("--out", default=None, help="write to file instead of stdout")
        if flavor:
            p.add_argument(
                "--flavor", choices=("hilbert", "miniversal"), default="hilbert"
            )

    common(sub.add_parser("gens", help="generator presentation"), flavor=True)
    common(sub.add_parser("family", help="universal family"), flavor=True)

    p = sub.add_parser("verify", help="run verification pipelines")
    p.add_argument("--n", type=int, required=True)
    p.add_argument(
        "--route",
        choices=("classical", "dgla", "based", "oracle", "all"),
        default="all",
    )
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--out", default=None)

    p = sub.add_parser("subspaces", help="linear subspace report")
    p.add_argument("--n", type=int, required=True)
    p.add_argument(
        "--list",
        type=int,
        default=0,
        help="enumerate up to this many optimal subspaces",
    )
    p.add_argument("--json", action="store_true", help="JSON output (the default)")
    p.add_argument("--out", default=None)

    p = sub.add_parser("table", help="multiplication table at a parameter point")
    p.add_argument("input", help='JSON file {"n": ..., "t": [[i,j,k,"p/q"], ...]}')
    p.add_argument("--out", default=None)

    common(sub.add_parser("export", help="write generator/family/tangent bundle"))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "gens": cmd_gens,
        "family": cmd_family,
        "verify": cmd_verify,
        "subspaces": cmd_subspaces,
        "table": cmd_table,
        "export": cmd_export,
    }
    # export treats --out as its target directory and reports on stdout
    path = None if args.command == "export" else getattr(args, "out", None)
    out = _open_out(path)
    try:
        return handlers[args.command](args, out)
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
