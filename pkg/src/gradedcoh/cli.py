"""Batch command-line front end.

Exit codes: 0 when everything passes, 1 when a verification check fails,
2 for usage or validation errors (unknown ids, malformed input).  With
``--format json`` each command prints one JSON document that mirrors the
text report; ``SCHEMAS`` describes them.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Callable

from . import catalog as catmod
from .bassserre import INTEGRAL, AssemblyResult
from .bockstein import Check, e1_page, e2_page, uct_check
from .gradedalg import AlgebraError
from .rewriting import OracleUnsupported, oracle_dims

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- JSON schemas ---------------------------------------------------------------

_DIMS = {"type": "array", "items": {"type": "integer", "minimum": 0}}
_CHECK = {
    "type": "object",
    "required": ["id", "status", "detail"],
    "properties": {"id": {"type": "string"}, "status": {"enum": ["PASS", "FAIL"]}, "detail": {"type": "string"}},
    "additionalProperties": False,
}


def _doc(command: str, props: dict, required: list[str]) -> dict:
    return {
        "type": "object",
        "required": ["command", *required],
        "properties": {"command": {"const": command}, **props},
        "additionalProperties": False,
    }


SCHEMAS: dict[str, dict] = {
    "poincare": _doc("poincare", {"id": {"type": "string"}, "p": {"type": "integer"},
                                  "dims": _DIMS, "oracle": {"type": ["array", "null"], "items": {"type": "integer"}}},
                     ["id", "p", "dims"]),
    "sq1": _doc("sq1", {"algebra": {"type": "string"}, "derivation": {"type": "string"},
                        "input": {"type": "string"}, "result": {"type": "string"}},
                ["algebra", "derivation", "input", "result"]),
    "bockstein": _doc("bockstein", {"algebra": {"type": "string"}, "derivation": {"type": "string"},
                                    "e1": _DIMS, "e2": _DIMS}, ["algebra", "derivation", "e1", "e2"]),
    "kernel": _doc("kernel", {"hom": {"type": "string"}, "source": {"type": "string"},
                              "target": {"type": "string"},
                              "degrees": {"type": "array", "items": {
                                  "type": "object", "required": ["degree", "source_dim", "rank", "kernel_dim"],
                                  "properties": {"degree": {"type": "integer"}, "source_dim": {"type": "integer"},
                                                 "rank": {"type": "integer"}, "kernel_dim": {"type": "integer"},
                                                 "kernel": {"type": "array", "items": {"type": "string"}}},
                                  "additionalProperties": False}}},
                   ["hom", "source", "target", "degrees"]),
    "les": _doc("les", {"tower": {"type": "string"}, "mode": {"enum": ["field", "integral"]},
                        "p": {"type": "integer"}, "out_of_scope": {"type": ["string", "null"]},
                        "stages": {"type": "array", "items": {
                            "type": "object", "required": ["index", "kind", "edge", "deltas"],
                            "properties": {"index": {"type": "integer"}, "kind": {"enum": ["amalgam", "hnn"]},
                                           "edge": {"type": "string"},
                                           "deltas": {"type": "array", "items": {"type": "string"}}},
                            "additionalProperties": False}},
                        "ambiguities": {"type": "array", "items": {"type": "string"}},
                        "resolutions": {"type": "array", "items": {"type": "string"}},
                        "groups": {"type": "array", "items": {"type": "string"}},
                        "dims": _DIMS},
                ["tower", "out_of_scope"]),
    "uct": _doc("uct", {"claim": {"type": "string"}, "p": {"type": "integer"}, "modp_dims": _DIMS,
                        "predicted": _DIMS, "checks": {"type": "array", "items": _CHECK}},
                ["claim", "p", "modp_dims", "predicted", "checks"]),
    "verify": _doc("verify", {"scope": {"type": "string"}, "passed": {"type": "integer"},
                              "failed": {"type": "integer"}, "checks": {"type": "array", "items": _CHECK}},
                   ["scope", "passed", "failed", "checks"]),
    "catalog": _doc("catalog", {"entries": {"type": "array", "items": {
        "type": "object", "required": ["id", "kind", "anchor"],
        "properties": {"id": {"type": "string"}, "kind": {"type": "string"}, "anchor": {"type": "string"}},
        "additionalProperties": False}}}, ["entries"]),
    "error": _doc("error", {"message": {"type": "string"}}, ["message"]),
}


# -- helpers --------------------------------------------------------------------

def _catalog() -> catmod.Catalog:
    return catmod.load_all()


def _lookup(cat: catmod.Catalog, id: str, kind: str | tuple[str, ...]) -> str:
    kinds = (kind,) if isinstance(kind, str) else kind
    try:
        rid = cat.resolve_id(id)
    except catmod.CatalogError:
        raise UsageError(f"unknown catalog id {id!r}") from None
    if cat.entry(rid).kind not in kinds:
        raise UsageError(f"{id} is a {cat.entry(rid).kind}, expected {' or '.join(kinds)}")
    return rid


def _derivation_for(cat: catmod.Catalog, alg_id: str, given: str | None) -> str:
    if given:
        return _lookup(cat, given, "derivation")
    found = cat.derivations_on(alg_id)
    if not found:
        raise UsageError(f"no derivation on {alg_id}; pass --derivation")
    return found[0]


def _dims_text(dims: list[int]) -> str:
    return " ".join(str(d) for d in dims)


# -- commands: each returns (exit code, json document, text lines) --------------

Result = tuple[int, dict, list[str]]


def cmd_poincare(args) -> Result:
    cat = _catalog()
    rid = _lookup(cat, args.id, ("algebra", "claim"))
    alg = cat.algebra(rid)
    dims = alg.poincare_series(args.up_to)
    oracle = None
    if args.oracle:
        try:
            oracle = oracle_dims(alg, args.up_to)
        except OracleUnsupported as exc:
            raise UsageError(str(exc)) from None
    lines = [_dims_text(dims)]
    code = EXIT_OK
    if oracle is not None:
        same = oracle == dims
        lines.append(f"oracle {_dims_text(oracle)} {'agree' if same else 'DISAGREE'}")
        code = EXIT_OK if same else EXIT_FAIL
    return code, {"command": "poincare", "id": rid, "p": alg.p, "dims": dims, "oracle": oracle}, lines


def cmd_sq1(args) -> Result:
    cat = _catalog()
    rid = _lookup(cat, args.algebra, ("algebra", "claim"))
    alg = cat.algebra(rid)
    did = _derivation_for(cat, rid, args.derivation)
    d = cat.derivation(did)
    if d.alg is not alg:
        raise UsageError(f"{did} is not defined on {rid}")
    x = alg.element(args.poly)
    y = d.apply(x)
    text = alg.format(y)
    doc = {"command": "sq1", "algebra": rid, "derivation": did, "input": alg.format(alg.normal_form(x)),
           "result": text}
    return EXIT_OK, doc, [f"{did}({args.poly}) = {text}"]


def cmd_bockstein(args) -> Result:
    cat = _catalog()
    rid = _lookup(cat, args.algebra, "algebra")
    alg = cat.algebra(rid)
    did = _derivation_for(cat, rid, args.derivation)
    e1 = e1_page(alg, args.up_to)
    e2 = e2_page(alg, cat.derivation(did), args.up_to)
    doc = {"command": "bockstein", "algebra": rid, "derivation": did, "e1": e1, "e2": e2}
    return EXIT_OK, doc, [f"E1 {_dims_text(e1)}", f"E2 {_dims_text(e2)}"]


def cmd_kernel(args) -> Result:
    cat = _catalog()
    rid = _lookup(cat, args.hom, "hom")
    h = cat.hom(rid)
    rows, lines = [], [f"{rid}: {h.source.name} -> {h.target.name}", "deg  dim  rank  ker"]
    for n, (k, r) in enumerate(h.kernel_image_dims(args.up_to)):
        row = {"degree": n, "source_dim": k + r, "rank": r, "kernel_dim": k}
        if args.basis:
            row["kernel"] = [h.source.format(e) for e in h.kernel(n)]
        rows.append(row)
        line = f"{n:>3}  {k + r:>3}  {r:>4}  {k:>3}"
        if args.basis and row["kernel"]:
            line += "  " + ", ".join(row["kernel"])
        lines.append(line)
    doc = {"command": "kernel", "hom": rid, "source": h.source.name, "target": h.target.name, "degrees": rows}
    return EXIT_OK, doc, lines


def _tower_id(cat: catmod.Catalog, id: str, prime: int | None) -> str:
    candidates = [id]
    if prime is not None:
        candidates = [f"{id}.int{prime}", f"{id}.mod{prime}", id]
    for c in candidates:
        try:
            rid = cat.resolve_id(c)
        except catmod.CatalogError:
            continue
        if cat.entry(rid).kind == "tower":
            if prime is not None and cat.tower(rid).p != prime:
                continue
            return rid
    raise UsageError(f"no tower {id!r}" + (f" at p = {prime}" if prime else ""))


def cmd_les(args) -> Result:
    cat = _catalog()
    rid = _tower_id(cat, args.tower, args.prime)
    spec = cat.tower(rid)
    if spec.out_of_scope is not None:
        doc = {"command": "les", "tower": rid, "mode": spec.mode, "p": spec.p, "out_of_scope": spec.out_of_scope}
        return EXIT_OK, doc, [f"{rid}: OUT-OF-SCOPE {spec.out_of_scope}"]
    res: AssemblyResult = spec.run(cat, args.up_to)
    lines = [f"{rid}: {spec.mode} mode, p = {spec.p}, degrees 0..{args.up_to}"]
    stages = []
    for s in res.stages:
        deltas = [f"{d.name} deg {d.degree}" + (" free" if d.free else "") for d in s.new_deltas]
        stages.append({"index": s.index, "kind": s.kind, "edge": s.edge, "deltas": deltas})
        lines.append(f"stage {s.index} {s.kind} over {s.edge}: {len(deltas)} delta class(es)")
    ambs = [a.describe() for a in res.ambiguities]
    lines += [f"AMBIGUITY {a}" for a in ambs]
    resolved = [f"degree {r.degree}: {r.higher} summand(s) of order p^2 from {r.source}"
                for r in sorted(res.resolutions.values(), key=lambda r: r.degree)]
    lines += [f"RESOLVED {r}" for r in resolved]
    open_degrees = [n for n in res.unresolved() if n <= args.up_to]
    if open_degrees:
        lines.append(f"UNRESOLVED degrees {open_degrees}")
    groups = [res.describe(n) for n in range(args.up_to + 1)]
    dims = res.dims(args.up_to)
    label = "H^n" if spec.mode == INTEGRAL else "dim"
    lines += [f"{label} {n:>2}: {g}" for n, g in enumerate(groups)]
    doc = {"command": "les", "tower": rid, "mode": spec.mode, "p": spec.p, "out_of_scope": None,
           "stages": stages, "ambiguities": ambs, "resolutions": resolved, "groups": groups, "dims": dims}
    return EXIT_OK, doc, lines


def cmd_uct(args) -> Result:
    cat = _catalog()
    rid = _lookup(cat, args.claim, "claim")
    claim = cat.claim(rid)
    dims = cat.modp_dims(rid, args.up_to)
    predicted = catmod.predicted_modp_dims(claim, args.up_to)
    rep = uct_check(claim.graded_group(args.up_to + 1), dims, claim.p, f"{rid}.uct")
    lines = [f"mod-{claim.p} {_dims_text(dims)}", f"UCT   {_dims_text(predicted)}"]
    lines += [c.line() for c in rep.checks]
    doc = {"command": "uct", "claim": rid, "p": claim.p, "modp_dims": dims, "predicted": predicted,
           "checks": [c.as_dict() for c in rep.checks]}
    return (EXIT_OK if rep.ok else EXIT_FAIL), doc, lines


def _verify_file(path: Path, up_to: int) -> list[Check]:
    label = path.name
    try:
        entry = catmod.parse(path.read_text(), str(path))
    except catmod.CatalogError as exc:
        return [Check(f"{label}.parse", False, str(exc))]
    entries = catmod.read_entries()
    entries[entry.id] = entry
    cat = catmod.Catalog(entries)
    try:
        cat.check_dependencies()
        return [Check(f"{label}.parse", True, f"entry {entry.id}")] + catmod.verify_entry(cat, entry.id, up_to)
    except (catmod.CatalogError, AlgebraError, ValueError) as exc:
        return [Check(f"{label}.parse", True, f"entry {entry.id}"), Check(f"{entry.id}.build", False, str(exc))]


def cmd_verify(args) -> Result:
    scope = args.scope
    path = Path(scope)
    if scope != "all" and (path.suffix == ".entry" or path.exists()):
        if not path.exists():
            raise UsageError(f"no such file {scope}")
        checks = _verify_file(path, args.up_to)
    else:
        cat = _catalog()
        if scope == "all":
            checks = catmod.verify_all(cat, args.up_to)
        else:
            rid = _lookup(cat, scope, ("algebra", "hom", "derivation", "claim", "tower"))
            checks = catmod.verify_entry(cat, rid, args.up_to)
    failed = sum(1 for c in checks if not c.ok)
    lines = [c.line() for c in checks]
    lines.append(f"{len(checks) - failed} passed, {failed} failed")
    doc = {"command": "verify", "scope": scope, "passed": len(checks) - failed, "failed": failed,
           "checks": [c.as_dict() for c in checks]}
    return (EXIT_FAIL if failed else EXIT_OK), doc, lines


def cmd_catalog(args) -> Result:
    cat = catmod.Catalog(catmod.read_entries())
    ids = cat.ids(args.kind) if args.kind else cat.ids()
    rows = [{"id": i, "kind": cat.entry(i).kind, "anchor": cat.entry(i).anchor} for i in ids]
    lines = [f"{r['id']:<24} {r['kind']:<10} {r['anchor']}" for r in rows]
    return EXIT_OK, {"command": "catalog", "entries": rows}, lines


# -- argument parsing -----------------------------------------------------------

def _nonneg(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("degree bound must be >= 0")
    return n


def _prime(text: str) -> int:
    n = _nonneg(text)
    if n < 2 or any(n % k == 0 for k in range(2, int(n ** 0.5) + 1)):
        raise argparse.ArgumentTypeError(f"{text} is not a prime")
    return n


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--up-to", type=_nonneg, default=24, metavar="N", help="top degree (default 24)")
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--prime", type=_prime, default=None, metavar="p")

    parser = _Parser(prog="gradedcoh", description="Graded cohomology workbench.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("poincare", parents=[common], help="dimensions of an algebra by degree")
    p.add_argument("id")
    p.add_argument("--oracle", action="store_true", help="cross-check with the rewriting oracle")
    p.set_defaults(func=cmd_poincare)

    p = sub.add_parser("sq1", parents=[common], help="apply a catalog derivation to a polynomial")
    p.add_argument("algebra")
    p.add_argument("poly")
    p.add_argument("--derivation")
    p.set_defaults(func=cmd_sq1)

    p = sub.add_parser("bockstein", parents=[common], help="E1 and E2 pages of the Bockstein spectral sequence")
    p.add_argument("algebra")
    p.add_argument("--derivation")
    p.set_defaults(func=cmd_bockstein)

    p = sub.add_parser("kernel", parents=[common], help="rank and kernel of a hom by degree")
    p.add_argument("hom")
    p.add_argument("--basis", action="store_true", help="list kernel bases")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("les", parents=[common], help="assemble a tower with the Bass-Serre sequence")
    p.add_argument("tower")
    p.set_defaults(func=cmd_les)

    p = sub.add_parser("uct", parents=[common], help="universal coefficient check for a claim")
    p.add_argument("claim")
    p.set_defaults(func=cmd_uct)

    p = sub.add_parser("verify", parents=[common], help="run checks for all entries, one id, or a file")
    p.add_argument("scope", nargs="?", default="all")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("catalog", help="catalog operations")
    csub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    lp = csub.add_parser("list", parents=[common], help="list entries")
    lp.add_argument("--kind", choices=("algebra", "hom", "derivation", "claim", "tower"))
    lp.set_defaults(func=cmd_catalog)
    return parser


def _emit(fmt: str, doc: dict, lines: list[str], out) -> None:
    if fmt == "json":
        out.write(json.dumps(doc, sort_keys=True) + "\n")
    else:
        for line in lines:
            out.write(line + "\n")


def main(argv: list[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    fmt = "json" if "--format=json" in argv or any(
        a == "--format" and i + 1 < len(argv) and argv[i + 1] == "json" for i, a in enumerate(argv)) else "text"
    try:
        args = build_parser().parse_args(argv)
        func: Callable[..., Result] = args.func
        code, doc, lines = func(args)
    except UsageError as exc:
        code, doc, lines = EXIT_USAGE, {"command": "error", "message": str(exc)}, [f"error: {exc}"]
    except (catmod.CatalogError, AlgebraError, ValueError) as exc:
        code, doc, lines = EXIT_USAGE, {"command": "error", "message": str(exc)}, [f"error: {exc}"]
    if code == EXIT_USAGE and fmt == "text":
        _emit(fmt, doc, lines, err)
    else:
        _emit(fmt, doc, lines, out)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
