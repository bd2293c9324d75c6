"""File-backed catalog of rings, maps, Bockstein data, integral claims and towers.

Entry files are line oriented; ``;`` also separates statements.  ``#``
starts a comment, except that a line ``# source-typo: <text>`` is kept with
the entry.  Directives::

    id <id>                      kind algebra|hom|derivation|claim|tower
    anchor <text>                field <p>
    gen <name> deg <n> [ext]     rel <poly>   derived-rel <poly>
    source <id>  target <id>     map <gen> -> <poly>
    algebra <id>                 sq1 <gen> -> <poly>
    modp <id>  bockstein <id>  modp-dims <tower id>
    rep <gen> [-> <poly>] [via <poly>]
    higher <name> deg <n> order <k> [-> <poly>]
    free <name> deg <n>          product <a>*<b> = [<k>] <c>
    mode field|integral          leaf <name> <id>
    stage amalgam <leaf> <leaf> over <edge>   stage hnn <leaf> over <edge>
    alpha <leaf> +|- <hom id>    surjective from <n>
    resolve <n>|all bockstein <algebra id> <derivation id>
    alias <other id>
    expect <claim id>            outofscope <text>

An edge is ``triv`` or a ``+``-separated list of algebra/claim ids and ``Z``.
"""

from __future__ import annotations

import os
import re
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from .bassserre import (FIELD, INTEGRAL, AlphaTerm, AssemblyResult, Edge, StageSpec, tower)
from .bockstein import (Check, ClaimError, Correspondence, ExceptionalProduct, HigherClass,
                        IntegralRingClaim, e2_page)
from .gradedalg import (AlgebraError, AlgebraPresentation, Element, GeneratorDecl,
                        InhomogeneousRelation)
from .gradedmaps import Derivation, DerivationIllDefined, GradedHom, RelationNotPreserved
from .poly import PolySyntaxError, PolyUnknownGenerator, parse_poly

KINDS = ("algebra", "hom", "derivation", "claim", "tower")
DATA_DIR = Path(__file__).with_name("data")
SUFFIX = ".entry"
TYPO_PREFIX = "# source-typo:"


class CatalogError(ValueError):
    pass


class CatalogSyntaxError(CatalogError):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"syntax error at line {line} col {col}: {message}")


class LocatedError(CatalogError):
    def __init__(self, message: str, line: int, col: int | None = None):
        self.line = line
        self.col = col
        where = f"line {line}" + (f" col {col}" if col is not None else "")
        super().__init__(f"{message} at {where}")


class MissingDependency(CatalogError):
    pass


@dataclass(frozen=True)
class Directive:
    keyword: str
    args: tuple[str, ...]
    line: int = 0
    cols: tuple[int, ...] = ()

    def text(self) -> str:
        return " ".join((self.keyword,) + self.args)

    def key(self) -> tuple:
        return (self.keyword,) + tuple(" ".join(a.split()) for a in self.args)

    def col(self, i: int) -> int:
        return self.cols[i] if i < len(self.cols) else 1


@dataclass
class CatalogEntry:
    id: str
    kind: str
    anchor: str
    directives: list[Directive]
    typos: list[str] = field(default_factory=list)
    path: str | None = None

    def get(self, keyword: str) -> list[Directive]:
        return [d for d in self.directives if d.keyword == keyword]

    def first(self, keyword: str) -> Directive | None:
        hits = self.get(keyword)
        return hits[0] if hits else None

    def value(self, keyword: str) -> str | None:
        d = self.first(keyword)
        return d.args[0] if d else None

    def references(self) -> list[str]:
        refs = []
        for d in self.directives:
            if d.keyword in ("source", "target", "algebra", "modp", "bockstein", "modp-dims",
                             "expect"):
                refs.append(d.args[0])
            elif d.keyword == "leaf":
                refs.append(d.args[1])
            elif d.keyword == "alpha":
                refs.append(d.args[2])
            elif d.keyword == "stage":
                refs.extend(_edge_ids(d.args[-1]))
            elif d.keyword == "resolve":
                refs.extend(d.args[2:4])
        return refs

    def __eq__(self, other):
        if not isinstance(other, CatalogEntry):
            return NotImplemented
        return (self.id, self.kind, " ".join(self.anchor.split()), [d.key() for d in self.directives],
                [" ".join(t.split()) for t in self.typos]) == \
            (other.id, other.kind, " ".join(other.anchor.split()), [d.key() for d in other.directives],
             [" ".join(t.split()) for t in other.typos])


# -- lexical layer ---------------------------------------------------------------

_IDENT = r"[A-Za-z_][A-Za-z0-9_'.\-]*"
_NAME = r"[A-Za-z_][A-Za-z0-9_']*"

# keyword -> regex over the statement remainder; groups become args (None dropped)
_FORMS = {
    "id": rf"({_IDENT})",
    "kind": r"(algebra|hom|derivation|claim|tower)",
    "anchor": r"(\S.*)",
    "field": r"(\d+)",
    "gen": rf"({_NAME})\s+deg\s+(\d+)(?:\s+(ext))?",
    "rel": r"(\S.*)",
    "derived-rel": r"(\S.*)",
    "source": rf"({_IDENT})",
    "target": rf"({_IDENT})",
    "map": rf"({_NAME})\s*->\s*(\S.*)",
    "algebra": rf"({_IDENT})",
    "sq1": rf"({_NAME})\s*->\s*(\S.*)",
    "modp": rf"({_IDENT})",
    "bockstein": rf"({_IDENT})",
    "modp-dims": rf"({_IDENT})",
    "rep": rf"({_NAME})(?:\s*->\s*(.+?))?(?:\s+via\s+(\S.*))?",
    "higher": rf"({_NAME})\s+deg\s+(\d+)\s+order\s+(\d+)(?:\s*->\s*(\S.*))?",
    "free": rf"({_NAME})\s+deg\s+(\d+)",
    "product": rf"({_NAME}(?:\s*\*\s*{_NAME})+)\s*=\s*(?:(\d+)\s+)?({_NAME})",
    "mode": r"(field|integral)",
    "leaf": rf"({_NAME})\s+({_IDENT})",
    "stage": rf"(amalgam)\s+({_NAME})\s+({_NAME})\s+over\s+(\S.*)|(hnn)\s+({_NAME})\s+over\s+(\S.*)",
    "alpha": rf"({_NAME})\s+([+-])\s+({_IDENT})",
    "surjective": r"from\s+(\d+)",
    "resolve": rf"(\d+|all)\s+bockstein\s+({_IDENT})\s+({_IDENT})",
    "expect": rf"({_IDENT})",
    "outofscope": r"(\S.*)",
    "alias": rf"({_IDENT})",
}

_SINGLE = {"id", "kind", "anchor", "field", "source", "target", "algebra", "modp", "bockstein",
           "modp-dims", "mode", "expect", "outofscope", "alias"}


def _edge_ids(edge: str) -> list[str]:
    out = []
    for part in edge.split("+"):
        part = part.strip()
        if part and part not in ("Z", "triv"):
            out.append(part)
    return out


def _statements(text: str) -> Iterator[tuple[int, int, str]]:
    """Yield (line, column of first char, statement text); keeps typo notes."""
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.lstrip()
        if stripped.startswith(TYPO_PREFIX):
            yield lineno, raw.index("#") + 1, stripped
            continue
        line = raw.split("#", 1)[0]
        start = 0
        while start <= len(line):
            rest = line[start:]
            lead = len(rest) - len(rest.lstrip())
            if re.match(r"(anchor|outofscope)\b", rest.lstrip()):
                piece = rest  # free text runs to the end of the line
            else:
                piece = rest.split(";", 1)[0]
            body = piece.strip()
            if body:
                yield lineno, start + lead + 1, body
            start += len(piece) + 1


def parse(text: str, path: str | None = None) -> CatalogEntry:
    """Parse one entry file; algebra entries are also built and validated."""
    directives: list[Directive] = []
    typos: list[str] = []
    for lineno, col, stmt in _statements(text):
        if stmt.startswith(TYPO_PREFIX):
            typos.append(stmt[len(TYPO_PREFIX):].strip())
            continue
        m = re.match(r"([a-z][a-z0-9-]*)\s*", stmt)
        if not m:
            raise CatalogSyntaxError(f"expected a keyword, found {stmt[:1]!r}", lineno, col)
        kw = m.group(1)
        if kw not in _FORMS:
            raise CatalogSyntaxError(f"unknown keyword {kw!r}", lineno, col)
        rest = stmt[m.end():]
        rest_col = col + m.end()
        form = re.fullmatch(_FORMS[kw], rest.rstrip())
        if not form:
            raise CatalogSyntaxError(f"malformed {kw!r} statement", lineno, rest_col)
        args, cols = [], []
        for gi in range(1, (form.re.groups or 0) + 1):
            val = form.group(gi)
            if val is None:
                continue
            args.append(val.strip())
            cols.append(rest_col + form.start(gi))
        if kw == "rep":
            # keep the optional pieces addressable: (gen, rep or '', witness or '')
            args = [form.group(1), (form.group(2) or "").strip(), (form.group(3) or "").strip()]
            cols = [rest_col + form.start(1),
                    rest_col + (form.start(2) if form.group(2) else 0),
                    rest_col + (form.start(3) if form.group(3) else 0)]
        if kw == "higher" and len(args) == 3:
            args.append("")
            cols.append(rest_col)
        if kw == "product" and form.group(2) is None:
            args = [form.group(1), "1", form.group(3)]
            cols = [rest_col + form.start(1), rest_col, rest_col + form.start(3)]
        directives.append(Directive(kw, tuple(args), lineno, tuple(cols)))
    heads = {}
    for d in directives:
        if d.keyword in _SINGLE:
            if d.keyword in heads:
                raise CatalogSyntaxError(f"duplicate {d.keyword!r}", d.line, 1)
            heads[d.keyword] = d
    for need in ("id", "kind"):
        if need not in heads:
            raise CatalogSyntaxError(f"missing {need!r} statement", len(text.splitlines()) + 1, 1)
    anchor = heads["anchor"].args[0] if "anchor" in heads else ""
    entry = CatalogEntry(heads["id"].args[0], heads["kind"].args[0], anchor,
                         [d for d in directives if d.keyword not in ("id", "kind", "anchor")],
                         typos, path)
    if not entry.anchor:
        raise CatalogSyntaxError("missing 'anchor' statement", 1, 1)
    if entry.kind == "algebra":
        build_algebra(entry)
    return entry


def format_entry(entry: CatalogEntry) -> str:
    lines = [f"id {entry.id}", f"kind {entry.kind}", f"anchor {entry.anchor}"]
    lines += [f"{TYPO_PREFIX} {t}" for t in entry.typos]
    for d in entry.directives:
        if d.keyword == "rep":
            gen, rep, wit = d.args
            s = f"rep {gen}"
            if rep:
                s += f" -> {rep}"
            if wit:
                s += f" via {wit}"
            lines.append(s)
        elif d.keyword in ("map", "sq1"):
            lines.append(f"{d.keyword} {d.args[0]} -> {d.args[1]}")
        elif d.keyword == "gen":
            lines.append(f"gen {d.args[0]} deg {d.args[1]}" + (" ext" if len(d.args) > 2 else ""))
        elif d.keyword == "higher":
            name, deg, order, rep = d.args
            lines.append(f"higher {name} deg {deg} order {order}" + (f" -> {rep}" if rep else ""))
        elif d.keyword == "free":
            lines.append(f"free {d.args[0]} deg {d.args[1]}")
        elif d.keyword == "product":
            factors, mult, res = d.args
            lines.append(f"product {factors} = " + (f"{mult} " if mult != "1" else "") + res)
        elif d.keyword == "stage":
            if d.args[0] == "amalgam":
                lines.append(f"stage amalgam {d.args[1]} {d.args[2]} over {d.args[3]}")
            else:
                lines.append(f"stage hnn {d.args[1]} over {d.args[2]}")
        elif d.keyword == "surjective":
            lines.append(f"surjective from {d.args[0]}")
        elif d.keyword == "resolve":
            lines.append(f"resolve {d.args[0]} bockstein {d.args[1]} {d.args[2]}")
        else:
            lines.append(d.text())
    return "\n".join(lines) + "\n"


# -- builders -----------------------------------------------------------------------

def _poly(alg: AlgebraPresentation, text: str, d: Directive, i: int) -> Element:
    try:
        return parse_poly(alg, text)
    except PolyUnknownGenerator as exc:
        raise LocatedError(f"unknown generator {exc.name!r}", d.line, d.col(i) + exc.col - 1) from None
    except PolySyntaxError as exc:
        raise CatalogSyntaxError(exc.message, d.line, d.col(i) + exc.col - 1) from None


def _field(entry: CatalogEntry) -> int:
    p = entry.value("field")
    if p is None:
        raise CatalogError(f"{entry.id}: missing 'field' statement")
    n = int(p)
    if n < 2 or any(n % q == 0 for q in range(2, int(n ** 0.5) + 1)):
        d = entry.first("field")
        raise LocatedError(f"field size {n} is not a prime", d.line, d.col(0))
    return n


def _presentation(entry: CatalogEntry, name: str) -> AlgebraPresentation:
    p = _field(entry)
    gens = []
    for d in entry.get("gen"):
        try:
            gens.append(GeneratorDecl(d.args[0], int(d.args[1]), len(d.args) > 2))
        except (ValueError, AlgebraError) as exc:
            raise LocatedError(str(exc), d.line, d.col(0)) from None
    try:
        alg = AlgebraPresentation(p, gens, (), name=name)
    except (ValueError, AlgebraError) as exc:
        raise CatalogError(f"{entry.id}: {exc}") from None
    rels = []
    for d in entry.directives:
        if d.keyword not in ("rel", "derived-rel"):
            continue
        r = _poly(alg, d.args[0], d, 0)
        if not r.is_homogeneous():
            raise LocatedError(f"inhomogeneous relation {d.args[0]!r}", d.line, d.col(0))
        rels.append(r)
    return AlgebraPresentation(p, gens, rels, name=name)


def build_algebra(entry: CatalogEntry) -> AlgebraPresentation:
    return _presentation(entry, entry.id)


@dataclass
class TowerSpec:
    id: str
    mode: str
    p: int
    leaves: dict[str, AlgebraPresentation]
    stages: list[StageSpec]
    resolves: list[tuple[int | None, str, str]]
    expect: str | None
    out_of_scope: str | None

    def run(self, catalog: Catalog, up_to: int) -> AssemblyResult:
        if self.out_of_scope is not None:
            raise CatalogError(f"{self.id}: out of scope: {self.out_of_scope}")
        res = tower(self.stages, self.leaves, up_to, self.mode, self.p)
        for degree, alg_id, der_id in self.resolves:
            alg = catalog.algebra(alg_id)
            der = catalog.derivation(der_id)
            if der.alg is not alg:
                raise CatalogError(f"{self.id}: {der_id} is not defined on {alg_id}")
            degrees = res.unresolved() if degree is None else [degree]
            if not degrees:
                continue
            e2 = e2_page(alg, der, max(degrees))
            for n in degrees:
                res.resolve_from_e2(n, e2, f"Bockstein E2 of {alg_id}")
        return res


class Catalog:
    """Entries by id with lazily built, cached payloads."""

    def __init__(self, entries: dict[str, CatalogEntry]):
        self.entries = entries
        self._built: dict[str, object] = {}
        self._lock = threading.RLock()
        self._building: set[str] = set()
        self._modp_dims: dict[tuple[str, int], list[int]] = {}

    def __iter__(self):
        return iter(self.entries.values())

    def __len__(self):
        return len(self.entries)

    def __contains__(self, key):
        return key in self.entries

    def ids(self, kind: str | None = None) -> list[str]:
        return sorted(i for i, e in self.entries.items() if kind is None or e.kind == kind)

    def resolve_id(self, id: str) -> str:
        if id in self.entries:
            return id
        for e in self.entries.values():
            if e.value("alias") == id:
                return e.id
        raise MissingDependency(f"unknown catalog id {id!r}")

    def entry(self, id: str) -> CatalogEntry:
        return self.entries[self.resolve_id(id)]

    def check_dependencies(self) -> None:
        for e in self.entries.values():
            for ref in e.references():
                if ref not in self.entries:
                    raise MissingDependency(f"missing dependency: {e.id} needs {ref}")

    def build(self, id: str):
        with self._lock:
            id = self.resolve_id(id)
            if id in self._built:
                return self._built[id]
            if id in self._building:
                raise CatalogError(f"dependency cycle through {id}")
            entry = self.entry(id)
            self._building.add(id)
            try:
                obj = _BUILDERS[entry.kind](self, entry)
            except (MissingDependency, CatalogError):
                raise
            except (AlgebraError, ClaimError, ValueError) as exc:
                raise CatalogError(f"{id}: {exc}") from exc
            finally:
                self._building.discard(id)
            self._built[id] = obj
            return obj

    def algebra(self, id: str) -> AlgebraPresentation:
        obj = self.build(id)
        if isinstance(obj, IntegralRingClaim):
            return obj.subring
        if not isinstance(obj, AlgebraPresentation):
            raise CatalogError(f"{id} is not an algebra")
        return obj

    def hom(self, id: str) -> GradedHom:
        obj = self.build(id)
        if not isinstance(obj, GradedHom):
            raise CatalogError(f"{id} is not a hom")
        return obj

    def derivation(self, id: str) -> Derivation:
        obj = self.build(id)
        if not isinstance(obj, Derivation):
            raise CatalogError(f"{id} is not a derivation")
        return obj

    def claim(self, id: str) -> IntegralRingClaim:
        obj = self.build(id)
        if not isinstance(obj, IntegralRingClaim):
            raise CatalogError(f"{id} is not a claim")
        return obj

    def tower(self, id: str) -> TowerSpec:
        obj = self.build(id)
        if not isinstance(obj, TowerSpec):
            raise CatalogError(f"{id} is not a tower")
        return obj

    def derivations_on(self, alg_id: str) -> list[str]:
        return [e.id for e in self.entries.values()
                if e.kind == "derivation" and e.value("algebra") == alg_id]

    def modp_dims(self, claim_id: str, up_to: int) -> list[int]:
        """Mod-p dimensions a claim is checked against (algebra or field tower)."""
        entry = self.entry(claim_id)
        key = (claim_id, up_to)
        if key not in self._modp_dims:
            if entry.value("modp"):
                dims = self.algebra(entry.value("modp")).poincare_series(up_to)
            elif entry.value("modp-dims"):
                dims = self.tower(entry.value("modp-dims")).run(self, up_to).dims(up_to)
            else:
                raise CatalogError(f"{claim_id}: no mod-p reference")
            self._modp_dims[key] = dims
        return self._modp_dims[key]

    def build_all(self) -> None:
        for id in self.ids():
            self.build(id)


def _build_hom(cat: Catalog, entry: CatalogEntry) -> GradedHom:
    src = cat.algebra(entry.value("source") or _missing(entry, "source"))
    tgt = cat.algebra(entry.value("target") or _missing(entry, "target"))
    images = {}
    for d in entry.get("map"):
        if d.args[0] not in src.index:
            raise LocatedError(f"unknown generator {d.args[0]!r}", d.line, d.col(0))
        images[d.args[0]] = _poly(tgt, d.args[1], d, 1)
    h = GradedHom(src, tgt, images, entry.id)
    rep = h.check()
    if not rep.ok:
        raise RelationNotPreserved(f"{entry.id}: " + "; ".join(rep.violations))
    return h


def _build_derivation(cat: Catalog, entry: CatalogEntry) -> Derivation:
    alg = cat.algebra(entry.value("algebra") or _missing(entry, "algebra"))
    images = {}
    for d in entry.get("sq1"):
        if d.args[0] not in alg.index:
            raise LocatedError(f"unknown generator {d.args[0]!r}", d.line, d.col(0))
        images[d.args[0]] = _poly(alg, d.args[1], d, 1)
    der = Derivation(alg, images, entry.id)
    rep = der.check()
    if not rep.ok:
        raise DerivationIllDefined(f"ill-defined derivation {entry.id}: " + "; ".join(rep.violations))
    return der


def _build_claim(cat: Catalog, entry: CatalogEntry) -> IntegralRingClaim:
    sub = _presentation(entry, entry.id)
    modp = cat.algebra(entry.value("modp")) if entry.value("modp") else None
    sq1 = cat.derivation(entry.value("bockstein")) if entry.value("bockstein") else None
    if sq1 is not None and modp is not None and sq1.alg is not modp:
        raise CatalogError(f"{entry.id}: Bockstein datum is not on the mod-p ring")
    corr = {}
    for d in entry.get("rep"):
        gen, rep, wit = d.args
        if gen not in sub.index:
            raise LocatedError(f"unknown generator {gen!r}", d.line, d.col(0))
        if modp is None:
            raise LocatedError("representative given without a mod-p ring", d.line, d.col(0))
        corr[gen] = Correspondence(_poly(modp, rep, d, 1) if rep else None,
                                   _poly(modp, wit, d, 2) if wit else None)
    higher = []
    for d in entry.get("higher"):
        name, deg, order, rep = d.args
        higher.append(HigherClass(name, int(deg), int(order),
                                  _poly(modp, rep, d, 3) if rep and modp is not None else None))
    free = [(d.args[0], int(d.args[1])) for d in entry.get("free")]
    products = [ExceptionalProduct(tuple(f.strip() for f in d.args[0].split("*")),
                                   d.args[2] if d.args[1] == "1" else f"{d.args[1]} {d.args[2]}")
                for d in entry.get("product")]
    rels = [d for d in entry.directives if d.keyword in ("rel", "derived-rel")]
    derived = frozenset(i for i, d in enumerate(rels, 1) if d.keyword == "derived-rel")
    return IntegralRingClaim(entry.id, sub.p, sub, corr, higher, free, products, modp, sq1,
                             list(entry.typos), derived)


def _edge(cat: Catalog, text: str) -> Edge:
    summands, free = [], 0
    for part in text.split("+"):
        part = part.strip()
        if part == "Z":
            free += 1
        elif part and part != "triv":
            summands.append((part, cat.algebra(part)))
    return Edge(tuple(summands), free)


def _build_tower(cat: Catalog, entry: CatalogEntry) -> TowerSpec:
    mode = entry.value("mode") or _missing(entry, "mode")
    p = _field(entry)
    leaves = {d.args[0]: cat.algebra(d.args[1]) for d in entry.get("leaf")}
    stages: list[StageSpec] = []
    current: StageSpec | None = None
    for d in entry.directives:
        if d.keyword == "stage":
            if d.args[0] == "amalgam":
                verts, edge = (d.args[1], d.args[2]), d.args[3]
            else:
                verts, edge = (d.args[1],), d.args[2]
            for v in verts:
                if v not in leaves:
                    raise LocatedError(f"unknown leaf {v!r}", d.line, d.col(1))
            current = StageSpec(d.args[0], verts, _edge(cat, edge), label=f"stage {len(stages) + 1}")
            stages.append(current)
        elif d.keyword == "alpha":
            if current is None:
                raise LocatedError("alpha before any stage", d.line, d.col(0))
            if d.args[0] not in leaves:
                raise LocatedError(f"unknown leaf {d.args[0]!r}", d.line, d.col(0))
            term = AlphaTerm(d.args[0], 1 if d.args[1] == "+" else -1, cat.hom(d.args[2]))
            try:
                current.edge.summand_for(term.hom.target)
            except ValueError as exc:
                raise LocatedError(str(exc), d.line, d.col(2)) from None
            current.terms.append(term)
        elif d.keyword == "surjective":
            if current is None:
                raise LocatedError("surjective before any stage", d.line, d.col(0))
            current.surjective_from = int(d.args[0])
    resolves = [(None if d.args[0] == "all" else int(d.args[0]), d.args[1], d.args[2])
                for d in entry.get("resolve")]
    spec = TowerSpec(entry.id, mode, p, leaves, stages, resolves, entry.value("expect"),
                     entry.value("outofscope"))
    if mode not in (FIELD, INTEGRAL):
        raise CatalogError(f"{entry.id}: unknown mode {mode}")
    return spec


def _missing(entry: CatalogEntry, keyword: str):
    raise CatalogError(f"{entry.id}: missing {keyword!r} statement")


_BUILDERS = {
    "algebra": lambda cat, e: build_algebra(e),
    "hom": _build_hom,
    "derivation": _build_derivation,
    "claim": _build_claim,
    "tower": _build_tower,
}


def data_dir() -> Path:
    env = os.environ.get("CATALOG_DIR")
    return Path(env) if env else DATA_DIR


def read_entries(directory: Path | str | None = None) -> dict[str, CatalogEntry]:
    directory = Path(directory) if directory is not None else data_dir()
    if not directory.is_dir():
        raise CatalogError(f"catalog directory {directory} not found")
    entries: dict[str, CatalogEntry] = {}
    for path in sorted(directory.glob(f"*{SUFFIX}")):
        try:
            entry = parse(path.read_text(encoding="utf-8"), str(path))
        except CatalogError as exc:
            raise CatalogError(f"{path.name}: {exc}") from exc
        if entry.id in entries:
            raise CatalogError(f"duplicate id {entry.id}")
        if path.name != entry.id + SUFFIX:
            raise CatalogError(f"{path.name}: file name does not match id {entry.id}")
        entries[entry.id] = entry
    return entries


def load_all(directory: Path | str | None = None, build: bool = True) -> Catalog:
    cat = Catalog(read_entries(directory))
    cat.check_dependencies()
    if build:
        cat.build_all()
    return cat


_DEFAULT: Catalog | None = None
_DEFAULT_LOCK = threading.Lock()


def default_catalog() -> Catalog:
    """The shipped catalog, loaded once per process (CATALOG_DIR honoured)."""
    global _DEFAULT
    with _DEFAULT_LOCK:
        if _DEFAULT is None or os.environ.get("CATALOG_DIR"):
            _DEFAULT = load_all()
        return _DEFAULT


# -- verification suite ------------------------------------------------------------

def verify_entry(cat: Catalog, id: str, up_to: int = 20) -> list[Check]:
    entry = cat.entry(id)
    obj = cat.build(id)
    checks: list[Check] = []
    if entry.kind == "algebra":
        bad = [str(r) for r in obj.relations if not obj.normal_form(r).is_zero()]
        checks.append(Check(f"{id}.relations", not bad,
                            f"{len(obj.relations)} relations reduce to 0" if not bad else f"nonzero: {bad}"))
    elif entry.kind == "hom":
        rep = obj.check()
        checks.append(Check(f"{id}.hom", rep.ok, "; ".join(rep.violations) or
                            f"{obj.source.name} -> {obj.target.name} well defined"))
    elif entry.kind == "derivation":
        rep = obj.check()
        checks.append(Check(f"{id}.well-defined", rep.ok, "; ".join(rep.violations) or
                            "every relation maps into the relation ideal"))
        bad = obj.square_vanishes(up_to)
        checks.append(Check(f"{id}.square-zero", not bad,
                            f"d o d = 0 through degree {up_to}" if not bad else f"nonzero in degrees {bad}"))
    elif entry.kind == "claim":
        from .bockstein import verify_claim
        dims = cat.modp_dims(id, up_to)
        checks.extend(verify_claim(obj, up_to=up_to, modp_dims=dims))
    elif entry.kind == "tower":
        checks.extend(_verify_tower(cat, obj, up_to))
    return checks


def _verify_tower(cat: Catalog, spec: TowerSpec, up_to: int) -> list[Check]:
    tid = spec.id
    if spec.out_of_scope is not None:
        return [Check(f"{tid}.scope", True, f"out of scope: {spec.out_of_scope}")]
    res = spec.run(cat, up_to)
    checks = []
    for s, stage in zip(res.stages, spec.stages):
        if stage.surjective_from is not None:
            bad = s.non_surjective_degrees(stage.surjective_from, up_to)
            checks.append(Check(f"{tid}.surjective.{s.index}", not bad,
                                f"alpha onto in degrees {stage.surjective_from}..{up_to}"
                                + (f"; cokernel in degrees {bad}" if bad else "")))
    for amb in res.ambiguities:
        checks.append(Check(f"{tid}.ambiguity.{amb.stage}.{amb.degree}", True, amb.describe()))
    for r in res.resolutions.values():
        checks.append(Check(f"{tid}.resolve.{r.degree}", True,
                            f"{r.higher} summand(s) of order p^2 from {r.source}"))
    open_degrees = res.unresolved()
    checks.append(Check(f"{tid}.resolved", not open_degrees,
                        "all extensions determined" if not open_degrees
                        else f"unresolved extensions in degrees {open_degrees}"))
    if spec.expect and not open_degrees:
        claim = cat.claim(spec.expect)
        if res.mode == INTEGRAL:
            want = claim.dims(up_to)
            got = res.dims(up_to)
            same_group = claim.graded_group(up_to) == res.group(up_to)
            checks.append(Check(f"{tid}.expect", want == got and same_group,
                                f"matches {spec.expect} through degree {up_to}" if want == got and same_group
                                else f"assembled {got} vs claimed {want}"))
        else:
            want = predicted_modp_dims(claim, up_to)
            got = res.dims(up_to)
            checks.append(Check(f"{tid}.expect", want == got,
                                f"dims match {spec.expect}" if want == got else f"{got} vs {want}"))
    return checks


def predicted_modp_dims(claim: IntegralRingClaim, up_to: int) -> list[int]:
    """Mod-p dimensions the UCT predicts from a claim's integral groups."""
    g = claim.graded_group(up_to + 1)
    p = claim.p
    return [g.free_rank(n) + g.torsion_count(n, p) + g.torsion_count(n + 1, p)
            for n in range(up_to + 1)]


def verify_all(cat: Catalog, up_to: int = 20) -> list[Check]:
    out = []
    for id in cat.ids():
        out.extend(verify_entry(cat, id, up_to))
    return out
