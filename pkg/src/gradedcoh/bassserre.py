"""Long exact sequence assembly for amalgamated products and HNN extensions.

A tower starts from leaf groups (each given by a graded algebra: a mod-p
ring in field mode, or the order-p part of an integral ring in integral
mode).  Every stage merges two components (amalgam) or acts on one (HNN
extension).  The cohomology of a component is tracked degreewise as

* kernel vectors: classes detected by restriction to the leaves, stored in
  the ambient coordinates of the direct sum of all leaf algebras;
* delta classes: images of the connecting map, which restrict to zero on
  every leaf;
* bounds on the number of cyclic summands of order p^2 (integral mode).

Conventions fixed here: delta classes restrict to zero on later edges, and
alpha vanishes on the free degree-1 part of an edge.  In degree 0 alpha is
onto for an amalgam and zero for an HNN extension.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .bockstein import GradedAbelianGroup, higher_orders_from_e2
from .fplinalg import FpMatrix, kernel_basis, rank
from .gradedalg import AlgebraPresentation, Element
from .gradedmaps import GradedHom


class LESError(ValueError):
    pass


class InvalidAlpha(LESError):
    pass


class DegreeRangeTooSmall(LESError):
    pass


class RestrictionUndefined(LESError):
    pass


FIELD = "field"
INTEGRAL = "integral"


@dataclass(frozen=True)
class Edge:
    """Edge group cohomology: algebra summands plus free degree-1 classes."""

    summands: tuple[tuple[str, AlgebraPresentation], ...] = ()
    free_h1: int = 0

    def dims(self, n: int) -> list[int]:
        return [a.dim(n) if n > 0 else 0 for _, a in self.summands]

    def dim(self, n: int) -> int:
        return sum(self.dims(n))

    def offset(self, label: str, n: int) -> int:
        off = 0
        for lab, a in self.summands:
            if lab == label:
                return off
            off += a.dim(n) if n > 0 else 0
        raise InvalidAlpha(f"edge has no summand {label!r}")

    def summand_for(self, alg: AlgebraPresentation) -> str:
        hits = [lab for lab, a in self.summands if a is alg]
        if len(hits) != 1:
            raise InvalidAlpha(f"hom target {alg.name} matches {len(hits)} edge summands")
        return hits[0]

    def describe(self) -> str:
        parts = [lab for lab, _ in self.summands] + ["Z"] * self.free_h1
        return " + ".join(parts) if parts else "trivial"


@dataclass(frozen=True)
class AlphaTerm:
    leaf: str
    sign: int
    hom: GradedHom


@dataclass
class StageSpec:
    kind: str
    vertices: tuple[str, ...]
    edge: Edge
    terms: list[AlphaTerm] = field(default_factory=list)
    surjective_from: int | None = None
    label: str = ""

    def __post_init__(self):
        if self.kind not in ("amalgam", "hnn"):
            raise LESError(f"unknown extension kind {self.kind!r}")
        want = 2 if self.kind == "amalgam" else 1
        if len(self.vertices) != want:
            raise LESError(f"{self.kind} needs {want} vertex component(s)")
        for t in self.terms:
            if t.sign not in (1, -1):
                raise InvalidAlpha("alpha term sign must be +1 or -1")
            self.edge.summand_for(t.hom.target)


@dataclass
class LESProblem:
    """One amalgam or HNN extension over leaf algebras."""

    kind: str
    mode: str
    p: int
    leaves: dict[str, AlgebraPresentation]
    vertices: tuple[str, ...]
    edge: Edge
    terms: list[AlphaTerm] = field(default_factory=list)

    def as_stage(self) -> StageSpec:
        return StageSpec(self.kind, self.vertices, self.edge, list(self.terms))


@dataclass
class DeltaClass:
    name: str
    degree: int
    free: bool
    stage: int
    origin: str


@dataclass
class Ambiguity:
    stage: int
    degree: int
    coker: int
    kernel: int

    @property
    def max_higher(self) -> int:
        return min(self.coker, self.kernel)

    def describe(self) -> str:
        return (f"stage {self.stage} degree {self.degree}: 0 -> (Z/p)^{self.coker} -> H -> "
                f"(Z/p)^{self.kernel} -> 0 admits up to {self.max_higher} summand(s) of order p^2")


@dataclass
class Resolution:
    degree: int
    higher: int
    source: str


@dataclass
class StageReport:
    index: int
    kind: str
    edge: str
    alpha_rank: dict[int, int] = field(default_factory=dict)
    edge_dim: dict[int, int] = field(default_factory=dict)
    domain_dim: dict[int, int] = field(default_factory=dict)
    new_deltas: list[DeltaClass] = field(default_factory=list)
    ambiguities: list[Ambiguity] = field(default_factory=list)
    surjective_from: int | None = None

    def kernel_dim(self, n: int) -> int:
        return self.domain_dim.get(n, 0) - self.alpha_rank.get(n, 0)

    def coker_dim(self, n: int) -> int:
        return self.edge_dim.get(n, 0) - self.alpha_rank.get(n, 0)

    def non_surjective_degrees(self, start: int, up_to: int) -> list[int]:
        return [n for n in range(max(start, 1), up_to + 1) if self.coker_dim(n) > 0]


@dataclass
class Component:
    leaves: tuple[str, ...]
    vectors: dict[int, list[list[int]]]
    deltas: list[DeltaClass]
    higher: dict[int, tuple[int, int]]

    def delta_count(self, n: int, free: bool | None = None) -> int:
        return sum(1 for d in self.deltas if d.degree == n and (free is None or d.free == free))


class _Ambient:
    """Coordinates of the direct sum of all leaf algebras, degree by degree."""

    def __init__(self, leaves: Mapping[str, AlgebraPresentation]):
        self.leaves = dict(leaves)
        self.order = list(leaves)

    def offsets(self, n: int) -> dict[str, int]:
        out, off = {}, 0
        for name in self.order:
            out[name] = off
            off += self.leaves[name].dim(n)
        return out

    def dim(self, n: int) -> int:
        return sum(a.dim(n) for a in self.leaves.values())

    def block(self, vec: Sequence[int], leaf: str, n: int) -> list[int]:
        off = self.offsets(n)[leaf]
        return list(vec[off:off + self.leaves[leaf].dim(n)])

    def unit_vectors(self, leaf: str, n: int) -> list[list[int]]:
        off = self.offsets(n)[leaf]
        total = self.dim(n)
        out = []
        for i in range(self.leaves[leaf].dim(n)):
            v = [0] * total
            v[off + i] = 1
            out.append(v)
        return out

    def element(self, vec: Sequence[int], leaf: str, n: int) -> Element:
        return self.leaves[leaf].from_coordinates(n, self.block(vec, leaf, n))

    def embed(self, parts: Mapping[str, Element], n: int) -> list[int]:
        vec = [0] * self.dim(n)
        offs = self.offsets(n)
        for leaf, e in parts.items():
            if leaf not in self.leaves:
                raise RestrictionUndefined(f"unknown leaf {leaf!r}")
            coords = self.leaves[leaf].coordinates(e, n)
            for i, c in enumerate(coords):
                vec[offs[leaf] + i] = c
        return vec


@dataclass
class AssemblyResult:
    mode: str
    p: int
    up_to: int
    leaves: dict[str, AlgebraPresentation]
    component: Component
    stages: list[StageReport]
    specs: list[StageSpec]
    resolutions: dict[int, Resolution] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    # -- counting ---------------------------------------------------------
    def kernel_count(self, n: int) -> int:
        return len(self.component.vectors.get(n, [])) if n > 0 else 0

    def free_rank(self, n: int) -> int:
        if self.mode == FIELD:
            return 0
        return int(n == 0) + self.component.delta_count(n, free=True)

    def torsion_classes(self, n: int) -> int:
        """Order-p building blocks: kernel classes plus torsion delta classes."""
        if n == 0:
            return 0
        return self.kernel_count(n) + self.component.delta_count(n, free=False)

    def dim(self, n: int) -> int:
        """Field mode: dimension of H^n; integral: number of cyclic summands."""
        if self.mode == FIELD:
            return (1 if n == 0 else 0) + self.kernel_count(n) + self.component.delta_count(n)
        h = self.higher(n)
        if h is None:
            raise LESError(f"degree {n} has an unresolved extension")
        return self.free_rank(n) + self.torsion_classes(n) - h

    def dims(self, up_to: int | None = None) -> list[int]:
        top = self.up_to if up_to is None else up_to
        if top > self.up_to:
            raise DegreeRangeTooSmall(f"assembled through {self.up_to}, asked for {top}")
        return [self.dim(n) for n in range(top + 1)]

    def higher_bounds(self, n: int) -> tuple[int, int]:
        return self.component.higher.get(n, (0, 0))

    def higher(self, n: int) -> int | None:
        if n in self.resolutions:
            return self.resolutions[n].higher
        lo, hi = self.higher_bounds(n)
        return lo if lo == hi else None

    @property
    def ambiguities(self) -> list[Ambiguity]:
        return [a for s in self.stages for a in s.ambiguities]

    def unresolved(self) -> list[int]:
        return [n for n in range(self.up_to + 1) if self.mode == INTEGRAL and self.higher(n) is None]

    @property
    def hnn_class(self) -> bool:
        return any(d.degree == 1 and d.origin == "hnn" for d in self.component.deltas)

    @property
    def delta_classes(self) -> list[DeltaClass]:
        return list(self.component.deltas)

    def group(self, up_to: int | None = None) -> GradedAbelianGroup:
        if self.mode != INTEGRAL:
            raise LESError("groups are only defined in integral mode")
        top = self.up_to if up_to is None else up_to
        g = GradedAbelianGroup()
        for n in range(top + 1):
            h = self.higher(n)
            if h is None:
                raise LESError(f"degree {n} has an unresolved extension")
            tors = {}
            if self.torsion_classes(n) - 2 * h:
                tors[(self.p, 1)] = self.torsion_classes(n) - 2 * h
            if h:
                tors[(self.p, 2)] = h
            g.set(n, self.free_rank(n), tors)
        return g

    def describe(self, n: int) -> str:
        if self.mode == FIELD:
            return f"F{self.p}^{self.dim(n)}" if self.dim(n) else "0"
        h = self.higher(n)
        if h is None:
            lo, hi = self.higher_bounds(n)
            free = self.free_rank(n)
            return (f"{'Z^%d + ' % free if free else ''}order p^{self.torsion_classes(n)}"
                    f" with {lo}..{hi} summands of order p^2 (ambiguous)")
        return self.group(n).describe(n) if n <= self.up_to else "?"

    # -- resolution -----------------------------------------------------------
    def resolve(self, degree: int, higher: int, source: str) -> Resolution:
        lo, hi = self.higher_bounds(degree)
        if not lo <= higher <= hi:
            raise LESError(f"degree {degree}: external fact gives {higher} summands of order "
                           f"p^2, outside the possible range {lo}..{hi}")
        res = Resolution(degree, higher, source)
        self.resolutions[degree] = res
        return res

    def resolve_from_e2(self, degree: int, e2: Sequence[int], source: str) -> Resolution:
        if len(e2) < degree:
            raise DegreeRangeTooSmall("E2 page too short for the requested degree")
        free = [self.free_rank(n) for n in range(len(e2))]
        h = higher_orders_from_e2(e2, free)
        return self.resolve(degree, h[degree], source)


def _alpha_matrix(spec: StageSpec, amb: _Ambient, vectors: list[list[int]], n: int,
                  p: int) -> FpMatrix:
    rows = spec.edge.dim(n)
    cols = []
    for v in vectors:
        col = [0] * rows
        for t in spec.terms:
            label = spec.edge.summand_for(t.hom.target)
            off = spec.edge.offset(label, n)
            img = t.hom.matrix(n).apply(amb.block(v, t.leaf, n))
            for i, c in enumerate(img):
                col[off + i] = (col[off + i] + t.sign * c) % p
        cols.append(col)
    return FpMatrix.from_columns(p, cols, rows)


def _combine(p: int, vectors: list[list[int]], coeffs: Sequence[int], size: int) -> list[int]:
    out = [0] * size
    for c, v in zip(coeffs, vectors):
        if c:
            for i, x in enumerate(v):
                if x:
                    out[i] = (out[i] + c * x) % p
    return out


class _TowerRun:
    def __init__(self, mode: str, p: int, leaves: Mapping[str, AlgebraPresentation], up_to: int):
        if mode not in (FIELD, INTEGRAL):
            raise LESError(f"unknown coefficient mode {mode!r}")
        for name, a in leaves.items():
            if a.p != p:
                raise LESError(f"leaf {name} is not over F_{p}")
        self.mode = mode
        self.p = p
        self.up_to = up_to
        self.amb = _Ambient(leaves)
        self.components: list[Component] = []
        for name in leaves:
            vecs = {n: self.amb.unit_vectors(name, n) for n in range(1, up_to + 2)}
            self.components.append(Component((name,), vecs, [], {}))
        self.reports: list[StageReport] = []

    def find(self, leaf: str) -> Component:
        for c in self.components:
            if leaf in c.leaves:
                return c
        raise LESError(f"no component contains leaf {leaf!r}")

    def run(self, spec: StageSpec) -> None:
        idx = len(self.reports) + 1
        comps = [self.find(v) for v in spec.vertices]
        if spec.kind == "amalgam" and comps[0] is comps[1]:
            raise LESError(f"stage {idx}: amalgam vertices lie in one component; use hnn")
        leaves = tuple(l for c in comps for l in c.leaves)
        for t in spec.terms:
            if t.leaf not in leaves:
                raise InvalidAlpha(f"stage {idx}: alpha term on leaf {t.leaf} outside the vertices")
            if t.hom.source is not self.amb.leaves[t.leaf]:
                raise InvalidAlpha(f"stage {idx}: {t.hom.name} does not start at leaf {t.leaf}")
        report = StageReport(idx, spec.kind, spec.edge.describe(), surjective_from=spec.surjective_from)
        top = self.up_to + 1
        new_vectors: dict[int, list[list[int]]] = {}
        for n in range(1, top + 1):
            domain = [v for c in comps for v in c.vectors.get(n, [])]
            mat = _alpha_matrix(spec, self.amb, domain, n, self.p)
            r = rank(mat)
            report.alpha_rank[n] = r
            report.edge_dim[n] = spec.edge.dim(n)
            report.domain_dim[n] = len(domain)
            size = self.amb.dim(n)
            new_vectors[n] = [_combine(self.p, domain, k, size) for k in kernel_basis(mat)]
        deltas = [d for c in comps for d in c.deltas]
        higher: dict[int, tuple[int, int]] = {}
        for c in comps:
            for n, (lo, hi) in c.higher.items():
                plo, phi = higher.get(n, (0, 0))
                higher[n] = (plo + lo, phi + hi)

        def add_delta(n: int, free: bool, origin: str) -> DeltaClass:
            k = sum(1 for d in report.new_deltas if d.degree == n)
            d = DeltaClass(f"delta_{idx}_{n}_{k}", n, free, idx, origin)
            report.new_deltas.append(d)
            return d

        if spec.kind == "hnn":
            # degree 0: alpha vanishes, so delta(1) is a free class in degree 1
            add_delta(1, self.mode == INTEGRAL, "hnn")
        for _ in range(spec.edge.free_h1):
            add_delta(2, self.mode == INTEGRAL, "edge H^1 free part")
        for n in range(2, top + 1):
            c = report.coker_dim(n - 1)
            for _ in range(c):
                add_delta(n, False, f"coker alpha({n - 1})")
        if self.mode == INTEGRAL:
            for n in range(2, top + 1):
                c = report.coker_dim(n - 1)
                k = len(new_vectors[n]) + sum(1 for d in deltas if d.degree == n and not d.free)
                if c and k:
                    amb = Ambiguity(idx, n, c, k)
                    report.ambiguities.append(amb)
                    lo, hi = higher.get(n, (0, 0))
                    higher[n] = (lo, hi + amb.max_higher)
        merged = Component(leaves, new_vectors, deltas + report.new_deltas, higher)
        self.components = [c for c in self.components if all(c is not x for x in comps)]
        self.components.append(merged)
        self.reports.append(report)

    def result(self, specs: list[StageSpec], target: str | None) -> AssemblyResult:
        if target is not None:
            comp = self.find(target)
        elif len(self.components) == 1:
            comp = self.components[0]
        else:
            comp = self.components[-1]
        return AssemblyResult(self.mode, self.p, self.up_to, dict(self.amb.leaves), comp,
                              self.reports, specs)


def tower(stages: Sequence[StageSpec], leaves: Mapping[str, AlgebraPresentation],
          up_to: int, mode: str = INTEGRAL, p: int = 2) -> AssemblyResult:
    """Run the stages in order; the result describes the last merged component."""
    if up_to < 0:
        raise DegreeRangeTooSmall("degree range must be nonnegative")
    run = _TowerRun(mode, p, leaves, up_to)
    for spec in stages:
        run.run(spec)
    return run.result(list(stages), None)


def assemble(problem: LESProblem, up_to: int) -> AssemblyResult:
    return tower([problem.as_stage()], problem.leaves, up_to, problem.mode, problem.p)


@dataclass
class DeltaProduct:
    text: str
    witness: Element | None
    nonzero: bool


def delta_products(result: AssemblyResult, u, v, stage: int | None = None) -> DeltaProduct:
    """Product of a restriction-detected class with delta(v).

    ``u`` is ``{leaf: Element}`` (a class seen through rho) or a DeltaClass;
    ``v`` is an element of an edge summand of ``stage`` (default: last) or a
    DeltaClass.  Two delta classes always multiply to zero.
    """
    if isinstance(u, DeltaClass) or isinstance(v, DeltaClass):
        if isinstance(u, DeltaClass) and isinstance(v, DeltaClass):
            return DeltaProduct(f"{u.name} * {v.name} = 0", None, False)
        raise RestrictionUndefined("a delta class restricts to zero; pair it with another delta class")
    idx = len(result.specs) if stage is None else stage
    spec = result.specs[idx - 1]
    report = result.stages[idx - 1]
    if not isinstance(v, Element):
        raise RestrictionUndefined("edge class must be an Element")
    label = spec.edge.summand_for(v.alg)
    restrict = [t for t in spec.terms if t.sign == 1]
    if not restrict:
        raise RestrictionUndefined(f"stage {idx} has no restriction term")
    res_u = None
    for t in restrict:
        if t.leaf in u and spec.edge.summand_for(t.hom.target) == label:
            img = t.hom.apply(u[t.leaf])
            res_u = img if res_u is None else res_u + img
    if res_u is None:
        raise RestrictionUndefined(f"restriction of the class to {label} is undefined")
    w = v.alg.normal_form(res_u * v)
    u_text = " + ".join(f"{leaf}:{e}" for leaf, e in u.items())
    lhs = f"({u_text}) * delta({v})"
    if w.is_zero():
        return DeltaProduct(f"{lhs} = delta(0) = 0", w, False)
    n = next(iter(w.degrees()))
    if n == 0:
        nonzero = spec.kind == "hnn"
    else:
        nonzero = _outside_alpha_image(result, idx, spec, label, w, n)
    rhs = f"delta({w})"
    return DeltaProduct(f"{lhs} = {rhs}" + ("" if nonzero else " = 0 (in image of alpha)"), w, nonzero)


def _outside_alpha_image(result: AssemblyResult, idx: int, spec: StageSpec, label: str,
                         w: Element, n: int) -> bool:
    # rebuild the stage's alpha image in degree n from the vertices it saw
    amb = _Ambient(result.leaves)
    run = _TowerRun(result.mode, result.p, result.leaves, max(n, 1))
    for s in result.specs[:idx - 1]:
        run.run(s)
    comps = [run.find(v) for v in spec.vertices]
    domain = [vec for c in comps for vec in c.vectors.get(n, [])]
    mat = _alpha_matrix(spec, amb, domain, n, result.p)
    target = [0] * spec.edge.dim(n)
    off = spec.edge.offset(label, n)
    for i, c in enumerate(w.alg.coordinates(w, n)):
        target[off + i] = c
    before = rank(mat)
    cols = [mat.column(j) for j in range(mat.cols)] + [target]
    after = rank(FpMatrix.from_columns(result.p, cols, mat.rows))
    return after > before
