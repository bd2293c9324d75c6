"""Bockstein pages, Universal Coefficient bookkeeping and claim verification.

An integral claim is stored through its order-p part, which is an
F_p-algebra because p kills it.  Classes of higher order and torsion-free
classes live beside it in explicit registries.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .fplinalg import rank
from .gradedalg import AlgebraError, AlgebraPresentation, Element
from .gradedmaps import Derivation, GradedHom


class ClaimError(AlgebraError):
    pass


class InsufficientDegreeRange(ValueError):
    pass


@dataclass
class Check:
    id: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        return f"CHECK {self.id} {'PASS' if self.ok else 'FAIL'} {self.detail}".rstrip()

    def as_dict(self) -> dict:
        return {"id": self.id, "status": "PASS" if self.ok else "FAIL", "detail": self.detail}


class GradedAbelianGroup:
    """Per-degree free rank plus torsion summands ``(prime, exponent) -> multiplicity``."""

    def __init__(self, degrees: dict[int, tuple[int, dict[tuple[int, int], int]]] | None = None):
        self._data: dict[int, tuple[int, dict[tuple[int, int], int]]] = {}
        for n, (free, tors) in (degrees or {}).items():
            self.set(n, free, tors)

    def set(self, n: int, free: int, torsion: dict[tuple[int, int], int] | None = None) -> None:
        tors = {k: v for k, v in (torsion or {}).items() if v}
        if free < 0 or any(v < 0 for v in tors.values()):
            raise ValueError("negative multiplicity")
        self._data[n] = (free, dict(sorted(tors.items())))

    def degrees(self) -> list[int]:
        return sorted(self._data)

    @property
    def top(self) -> int:
        return max(self._data) if self._data else -1

    def free_rank(self, n: int) -> int:
        return self._data.get(n, (0, {}))[0]

    def torsion(self, n: int) -> dict[tuple[int, int], int]:
        return dict(self._data.get(n, (0, {}))[1])

    def torsion_count(self, n: int, p: int) -> int:
        return sum(v for (q, _), v in self.torsion(n).items() if q == p)

    def higher_count(self, n: int, p: int) -> int:
        return sum(v for (q, r), v in self.torsion(n).items() if q == p and r >= 2)

    def describe(self, n: int) -> str:
        parts = []
        free = self.free_rank(n)
        if free:
            parts.append("Z" if free == 1 else f"Z^{free}")
        for (q, r), v in self.torsion(n).items():
            mod = f"Z/{q ** r}"
            parts.append(mod if v == 1 else f"({mod})^{v}")
        return " + ".join(parts) if parts else "0"

    def __eq__(self, other):
        if not isinstance(other, GradedAbelianGroup):
            return NotImplemented
        degs = set(self._data) | set(other._data)
        return all(self.free_rank(n) == other.free_rank(n) and self.torsion(n) == other.torsion(n)
                   for n in degs)

    def __repr__(self):
        body = ", ".join(f"{n}: {self.describe(n)}" for n in self.degrees())
        return f"GradedAbelianGroup({{{body}}})"


@dataclass
class Correspondence:
    rep: Element | None
    witness: Element | None = None


@dataclass
class HigherClass:
    name: str
    degree: int
    order: int
    rep: Element | None = None


@dataclass
class ExceptionalProduct:
    factors: tuple[str, ...]
    result: str  # e.g. "2 t3" or "u3"; formal token, outside the order-p model

    @property
    def multiplier_and_class(self) -> tuple[int, str]:
        bits = self.result.split()
        if len(bits) == 2:
            return int(bits[0]), bits[1]
        return 1, bits[0]


@dataclass
class IntegralRingClaim:
    id: str
    p: int
    subring: AlgebraPresentation
    correspondence: dict[str, Correspondence] = field(default_factory=dict)
    higher: list[HigherClass] = field(default_factory=list)
    free: list[tuple[str, int]] = field(default_factory=list)
    products: list[ExceptionalProduct] = field(default_factory=list)
    modp: AlgebraPresentation | None = None
    sq1: Derivation | None = None
    typos: list[str] = field(default_factory=list)
    derived_relations: frozenset[int] = frozenset()  # 1-based indices found by computation

    def __post_init__(self):
        if self.subring.p != self.p:
            raise ClaimError(f"{self.id}: order-p subring is not over F_{self.p}")
        for name, corr in self.correspondence.items():
            if name not in self.subring.index:
                raise ClaimError(f"{self.id}: correspondence for unknown generator {name}")
            deg = self.subring.generators[self.subring.index[name]].degree
            if corr.rep is not None and not corr.rep.is_zero() and corr.rep.degrees() != {deg}:
                raise ClaimError(f"{self.id}: correspondence degree mismatch for {name}")
            if corr.witness is not None and not corr.witness.is_zero() \
                    and corr.witness.degrees() != {deg - 1}:
                raise ClaimError(f"{self.id}: correspondence degree mismatch for witness of {name}")
        names = set(self.subring.index) | {h.name for h in self.higher} | {f for f, _ in self.free}
        for prod in self.products:
            for f in prod.factors:
                if f not in names:
                    raise ClaimError(f"{self.id}: product mentions unknown class {f}")

    def free_rank(self, n: int) -> int:
        return int(n == 0) + sum(1 for _, d in self.free if d == n)

    def higher_count(self, n: int) -> int:
        return sum(1 for h in self.higher if h.degree == n)

    def graded_group(self, up_to: int) -> GradedAbelianGroup:
        g = GradedAbelianGroup()
        for n in range(up_to + 1):
            tors: Counter = Counter()
            if n > 0:
                tors[(self.p, 1)] += self.subring.dim(n)
            for h in self.higher:
                if h.degree == n:
                    r = 0
                    while self.p ** r < h.order:
                        r += 1
                    tors[(self.p, r)] += 1
            g.set(n, self.free_rank(n), dict(tors))
        return g

    def dims(self, up_to: int) -> list[int]:
        """Number of cyclic summands per degree (free plus torsion)."""
        g = self.graded_group(up_to)
        return [g.free_rank(n) + g.torsion_count(n, self.p) for n in range(up_to + 1)]

    def representative(self, name: str) -> Element:
        corr = self.correspondence[name]
        if corr.rep is not None:
            return corr.rep
        if corr.witness is None or self.sq1 is None:
            raise ClaimError(f"{self.id}: no representative for {name}")
        return self.sq1.apply(corr.witness)

    def reduction(self) -> GradedHom:
        if self.modp is None:
            raise ClaimError(f"{self.id}: no mod-p algebra attached")
        images = {g.name: self.representative(g.name) for g in self.subring.generators
                  if g.name in self.correspondence}
        return GradedHom(self.subring, self.modp, images, f"red.{self.id}")


def e1_page(a: AlgebraPresentation, up_to: int) -> list[int]:
    return a.poincare_series(up_to)


def e2_page(a: AlgebraPresentation, d: Derivation, up_to: int) -> list[int]:
    """dim ker(d: A^n -> A^n+1) - dim im(d: A^n-1 -> A^n) for n <= up_to."""
    if d.alg is not a:
        raise ClaimError("derivation is defined on a different algebra")
    ranks = [rank(d.matrix(n)) for n in range(up_to + 1)]
    out = []
    for n in range(up_to + 1):
        kern = a.dim(n) - ranks[n]
        img = ranks[n - 1] if n > 0 else 0
        out.append(kern - img)
    return out


def higher_orders_from_e2(e2: Sequence[int], free: Sequence[int]) -> list[int]:
    """Order >= p^2 summand counts h(n) solving E2(n) = free(n) + h(n) + h(n+1).

    h(0) = 0; the result has length len(e2) + 1 and may contain negative
    entries when the inputs are inconsistent.
    """
    h = [0]
    for n in range(len(e2)):
        h.append(e2[n] - free[n] - h[n])
    return h


@dataclass
class UCTReport:
    p: int
    residuals: list[int]
    checks: list[Check]

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)


def uct_check(claim: GradedAbelianGroup, modp_dims: Sequence[int], p: int,
              label: str = "uct") -> UCTReport:
    """dim H^n(F_p) = free(n) + t_p(n) + t_p(n+1) for every listed degree."""
    top = len(modp_dims) - 1
    if claim.top < top + 1:
        raise InsufficientDegreeRange(
            f"insufficient degree range: claim known through {claim.top}, need {top + 1}")
    residuals = []
    checks = []
    for n in range(top + 1):
        expected = claim.free_rank(n) + claim.torsion_count(n, p) + claim.torsion_count(n + 1, p)
        residuals.append(modp_dims[n] - expected)
    bad = [n for n, r in enumerate(residuals) if r]
    detail = f"degrees 0..{top} mod-{p} dims {' '.join(map(str, modp_dims))}"
    if bad:
        detail = f"residual nonzero in degrees {bad}: {[residuals[n] for n in bad]}"
    checks.append(Check(label, not bad, detail))
    return UCTReport(p, residuals, checks)


def verify_claim(claim: IntegralRingClaim, a: AlgebraPresentation | None = None,
                 d: Derivation | None = None, up_to: int = 20,
                 modp_dims: Sequence[int] | None = None) -> list[Check]:
    """Run every applicable check on a claim; one Check per item."""
    a = a or claim.modp
    d = d or claim.sq1
    cid = claim.id
    checks: list[Check] = []
    typo_gens = {t.split()[0].rstrip(":") for t in claim.typos if t.split()}

    if a is not None and claim.correspondence:
        if a.p != claim.p:
            raise ClaimError(f"{cid}: claim prime differs from algebra prime")
        for name, corr in claim.correspondence.items():
            if corr.witness is None or d is None:
                continue
            value = d.apply(corr.witness)
            note = " [source typo noted; derived value used]" if name in typo_gens else ""
            if corr.rep is None:
                checks.append(Check(f"{cid}.witness.{name}", not value.is_zero(),
                                    f"{name} <-> Sq1({corr.witness}) = {value}{note}"))
            else:
                same = a.equal_mod_relations(corr.rep, value)
                checks.append(Check(f"{cid}.witness.{name}", same,
                                    f"{name} <-> {corr.rep} = Sq1({corr.witness}){note}"
                                    + ("" if same else f"; Sq1 gives {value}")))
        if d is not None:
            for name in claim.correspondence:
                rep = claim.representative(name)
                img = d.apply(rep)
                checks.append(Check(f"{cid}.cycle.{name}", img.is_zero(),
                                    f"Sq1({rep}) = {img}"))
            for h in claim.higher:
                if h.rep is None:
                    continue
                img = d.apply(h.rep)
                checks.append(Check(f"{cid}.cycle.{h.name}", img.is_zero(),
                                    f"order-{h.order} class {h.name} <-> {h.rep}; Sq1 = {img}"))

        red = claim.reduction()
        for i, r in enumerate(claim.subring.relations, 1):
            img = red.apply(r)
            tag = " [derived]" if i in claim.derived_relations else ""
            checks.append(Check(f"{cid}.relation.{i}", img.is_zero(),
                                f"{r} = 0{tag}" + ("" if img.is_zero() else f"; reduces to {img}")))
        bad = []
        for n in range(1, up_to + 1):
            mat = red.matrix(n)
            if rank(mat) != mat.cols:
                bad.append(n)
        checks.append(Check(f"{cid}.reduction-injective", not bad,
                            f"degrees 1..{up_to}" + (f"; kernel in degrees {bad}" if bad else "")))

    dims = list(modp_dims) if modp_dims is not None else (
        a.poincare_series(up_to) if a is not None else None)
    if dims is not None:
        dims = dims[:up_to + 1]
        group = claim.graded_group(len(dims))
        checks.extend(uct_check(group, dims, claim.p, f"{cid}.uct").checks)

    if a is not None and d is not None:
        e2 = e2_page(a, d, up_to)
        free = [claim.free_rank(n) for n in range(up_to + 2)]
        hs = [claim.higher_count(n) for n in range(up_to + 2)]
        expected = [free[n] + hs[n] + hs[n + 1] for n in range(up_to + 1)]
        bad = [n for n in range(up_to + 1) if e2[n] != expected[n]]
        checks.append(Check(f"{cid}.e2", not bad,
                            f"E2 {' '.join(map(str, e2))}" + (f"; accounting off in degrees {bad}" if bad else "")))
    return checks
