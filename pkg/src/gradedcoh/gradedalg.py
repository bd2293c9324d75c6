"""Finitely presented graded-commutative algebras over F_p.

Quotients are computed one degree at a time: every relation is multiplied
by every monomial of complementary degree and the span of those products is
row reduced.  Monomials are ordered graded-lexicographically by generator
declaration order and pivots eliminate the largest monomial, so the
surviving standard monomials are the small ones.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .fplinalg import Echelon

Monomial = tuple[int, ...]

DEFAULT_DEGREE_CAP = 24


class AlgebraError(ValueError):
    pass


class UnknownGenerator(AlgebraError):
    pass


class InhomogeneousRelation(AlgebraError):
    pass


@dataclass(frozen=True)
class GeneratorDecl:
    name: str
    degree: int
    exterior: bool = False

    def __post_init__(self):
        if self.degree < 1:
            raise AlgebraError(f"generator {self.name} must have positive degree")


class Element:
    """A finite F_p-linear combination of monomials in the free algebra."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: AlgebraPresentation, terms: dict[Monomial, int] | None = None):
        self.alg = alg
        p = alg.p
        self.terms = {m: c % p for m, c in (terms or {}).items() if c % p}

    # -- structure -------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {self.alg.monomial_degree(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int:
        degs = self.degrees()
        if len(degs) != 1:
            raise InhomogeneousRelation(f"element {self} is not homogeneous")
        return degs.pop()

    def homogeneous_parts(self) -> dict[int, Element]:
        parts: dict[int, dict[Monomial, int]] = {}
        for m, c in self.terms.items():
            parts.setdefault(self.alg.monomial_degree(m), {})[m] = c
        return {d: Element(self.alg, t) for d, t in sorted(parts.items())}

    # -- arithmetic in the free graded-commutative algebra ---------------
    def _coerce(self, other) -> Element:
        if isinstance(other, Element):
            if other.alg is not self.alg:
                raise AlgebraError("elements belong to different algebras")
            return other
        if isinstance(other, int):
            return self.alg.scalar(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Element(self.alg, out)

    __radd__ = __add__

    def __neg__(self):
        return Element(self.alg, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return Element(self.alg, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        alg = self.alg
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                prod = alg.monomial_product(m1, m2)
                if prod is None:
                    continue
                m, sign = prod
                out[m] = out.get(m, 0) + sign * c1 * c2
        return Element(alg, out)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise AlgebraError("negative power")
        result = self.alg.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.alg.scalar(other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.alg is other.alg and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"Element({self})"

    def __str__(self):
        return self.alg.format(self)


class DegreeBasis:
    """Standard monomials of one degree together with the reducer for it."""

    def __init__(self, degree: int, monomials: list[Monomial], echelon: Echelon):
        self.degree = degree
        # column j <-> monomials[j]; monomials ascend, so pivots take the largest
        self.monomials = monomials
        self.column = {m: j for j, m in enumerate(monomials)}
        self.echelon = echelon
        pivots = set(echelon.pivots)
        self.standard_monomials = [m for j, m in reversed(list(enumerate(monomials)))
                                   if j not in pivots]
        self.position = {m: i for i, m in enumerate(self.standard_monomials)}

    @property
    def dim(self) -> int:
        return len(self.standard_monomials)

    def reduce_terms(self, terms: dict[Monomial, int]) -> dict[Monomial, int]:
        """Normal form of a homogeneous combination of degree-n monomials."""
        ech = self.echelon
        coords = {}
        for m, c in terms.items():
            j = self.column.get(m)
            if j is not None:  # monomials outside the list are already zero
                coords[j] = coords.get(j, 0) + c
        v = ech.reduce(ech.vector(coords))
        return {self.monomials[j]: c for j, c in ech.coords(v).items()}

    def coordinates(self, terms: dict[Monomial, int]) -> list[int]:
        reduced = self.reduce_terms(terms)
        vec = [0] * self.dim
        for m, c in reduced.items():
            vec[self.position[m]] = c
        return vec


class AlgebraPresentation:
    """Generators with degrees and homogeneous relations over F_p."""

    def __init__(self, p: int, generators: Sequence[GeneratorDecl],
                 relations: Iterable = (), name: str | None = None,
                 degree_cap: int = DEFAULT_DEGREE_CAP):
        self.p = p
        self.name = name or "algebra"
        self.generators = tuple(generators)
        names = [g.name for g in self.generators]
        if len(set(names)) != len(names):
            raise AlgebraError(f"duplicate generator names in {self.name}")
        self.index = {g.name: i for i, g in enumerate(self.generators)}
        self.gen_degrees = tuple(g.degree for g in self.generators)
        # odd-degree generators at odd p square to zero by graded commutativity
        self.capped = tuple(p != 2 and g.degree % 2 == 1 for g in self.generators)
        self._odd = tuple(p != 2 and g.degree % 2 == 1 for g in self.generators)
        self.degree_cap = degree_cap
        self.relations: list[Element] = []
        for r in relations:
            if isinstance(r, str):
                from .poly import parse_poly
                r = parse_poly(self, r)
            if r.alg is not self:
                r = self.transfer(r)
            self.relations.append(r)
        for r in self.relations:
            if not r.is_homogeneous():
                raise InhomogeneousRelation(f"inhomogeneous relation {r} in {self.name}")
        self._lock = threading.Lock()
        self._bases: dict[int, DegreeBasis] = {}
        self._surviving: dict[int, list[Monomial]] = {}
        self._split_relations()

    # -- construction helpers -------------------------------------------
    def transfer(self, e: Element) -> Element:
        """Re-home an element built over an algebra with identical generators."""
        if tuple(g.name for g in e.alg.generators) != tuple(g.name for g in self.generators):
            raise AlgebraError("generator lists differ")
        return Element(self, e.terms)

    @property
    def effective_relations(self) -> list[Element]:
        """Declared relations plus g^2 for exterior-flagged generators."""
        extra = []
        for i, g in enumerate(self.generators):
            if g.exterior and not self.capped[i]:
                extra.append(self.gen(g.name) ** 2)
        return list(self.relations) + extra

    def _split_relations(self):
        killed = []
        poly = []
        for r in self.effective_relations:
            if r.is_zero():
                continue
            if len(r.terms) == 1:
                killed.append(next(iter(r.terms)))
            else:
                poly.append(r)
        self._killed = killed
        self._poly_relations = poly

    def zero(self) -> Element:
        return Element(self, {})

    def one(self) -> Element:
        return Element(self, {(0,) * len(self.generators): 1})

    def scalar(self, c: int) -> Element:
        return Element(self, {(0,) * len(self.generators): c})

    def gen(self, name: str) -> Element:
        try:
            i = self.index[name]
        except KeyError:
            raise UnknownGenerator(f"unknown generator {name!r} in {self.name}") from None
        exps = [0] * len(self.generators)
        exps[i] = 1
        return Element(self, {tuple(exps): 1})

    def monomial(self, exps: Sequence[int]) -> Element:
        return Element(self, {tuple(exps): 1})

    def element(self, text: str) -> Element:
        from .poly import parse_poly
        return parse_poly(self, text)

    # -- monomial arithmetic ----------------------------------------------
    def monomial_degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self.gen_degrees))

    def monomial_product(self, a: Monomial, b: Monomial) -> tuple[Monomial, int] | None:
        exps = tuple(x + y for x, y in zip(a, b))
        for i, e in enumerate(exps):
            if e > 1 and self.capped[i]:
                return None
        sign = 1
        if self.p != 2:
            # move each odd factor of b leftward past the odd factors of a with larger index
            odd = self._odd
            acc = 0
            swaps = 0
            for i in range(len(a) - 1, -1, -1):
                if odd[i]:
                    swaps += b[i] * acc
                    acc += a[i]
            if swaps % 2:
                sign = -1
        return exps, sign

    def divides(self, small: Monomial, big: Monomial) -> bool:
        return all(x <= y for x, y in zip(small, big))

    def is_killed(self, m: Monomial) -> bool:
        return any(self.divides(k, m) for k in self._killed)

    def monomials_of_degree(self, n: int) -> list[Monomial]:
        """All monomials of degree n in the free algebra, ascending grlex."""
        return self._enumerate(n, prune=False)

    def surviving_monomials(self, n: int) -> list[Monomial]:
        """Degree-n monomials not divisible by a killed monomial (cached)."""
        cached = self._surviving.get(n)
        if cached is None:
            cached = self._enumerate(n, prune=True)
            self._surviving[n] = cached
        return cached

    def _enumerate(self, n: int, prune: bool) -> list[Monomial]:
        gens = self.gen_degrees
        k = len(gens)
        out: list[Monomial] = []
        # killed monomials grouped by their last nonzero index, checked once that index is fixed
        by_last: list[list[Monomial]] = [[] for _ in range(k)]
        if prune:
            for km in self._killed:
                last = max(i for i, e in enumerate(km) if e)
                by_last[last].append(km)

        def rec(i: int, remaining: int, prefix: list[int]):
            if i == k:
                if remaining == 0:
                    out.append(tuple(prefix))
                return
            d = gens[i]
            top = remaining // d
            if self.capped[i]:
                top = min(top, 1)
            if i == k - 1:
                if remaining % d:
                    return
                choices = [remaining // d] if remaining // d <= top else []
            else:
                choices = range(top + 1)
            for e in choices:
                prefix.append(e)
                if not (prune and any(all(x <= y for x, y in zip(km, prefix)) for km in by_last[i])):
                    rec(i + 1, remaining - e * d, prefix)
                prefix.pop()

        if n < 0 or k == 0:
            return [()] if n == 0 else []
        rec(0, n, [])
        out.sort()
        return out

    # -- quotient structure --------------------------------------------
    def degree_basis(self, n: int) -> DegreeBasis:
        if n < 0:
            raise AlgebraError("negative degree")
        cached = self._bases.get(n)
        if cached is not None:
            return cached
        with self._lock:
            cached = self._bases.get(n)
            if cached is None:
                cached = self._compute_basis(n)
                self._bases[n] = cached
        return cached

    def _compute_basis(self, n: int) -> DegreeBasis:
        monos = self.surviving_monomials(n)
        column = {m: j for j, m in enumerate(monos)}
        ech = Echelon(self.p)
        for r in self._poly_relations:
            d = r.degree
            if d > n:
                continue
            for m in self.surviving_monomials(n - d):
                coords: dict[int, int] = {}
                for rm, c in r.terms.items():
                    prod = self.monomial_product(m, rm)
                    if prod is None:
                        continue
                    pm, sign = prod
                    j = column.get(pm)
                    if j is None:
                        continue
                    coords[j] = coords.get(j, 0) + sign * c
                v = ech.vector(coords)
                if v:
                    ech.insert(v)
        return DegreeBasis(n, monos, ech)

    def dim(self, n: int) -> int:
        return self.degree_basis(n).dim

    def poincare_series(self, up_to: int) -> list[int]:
        if up_to < 0:
            raise AlgebraError("negative degree")
        return [self.dim(n) for n in range(up_to + 1)]

    def normal_form(self, e: Element) -> Element:
        if e.alg is not self:
            raise AlgebraError("element does not belong to this algebra")
        out: dict[Monomial, int] = {}
        for d, part in e.homogeneous_parts().items():
            out.update(self.degree_basis(d).reduce_terms(part.terms))
        return Element(self, out)

    def multiply(self, e1: Element, e2: Element) -> Element:
        return self.normal_form(e1 * e2)

    def equal_mod_relations(self, e1: Element, e2: Element) -> bool:
        return self.normal_form(e1 - e2).is_zero()

    def coordinates(self, e: Element, n: int) -> list[int]:
        """Coordinates of the degree-n part of e in the standard monomials."""
        part = {m: c for m, c in e.terms.items() if self.monomial_degree(m) == n}
        return self.degree_basis(n).coordinates(part)

    def from_coordinates(self, n: int, vec: Sequence[int]) -> Element:
        basis = self.degree_basis(n).standard_monomials
        return Element(self, {m: c for m, c in zip(basis, vec) if c})

    def basis_elements(self, n: int) -> list[Element]:
        return [self.monomial(m) for m in self.degree_basis(n).standard_monomials]

    # -- printing ---------------------------------------------------------
    def format_monomial(self, m: Monomial) -> str:
        parts = []
        for g, e in zip(self.generators, m):
            if e == 1:
                parts.append(g.name)
            elif e > 1:
                parts.append(f"{g.name}^{e}")
        return "*".join(parts) if parts else "1"

    def format(self, e: Element) -> str:
        if e.is_zero():
            return "0"
        key = lambda m: (self.monomial_degree(m), m)
        pieces = []
        for m in sorted(e.terms, key=key, reverse=True):
            c = e.terms[m]
            mono = self.format_monomial(m)
            if c == 1:
                pieces.append(mono)
            elif mono == "1":
                pieces.append(str(c))
            else:
                pieces.append(f"{c}*{mono}")
        return " + ".join(pieces)

    def __repr__(self):
        gens = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"AlgebraPresentation({self.name}, p={self.p}, [{gens}], {len(self.relations)} relations)"


def free_dims(alg: AlgebraPresentation, up_to: int) -> list[int]:
    """Dimensions of the free graded-commutative algebra on alg's generators."""
    return [len(alg.monomials_of_degree(n)) for n in range(up_to + 1)]


def reduced_sum(parts: Sequence[tuple[str, AlgebraPresentation]], name: str | None = None,
                ) -> tuple[AlgebraPresentation, dict[str, dict[str, str]]]:
    """Sum of connected algebras with units identified and all cross products zero.

    Generator names are kept when unique across the parts and prefixed with
    ``<label>_`` otherwise.  Returns the algebra and, per label, the renaming.
    """
    if not parts:
        raise AlgebraError("empty sum")
    p = parts[0][1].p
    if any(a.p != p for _, a in parts):
        raise AlgebraError("summands over different primes")
    counts: dict[str, int] = {}
    for _, a in parts:
        for g in a.generators:
            counts[g.name] = counts.get(g.name, 0) + 1
    renames: dict[str, dict[str, str]] = {}
    gens: list[GeneratorDecl] = []
    for label, a in parts:
        ren = {}
        for g in a.generators:
            new = g.name if counts[g.name] == 1 else f"{label}_{g.name}"
            ren[g.name] = new
            gens.append(GeneratorDecl(new, g.degree, g.exterior))
        renames[label] = ren
    out = AlgebraPresentation(p, gens, (), name=name or "+".join(l for l, _ in parts))
    rels: list[Element] = []
    for label, a in parts:
        for r in a.relations:
            rels.append(embed_element(r, out, renames[label]))
    offsets = []
    for label, a in parts:
        offsets.append([out.index[renames[label][g.name]] for g in a.generators])
    for i in range(len(parts)):
        for j in range(i + 1, len(parts)):
            for gi in offsets[i]:
                for gj in offsets[j]:
                    exps = [0] * len(gens)
                    exps[gi] += 1
                    exps[gj] += 1
                    rels.append(out.monomial(exps))
    result = AlgebraPresentation(p, gens, rels, name=out.name)
    return result, renames


def embed_element(e: Element, target: AlgebraPresentation, rename: dict[str, str]) -> Element:
    """Carry an element across a generator renaming into ``target``."""
    src = e.alg
    cols = [target.index[rename[g.name]] for g in src.generators]
    terms = {}
    for m, c in e.terms.items():
        exps = [0] * len(target.generators)
        for i, x in enumerate(m):
            exps[cols[i]] += x
        key = tuple(exps)
        terms[key] = terms.get(key, 0) + c
    return Element(target, terms)
