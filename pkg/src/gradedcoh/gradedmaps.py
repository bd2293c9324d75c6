"""Algebra homomorphisms and degree +1 derivations given on generators."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .fplinalg import FpMatrix, kernel_basis, rank
from .gradedalg import AlgebraError, AlgebraPresentation, Element, Monomial


class MapError(AlgebraError):
    pass


class DegreeMismatch(MapError):
    pass


class RelationNotPreserved(MapError):
    pass


class DerivationIllDefined(MapError):
    pass


@dataclass
class MapReport:
    name: str
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _coerce_images(source: AlgebraPresentation, target: AlgebraPresentation,
                   images: Mapping[str, Element | str]) -> dict[str, Element]:
    out = {}
    for name, img in images.items():
        if name not in source.index:
            raise MapError(f"unknown generator {name!r} in {source.name}")
        if isinstance(img, str):
            img = target.element(img)
        if img.alg is not target:
            raise MapError(f"image of {name} does not live in {target.name}")
        out[name] = img
    for g in source.generators:
        out.setdefault(g.name, target.zero())
    return out


class GradedHom:
    """Degree-preserving algebra map determined by generator images.

    Generators missing from ``images`` are sent to zero.
    """

    def __init__(self, source: AlgebraPresentation, target: AlgebraPresentation,
                 images: Mapping[str, Element | str], name: str = "hom"):
        if source.p != target.p:
            raise MapError(f"{name}: source and target over different primes")
        self.source = source
        self.target = target
        self.name = name
        self.images = _coerce_images(source, target, images)
        self._powers: dict[tuple[int, int], Element] = {}
        self._matrices: dict[int, FpMatrix] = {}

    def check(self) -> MapReport:
        rep = MapReport(self.name)
        for g in self.source.generators:
            img = self.images[g.name]
            if not img.is_zero():
                degs = img.degrees()
                if degs != {g.degree}:
                    rep.violations.append(
                        f"degree mismatch: {g.name} (deg {g.degree}) -> {img} (deg {sorted(degs)})")
        if rep.violations:
            return rep
        for r in self.source.effective_relations:
            img = self.target.normal_form(self._apply_raw(r))
            if not img.is_zero():
                rep.violations.append(f"relation not preserved: {r} -> {img}")
        return rep

    def _gen_power(self, i: int, e: int) -> Element:
        key = (i, e)
        cached = self._powers.get(key)
        if cached is None:
            g = self.source.generators[i].name
            cached = self.target.normal_form(self.images[g] ** e)
            self._powers[key] = cached
        return cached

    def apply_monomial(self, m: Monomial) -> Element:
        out = self.target.one()
        for i, e in enumerate(m):
            if e:
                out = self.target.normal_form(out * self._gen_power(i, e))
                if out.is_zero():
                    break
        return out

    def _apply_raw(self, e: Element) -> Element:
        out = self.target.zero()
        for m, c in e.terms.items():
            out = out + self.apply_monomial(m) * c
        return out

    def apply(self, e: Element) -> Element:
        if e.alg is not self.source:
            raise MapError(f"{self.name}: element not in source algebra")
        return self.target.normal_form(self._apply_raw(e))

    __call__ = apply

    def matrix(self, n: int) -> FpMatrix:
        """Matrix of the map in degree n, standard monomials in both bases."""
        cached = self._matrices.get(n)
        if cached is not None:
            return cached
        src = self.source.degree_basis(n)
        tgt = self.target.degree_basis(n)
        cols = []
        for m in src.standard_monomials:
            img = self.apply_monomial(m)
            cols.append(tgt.coordinates(img.terms))
        mat = FpMatrix.from_columns(self.source.p, cols, tgt.dim)
        self._matrices[n] = mat
        return mat

    def kernel_image_dims(self, up_to: int) -> list[tuple[int, int]]:
        out = []
        for n in range(up_to + 1):
            mat = self.matrix(n)
            r = rank(mat)
            out.append((mat.cols - r, r))
        return out

    def kernel(self, n: int) -> list[Element]:
        return [self.source.from_coordinates(n, v) for v in kernel_basis(self.matrix(n))]

    def compose(self, other: GradedHom, name: str | None = None) -> GradedHom:
        """``self`` after ``other``."""
        if other.target is not self.source:
            raise MapError("composition across mismatched algebras")
        images = {g: self.apply(img) for g, img in other.images.items()}
        return GradedHom(other.source, self.target, images, name or f"{self.name}o{other.name}")


def hom_matrix(h: GradedHom, n: int) -> FpMatrix:
    return h.matrix(n)


def check_hom(h: GradedHom) -> MapReport:
    return h.check()


def kernel_image_dims(h: GradedHom, up_to: int) -> list[tuple[int, int]]:
    return h.kernel_image_dims(up_to)


def identity_hom(alg: AlgebraPresentation) -> GradedHom:
    return GradedHom(alg, alg, {g.name: alg.gen(g.name) for g in alg.generators}, f"id.{alg.name}")


class Derivation:
    """Degree +1 derivation; Leibniz rule with the Koszul sign at odd p."""

    def __init__(self, alg: AlgebraPresentation, images: Mapping[str, Element | str],
                 name: str = "d"):
        self.alg = alg
        self.name = name
        self.images = _coerce_images(alg, alg, images)
        self._cache: dict[Monomial, Element] = {}
        self._matrices: dict[int, FpMatrix] = {}

    def check(self) -> MapReport:
        rep = MapReport(self.name)
        for g in self.alg.generators:
            img = self.images[g.name]
            if not img.is_zero() and img.degrees() != {g.degree + 1}:
                rep.violations.append(f"degree mismatch: d({g.name}) = {img}")
        if rep.violations:
            return rep
        for r in self.alg.effective_relations:
            img = self.alg.normal_form(self._apply_raw(r))
            if not img.is_zero():
                rep.violations.append(f"derivation ill-defined on relation {r}: {img}")
        return rep

    def apply_monomial(self, m: Monomial) -> Element:
        cached = self._cache.get(m)
        if cached is not None:
            return cached
        alg = self.alg
        # split off the first generator power: D(g^e * rest)
        i = next((k for k, e in enumerate(m) if e), None)
        if i is None:
            result = alg.zero()
        else:
            e = m[i]
            g = alg.generators[i]
            head = [0] * len(m)
            head[i] = e
            rest = list(m)
            rest[i] = 0
            rest_el = alg.monomial(rest)
            head_el = alg.monomial(head)
            # D(g^e) = e g^(e-1) D(g); odd generators at odd p have e <= 1
            dg = alg.monomial([e - 1 if k == i else 0 for k in range(len(m))]) * self.images[g.name] * e
            sign = -1 if (alg.p != 2 and (g.degree * e) % 2) else 1
            raw = dg * rest_el + head_el * self.apply_monomial(tuple(rest)) * sign
            result = alg.normal_form(raw)
        self._cache[m] = result
        return result

    def _apply_raw(self, e: Element) -> Element:
        out = self.alg.zero()
        for m, c in e.terms.items():
            out = out + self.apply_monomial(m) * c
        return out

    def apply(self, e: Element) -> Element:
        if e.alg is not self.alg:
            raise MapError(f"{self.name}: element not in algebra")
        return self.alg.normal_form(self._apply_raw(e))

    __call__ = apply

    def matrix(self, n: int) -> FpMatrix:
        """Matrix from degree n to degree n + 1."""
        cached = self._matrices.get(n)
        if cached is not None:
            return cached
        src = self.alg.degree_basis(n)
        tgt = self.alg.degree_basis(n + 1)
        cols = [tgt.coordinates(self.apply_monomial(m).terms) for m in src.standard_monomials]
        mat = FpMatrix.from_columns(self.alg.p, cols, tgt.dim)
        self._matrices[n] = mat
        return mat

    def square_vanishes(self, up_to: int) -> list[int]:
        """Degrees n <= up_to where d o d : A^n -> A^(n+2) is nonzero."""
        bad = []
        for n in range(up_to + 1):
            if not (self.matrix(n + 1) @ self.matrix(n)).is_zero():
                bad.append(n)
        return bad


def extend_derivation(d: Derivation, e: Element) -> Element:
    return d.apply(e)
