"""Independent dimension oracle: truncated Buchberger completion.

Works on commutative presentations (p = 2, or odd p with only even-degree
generators).  Monomials are ordered by weighted degree, then
lexicographically with the first generator largest.  Only S-polynomials of
weighted degree <= the bound are formed, which is exact for counting
standard monomials up to that bound because every relation is homogeneous.
"""

from __future__ import annotations

from itertools import combinations

from .gradedalg import AlgebraPresentation

Poly = dict  # exponent tuple -> nonzero residue


class OracleUnsupported(ValueError):
    pass


class RewritingOracle:
    def __init__(self, alg: AlgebraPresentation, bound: int):
        if alg.p != 2 and any(g.degree % 2 for g in alg.generators):
            raise OracleUnsupported("odd-degree generators at odd p need signs")
        self.alg = alg
        self.p = alg.p
        self.bound = bound
        self.weights = alg.gen_degrees
        gens = [self._monic({m: c % self.p for m, c in r.terms.items() if c % self.p})
                for r in alg.effective_relations]
        self.basis = self._complete([g for g in gens if g])

    def _key(self, m):
        return (sum(e * w for e, w in zip(m, self.weights)), m)

    def _lead(self, f: Poly):
        return max(f, key=self._key)

    def _deg(self, m) -> int:
        return sum(e * w for e, w in zip(m, self.weights))

    def _monic(self, f: Poly) -> Poly:
        if not f:
            return f
        inv = pow(f[self._lead(f)], -1, self.p)
        return {m: c * inv % self.p for m, c in f.items()}

    @staticmethod
    def _divides(a, b) -> bool:
        return all(x <= y for x, y in zip(a, b))

    def _reduce(self, f: Poly, basis: list[Poly]) -> Poly:
        f = dict(f)
        out: Poly = {}
        leads = [(self._lead(g), g) for g in basis]
        p = self.p
        while f:
            m = self._lead(f)
            c = f[m]
            for lm, g in leads:
                if self._divides(lm, m):
                    shift = tuple(x - y for x, y in zip(m, lm))
                    for gm, gc in g.items():
                        t = tuple(a + b for a, b in zip(gm, shift))
                        v = (f.get(t, 0) - c * gc) % p
                        if v:
                            f[t] = v
                        else:
                            f.pop(t, None)
                    break
            else:
                out[m] = c
                del f[m]
        return out

    def _spoly(self, f: Poly, g: Poly) -> Poly | None:
        lf, lg = self._lead(f), self._lead(g)
        lcm = tuple(max(a, b) for a, b in zip(lf, lg))
        if self._deg(lcm) > self.bound:
            return None
        if all(min(a, b) == 0 for a, b in zip(lf, lg)):
            return None  # coprime leads reduce to zero
        sf = tuple(a - b for a, b in zip(lcm, lf))
        sg = tuple(a - b for a, b in zip(lcm, lg))
        out: Poly = {}
        for m, c in f.items():
            t = tuple(a + b for a, b in zip(m, sf))
            out[t] = (out.get(t, 0) + c) % self.p
        for m, c in g.items():
            t = tuple(a + b for a, b in zip(m, sg))
            out[t] = (out.get(t, 0) - c) % self.p
        return {m: c for m, c in out.items() if c}

    def _complete(self, gens: list[Poly]) -> list[Poly]:
        basis: list[Poly] = []
        for g in gens:
            r = self._monic(self._reduce(g, basis))
            if r:
                basis.append(r)
        pairs = list(combinations(range(len(basis)), 2))
        while pairs:
            i, j = pairs.pop()
            s = self._spoly(basis[i], basis[j])
            if not s:
                continue
            r = self._monic(self._reduce(s, basis))
            if r:
                basis.append(r)
                k = len(basis) - 1
                pairs.extend((a, k) for a in range(k))
        return basis

    @property
    def leading_monomials(self) -> list[tuple[int, ...]]:
        return [self._lead(g) for g in self.basis]

    def standard_count(self, n: int) -> int:
        if n > self.bound:
            raise ValueError("degree above the completion bound")
        leads = self.leading_monomials
        count = 0
        for m in self._monomials(n):
            if not any(self._divides(l, m) for l in leads):
                count += 1
        return count

    def _monomials(self, n: int):
        w = self.weights
        k = len(w)

        def rec(i, remaining, prefix):
            if i == k:
                if remaining == 0:
                    yield tuple(prefix)
                return
            for e in range(remaining // w[i] + 1):
                prefix.append(e)
                yield from rec(i + 1, remaining - e * w[i], prefix)
                prefix.pop()

        yield from rec(0, n, [])

    def poincare_series(self, up_to: int) -> list[int]:
        return [self.standard_count(n) for n in range(up_to + 1)]


def oracle_dims(alg: AlgebraPresentation, up_to: int) -> list[int]:
    return RewritingOracle(alg, up_to).poincare_series(up_to)
