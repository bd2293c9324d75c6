from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from gradedcoh.gradedmaps import (Derivation, GradedHom, MapError, check_hom, extend_derivation, hom_matrix,
                                  identity_hom, kernel_image_dims)


def test_restriction_a4_to_z2_is_valid(cat):
    assert check_hom(cat.hom("res.A4.Z2.mod2")).ok


def test_identity_is_valid_on_every_ring(cat):
    for rid in cat.ids("algebra"):
        assert check_hom(identity_hom(cat.algebra(rid))).ok, rid


def test_map_killing_v3_and_w3_is_invalid(cat):
    h = GradedHom(cat.algebra("A4.mod2"), cat.algebra("Z2.mod2"), {"u2": "x1^2", "v3": "0", "w3": "0"})
    rep = check_hom(h)
    assert not rep.ok
    assert "relation not preserved" in rep.violations[0]


def test_map_with_equal_cubes_is_valid(cat):
    # u2^3 + v3^2 + w3^2 + v3 w3 goes to 4 x1^6, which is 0 mod 2
    h = GradedHom(cat.algebra("A4.mod2"), cat.algebra("Z2.mod2"), {"u2": "x1^2", "v3": "x1^3", "w3": "x1^3"})
    assert check_hom(h).ok


def test_degree_mismatch_reported(cat):
    h = GradedHom(cat.algebra("A4.mod2"), cat.algebra("Z2.mod2"), {"u2": "x1^3"})
    rep = check_hom(h)
    assert not rep.ok and "degree mismatch" in rep.violations[0]


def test_prime_mismatch_rejected(cat):
    with pytest.raises(MapError):
        GradedHom(cat.algebra("A4.mod2"), cat.algebra("Z3.mod3"), {})


def test_apply_restriction(cat):
    h = cat.hom("res.A4.Z2.mod2")
    a = h.source
    assert h(a.element("u2*w3")) == h.target.element("x1^5")
    assert h(a.one()) == h.target.one()
    assert h(a.element("v3*w3")).is_zero()


def test_zero_map_has_zero_matrix(cat):
    h = GradedHom(cat.algebra("D2.mod2"), cat.algebra("Z2.mod2"), {})
    assert all(hom_matrix(h, n).is_zero() for n in range(1, 6))


def test_restriction_d2_to_z2_degree_two(cat):
    h = cat.hom("res.D2.a.int2")
    assert kernel_image_dims(h, 2)[2] == (1, 1)


def test_identity_kernel_and_image(cat):
    a = cat.algebra("A4D2.mod2")
    for n, (k, i) in enumerate(kernel_image_dims(identity_hom(a), 10)):
        assert k == 0 and i == a.dim(n)


def test_restriction_a4_degree_three(cat):
    h = cat.hom("res.A4.Z2.mod2")
    assert kernel_image_dims(h, 3)[3] == (1, 1)
    assert [str(v) for v in h.kernel(3)] == ["v3"]


def test_sq1_values(cat):
    d2 = cat.derivation("sq1.D2.mod2")
    a = d2.alg
    assert extend_derivation(d2, a.element("x1*y1")) == a.element("x1^2*y1 + x1*y1^2")
    assert extend_derivation(d2, a.one()).is_zero()
    d = cat.derivation("sq1.A4.mod2")
    b = d.alg
    assert b.equal_mod_relations(d(b.element("u2*w3")), b.element("u2^3 + v3*w3"))


def test_ill_defined_derivation_detected(cat):
    a = cat.algebra("A4.mod2")
    # u2 -> v3 alone sends the A4 relation to u2^2 v3, which is nonzero
    wrong = Derivation(a, {"u2": "v3", "v3": "0", "w3": "0"})
    rep = wrong.check()
    assert not rep.ok and "ill-defined" in rep.violations[0]


def test_every_catalog_hom_is_valid(cat):
    for rid in cat.ids("hom"):
        assert check_hom(cat.hom(rid)).ok, rid


def test_every_catalog_derivation_squares_to_zero(cat):
    for rid in cat.ids("derivation"):
        d = cat.derivation(rid)
        assert d.check().ok, rid
        assert d.square_vanishes(24) == [], rid


def test_rank_nullity_for_catalog_homs(cat):
    for rid in cat.ids("hom"):
        h = cat.hom(rid)
        for n, (k, i) in enumerate(kernel_image_dims(h, 12)):
            assert k + i == h.source.dim(n), (rid, n)


def _random_element(data, alg, max_degree):
    n = data.draw(st.integers(0, max_degree))
    basis = alg.basis_elements(n)
    coeffs = data.draw(st.lists(st.integers(0, alg.p - 1), min_size=len(basis), max_size=len(basis)))
    out = alg.zero()
    for b, c in zip(basis, coeffs):
        out = out + b * c
    return out


DERIVS = ["sq1.A4.mod2", "sq1.D2D2.mod2", "sq1.A4D2.mod2", "sq1.A4A4.mod2", "sq1.Gamma2.mod2", "sq1.Gamma6.mod2"]


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(DERIVS), st.data())
def test_leibniz_rule(cat, name, data):
    d = cat.derivation(name)
    a = d.alg
    x = _random_element(data, a, 6)
    y = _random_element(data, a, 6)
    lhs = d(a.multiply(x, y))
    rhs = a.normal_form(d(x) * y + x * d(y))
    assert lhs == rhs


COMPOSABLE = [("id.Z2.int2", "res.A4.Z2.int2"), ("id.Z3.mod3", "res.S3.Z3.mod3"),
              ("id.Z3.mod3", "res.A4.Z3.mod3"), ("id.Z3.int3", "res.A4.Z3.int3")]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(COMPOSABLE), st.data())
def test_composition_matches_sequential_application(cat, pair, data):
    g, f = cat.hom(pair[0]), cat.hom(pair[1])
    gf = g.compose(f)
    x = _random_element(data, f.source, 10)
    assert gf(x) == g(f(x))
