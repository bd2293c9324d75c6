from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from gradedcoh import catalog
from gradedcoh.bockstein import (GradedAbelianGroup, InsufficientDegreeRange, e1_page, e2_page,
                                 higher_orders_from_e2, uct_check, verify_claim)
from gradedcoh.gradedalg import AlgebraPresentation, GeneratorDecl
from gradedcoh.gradedmaps import Derivation

ORDER_P_CLAIMS = ["Z2.claim.int2", "S3.claim.int2", "D2.claim.int2", "A4.claim.int2", "D2D2.claim.int2",
                  "A4D2.claim.int2", "Gamma7.claim.int2", "Gamma1.claim.int2"]
ORDER_FOUR_CLAIMS = ["A4A4.claim.int2", "Gamma2.claim.int2", "Gamma5.claim.int2", "Gamma6.claim.int2",
                     "Gamma10.claim.int2", "Gamma11.claim.int2", "Gamma3.claim.int2"]


def test_e2_of_polynomial_on_degree_one_class():
    a = AlgebraPresentation(2, [GeneratorDecl("x1", 1)])
    d = Derivation(a, {"x1": "x1^2"})
    assert e2_page(a, d, 10) == [1] + [0] * 10


def test_zero_derivation_gives_e1(cat):
    a = cat.algebra("A4A4.mod2")
    assert e2_page(a, Derivation(a, {}), 12) == e1_page(a, 12)


def test_a4a4_e2_accounting(cat):
    claim = cat.claim("A4A4.claim.int2")
    a = cat.algebra("A4A4.mod2")
    e2 = e2_page(a, cat.derivation("sq1.A4A4.mod2"), 12)
    free = [claim.free_rank(n) for n in range(14)]
    h = higher_orders_from_e2(e2, free)
    assert h[3] == 1 and sum(h) == 1
    assert e2[:5] == [1, 0, 1, 1, 0]


def _cyclic_two():
    g = GradedAbelianGroup()
    g.set(0, 1)
    for n in range(1, 12):
        g.set(n, 0, {(2, 1): 1} if n % 2 == 0 else {})
    return g


def test_uct_for_z2():
    rep = uct_check(_cyclic_two(), [1] * 11, 2)
    assert rep.ok and rep.residuals == [0] * 11


def test_uct_detects_wrong_dims():
    rep = uct_check(_cyclic_two(), [1, 1, 2] + [1] * 8, 2)
    assert not rep.ok and rep.residuals[2] == 1


def test_uct_needs_one_extra_degree():
    with pytest.raises(InsufficientDegreeRange):
        uct_check(_cyclic_two(), [1] * 12, 2)


def test_uct_for_d2_degree_two(cat):
    claim = cat.claim("D2.claim.int2")
    g = claim.graded_group(11)
    assert g.free_rank(2) == 0 and g.torsion_count(2, 2) == 2 and g.torsion_count(3, 2) == 1
    assert uct_check(g, cat.algebra("D2.mod2").poincare_series(10), 2).ok


def test_a4a4_degree_three_counts(cat):
    g = cat.claim("A4A4.claim.int2").graded_group(5)
    assert cat.algebra("A4A4.mod2").dim(3) == 3
    assert (g.free_rank(3), g.torsion_count(3, 2), g.torsion_count(4, 2)) == (0, 2, 1)
    assert g.describe(3) == "Z/2 + Z/4"


def test_d2_claim_passes(cat):
    checks = verify_claim(cat.claim("D2.claim.int2"), up_to=20)
    assert all(c.ok for c in checks)
    ids = {c.id for c in checks}
    assert {"D2.claim.int2.relation.1", "D2.claim.int2.uct", "D2.claim.int2.e2"} <= ids
    a = cat.algebra("D2.mod2")
    y3 = a.element("x1^2*y1 + x1*y1^2")
    assert a.multiply(y3, y3) == a.normal_form(a.element("x1^2*y1^2*(x1^2 + y1^2)"))


def test_a4_relation_reduces(cat):
    checks = verify_claim(cat.claim("A4.claim.int2"), up_to=16)
    rel = [c for c in checks if c.id.endswith(".relation.1")]
    assert rel and rel[0].ok and "y3^4" in rel[0].detail


def _claim_with(cat, id, old, new):
    entries = catalog.read_entries()
    text = catalog.format_entry(entries[id]).replace(old, new)
    entries[id] = catalog.parse(text)
    return catalog.Catalog(entries)


def test_corrupted_relation_fails(cat):
    bad = _claim_with(cat, "D2.claim.int2", "rel y3^2 + y2^2*z2 + y2*z2^2", "rel y3^2 + y2^3")
    checks = verify_claim(bad.claim("D2.claim.int2"), up_to=10)
    failed = {c.id for c in checks if not c.ok}
    assert "D2.claim.int2.relation.1" in failed


def test_typo_witness_is_reported_not_failed(cat):
    checks = verify_claim(cat.claim("Gamma2.claim.int2"), up_to=12)
    w = next(c for c in checks if c.id == "Gamma2.claim.int2.witness.y7")
    assert w.ok and "typo" in w.detail


def test_higher_orders_recovered():
    # Z/2 + Z/4 in degree 3 of A4*A4: E2 sees one class in degrees 2 and 3
    assert higher_orders_from_e2([1, 0, 1, 1, 0], [1, 0, 0, 0, 0]) == [0, 0, 0, 1, 0, 0]


def test_e2_never_exceeds_e1(cat):
    for did in cat.ids("derivation"):
        d = cat.derivation(did)
        e1 = e1_page(d.alg, 16)
        e2 = e2_page(d.alg, d, 16)
        assert all(0 <= x <= y for x, y in zip(e2, e1)), did


def test_order_p_claims_have_e2_equal_free_rank(cat):
    for cid in ORDER_P_CLAIMS:
        claim = cat.claim(cid)
        assert not claim.higher
        e2 = e2_page(claim.modp, claim.sq1, 20)
        assert e2 == [claim.free_rank(n) for n in range(21)], cid


def test_order_four_claims_have_one_higher_class(cat):
    for cid in ORDER_FOUR_CLAIMS:
        claim = cat.claim(cid)
        e2 = e2_page(claim.modp, claim.sq1, 20)
        h = higher_orders_from_e2(e2, [claim.free_rank(n) for n in range(21)])
        assert h[:21] == [1 if n == 3 else 0 for n in range(21)], cid


@pytest.mark.parametrize("cid", ["Z2.claim.int2", "Z3.claim.int2", "S3.claim.int2", "D2.claim.int2",
                                 "A4.claim.int2", "Z2.claim.int3", "Z3.claim.int3", "S3.claim.int3",
                                 "D2.claim.int3", "A4.claim.int3"])
def test_finite_group_uct(cat, cid):
    claim = cat.claim(cid)
    dims = cat.modp_dims(cid, 20)
    assert uct_check(claim.graded_group(21), dims, claim.p).ok


def test_every_tabulated_relation_holds(cat):
    for cid in cat.ids("claim"):
        claim = cat.claim(cid)
        if claim.modp is None or not claim.correspondence:
            continue
        checks = verify_claim(claim, up_to=16, modp_dims=cat.modp_dims(cid, 16))
        assert all(c.ok for c in checks), [c.line() for c in checks if not c.ok]


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=1, max_size=12), st.lists(st.integers(0, 3), min_size=13, max_size=13),
       st.lists(st.integers(0, 2), min_size=13, max_size=13))
def test_uct_identity_on_random_groups(free, order_p, order_p2):
    g = GradedAbelianGroup()
    top = len(free)
    for n in range(top + 1):
        g.set(n, free[n] if n < top else 0, {(3, 1): order_p[n], (3, 2): order_p2[n]})
    dims = [g.free_rank(n) + g.torsion_count(n, 3) + g.torsion_count(n + 1, 3) for n in range(top)]
    rep = uct_check(g, dims, 3)
    assert rep.ok
    e2 = [g.free_rank(n) + g.higher_count(n, 3) + g.higher_count(n + 1, 3) for n in range(top)]
    h = higher_orders_from_e2(e2, [g.free_rank(n) for n in range(top)])
    # h is pinned by h(0) = 0, so it matches whenever the group has none in degree 0
    if order_p2[0] == 0:
        assert h[:top] == [g.higher_count(n, 3) for n in range(top)]
