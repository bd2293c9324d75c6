from __future__ import annotations

import shutil

import pytest

from gradedcoh import catalog
from gradedcoh.catalog import (Catalog, CatalogError, CatalogSyntaxError, LocatedError, MissingDependency,
                               format_entry, parse)
from gradedcoh.gradedalg import free_dims

HEAD = "id x\nkind algebra\nanchor test ring\n"


@pytest.fixture
def data_copy(tmp_path):
    d = tmp_path / "data"
    shutil.copytree(catalog.data_dir(), d)
    return d


def test_round_trip_every_shipped_file():
    for eid, entry in catalog.read_entries().items():
        again = parse(format_entry(entry))
        assert again == entry, eid
        assert format_entry(again) == format_entry(entry)


def test_gamma7_ring_text():
    e = parse(HEAD + "field 2; gen x1 deg 1; gen y1 deg 1; rel y1^2")
    a = catalog.build_algebra(e)
    assert a.poincare_series(6) == [1, 2, 2, 2, 2, 2, 2]
    assert a.normal_form(a.element("y1^2")).is_zero()
    assert not a.normal_form(a.element("x1^5")).is_zero()


def test_shipped_gamma7_ring_matches_text(cat):
    assert cat.algebra("Gamma7.mod2").poincare_series(8) == [1] + [2] * 8


def test_empty_relation_block_is_free():
    a = catalog.build_algebra(parse(HEAD + "field 2\ngen a1 deg 1\ngen b2 deg 2\n"))
    assert a.poincare_series(10) == free_dims(a, 10)


def test_a4_relation_parses(cat):
    a = cat.algebra("A4.mod2")
    assert a.equal_mod_relations(a.element("u2^3 + v3^2 + w3^2 + v3*w3"), a.zero())
    assert a.poincare_series(6) == [1, 0, 1, 2, 1, 2, 3]


def test_full_load_has_enough_valid_entries(cat):
    assert len(cat.entries) >= 30
    kinds = {e.kind for e in cat}
    assert kinds == {"algebra", "hom", "derivation", "claim", "tower"}
    for eid in cat.entries:
        cat.build(eid)


def test_removed_file_reports_missing_dependency(data_copy):
    (data_copy / "Z2.claim.int2.entry").unlink()
    with pytest.raises(MissingDependency) as exc:
        catalog.load_all(data_copy)
    assert "Z2.claim.int2" in str(exc.value) and ".tower." in str(exc.value)


def test_corrupted_d2_relation_blames_restriction(data_copy):
    f = data_copy / "D2.mod2.entry"
    f.write_text(f.read_text() + "rel x1^2\n")
    with pytest.raises(CatalogError) as exc:
        catalog.load_all(data_copy)
    assert "relation not preserved" in str(exc.value)
    assert "res.D2.a.mod2" in str(exc.value)


def test_catalog_dir_override(data_copy, monkeypatch):
    (data_copy / "Gamma3.tower.int3.entry").unlink()
    monkeypatch.setenv("CATALOG_DIR", str(data_copy))
    cat = catalog.default_catalog()
    assert "Gamma3.tower.int3" not in cat.entries
    monkeypatch.delenv("CATALOG_DIR")


def test_missing_directory(tmp_path):
    with pytest.raises(CatalogError):
        catalog.read_entries(tmp_path / "nope")


def test_file_name_must_match_id(data_copy):
    (data_copy / "D2.mod2.entry").rename(data_copy / "Klein.mod2.entry")
    with pytest.raises(CatalogError, match="does not match id"):
        catalog.read_entries(data_copy)


MALFORMED = [
    ("field 2\ngen x1 deg 1\nrel x1^2 + x2", LocatedError, "unknown generator", 6),
    ("field 2\ngen x1 deg 1\ngen y2 deg 2\nrel x1 + y2", LocatedError, "inhomogeneous relation", 7),
    ("field 2\ngen x1 deg one", CatalogSyntaxError, "malformed 'gen'", 5),
    ("field 2\ngen x1 deg 1\nrel x1^^2", CatalogSyntaxError, "exponent", 6),
    ("field 2\ngen x1 deg 1\nrel (x1 + ", CatalogSyntaxError, "end of expression", 6),
    ("frobnicate 3", CatalogSyntaxError, "unknown keyword", 4),
    ("id y", CatalogSyntaxError, "duplicate 'id'", 4),
    ("field 4\ngen x1 deg 1", LocatedError, "not a prime", 4),
    ("field 2\ngen x1 deg 1\ngen x1 deg 2", CatalogError, "duplicate generator", None),
    ("gen x1 deg 1", CatalogError, "missing 'field'", None),
    ("Field 2", CatalogSyntaxError, "expected a keyword", 4),
]


@pytest.mark.parametrize("body,exc,msg,line", MALFORMED)
def test_malformed_input_is_located(body, exc, msg, line):
    with pytest.raises(exc) as info:
        parse(HEAD + body)
    assert msg in str(info.value)
    if line is not None:
        assert info.value.line == line
        assert f"line {line}" in str(info.value)


def test_malformed_header_forms():
    with pytest.raises(CatalogSyntaxError, match="missing 'id'"):
        parse("kind algebra\nanchor a")
    with pytest.raises(CatalogSyntaxError, match="malformed 'kind'"):
        parse("id x\nkind banana\nanchor a")
    with pytest.raises(CatalogSyntaxError, match="missing 'anchor'"):
        parse("id x\nkind algebra\nfield 2")


def test_derivation_must_be_well_defined(cat):
    entries = catalog.read_entries()
    entries["bad.sq1"] = parse("id bad.sq1\nkind derivation\nanchor a\nalgebra A4.mod2\n"
                               "sq1 u2 -> v3\nsq1 v3 -> 0\nsq1 w3 -> 0\n")
    with pytest.raises(CatalogError):
        Catalog(entries).derivation("bad.sq1")


def test_anchors_nonempty(cat):
    for e in cat:
        assert e.anchor.strip(), e.id


def test_claims_only_use_their_generators(cat):
    for cid in cat.ids("claim"):
        claim = cat.claim(cid)
        names = set(claim.subring.index) | {h.name for h in claim.higher} | {f for f, _ in claim.free}
        assert set(claim.correspondence) <= set(claim.subring.index), cid
        for prod in claim.products:
            assert set(prod.factors) | {prod.multiplier_and_class[1]} <= names, cid


def test_every_derivation_squares_to_zero(cat):
    for did in cat.ids("derivation"):
        assert cat.derivation(did).square_vanishes(16) == [], did


def test_alias_resolves(cat):
    assert cat.resolve_id("AfZtAf.tower.int2") == "A4A4.tower.int2"
    assert cat.tower("AfZtAf.tower.int2") is cat.tower("A4A4.tower.int2")
    with pytest.raises(MissingDependency):
        cat.resolve_id("no.such.entry")


def test_typos_kept_as_notes(cat):
    noted = {e.id for e in cat if e.typos}
    assert {"Gamma2.claim.int2", "Gamma5.claim.int2", "Gamma10.claim.int2"} <= noted


def test_verify_all_passes(cat):
    checks = catalog.verify_all(cat, up_to=16)
    assert len(checks) > 300
    assert [c.line() for c in checks if not c.ok] == []
