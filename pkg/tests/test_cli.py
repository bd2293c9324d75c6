from __future__ import annotations

import io
import json
import subprocess
import sys

import jsonschema
import pytest

from gradedcoh import catalog, cli
from gradedcoh.rewriting import oracle_dims


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.main(list(argv), out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv, "--format", "json")
    doc = json.loads(out or err)
    jsonschema.validate(doc, cli.SCHEMAS[doc["command"]])
    return code, doc


def test_poincare_d2():
    code, out, _ = run("poincare", "D2.mod2", "--up-to", "4")
    assert code == cli.EXIT_OK and out.strip() == "1 2 3 4 5"


def test_poincare_a4_agrees_with_oracle(cat):
    code, out, _ = run("poincare", "A4.mod2", "--up-to", "12")
    assert code == 0
    assert [int(x) for x in out.split()] == oracle_dims(cat.algebra("A4.mod2"), 12)
    code, out, _ = run("poincare", "A4.mod2", "--up-to", "8", "--oracle")
    assert code == 0 and "agree" in out


def test_poincare_missing_id():
    code, _, err = run("poincare", "missing-id")
    assert code == cli.EXIT_USAGE and "missing-id" in err


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["poincare"], ["poincare", "D2.mod2", "--up-to", "-1"],
                                  ["poincare", "D2.mod2", "--format", "xml"], ["les", "Gamma7.tower", "--prime", "5"],
                                  ["sq1", "A4.mod2", "q9"], ["kernel", "A4.mod2"]])
def test_usage_errors_exit_two(argv):
    assert run(*argv)[0] == cli.EXIT_USAGE


def test_verify_d2_claim():
    code, out, _ = run("verify", "D2.claim.int2")
    assert code == 0
    lines = [l for l in out.splitlines() if l.startswith("CHECK")]
    assert all(" PASS " in l for l in lines)
    assert sum(".relation." in l for l in lines) >= 1
    assert any(".uct " in l for l in lines)


def test_verify_all_passes():
    code, out, _ = run("verify", "all", "--up-to", "12")
    assert code == 0
    assert " FAIL " not in out
    assert out.strip().endswith("0 failed")


def test_verify_corrupted_file(tmp_path):
    src = (catalog.data_dir() / "D2.claim.int2.entry").read_text()
    bad = tmp_path / "D2.claim.int2.entry"
    bad.write_text(src.replace("rel y3^2 + y2^2*z2 + y2*z2^2", "rel y3^2 + y2^3"))
    code, out, _ = run("verify", str(bad))
    assert code == cli.EXIT_FAIL
    assert "CHECK D2.claim.int2.relation.1 FAIL" in out


def test_verify_unparseable_file(tmp_path):
    bad = tmp_path / "junk.entry"
    bad.write_text("junk\n")
    code, out, _ = run("verify", str(bad))
    assert code == cli.EXIT_FAIL and "CHECK junk.entry.parse FAIL" in out


def test_les_gamma7():
    code, out, _ = run("les", "Gamma7.tower", "--prime", "2", "--up-to", "8")
    assert code == 0
    groups = [l.split(":", 1)[1].strip() for l in out.splitlines() if l.startswith("H^n")]
    assert groups == ["Z", "Z"] + ["Z/2"] * 7


def test_les_gamma3_out_of_scope():
    code, out, _ = run("les", "Gamma3.tower", "--prime", "3")
    assert code == 0 and "OUT-OF-SCOPE" in out


def test_les_ambiguity_and_resolution():
    code, out, _ = run("les", "AfZtAf.tower", "--prime", "2", "--up-to", "5")
    assert code == 0
    assert any(l.startswith("AMBIGUITY") and "degree 3" in l for l in out.splitlines())
    assert any(l.startswith("RESOLVED degree 3") and "Bockstein" in l for l in out.splitlines())
    assert "H^n  3: Z/2 + Z/4" in out


def test_sq1_bockstein_kernel_uct_catalog():
    assert run("sq1", "A4.mod2", "u2")[1].strip().endswith("= v3")
    out = run("bockstein", "A4A4.mod2", "--up-to", "5")[1]
    assert "E2 1 0 1 1 0 0" in out
    out = run("kernel", "res.A4.Z2.mod2", "--up-to", "4", "--basis")[1]
    assert "v3" in out
    code, out, _ = run("uct", "D2.claim.int2", "--up-to", "4")
    assert code == 0 and "PASS" in out
    out = run("catalog", "list", "--kind", "hom")[1]
    assert "res.D2.a.mod2" in out and "A4.mod2 " not in out


JSON_CASES = [
    ["poincare", "D2.mod2", "--up-to", "4"],
    ["poincare", "A4.mod2", "--up-to", "6", "--oracle"],
    ["sq1", "A4.mod2", "u2"],
    ["bockstein", "A4A4.mod2", "--up-to", "6"],
    ["kernel", "res.A4.Z2.mod2", "--up-to", "6", "--basis"],
    ["les", "AfZtAf.tower", "--prime", "2", "--up-to", "6"],
    ["les", "Gamma3.tower", "--prime", "3"],
    ["les", "Gamma2.tower", "--prime", "3", "--up-to", "6"],
    ["uct", "A4.claim.int2", "--up-to", "6"],
    ["verify", "D2.claim.int2", "--up-to", "8"],
    ["catalog", "list"],
    ["poincare", "missing-id"],
]


@pytest.mark.parametrize("argv", JSON_CASES)
def test_json_output_matches_schema(argv):
    code, doc = run_json(*argv)
    assert code in (0, 2)
    assert (code == 2) == (doc["command"] == "error")


def test_json_mirrors_text():
    _, doc = run_json("poincare", "D2.mod2", "--up-to", "4")
    assert doc["dims"] == [1, 2, 3, 4, 5]
    _, doc = run_json("verify", "D2.claim.int2", "--up-to", "8")
    text = run("verify", "D2.claim.int2", "--up-to", "8")[1]
    assert [f"CHECK {c['id']} {c['status']} {c['detail']}" for c in doc["checks"]] == \
        [l for l in text.splitlines() if l.startswith("CHECK")]


def test_schemas_are_valid():
    for schema in cli.SCHEMAS.values():
        jsonschema.Draft202012Validator.check_schema(schema)


@pytest.mark.parametrize("argv", [["verify", "all", "--up-to", "10"], ["les", "Gamma6.tower", "--prime", "2"],
                                  ["catalog", "list", "--format", "json"]])
def test_reruns_are_byte_identical(argv):
    outs = [subprocess.run([sys.executable, "-m", "gradedcoh.cli", *argv], capture_output=True) for _ in range(2)]
    assert outs[0].returncode == 0
    assert outs[0].stdout == outs[1].stdout


def test_catalog_dir_env(tmp_path, monkeypatch):
    import shutil
    d = tmp_path / "data"
    shutil.copytree(catalog.data_dir(), d)
    (d / "Gamma3.tower.int3.entry").unlink()
    monkeypatch.setenv("CATALOG_DIR", str(d))
    out = run("catalog", "list", "--kind", "tower")[1]
    assert "Gamma3.tower.int3" not in out
    assert "Gamma2.tower.int3" in out
