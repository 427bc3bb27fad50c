import json
import os
import subprocess
import sys

import jsonschema
import pytest

from trimdg.cli import expand_families, main, parse_sigma

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
DATA = os.path.join(ROOT, "data")


def schema(name):
    with open(os.path.join(ROOT, "docs", name)) as fh:
        return json.load(fh)


REPORT = schema("report.schema.json")
VERIFY = schema("verify.schema.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classify_family(capsys):
    code, out, _ = run(capsys, "classify", "--family", "pfaffian:m=2,j=1")
    rep = json.loads(out)
    jsonschema.validate(rep, REPORT)
    assert code == 0
    assert rep["class"] == "G(5)" and rep["method"] == "trim-dg"
    assert (rep["m"], rep["n"], rep["p"], rep["q"], rep["r"]) == (5, 1, 0, 1, 5)


def test_classify_ideal_with_oracle(capsys):
    code, out, _ = run(capsys, "classify", "--ideal", os.path.join(DATA, "g2.json"),
                       "--method", "koszul-oracle")
    rep = json.loads(out)
    jsonschema.validate(rep, REPORT)
    assert code == 0
    assert (rep["m"], rep["n"], rep["r"], rep["class"]) == (7, 2, 2, "G(2)")


def test_ideal_file_without_resolution_defaults_to_oracle(capsys):
    code, out, _ = run(capsys, "classify", "--ideal", os.path.join(DATA, "j3.json"))
    rep = json.loads(out)
    assert code == 0 and rep["method"] == "koszul-oracle" and rep["class"] == "H(3,2)"


def test_malformed_polynomial(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"vars": ["x1", "x2", "x3"], "generators": ["x1^2", "x2*^2"]}))
    code, out, err = run(capsys, "classify", "--ideal", str(bad))
    assert code == 2 and out == ""
    assert "generator 2" in err and "position" in err


@pytest.mark.parametrize("content", ["not json", json.dumps({"vars": ["x", "y"], "generators": []})])
def test_invalid_files_exit_2(capsys, tmp_path, content):
    f = tmp_path / "f.json"
    f.write_text(content)
    assert run(capsys, "classify", "--ideal", str(f))[0] == 2


def test_not_m_primary_exits_2(capsys, tmp_path):
    f = tmp_path / "f.json"
    f.write_text(json.dumps({"generators": ["x1^2", "x2^2"]}))
    code, _, err = run(capsys, "classify", "--ideal", str(f), "--method", "koszul-oracle")
    assert code == 2 and "error" in err


def test_bad_family_and_sigma_exit_2(capsys):
    assert run(capsys, "classify", "--family", "pfaffian:m=9")[0] == 2
    assert run(capsys, "trim", "--family", "jp:p=3", "--sigma", "9")[0] == 2
    assert run(capsys, "trim", "--family", "jp:p=3", "--sigma", "a")[0] == 2


def test_trim_without_prediction(capsys):
    code, out, _ = run(capsys, "trim", "--family", "pfaffian:m=2,j=3", "--sigma", "1")
    rep = json.loads(out)
    jsonschema.validate(rep, REPORT)
    assert code == 0
    assert rep["class"] == "B" and rep["predicted"] is None and rep["agrees"] is None
    assert rep["prediction_note"]


@pytest.mark.parametrize("sigma,cls", [("1,2", "H(2,1)"), ("5", "Golod")])
def test_trim_with_prediction(capsys, sigma, cls):
    code, out, _ = run(capsys, "trim", "--family", "jp:p=4", "--sigma", sigma)
    rep = json.loads(out)
    jsonschema.validate(rep, REPORT)
    assert code == 0
    assert rep["class"] == cls and rep["agrees"] is True
    assert rep["sigma"] == parse_sigma(sigma)


def test_trim_oracle_matches_dg(capsys):
    _, a, _ = run(capsys, "trim", "--family", "jp:p=3", "--sigma", "2")
    _, b, _ = run(capsys, "trim", "--family", "jp:p=3", "--sigma", "2", "--method", "koszul-oracle")
    a, b = json.loads(a), json.loads(b)
    assert a["class"] == b["class"] == "TE"
    assert [a[k] for k in "mnpqr"] == [b[k] for k in "mnpqr"]


def test_determinism(capsys, tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        assert run(capsys, "trim", "--family", "pfaffian:m=3,j=1", "--sigma", "1,7",
                   "--seed", "11", "--out", str(path))[0] == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_verify_sweeps_pass(capsys):
    code, out, _ = run(capsys, "verify", "--family", "pfaffian:m=2,j=*", "--family", "jp:p=3..4")
    rep = json.loads(out)
    jsonschema.validate(rep, VERIFY)
    assert code == 0 and rep["failed"] == []
    assert rep["total"] == len(rep["instances"]) == 4 * 5 + 4 + 5
    ids = [r["id"] for r in rep["instances"]]
    assert ids == sorted(ids)


def test_verify_parallel_is_identical(capsys):
    _, a, _ = run(capsys, "verify", "--family", "jp:p=3", "--max-sigma", "2")
    _, b, _ = run(capsys, "verify", "--family", "jp:p=3", "--max-sigma", "2", "--jobs", "2")
    assert a == b


def test_verify_fault_injection(capsys):
    code, out, err = run(capsys, "verify", "--family", "jp:p=3", "--inject-fault", "jp:p=3|sigma=2")
    rep = json.loads(out)
    assert code == 1 and rep["failed"] == ["jp:p=3|sigma=2"]
    assert "jp:p=3|sigma=2" in err
    bad = [r for r in rep["instances"] if r["status"] == "fail"]
    assert [r["id"] for r in bad] == ["jp:p=3|sigma=2"]


def test_expand_families():
    assert [str(s) for s in expand_families("pfaffian:m=2..3,j=1")] == \
        ["pfaffian:m=2,j=1", "pfaffian:m=3,j=1"]
    assert len(expand_families("jpprime:p=3..5")) == 3
    assert len(expand_families("pfaffian:m=3,j=*")) == 5


def test_entry_point_module():
    res = subprocess.run([sys.executable, "-m", "trimdg", "classify", "--family", "jp:p=3"],
                         capture_output=True, text=True, cwd=ROOT)
    assert res.returncode == 0
    assert json.loads(res.stdout)["class"] == "H(3,2)"


def test_ideal_file_with_resolution(capsys, tmp_path):
    from trimdg.families import FamilySpec, family_resolution
    res = family_resolution(FamilySpec.parse("jp:p=3"))
    f = tmp_path / "j3res.json"
    f.write_text(json.dumps({"generators": [str(g) for g in res.generators],
                             "complex": res.complex.to_json(), "product": res.product.to_json()}))
    code, out, _ = run(capsys, "trim", "--ideal", str(f), "--sigma", "2")
    rep = json.loads(out)
    jsonschema.validate(rep, REPORT)
    assert code == 0 and rep["method"] == "trim-dg" and rep["class"] == "TE"
    assert rep["predicted"] is None
