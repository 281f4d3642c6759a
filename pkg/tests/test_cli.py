import json
import subprocess
import sys

import pytest

from seqcover.cli import main
from seqcover.covering import SequenceFamily
from seqcover.diagonal import EvasionSet, FinitenessCertificate, PiecewiseLinear
from seqcover.sequences import FunctionRule

FAMILY = [{"kind": "arithmetic", "x": "1/2"}, {"kind": "arithmetic", "x": "1/3"}]
TENTHS = {
    "x": {"kind": "explicit", "prefix": [], "tail": {"slope": "1", "offset": "1/10"}},
    "y": {"kind": "explicit", "prefix": [], "tail": {"slope": "1", "offset": "9/10"}},
}


@pytest.fixture
def files(tmp_path):
    def write(name, doc):
        p = tmp_path / name
        p.write_text(json.dumps(doc))
        return str(p)

    return write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out, json.loads(out)


def test_gauge_of_arithmetic_3_is_zero(capsys, files):
    code, _, doc = run(capsys, "gauge", "--rule", files("r.json", {"kind": "arithmetic", "x": "3"}), "--i-max", "10")
    assert code == 0
    assert doc["gauge"]["table"] == [0] * 11 and doc["gauge"]["tail"] == {"constant": 0}


def test_conditions(capsys, files):
    rule = files("r.json", {"kind": "explicit", "prefix": ["0", "1", "3"], "tail": {"slope": "1", "offset": "1"}})
    code, _, doc = run(capsys, "conditions", "--rule", rule)
    assert code == 0
    assert doc["condition2"]["status"] == "fails" and doc["condition2"]["witness"] == 1
    assert doc["condition3"] == {"holds": True, "r": "1/2"}


def test_bound(capsys, files):
    code, _, doc = run(capsys, "bound", "--family", files("f.json", FAMILY), "--i-max", "0")
    assert code == 0 and doc["bound"] == {"table": [3], "tail": {"constant": 5}}


def test_evade_verify_bump_pipeline(capsys, files, tmp_path):
    fam = files("f.json", FAMILY)
    out = str(tmp_path / "ev.json")
    assert main(["evade", "--family", fam, "--k-max", "50", "--out", out]) == 0
    doc = json.loads(open(out).read())
    eset = EvasionSet.from_json(doc["eset"])
    assert all(eset.g(k) == 1 for k in range(100))
    certs = [FinitenessCertificate.from_json(c) for c in doc["certificates"]]
    assert [c.term_bound for c in certs] == [0, 0]
    # round trip: re-serialising the parsed objects gives the same document
    assert eset.to_json() == doc["eset"]
    assert [c.to_json() for c in certs] == doc["certificates"]

    code, _, rep = run(capsys, "verify", "--family", fam, "--eset", out, "--horizon", "2000")
    assert code == 0 and rep["report"]["counts"] == [0, 0]

    code, _, b = run(capsys, "bump", "--eset", out, "--k-max", "10")
    assert code == 0 and len(b["bump"]["breakpoints"]) == 33
    assert PiecewiseLinear.from_json(b["bump"]).to_json() == b["bump"]


def test_verify_tampered_exits_nonzero(capsys, files, tmp_path):
    fam = files("f.json", [{"kind": "arithmetic", "x": "1"}])
    out = str(tmp_path / "ev.json")
    assert main(["evade", "--family", fam, "--k-max", "10", "--out", out]) == 0
    doc = json.loads(open(out).read())
    doc["eset"]["chosen"][3] = ["3/1", "9/2"]
    tampered = files("t.json", doc)
    code, _, rep = run(capsys, "verify", "--family", fam, "--eset", tampered)
    assert code != 0
    assert rep["error"]["type"] == "FALSIFICATION"


def test_evade_with_peaks_and_cm(capsys, files):
    fam = files("f.json", [{"kind": "arithmetic", "x": "1/2"}])
    peaks = files("p.json", TENTHS)
    code, _, doc = run(capsys, "evade", "--family", fam, "--peaks", peaks, "--k-max", "20")
    assert code == 0 and doc["certificates"][0]["term_bound"] == 0
    code, _, doc = run(capsys, "cm", "--family", fam, "--peaks", peaks, "--m", "2", "--k-max", "100")
    assert code == 0 and doc["cm"]["verdict"] == "refuted" and doc["cm"]["max_count"] == 1


def test_evdiff(capsys, files):
    fs = files("fs.json", [FunctionRule.constant(5).to_json(), FunctionRule.affine(1, 0).to_json()])
    code, _, doc = run(capsys, "evdiff", "--functions", fs)
    g = FunctionRule.from_json(doc["g"])
    assert code == 0 and doc["stabilization"] == 0
    assert g(0) == 6 and g(7) == 8


def test_precondition_error_object(capsys, files):
    fam = files("f.json", [{"kind": "arithmetic", "x": "1"}, {"kind": "explicit", "prefix": ["1", "1/2"], "tail": {"slope": "1", "offset": "-1/2"}}])
    code, _, doc = run(capsys, "evade", "--family", fam)
    assert code == 2
    assert doc["error"]["type"] == "PreconditionError"
    assert "member 1" in doc["error"]["message"] and "condition (2)" in doc["error"]["message"]
    code, _, doc = run(capsys, "gauge")
    assert code == 2 and "--rule" in doc["error"]["message"]


def test_logshift_precision_flag(capsys, files):
    rule = files("r.json", {"kind": "logshift", "x": "0"})
    _, _, coarse = run(capsys, "gauge", "--rule", rule, "--i-max", "5", "--precision", "3")
    _, _, fine = run(capsys, "gauge", "--rule", rule, "--i-max", "5", "--precision", "60")
    assert coarse["rule"]["precision"] == 3 and fine["rule"]["precision"] == 60
    assert fine["gauge"]["exact"] is True


def test_selftest_is_deterministic(capsys):
    code, first, doc = run(capsys, "selftest", "--seed", "3")
    _, second, _ = run(capsys, "selftest", "--seed", "3")
    assert code == 0 and doc["ok"]
    assert first == second


def test_module_entry_point(tmp_path):
    fam = tmp_path / "f.json"
    fam.write_text(json.dumps(FAMILY))
    a = subprocess.run([sys.executable, "-m", "seqcover", "evade", "--family", str(fam), "--k-max", "30"], capture_output=True)
    b = subprocess.run([sys.executable, "-m", "seqcover", "evade", "--family", str(fam), "--k-max", "30"], capture_output=True)
    assert a.returncode == 0 and a.stdout == b.stdout
    doc = json.loads(a.stdout)
    assert SequenceFamily.from_json(FAMILY).to_json()[0] == {"kind": "arithmetic", "x": "1/2"}
    assert doc["eset"]["packing"] == "dyadic-v1"
