import json
import subprocess
import sys
from fractions import Fraction

import pytest

from initial_integrals import universal as uni
from initial_integrals.cli import encode, main
from initial_integrals.dyadic import DyadicStep
from initial_integrals.instances import PiecewiseLinear
from initial_integrals.measures.spaces import FiniteMeasureSpace, PartialMap
from initial_integrals.sequences import FiniteSeq, shipped_seq_targets


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


def test_integrate(tmp_path, capsys):
    f = write(tmp_path, "f.json", ["1", "0", "2", "5"])
    code, out, _ = run(capsys, "integrate", f)
    assert code == 0
    assert json.loads(out) == {"command": "integrate", "result": "2"}


def test_indefinite_identity(tmp_path, capsys):
    f = write(tmp_path, "f.json", {"level": 3, "coeffs": ["1"] * 8})
    F = tmp_path / "F.json"
    code, out, _ = run(capsys, "indefinite", f, "-o", F)
    assert code == 0
    saved = PiecewiseLinear.from_json(json.loads(F.read_text()))
    assert saved.values.scalars() == tuple(Fraction(i, 8) for i in range(9))


def test_pair(tmp_path, capsys):
    f = write(tmp_path, "f.json", ["3", "4"])
    code, out, _ = run(capsys, "pair", f, f, "--p", "2", "--q", "2")
    res = json.loads(out)
    assert code == 0 and res["result"] == "25/2"
    assert abs(float(res["holder_bound"]) - 12.5) < 1e-12
    code, _, err = run(capsys, "pair", f, f, "--p", "2", "--q", "3")
    assert code == 2 and "non-conjugate exponents" in err


def test_compile_apply_verify(tmp_path, capsys):
    t = write(tmp_path, "t.json", uni.mean_target().to_json())
    m = tmp_path / "m.json"
    assert run(capsys, "compile", "--target", t, "--max-level", 5, "-o", m)[0] == 0
    f = write(tmp_path, "f.json", {"level": 2, "coeffs": ["1", "0", "2", "5"]})
    code, out, _ = run(capsys, "apply", "--table", m, "--step", f)
    assert json.loads(out)["result"] == ["2"]
    code, out, _ = run(capsys, "verify", "--table", m, "--samples", 50, "--seed", 3)
    assert code == 0 and json.loads(out)["report"]["ok"]
    deep = write(tmp_path, "deep.json", {"level": 6, "coeffs": ["1"] * 64})
    code, _, err = run(capsys, "apply", "--table", m, "--step", deep)
    assert code == 2 and "recompile" in err


def test_compile_rejects_bad_target(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", {"dim": 1, "p": "1", "basepoint": ["0"], "delta": [["2", "0"]]})
    code, _, err = run(capsys, "compile", "--target", bad, "--max-level", 2)
    assert code == 2 and "contraction" in err


def test_schema_errors_name_field(tmp_path, capsys):
    f = write(tmp_path, "f.json", {"level": 1})
    code, _, err = run(capsys, "integrate", f)
    assert code == 2 and "'coeffs'" in err
    t = write(tmp_path, "t.json", {"dim": 1, "p": "1", "delta": [["1/2", "1/2"]]})
    code, _, err = run(capsys, "compile", "--target", t, "--max-level", 1)
    assert code == 2 and "'basepoint'" in err
    s = write(tmp_path, "s.json", {"space": {"points": ["a"], "weights": {"a": "1"}}})
    code, _, err = run(capsys, "measure", "integrate", s)
    assert code == 2 and "'values'" in err
    code, _, err = run(capsys, "integrate", tmp_path / "missing.json")
    assert code == 2 and "cannot read" in err


def test_cantor_and_seq(tmp_path, capsys):
    f = write(tmp_path, "f.json", ["1", "2", "3", "4"])
    code, out, _ = run(capsys, "cantor-project", f, "--bits", 1)
    assert json.loads(out)["result"]["coeffs"] == ["1", "1", "3", "3"]
    t = write(tmp_path, "t.json", shipped_seq_targets()[1].to_json())
    a = write(tmp_path, "a.json", {"coeffs": ["1", "2", "3"]})
    code, out, _ = run(capsys, "seq-apply", "--target", t, "--seq", a)
    assert json.loads(out)["result"] == ["11/8"]


def test_measure_commands(tmp_path, capsys):
    f = write(tmp_path, "f.json", {"space": {"points": ["x1", "x2"], "weights": {"x1": "1/2", "x2": "1/2"}},
                                   "values": {"x1": "3", "x2": "5"}})
    t = write(tmp_path, "t.json", {"kind": "scalar"})
    assert json.loads(run(capsys, "measure", "psi", "--target", t, f)[1])["result"] == ["4"]
    assert json.loads(run(capsys, "measure", "integrate", f)[1])["result"] == "4"
    dens = json.loads(run(capsys, "measure", "density", f)[1])["result"]
    assert dens["mass"] == {"x1": "3/2", "x2": "5/2"} and dens["total_variation"] == "4"
    for cat in ("Bemb", "B", "H"):
        code, out, _ = run(capsys, "measure", "verify", "--category", cat, "--trials", 20, "--seed", 1)
        assert code == 0 and json.loads(out)["ok"]
    d = write(tmp_path, "d.json", {"kind": "doubled"})
    code, out, _ = run(capsys, "measure", "verify", "--target", d, "--trials", 20)
    assert code == 1 and json.loads(out)["reports"][0]["failed"]["(III)"] > 0


def test_verify_all_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "verify-all", "--seed", 42, "--trials", 10, "-o", a)[0] == 0
    assert run(capsys, "verify-all", "--seed", 42, "--trials", 10, "--workers", 3, "-o", b)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.txt").read_text().endswith("ALL PASS\n")
    report = json.loads(a.read_text())
    assert report["schema"].endswith("/1") and "timing" not in report
    assert [s["suite"] for s in report["suites"]] == sorted(s["suite"] for s in report["suites"])


def test_verify_all_gate_and_vacuous(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", {"dim": 1, "p": "1", "basepoint": ["0"], "delta": [["2", "0"]]})
    code, out, _ = run(capsys, "verify-all", "--trials", 2, "--only", "dyadic", "--extra-target", bad)
    report = json.loads(out)
    assert code == 1
    gate = next(s for s in report["suites"] if s["suite"].startswith("extra-target"))
    assert gate["failed"] == {"construction-gate": 1}
    assert gate["counterexamples"][0]["witness"]["axiom"] == "contraction"
    code, out, err = run(capsys, "verify-all", "--trials", 0, "--format", "text")
    assert code == 0 and "vacuous" in out and "vacuous" in err
    code, out, _ = run(capsys, "verify-all", "--trials", 1, "--only", "dyadic", "--timing")
    assert "timing" in json.loads(out)


def test_level_cap_env(tmp_path):
    f = tmp_path / "f.json"
    f.write_text(json.dumps(["1"] * 16))
    out = subprocess.run([sys.executable, "-m", "initial_integrals", "integrate", str(f)],
                         env={"INITIAL_INTEGRALS_MAX_LEVEL": "3", "PATH": ""}, capture_output=True, text=True)
    assert out.returncode == 2 and "INITIAL_INTEGRALS_MAX_LEVEL" in out.stderr


def test_encode():
    assert encode(Fraction(-3, 4)) == "-3/4"
    assert encode(0.1) == "0.10000000000000001"
    assert encode({"a": [Fraction(1), 2.5]}) == {"a": ["1", "2.5"]}


@pytest.mark.parametrize("value", [
    DyadicStep.from_coeffs([Fraction(1, 3), -2, 0, 5]),
    PiecewiseLinear.from_values([0, Fraction(1, 2), -1]),
    FiniteSeq((Fraction(2, 7), 0, 1)),
])
def test_json_roundtrip(value):
    data = json.loads(json.dumps(value.to_json()))
    assert type(value).from_json(data) == value


def test_partial_map_roundtrip():
    X = FiniteMeasureSpace.from_weights({"a": "1/2", "b": "1/2", "c": "1"})
    Y = FiniteMeasureSpace.from_weights({"y": "1"})
    s = PartialMap.make(X, Y, {"a": "y", "b": "y"})
    assert s.to_json() == {"domain": ["a", "b"], "map": {"a": "y", "b": "y"}}
    assert PartialMap.from_json(json.loads(json.dumps(s.to_json())), X, Y) == s
