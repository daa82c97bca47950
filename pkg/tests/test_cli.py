import json
import subprocess
import sys

import pytest

from hullcoh import fixtures
from hullcoh.cli import RunConfig, main, render_json, render_markdown, run
from hullcoh.io import dumps
from conftest import FIXTURE_DIR, ROOT


def fx(name):
    return str(FIXTURE_DIR / f"{name}.json")


def invoke(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def _walk(obj):
    yield obj
    if isinstance(obj, dict):
        for v in obj.values():
            yield from _walk(v)
    elif isinstance(obj, list):
        for v in obj:
            yield from _walk(v)


@pytest.mark.parametrize("name", ["heisenberg", "sol", "hyperbolic_k1"])
def test_check_valid(capsys, name):
    code, out = invoke(capsys, "check", "--input", fx(name))
    rep = json.loads(out)
    assert code == 0 and rep["valid"] and all(c["passed"] for c in rep["checks"])


def test_check_invalid(capsys, tmp_path):
    doc = json.loads(dumps(fixtures.build("heisenberg")))
    doc["declared_rank"] = 5
    p = tmp_path / "bad.json"
    p.write_text(json.dumps(doc))
    code, out = invoke(capsys, "check", "--input", str(p))
    rep = json.loads(out)
    assert code == 2 and not rep["valid"]
    assert any(not c["passed"] for c in rep["checks"])


def test_parse_error_report(capsys, tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{"ambient_dim": 3,\n "u_basis": [')
    code, out = invoke(capsys, "betti", "--input", str(p))
    rep = json.loads(out)
    assert code == 2
    assert rep["error"]["kind"] == "parse" and rep["error"]["line"] == 2


@pytest.mark.parametrize("name, betti", [
    ("heisenberg", [1, 2, 2, 1]), ("sol", [1, 1, 1, 1]), ("sol_std", [1, 3, 3, 1]),
    ("hyperbolic_k1", [1, 2, 2, 2, 1]), ("kodaira_thurston", [1, 3, 4, 3, 1]),
])
def test_betti_agree(capsys, name, betti):
    code, out = invoke(capsys, "betti", "--input", fx(name))
    rep = json.loads(out)
    assert code == 0
    assert rep["verdict"] == "AGREE"
    assert rep["ce"]["betti"] == betti == rep["oracle"]["betti"]


def test_betti_without_oracle(capsys):
    code, out = invoke(capsys, "betti", "--input", fx("filiform4"))
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "NO_ORACLE"


def test_betti_disagree(capsys, tmp_path):
    doc = json.loads(dumps(fixtures.build("sol")))
    doc["oracle"]["A"] = [["1", "1"], ["0", "1"]]
    p = tmp_path / "wrong_oracle.json"
    p.write_text(json.dumps(doc))
    code, out = invoke(capsys, "betti", "--input", str(p))
    assert code == 1 and json.loads(out)["verdict"] == "DISAGREE"


def test_lefschetz_exit_codes(capsys):
    code, out = invoke(capsys, "lefschetz", "--input", fx("hyperbolic_k1"))
    assert code == 0 and json.loads(out)["verdict"] == "HLP_VERIFIED"
    code, out = invoke(capsys, "lefschetz", "--input", fx("kodaira_thurston"))
    rep = json.loads(out)
    assert code == 4 and rep["verdict"] == "HLP_FAILS" and rep["failing_levels"] == [1]
    level = rep["certificate"]["levels"][1]
    assert level["shape"] == [3, 3] and level["rank"] < 3
    code, out = invoke(capsys, "lefschetz", "--input", fx("sol"))
    assert code == 2 and json.loads(out)["error"]["kind"] == "OddDimension"


def test_lefschetz_needs_trivial_module(capsys):
    code, out = invoke(capsys, "lefschetz", "--input", fx("sol_std"))
    assert code == 2 and json.loads(out)["error"]["kind"] == "UsageError"


def test_psi_test(capsys):
    code, out = invoke(capsys, "psi-test", "--input", fx("heisenberg"), "--samples", "5", "--seed", "2")
    rep = json.loads(out)
    assert code == 0 and rep["verdict"] == "PASS" and rep["counterexamples"] == 0
    assert [d["degree"] for d in rep["degrees"]] == [0, 1, 2, 3]


def test_psi_test_usage_errors(capsys):
    assert invoke(capsys, "psi-test", "--input", fx("sol"), "--samples", "0")[0] == 2
    assert invoke(capsys, "psi-test", "--input", fx("sol"), "--max-degree", "9")[0] == 2


def test_minimal_model(capsys):
    code, out = invoke(capsys, "minimal-model", "--input", fx("heisenberg"))
    rep = json.loads(out)
    assert code == 0 and rep["minimal"] and rep["notes"] == []
    assert rep["differential"]["z"] == "-x^y"


def test_minimal_model_mentions_torus_action(capsys):
    code, out = invoke(capsys, "minimal-model", "--input", fx("sol"))
    rep = json.loads(out)
    assert code == 0 and any("T acts" in n for n in rep["notes"])


def test_markdown(capsys):
    code, out = invoke(capsys, "betti", "--input", fx("heisenberg"), "--format", "markdown")
    assert code == 0
    assert out.startswith("#") and "AGREE" in out
    with pytest.raises(json.JSONDecodeError):
        json.loads(out)


@pytest.mark.parametrize("command", ["check", "betti", "minimal-model", "lefschetz", "psi-test"])
def test_reports_are_deterministic_and_exact(command):
    cfg = RunConfig(command, fx("hyperbolic_k1"), samples=4, seed=9)
    a, code_a = run(cfg)
    b, code_b = run(cfg)
    assert render_json(a) == render_json(b) and code_a == code_b
    assert render_markdown(a) == render_markdown(b)
    assert not any(isinstance(v, float) for v in _walk(a))


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hullcoh", "betti", "--input", fx("sol")],
                          capture_output=True, text=True, cwd=ROOT)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "AGREE"


def test_unknown_command_is_usage_error():
    proc = subprocess.run([sys.executable, "-m", "hullcoh", "frobnicate", "--input", fx("sol")],
                          capture_output=True, text=True, cwd=ROOT)
    assert proc.returncode == 2
