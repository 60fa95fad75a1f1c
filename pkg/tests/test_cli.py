import json
import subprocess
import sys

import pytest

from projschwarz.cli import main

SCENARIO = {
    "dimension": 2,
    "lambda": 0.3,
    "maps": {
        "shear": ["x1 + x2^2", "x2"],
        "id": ["x1", "x2"],
        "m": {"moebius": [[1, 0.2, 0], [0, 1, 0.1], [0.2, 0.1, 1]]},
    },
    "operator": {"a2": {"1,1": "1 + x1", "2,2": "1"}, "a1": {"2": "x2"}, "a0": "3"},
    "points": [[0.3, 0.7], [0.1, -0.2]],
}
LINE = {"dimension": 1, "maps": {"sq": ["x1^2"], "dbl": ["2*x1"]}, "potential": "1.5", "points": [[1.0]]}


@pytest.fixture
def files(tmp_path):
    a = tmp_path / "plane.json"
    a.write_text(json.dumps(SCENARIO))
    b = tmp_path / "line.json"
    b.write_text(json.dumps(LINE))
    return str(a), str(b)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_schwarzian(files, capsys):
    code, out, _ = run(capsys, "eval", "--scenario", files[0], "--what", "schwarzian", "--map", "shear", "--at", "0.3,0.7")
    assert code == 0
    assert json.loads(out) == {"t": {"1,2,2": 2.0}, "u": {}}


def test_eval_classical(files, capsys):
    code, out, _ = run(capsys, "eval", "--scenario", files[1], "--what", "classical", "--map", "sq", "--at", "1")
    assert code == 0 and json.loads(out) == pytest.approx(-1.5)


def test_eval_ell_identity(files, capsys):
    code, out, _ = run(capsys, "eval", "--scenario", files[0], "--what", "ell", "--map", "id", "--at", "0.3,0.7")
    assert code == 0 and json.loads(out) == {}


def test_eval_over_scenario_points(files, capsys):
    code, out, _ = run(capsys, "eval", "--scenario", files[0], "--what", "ell", "--map", "m")
    rows = json.loads(out)
    assert code == 0 and [r["point"] for r in rows] == SCENARIO["points"]
    assert all(all(abs(v) < 1e-12 for v in r["value"].values()) for r in rows)


@pytest.mark.parametrize("what", ["symbol", "act-direct", "act-explicit", "tdiff"])
def test_eval_operator_queries(files, capsys, what):
    args = ["eval", "--scenario", files[0], "--what", what, "--at", "0.3,0.7"]
    if what != "symbol":
        args += ["--map", "shear"]
    code, out, _ = run(capsys, *args)
    assert code == 0
    assert isinstance(json.loads(out), dict)


def test_eval_sturm_liouville(files, capsys):
    code, out, _ = run(capsys, "eval", "--scenario", files[1], "--what", "sturm-liouville", "--map", "dbl", "--at", "0.5")
    res = json.loads(out)
    assert code == 0 and res["v"] == pytest.approx(1.5 / 4)
    assert res["target_point"] == [1.0]


def test_errors_are_structured_json(files, capsys):
    code, out, err = run(capsys, "eval", "--scenario", files[1], "--what", "schwarzian", "--map", "sq", "--at", "1")
    assert code == 1 and out == ""
    assert json.loads(err)["error"]["type"] == "DimensionError"
    code, _, err = run(capsys, "eval", "--scenario", files[0], "--what", "ell", "--map", "nope", "--at", "0,0")
    assert code == 1 and json.loads(err)["error"]["type"] == "ScenarioError"
    code, _, err = run(capsys, "eval", "--scenario", files[0], "--what", "ell", "--map", "id", "--at", "0")
    assert code == 1
    code, _, err = run(capsys, "eval", "--scenario", "/nonexistent.json", "--what", "ell", "--map", "id")
    assert code == 1 and "error" in json.loads(err)


def test_check_command(capsys):
    code, out, _ = run(capsys, "check", "--suite", "jet-ring,sigma-roundtrip", "--seed", "3", "--trials", "5")
    assert code == 0
    assert out.splitlines()[0].startswith("PASS jet-ring")
    code, out, _ = run(capsys, "check", "--suite", "jet-ring", "--json")
    assert code == 0 and json.loads(out)["passed"] is True
    code, _, _ = run(capsys, "check", "--suite", "schwarzian-cocycle", "--trials", "3", "--tol", "1e-300")
    assert code == 1
    code, _, err = run(capsys, "check", "--suite", "bogus")
    assert code == 1 and json.loads(err)["error"]["type"] == "ScenarioError"


def test_module_entry_point(files):
    proc = subprocess.run(
        [sys.executable, "-m", "projschwarz", "eval", "--scenario", files[1], "--what", "classical", "--map", "sq", "--at", "1"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout) == pytest.approx(-1.5)
