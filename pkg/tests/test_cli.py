import json
import subprocess
import sys

import pytest

from reflrigid.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_geom(capsys):
    code, out, _ = call(capsys, "geom", "--k", "2,3,7")
    assert code == 0
    doc = json.loads(out)
    assert set(doc) == {"command", "inputs", "results", "tolerances"}
    assert doc["inputs"] == {"k": [2, 3, 7]}
    assert doc["results"]["cross_ratios"] == pytest.approx(
        [0.5, 0.25, 0.0495155660487904], abs=1e-10)
    assert all(o["verified"] for o in doc["results"]["orders"])
    assert doc["tolerances"]["grid_tol"] == 1e-6


def test_expected_dim(capsys):
    code, out, _ = call(capsys, "expected-dim", "--n", "3")
    assert code == 0
    assert json.loads(out)["results"] == {"expected_dimension": -8}


@pytest.mark.parametrize("argv, name", [
    (["geom", "--k", "3,3,3"], "NotHyperbolic"),
    (["conf6", "--lambda", "0.9,0.9,0.9", "--n", "1"], "NonRealRoots"),
    (["conf6", "--lambda", "0.5,1,0.3", "--n", "1"],
     "DegenerateCoefficients"),
    (["embed", "--k", "3,4,5", "--kind", "symplectic", "--n", "2",
      "--signature", "2,1"], "SignatureMismatch"),
])
def test_domain_errors_exit_1(capsys, argv, name):
    code, out, _ = call(capsys, *argv)
    assert code == 1
    doc = json.loads(out)
    assert doc["error"] == name and doc["detail"]


@pytest.mark.parametrize("argv", [
    [],
    ["geom"],
    ["geom", "--k", "2,3"],
    ["geom", "--k", "2,3,7", "--bogus"],
    ["expected-dim", "--n", "0"],
    ["conf6", "--n", "2"],
    ["conf6", "--k", "2,3,7", "--lambda", "0.5,0.25,0.04", "--n", "2"],
    ["probe", "--k", "2,3,7", "--kind", "diagonal", "--n", "2",
     "--magnitude", "-1"],
    ["embed", "--k", "2,3,7", "--kind", "nope", "--n", "2"],
])
def test_usage_errors_exit_2(capsys, argv):
    code, _, err = call(capsys, *argv)
    assert code == 2
    assert err


def test_bad_tol_file_is_usage_error(capsys, tmp_path):
    path = tmp_path / "tol.json"
    path.write_text(json.dumps({"nonsense": 1}))
    code, _, _ = call(capsys, "geom", "--k", "2,3,7", "--tol-file", str(path))
    assert code == 2


def test_tol_file_overrides(capsys, tmp_path):
    path = tmp_path / "tol.json"
    path.write_text(json.dumps({"grid_tol": 1e-4}))
    code, out, _ = call(capsys, "geom", "--k", "2,3,7", "--tol-file",
                        str(path))
    assert code == 0
    assert json.loads(out)["tolerances"]["grid_tol"] == 1e-4


def test_conf6_invariants_round_trip(capsys, tmp_path):
    out_path = tmp_path / "configs.json"
    code, _, _ = call(capsys, "conf6", "--lambda", "0.5,0.25,0.04", "--n",
                      "2", "--out", str(out_path))
    assert code == 0
    doc = json.loads(out_path.read_text())
    assert doc["inputs"]["lambda"] == [0.5, 0.25, 0.04]
    assert doc["results"]["count"] == 3
    code, out, _ = call(capsys, "invariants", "--config", str(out_path))
    assert code == 0
    configs = json.loads(out)["results"]["configurations"]
    assert len(configs) == 3
    for c in configs:
        assert c["lambda"] == pytest.approx([0.5, 0.25, 0.04], abs=1e-9)


def test_symmetric_conf6_and_maslov(capsys):
    code, out, _ = call(capsys, "conf6", "--k", "3,4,5", "--n", "2",
                        "--symmetric", "--signature", "1,1")
    assert code == 0
    assert json.loads(out)["results"]["count"] == 3
    code, out, _ = call(capsys, "maslov", "--k", "3,4,5", "--n", "3",
                        "--signature", "2,1")
    assert code == 0
    assert sorted(json.loads(out)["results"]["maslov_index"]) == [1, 2]


def test_invariants_from_rep(capsys):
    code, out, _ = call(capsys, "invariants", "--k", "2,3,7", "--kind",
                        "diagonal", "--n", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "invariants"


def test_probe_is_deterministic(capsys):
    argv = ["probe", "--k", "2,3,7", "--kind", "diagonal", "--n", "2",
            "--trials", "3", "--seed", "42"]
    code, out1, _ = call(capsys, *argv)
    assert code == 0
    _, out2, _ = call(capsys, *argv, "--workers", "2")
    r1 = json.loads(out1)["results"]
    r2 = json.loads(out2)["results"]
    assert r1["trials"] == r2["trials"]
    assert r1["summary"]["conjugate_to_base"] == 3


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "reflrigid", "expected-dim",
                           "--n", "2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["expected_dimension"] == -3
