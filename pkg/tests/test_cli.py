import json
import subprocess
import sys

import pytest

from toricdeg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_string_polytope(capsys):
    code, out, _ = run(capsys, "string", "polytope", "--type", "A2", "--word", "1,2,1", "--lambda", "2,3")
    assert code == 0
    assert json.loads(out) == {"lattice_points": 42, "volume": "15", "weyl_dim": 42}


def test_string_polytope_verbose(capsys):
    code, out, _ = run(capsys, "string", "polytope", "--type", "A1", "--word", "1", "--lambda", "3", "--verbose")
    data = json.loads(out)
    assert code == 0 and data["points"] == [[0], [1], [2], [3]]


def test_string_cone_a1(capsys):
    code, out, _ = run(capsys, "string", "cone", "--type", "A1", "--word", "1")
    data = json.loads(out)
    assert code == 0 and data["rays"] == [[1]] and data["lineality"] == []


def test_bad_word_is_a_validation_error(capsys):
    code, out, err = run(capsys, "string", "cone", "--type", "A2", "--word", "1,1,2")
    assert code == 2 and out == ""
    assert json.loads(err)["exit_code"] == 2


def test_usage_error(capsys):
    code, _, err = run(capsys, "string", "frobnicate", "--type", "A2", "--word", "1")
    assert code == 2 and json.loads(err)["error"] == "UsageError"


@pytest.mark.parametrize("name", ["sl2", "sl3-string-121"])
def test_degen_build(capsys, name):
    code, out, _ = run(capsys, "degen", "build", "--example", name)
    data = json.loads(out)
    assert code == 0
    assert all(m >= 1 for row in data["t_exponents"] for m in row)


def test_degen_build_and_check(capsys, tmp_path):
    fam = tmp_path / "fam.json"
    assert run(capsys, "degen", "build", "--example", "sl3-string-121", "--out", str(fam))[0] == 0
    code, out, _ = run(capsys, "degen", "check", str(fam))
    data = json.loads(out)
    assert code == 0 and data["valuation_check"]["passed"]
    assert data["faces"] and all(f["dropped_relations_vanish"] for f in data["faces"])


def test_ghflow_run_report(capsys, tmp_path):
    rep = tmp_path / "traj.json"
    code, _, _ = run(
        capsys, "ghflow", "run", "--example", "hyperbola", "--start", "[[0.8, 0.6], [0.8, -0.6], 1]",
        "--t-end", "0.1", "--report", str(rep),
    )
    inv = json.loads(rep.read_text())["invariants"]
    assert code == 0 and inv["psi_drift"] < 1e-6


def test_ghflow_limit(capsys):
    code, out, _ = run(capsys, "ghflow", "limit", "--example", "hyperbola", "--start", "[2, 0.5, 1]")
    data = json.loads(out)
    assert code == 0
    z1, z2 = (complex(*c) for c in data["z"])
    assert abs(z1 * z2) < 1e-5
    assert data["error"] >= 0


def test_ghflow_missing_family(capsys, tmp_path):
    code, _, err = run(capsys, "ghflow", "run", "--family", str(tmp_path / "nope.json"), "--start", "[1, 1, 1]")
    assert code == 2 and "not found" in json.loads(err)["message"]


def test_ghflow_unknown_config_key(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"rtol": 1e-9, "speed": 3}')
    code, _, err = run(
        capsys, "ghflow", "run", "--example", "hyperbola", "--start", "[1, 1, 1]", "--config", str(cfg)
    )
    assert code == 2 and "speed" in json.loads(err)["message"]


def test_width_wall(capsys):
    code, out, _ = run(capsys, "width", "report", "--type", "A2", "--word", "1,2,1", "--lambda", "0,3")
    data = json.loads(out)
    assert code == 0 and data["ell"] == "3"
    assert data["embedding"]["certificate"]["size"] == "3"


def test_width_regular(capsys):
    code, out, _ = run(capsys, "width", "report", "--type", "A2", "--word", "1,2,1", "--lambda", "2,3")
    data = json.loads(out)
    assert data["orbit_volume"] == data["fiber_volume"] == "15"


def test_width_zero_weight_warns(capsys):
    code, out, err = run(capsys, "width", "report", "--type", "A2", "--word", "1,2,1", "--lambda", "0,0")
    assert code == 0 and json.loads(out)["ell"] == "0"
    assert "warning" in json.loads(err)


def test_outputs_are_byte_identical(tmp_path):
    args = [sys.executable, "-m", "toricdeg.cli", "degen", "build", "--example", "sl3-string-121"]
    a = subprocess.run(args, capture_output=True, check=True).stdout
    b = subprocess.run(args, capture_output=True, check=True).stdout
    assert a == b and a


def test_check_all(capsys):
    code, out, _ = run(capsys, "check", "all", "--no-timing")
    data = json.loads(out)
    assert code == 0 and data["passed"] and len(data["checks"]) == 8
