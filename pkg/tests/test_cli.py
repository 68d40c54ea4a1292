"""End-to-end command-line tests: exit codes, determinism, output shape."""

import json
import subprocess
import sys

import pytest

from liftcert.cli import bundled_scenario_path, main


def run_cli(args):
    proc = subprocess.run([sys.executable, "-m", "liftcert.cli"] + list(args),
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


BUNDLED = ["ex23", "ex34", "ex45", "sec51_d2", "lem54", "thm55"]


def test_verify_paper_all_bundled():
    for eid in BUNDLED:
        code, out, err = run_cli(["verify-paper", eid])
        assert code == 0, (eid, out, err)
        assert out.strip().endswith("PASS")


def test_run_scenario_json_byte_identical():
    path = bundled_scenario_path("ex45")
    code1, out1, _ = run_cli(["run", str(path)])
    code2, out2, _ = run_cli(["run", str(path)])
    assert code1 == code2 == 0
    assert out1 == out2
    payload = json.loads(out1)
    assert payload["verified"] is True


def test_timing_flag_is_the_only_nondeterminism():
    path = bundled_scenario_path("lem54")
    _, plain, _ = run_cli(["run", str(path)])
    _, timed, _ = run_cli(["run", str(path), "--timing"])
    assert "wall_clock_s" not in plain
    assert "wall_clock_s" in timed


def test_length_subcommand():
    code, out, _ = run_cli(["length", "--vars", "x,y",
                            "--gens", "x^2,y^2", "--format", "json"])
    assert code == 0
    assert json.loads(out)["tasks"][0]["result"]["length"] == 4


def test_dim_and_spread_subcommands():
    code, out, _ = run_cli(["dim", "--vars", "x,y,z", "--gens", "x^2,y^2",
                            "--horizon", "8", "--format", "json"])
    assert code == 0 and json.loads(out)["tasks"][0]["result"]["dim"] == 1
    code, out, _ = run_cli(["spread", "--vars", "x,y,z", "--gens", "x,y",
                            "--horizon", "8", "--format", "json"])
    assert code == 0 and json.loads(out)["tasks"][0]["result"]["spread"] == 2


def test_mu_subcommand():
    code, out, _ = run_cli(["mu", "--vars", "x,y",
                            "--gens", "x^2,y^2,x^2 + y^2",
                            "--format", "json"])
    assert code == 0 and json.loads(out)["tasks"][0]["result"]["mu"] == 2


def test_fitt_subcommand():
    code, out, _ = run_cli(["fitt", "--vars", "x,y",
                            "--matrix", "x,y;y,x", "-i", "0",
                            "--format", "json"])
    assert code == 0
    gens = json.loads(out)["tasks"][0]["result"]["generators"]
    assert any("x^2" in g for g in gens)


def test_growth_subcommand():
    code, out, _ = run_cli(["growth", "1,4,9,16,25,36,49,64,81",
                            "--format", "json"])
    assert code == 0 and json.loads(out)["tasks"][0]["result"]["degree"] == 2


def test_tor_and_depth_subcommands():
    path = str(bundled_scenario_path("ex23"))
    code, out, _ = run_cli(["tor", path, "-i", "1", "--n-max", "4"])
    assert code == 0
    rep = json.loads(out)["tasks"][0]["result"]
    assert rep["stable_image_dim"] == 0
    code, out, _ = run_cli(["depth", path, "--n-max", "4"])
    assert code == 0
    assert json.loads(out)["tasks"][0]["result"]["depth"] == 2


def test_exit_code_2_on_bad_input():
    code, _, err = run_cli(["length", "--vars", "x,y", "--gens", "x^2 +"])
    assert code == 2
    code, _, _ = run_cli(["run", "/nonexistent/path.json"])
    assert code == 2
    code, _, _ = run_cli(["verify-paper", "no_such_example"])
    assert code == 2


def test_exit_code_3_on_cap_exceeded():
    # (x^2) in two variables is not Artinian: the colength cap trips.
    code, _, err = run_cli(["length", "--vars", "x,y", "--gens", "x^2"])
    assert code == 3


def test_exit_code_1_on_failed_expectation(tmp_path):
    path = bundled_scenario_path("ex45")
    doc = json.loads(path.read_text())
    wrong = doc["expect"]["fitting_sequence"]["lengths"]
    doc["expect"]["fitting_sequence"]["lengths"] = [1] * len(wrong)
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, out, _ = run_cli(["run", str(bad)])
    assert code == 1


def test_main_callable_directly(capsys):
    assert main(["verify-paper", "ex34"]) == 0
    assert main(["verify-paper", "no_such_example"]) == 2
