import json
import math
import subprocess
import sys

import pytest

from harperlab.cli import (
    ExperimentConfig,
    canonical_json,
    config_from_args,
    build_parser,
    main,
    run,
    sweep_seeds,
    verify,
)


def cli(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "harperlab.cli", *args],
        capture_output=True,
        text=True,
    )
    return proc


def test_config_round_trip_byte_identical():
    cfg = ExperimentConfig(
        experiment="le",
        coupling=[0.1, 0.5, 0.2],
        frequency="golden",
        theta=0.135,
        params={"n": 2000, "grid": 8, "E": 0.3},
        seed=7,
    )
    text = cfg.to_json()
    back = ExperimentConfig.from_json(text)
    assert back.to_json() == text
    assert back.config_hash() == cfg.config_hash()


def test_sweep_seeds_deterministic():
    assert sweep_seeds(42, 5) == sweep_seeds(42, 5)
    assert sweep_seeds(42, 5) != sweep_seeds(43, 5)


def test_le_command_matches_formula(tmp_path):
    out = tmp_path / "le.csv"
    proc = cli(
        "le",
        "--coupling",
        "0,0.5,0",
        "--freq",
        "golden",
        "--E",
        "0.0065",
        "--n",
        "5000",
        "--grid",
        "8",
        "--format",
        "csv",
        "--out",
        str(out),
    )
    assert proc.returncode == 0, proc.stderr
    record = json.loads(proc.stdout)
    assert record["result"]["formula"] == pytest.approx(math.log(2))
    assert record["result"]["estimate"]["value"] == pytest.approx(math.log(2), rel=0.05)
    header, row = out.read_text().strip().split("\n")
    assert header.startswith("lambda1,lambda2,lambda3,alpha,E,n,grid,value")


def test_forge_rerun_byte_identical(tmp_path):
    f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
    args = ["forge", "--base", "golden", "--n0", "5", "--beta", "0.5", "--levels", "3"]
    assert cli(*args, "--out", str(f1)).returncode == 0
    assert cli(*args, "--out", str(f2)).returncode == 0
    assert f1.read_bytes() == f2.read_bytes()
    digits = json.loads(f1.read_text())
    assert all(isinstance(d, str) for d in digits)


def test_forged_file_usable_as_frequency(tmp_path):
    f = tmp_path / "freq.json"
    cli("forge", "--base", "golden", "--n0", "4", "--beta", "0.4", "--levels", "2", "--out", str(f))
    proc = cli("spectrum", "--coupling", "0,0.5,0", "--freq", str(f), "--size", "16")
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["count"] == 16


def test_duality_self_dual_distance_zero():
    proc = cli(
        "duality", "--coupling", "0,1,0", "--freq", "golden", "--size", "64", "--phases", "2"
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["distance"] == 0.0


def test_validation_error_exit_2():
    proc = cli("le", "--coupling", "0.1,-0.5,0.2", "--E", "1.0", "--n", "1000", "--grid", "2")
    assert proc.returncode == 2


def test_numeric_error_exit_3():
    proc = cli(
        "commutant",
        "--coupling",
        "0,0.5,0",
        "--freq",
        "golden",
        "--rho",
        "golden/2",
        "--bandwidth",
        "10",
    )
    assert proc.returncode == 3
    assert "DivisorFloorViolated" in proc.stderr


def test_record_determinism_and_threads():
    base = dict(
        experiment="duality",
        coupling=[0.1, 0.5, 0.2],
        frequency="golden",
        params={"size": 48, "phases": 3},
    )
    r1 = run(ExperimentConfig(**base, threads=1))
    r2 = run(ExperimentConfig(**base, threads=2))
    del r1["meta"], r2["meta"]
    del r1["config"], r2["config"]  # differ only in the threads knob
    r1.pop("config_hash"), r2.pop("config_hash")
    assert canonical_json(r1) == canonical_json(r2)


def test_verify_suite_pass_fail_empty(tmp_path, capsys):
    good = {
        "suite": [
            {
                "name": "selfdual",
                "config": {
                    "experiment": "duality",
                    "coupling": [0, 1, 0],
                    "frequency": "golden",
                    "params": {"size": 32, "phases": 2},
                },
                "expect": {"result.distance": {"value": 0.0, "tol": 1e-12}},
            }
        ]
    }
    p = tmp_path / "suite.json"
    p.write_text(json.dumps(good))
    assert main(["verify", str(p)]) == 0

    bad = json.loads(json.dumps(good))
    bad["suite"][0]["expect"]["result.distance"]["value"] = 0.7
    p.write_text(json.dumps(bad))
    assert main(["verify", str(p)]) == 1

    p.write_text(json.dumps({"suite": []}))
    assert main(["verify", str(p)]) == 0
    assert "empty suite" in capsys.readouterr().out


def test_verify_expected_error_rows(tmp_path):
    suite = {
        "suite": [
            {
                "name": "resonant-commutant",
                "config": {
                    "experiment": "commutant",
                    "frequency": "golden",
                    "params": {"rho": "golden/2", "bandwidth": 8},
                },
                "expect_error": "DivisorFloorViolated",
            }
        ]
    }
    p = tmp_path / "suite.json"
    p.write_text(json.dumps(suite))
    assert main(["verify", str(p)]) == 0


def test_run_config_file(tmp_path):
    cfg = ExperimentConfig(
        experiment="spectrum",
        coupling=[0, 1, 0],
        frequency="silver",
        params={"size": 8},
    )
    p = tmp_path / "cfg.json"
    p.write_text(cfg.to_json())
    proc = cli("run-config", str(p))
    assert proc.returncode == 0
    rec = json.loads(proc.stdout)
    assert rec["config_hash"] == cfg.config_hash()
    assert rec["result"]["count"] == 8


def test_parser_covers_all_experiments():
    parser = build_parser()
    args = parser.parse_args(["le", "--coupling", "0,0.5,0"])
    cfg = config_from_args(args)
    assert cfg.experiment == "le"
    assert cfg.params["n"] == 100000


def test_bundled_acceptance_suite_passes():
    import harperlab

    suite = harperlab.__path__[0] + "/data/acceptance_suite.json"
    proc = cli("verify", suite)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert proc.stdout.count("PASS") == 7
    assert "FAIL" not in proc.stdout


def test_convergent_serialization():
    from harperlab.contfrac import golden

    data = json.loads(golden().convergents_to_json(5))
    assert data[0] == ["0", "1"]
    assert data[5] == ["5", "8"]


def test_module_warnings_surface_in_record():
    rec = run(
        ExperimentConfig(
            experiment="forge",
            frequency="golden",
            params={"base": "golden", "n0": 4, "beta": 2.0, "levels": 8,
                    "schedule": "constant", "cap": 60},
        )
    )
    assert rec["result"]["truncated"] is True
    assert any("digit cap" in w for w in rec["warnings"])
