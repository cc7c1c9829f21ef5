import csv
import json
import subprocess
import sys

import numpy as np
import pytest

from heisenberg_orbits.cli import main
from heisenberg_orbits.groups import ModelParams
from heisenberg_orbits.harness import (SCHEMA, RunConfig, emit_orbit_traces, load_config_file,
                                       run)
from heisenberg_orbits.verification import DEFAULT_TOLERANCES, SUITES


def small(**kw):
    base = dict(samples=100, pairs=50, omega_samples=20, fourier_functions=4)
    return RunConfig(**{**base, **kw})


def test_group_axioms_seed_one_passes(tmp_path):
    rep = run(small(suites=("group-axioms",), seed=1, out=str(tmp_path)))
    assert rep.passed and len(list(rep.checks())) > 0
    doc = json.loads((tmp_path / "report.json").read_text())
    assert doc["schema"] == SCHEMA and doc["passed"] is True
    for c in doc["suites"]["group-axioms"]["checks"]:
        assert c["anchor"] and c["passed"] and c["residual"] <= c["tolerance"]
    for name in ("residuals.csv", "convergence.csv", "traces.csv"):
        assert (tmp_path / name).exists()
    rows = list(csv.DictReader(open(tmp_path / "residuals.csv")))
    assert rows and all(float(r["wall_time_s"]) >= 0 for r in rows)


def test_empty_suite_list_passes():
    rep = run(RunConfig(suites=()))
    assert rep.passed and list(rep.checks()) == []
    assert json.loads(rep.to_json())["suites"] == {}


def test_coarse_plancherel_fails_only_grid_route():
    rep = run(small(suites=("plancherel",), grid_points=16))
    checks = {c.name: c for _, c in rep.checks()}
    assert not rep.passed
    assert checks["plancherel_closed"].passed
    assert not checks["plancherel_grid"].passed
    assert checks["plancherel_grid"].residual > checks["plancherel_grid"].tolerance


def test_reports_are_deterministic():
    cfg = small(suites=("group-axioms", "dressing"), seed=7)
    assert run(cfg).to_json() == run(cfg).to_json()


def test_seed_changes_residuals():
    a = run(small(suites=("dressing",), seed=1)).to_json()
    b = run(small(suites=("dressing",), seed=2)).to_json()
    assert a != b


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(suites=("nope",))
    with pytest.raises(ValueError):
        RunConfig(tolerances={"nope": 1.0})
    with pytest.raises(ValueError):
        RunConfig(grid_points=4)
    assert set(SUITES) == {"group-axioms", "dressing", "measures", "representations",
                           "topology", "moyal", "plancherel"}


def test_tolerance_override_flips_a_check():
    rep = run(small(suites=("group-axioms",), tolerances={"group_assoc": 0.0,
                                                          "group_inverse": 0.0}))
    assert not rep.passed
    assert RunConfig(tolerances={"trace": 1e-2}).tol["trace"] == 1e-2
    assert RunConfig().tol == DEFAULT_TOLERANCES


def test_config_file(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("# comment\nlambda = 0.5\ngrid-n = 64\nsuite = group-axioms\n"
                 "suite = dressing, measures\ntolerance.trace = 1e-3\nparallel = yes\n")
    kw = load_config_file(p)
    assert kw == {"lam": 0.5, "grid_points": 64, "suites": ("group-axioms", "dressing", "measures"),
                  "tolerances": {"trace": 1e-3}, "parallel": True}
    p.write_text("bogus = 1\n")
    with pytest.raises(ValueError):
        load_config_file(p)
    p.write_text("no equals sign\n")
    with pytest.raises(ValueError):
        load_config_file(p)


def test_parallel_matches_sequential():
    cfg = small(suites=("group-axioms", "dressing"))
    from dataclasses import replace
    assert run(cfg).to_json() == run(replace(cfg, parallel=True)).to_json()


# traces --------------------------------------------------------------------------------

def test_trace_examples(tmp_path):
    P = ModelParams(0.0)
    pts = [np.array([1.0, 1, 0, 0]), np.array([0.0, 0, 0, 3]), np.array([1.0, 0, 0, 0])]
    rows = emit_orbit_traces(P, pts, tmp_path / "t.csv", n_points=21)
    hyper = np.array([r[2:] for r in rows if r[0] == 0])
    assert np.allclose(hyper[:, 0] * hyper[:, 1], 1.0) and np.all(hyper[:, 0] > 0)
    assert [r[2:] for r in rows if r[0] == 1] == [[0.0, 0.0]]
    ray = np.array([r[2:] for r in rows if r[0] == 2])
    assert np.all(ray[:, 0] > 0) and np.all(ray[:, 1] == 0)
    header = (tmp_path / "t.csv").read_text().splitlines()[0]
    assert header == "orbit,kind,p1,q1"


# CLI ---------------------------------------------------------------------------------------

def test_cli_exit_codes(tmp_path, capsys):
    assert main(["run", "--suite", "group-axioms", "--seed", "1", "--samples", "50",
                 "--out", str(tmp_path / "a")]) == 0
    assert "PASSED" in capsys.readouterr().out
    assert main(["run", "--suite", "plancherel", "--grid-n", "16"]) == 1
    assert main(["run", "--no-suites"]) == 0
    assert main(["run", "--grid-n", "2", "--no-suites"]) == 2
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert main(["run", "--no-suites", "--out", str(blocker / "sub")]) == 2
    assert main([]) == 2
    with pytest.raises(SystemExit):
        main(["run", "--suite", "unknown"])


def test_cli_tolerance_and_config(tmp_path):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("suite = group-axioms\nsamples = 20\n")
    assert main(["run", "--config", str(cfg), "--tolerance", "group_assoc=0"]) == 1
    assert main(["run", "--config", str(cfg)]) == 0
    assert main(["run", "--config", str(cfg), "--tolerance", "bogus=1"]) == 2


def test_cli_traces_stdout(capsys):
    assert main(["traces", "--point", "1,1,0,0", "--n-points", "5"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "orbit,kind,p1,q1" and len(lines) == 6


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "heisenberg_orbits.cli", "--version"],
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "0.1.0"
