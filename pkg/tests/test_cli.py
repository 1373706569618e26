import json
import subprocess
import sys

import pytest

from cascade_grid.cli import main
from cascade_grid.distribution import DegreeDistribution, write_pmf_csv

CONFIG = {
    "comm": {"kind": "sf", "n": 300, "seed": 1},
    "power": {"kind": "er", "n": 100, "p": 0.05, "seed": 2},
    "attacks": ["random", "targeted"],
    "x_values": [0, 30],
    "replications": 3,
    "base_seed": 4,
}


@pytest.fixture
def config(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(CONFIG))
    return path


def test_experiment_writes_csvs(config, tmp_path, capsys):
    out = tmp_path / "res" / "raw.csv"
    assert main(["experiment", "--config", str(config), "--output", str(out)]) == 0
    assert len(out.read_text().splitlines()) == 1 + 2 * 2 * 3
    assert (tmp_path / "res" / "raw_summary.csv").exists()


def test_experiment_stdout_and_compare(config, capsys):
    assert main(["experiment", "--config", str(config)]) == 0
    assert capsys.readouterr().out.startswith("kind,x,mean_mu_A")
    assert main(["experiment", "--config", str(config), "--compare"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("kind,x,mu_sim_A") and len(lines) == 5


def test_generate_attack_cascade(config, tmp_path, capsys):
    grid_dir = tmp_path / "grid"
    assert main(["generate", "--config", str(config), "--out", str(grid_dir)]) == 0
    dump = tmp_path / "attacked.txt"
    assert main(["attack", "--grid", str(grid_dir), "--attack", "targeted", "--x", "12", "--dump", str(dump)]) == 0
    assert len(set(dump.read_text().split())) == 12
    trace = tmp_path / "trace.csv"
    assert main(["--backend", "python", "cascade", "--grid", str(grid_dir), "--attack", "targeted", "--x", "12",
                 "--trace", str(trace)]) == 0
    assert "converged=True" in capsys.readouterr().out
    assert trace.read_text().startswith("stage,side,removed_count")


def test_analytic_commands(config, tmp_path, capsys):
    pmf = tmp_path / "pmf.csv"
    write_pmf_csv(DegreeDistribution.poisson(4.0, kmax=80), pmf)
    assert main(["analytic", "--dist", str(pmf), "--phi", "1"]) == 0
    out = capsys.readouterr().out
    assert "mu=0.98017" in out
    assert main(["analytic", "cascade", "--config", str(config), "--x", "0", "30", "--critical"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "kind,x,steady_mu_A,steady_mu_B,stages"
    assert sum(line.startswith("# critical") for line in out) == 2


@pytest.mark.parametrize("argv", [
    ["experiment", "--config", "/nonexistent.json"],
    ["attack", "--grid", "/nonexistent", "--attack", "random", "--x", "1"],
    ["analytic", "--dist", "/nonexistent.csv", "--phi", "0.5"],
])
def test_errors_exit_nonzero(argv, capsys):
    assert main(argv) == 1
    assert "cascade-grid: error:" in capsys.readouterr().err


def test_bad_values_exit_nonzero(config, tmp_path, capsys):
    grid_dir = tmp_path / "grid"
    main(["generate", "--config", str(config), "--out", str(grid_dir)])
    assert main(["attack", "--grid", str(grid_dir), "--attack", "random", "--x", "5000"]) == 1
    pmf = tmp_path / "pmf.csv"
    write_pmf_csv(DegreeDistribution.poisson(4.0), pmf)
    assert main(["analytic", "--dist", str(pmf), "--phi", "2"]) == 1


def test_usage_errors():
    with pytest.raises(SystemExit) as exc:
        main(["attack", "--attack", "random"])
    assert exc.value.code != 0
    with pytest.raises(SystemExit) as exc:
        main(["analytic"])
    assert exc.value.code != 0


def test_console_entry_point(config):
    proc = subprocess.run([sys.executable, "-m", "cascade_grid.cli", "experiment", "--config", str(config)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.count("\n") == 5
