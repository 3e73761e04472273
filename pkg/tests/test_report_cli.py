"""Report assembly, determinism, and the command line contract."""

import json

import numpy as np
import pytest

from ihox import cli, report
from ihox.errors import ConfigError

EXPECTED_CHECKS = 31


@pytest.fixture(autouse=True)
def _clean_env(monkeypatch):
    monkeypatch.delenv("IHOX_SEED", raising=False)


# the registry is certified at the default truncation; the closed vs
# direct evolution comparison in particular needs the default padding
# headroom to sit at its certified residual
@pytest.fixture(scope="module")
def default_report():
    return report.run_verification(report.RunConfig())


def test_config_defaults():
    cfg = report.RunConfig()
    assert cfg.n_trunc == 128
    assert cfg.sub_block == 32
    assert cfg.seed == 1234
    assert cfg.alpha == 0.5 + 0.0j


def test_config_validation():
    with pytest.raises(ConfigError):
        report.RunConfig(n_trunc=8)
    with pytest.raises(ConfigError):
        report.RunConfig(n_trunc=128, sub_block=60)
    with pytest.raises(ConfigError):
        report.RunConfig(tol_exact=-1.0)
    with pytest.raises(ConfigError):
        report.RunConfig(hbar=0.0)
    with pytest.raises(ConfigError):
        report.RunConfig(omega=3.0, t_max=1.0)
    with pytest.raises(ConfigError):
        report.RunConfig(dt=0.0)
    with pytest.raises(ConfigError):
        report.RunConfig(dt=2.0, t_max=1.0)
    with pytest.raises(ConfigError):
        report.RunConfig(seed=-1)
    # the evolution window cap is an opt-out, not a wall
    assert report.RunConfig(omega=3.0, t_max=1.0, unsafe=True).unsafe


def test_registry_passes_and_identifies_the_map(default_report):
    assert default_report.passed
    assert default_report.sigma == -1
    assert default_report.metric == "rho_rho_dag"
    assert len(default_report.checks) == EXPECTED_CHECKS
    names = [c.name for c in default_report.checks]
    assert len(set(names)) == EXPECTED_CHECKS
    for c in default_report.checks:
        assert c.residual <= c.tol, c.name


def test_report_schema(default_report):
    d = json.loads(default_report.to_json())
    assert list(d) == ["config", "sigma", "metric", "checks", "pass"]
    assert d["pass"] is True
    assert d["config"]["n_trunc"] == 128
    assert d["config"]["sub_block"] == 32
    for entry in d["checks"]:
        assert list(entry) == ["name", "paper_ref", "residual", "tol", "pass"]
        assert isinstance(entry["residual"], float)
        assert isinstance(entry["pass"], bool)


def test_report_is_deterministic(default_report):
    again = report.run_verification(report.RunConfig())
    assert again.to_json() == default_report.to_json()


def test_forced_failure_still_reports():
    cfg = report.RunConfig(n_trunc=64, tol_exact=1e-30)
    rep = report.run_verification(cfg)
    assert not rep.passed
    failed = [c.name for c in rep.checks if not c.passed]
    assert "ladder_block_commutator" in failed


def test_trajectory_table_grid():
    cfg = report.RunConfig(n_trunc=64, t_max=1.0, dt=0.25)
    cols, rows = report.trajectory_table(cfg)
    assert cols == (
        "t", "X_closed", "X_matrix", "P_closed", "P_matrix", "dX", "dP", "product",
    )
    assert len(rows) == 5
    assert rows[0][0] == 0.0
    assert rows[-1][0] == pytest.approx(1.0)


def test_divergence_table_shapes_and_limits():
    rows = report.divergence_table(grid_n=201)
    assert len(rows) == 8
    naive = [r[1] for r in rows]
    herm = [r[2] for r in rows]
    assert all(b > a for a, b in zip(naive, naive[1:]))
    assert abs(herm[-1] - 1.0) < 1e-8
    slope = np.polyfit([r[0] for r in rows], naive, 1)[0]
    assert abs(slope - 2.0 / np.sqrt(np.pi)) < 1e-10


def test_divergence_table_validation():
    with pytest.raises(ConfigError):
        report.divergence_table(grid_n=200)
    with pytest.raises(ConfigError):
        report.divergence_table(grid_n=51)
    with pytest.raises(ConfigError):
        report.divergence_table(box_l=-1.0)


def test_disentangle_lines_roundtrip():
    lines = report.disentangle_lines(0.3, 0.1, -0.2)
    assert len(lines) == 9
    assert lines[0].startswith("eps = ")
    resid = float(lines[-1].split("=")[1])
    assert resid < 1e-12


def test_format_csv_is_lossless():
    text = report.format_csv(("a", "b"), [(np.pi, 1e-300), (1.0 / 3.0, 2.0)])
    assert "\r" not in text
    assert text.endswith("\n")
    lines = text.strip().split("\n")
    assert lines[0] == "a,b"
    back = [float(v) for v in lines[1].split(",")]
    assert back[0] == np.pi
    assert back[1] == 1e-300


def test_cli_verify_passes_and_env_seed_wins(capsys, monkeypatch):
    monkeypatch.setenv("IHOX_SEED", "77")
    rc = cli.main(["verify", "--seed", "5"])
    out = capsys.readouterr().out
    assert rc == 0
    d = json.loads(out)
    assert d["pass"] is True
    assert d["config"]["seed"] == 77


def test_cli_verify_failure_still_writes_report(tmp_path, capsys):
    target = tmp_path / "report.json"
    rc = cli.main(
        ["verify", "--n-trunc", "64", "--tol-exact", "1e-30", "--output", str(target)]
    )
    assert rc == 1
    d = json.loads(target.read_text())
    assert d["pass"] is False
    assert capsys.readouterr().out == ""


def test_cli_bad_seed_env_is_config_error(capsys, monkeypatch):
    monkeypatch.setenv("IHOX_SEED", "not-a-seed")
    rc = cli.main(["verify", "--n-trunc", "64"])
    assert rc == 2
    assert "config error" in capsys.readouterr().err


def test_cli_config_error_exit(capsys):
    rc = cli.main(["verify", "--n-trunc", "128", "--sub-block", "60"])
    assert rc == 2
    assert "config error" in capsys.readouterr().err


def test_cli_degenerate_exit(capsys):
    rc = cli.main(
        [
            "disentangle",
            "--eps", "0",
            "--mu-plus", "0.7853981633974483",
            "--mu-minus", "0.7853981633974483",
        ]
    )
    assert rc == 3
    assert "degenerate input" in capsys.readouterr().err


def test_cli_trajectory_csv(tmp_path):
    target = tmp_path / "traj.csv"
    rc = cli.main(
        ["trajectory", "--n-trunc", "64", "--dt", "0.5", "--output", str(target)]
    )
    assert rc == 0
    lines = target.read_text().splitlines()
    assert lines[0].split(",")[0] == "t"
    assert len(lines) == 4
    last = [float(v) for v in lines[-1].split(",")]
    assert last[0] == 1.0
    assert abs(last[-1] - 0.5) < 1e-12


def test_cli_divergence_grid_validation(capsys):
    rc = cli.main(["demo-divergence", "--grid-n", "100"])
    assert rc == 2
    assert "config error" in capsys.readouterr().err


def test_cli_divergence_output(capsys):
    rc = cli.main(["demo-divergence", "--grid-n", "201"])
    out = capsys.readouterr().out
    assert rc == 0
    lines = out.strip().split("\n")
    assert lines[0] == "L,naive_norm,hermitian_norm"
    assert len(lines) == 9
