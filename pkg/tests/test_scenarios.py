import dataclasses
import subprocess
import sys

import numpy as np
import pytest

from exactbc.cli import main
from exactbc.scenarios import DEFAULTS, SCENARIOS, ConfigError, SimulationConfig, load_config, run, validate


def test_defaults_follow_reference_setups():
    assert DEFAULTS["free-1d"]["nx"] == 201 and DEFAULTS["free-1d"]["n_steps"] == 40
    assert DEFAULTS["scatter-static"]["V0"] == -150 and DEFAULTS["scatter-static"]["x0"] == -0.3
    assert DEFAULTS["driven-trap"]["n_steps"] == 800 and DEFAULTS["driven-trap"]["nx"] == 800
    assert DEFAULTS["tunneling"]["a0"] == 0.5 and DEFAULTS["tunneling"]["sigma0"] == 0.12
    assert DEFAULTS["driven-delta"]["drive_factor"] == 0.7 and DEFAULTS["driven-delta"]["n_steps"] == 1000
    assert DEFAULTS["free-2d"]["ny"] == 45 and DEFAULTS["free-2d"]["vy_ratio"] == 1.5


def test_overrides_win():
    cfg = SimulationConfig("free-1d", nx=101).resolved()
    assert cfg.nx == 101 and cfg.n_steps == 40


@pytest.mark.parametrize("bad", [dict(n_steps=0), dict(closure="pml"), dict(scenario="nope"), dict(nx=2)])
def test_invalid_configs(bad):
    with pytest.raises(ConfigError):
        SimulationConfig(**{"scenario": "free-1d", **bad}).resolved()


@pytest.mark.parametrize("scenario", SCENARIOS)
def test_every_scenario_passes_its_checks(scenario, tmp_path):
    result = run(SimulationConfig(scenario, output_dir=str(tmp_path)))
    assert result.passed, result.checks
    assert (tmp_path / "manifest.txt").exists()


def test_free_run_files(tmp_path):
    run(SimulationConfig("free-1d", output_dir=str(tmp_path)))
    snap = np.loadtxt(tmp_path / "snapshot_40.dat")
    assert snap.shape == (201, 4)
    assert np.allclose(snap[:, 3], snap[:, 1] ** 2 + snap[:, 2] ** 2)
    ledger = np.loadtxt(tmp_path / "ledger.dat")
    assert ledger.shape == (41, 6)
    assert np.allclose(ledger[:, 5], 1.0, atol=1e-5)


def test_output_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run(SimulationConfig("scatter-static", output_dir=str(a)))
    run(SimulationConfig("scatter-static", output_dir=str(b)))
    for f in sorted(a.iterdir()):
        content_a = f.read_text().replace(str(a), "")
        content_b = (b / f.name).read_text().replace(str(b), "")
        assert content_a == content_b, f.name


def test_manifest_lists_every_parameter(tmp_path):
    run(SimulationConfig("tunneling", output_dir=str(tmp_path)))
    text = (tmp_path / "manifest.txt").read_text()
    for f in dataclasses.fields(SimulationConfig):
        assert f"\n{f.name} = " in text or text.startswith(f"{f.name} = ")
    assert "dt = " in text and "mu2 = " in text and "conservation = pass" in text


def test_oracle_check_runs(tmp_path):
    result = run(SimulationConfig("scatter-static", oracle=True, output_dir=str(tmp_path)))
    ok, value, tol = result.checks["oracle"]
    assert ok and value < 1e-6


def test_load_config(tmp_path):
    path = tmp_path / "c.cfg"
    path.write_text("scenario = free-2d\nny = 12  # too coarse\noracle = no\n")
    cfg = load_config(path)
    assert cfg.scenario == "free-2d" and cfg.ny == 12 and cfg.oracle is False
    path.write_text("bogus = 1\n")
    with pytest.raises(ConfigError):
        load_config(path)


def test_validate_defaults_pass():
    for scenario in ("free-1d", "scatter-static", "driven-delta", "free-2d"):
        assert all(f.level != "error" for f in validate(SimulationConfig(scenario)))
    assert all(f.level == "ok" for f in validate(SimulationConfig("tunneling")))


def test_validate_flags_leaking_packet():
    findings = {f.name: f for f in validate(SimulationConfig("free-1d", sigma0=0.5, x0=0.9))}
    assert findings["support"].level == "warning"


def test_validate_flags_aliasing():
    findings = {f.name: f for f in validate(SimulationConfig("free-2d", ny=12))}
    assert findings["nyquist"].level == "error"


def test_cli_run_and_usage_error(tmp_path, capsys):
    assert main(["run", "free-1d", "--output-dir", str(tmp_path)]) == 0
    assert "conservation: pass" in capsys.readouterr().out
    assert main(["run", "free-1d", "--n-steps", "0", "--output-dir", str(tmp_path)]) == 2


def test_cli_failed_check_exits_nonzero(tmp_path, capsys):
    assert main(["run", "free-1d", "--conservation-tol", "1e-20", "--output-dir", str(tmp_path)]) == 1
    assert "conservation" in capsys.readouterr().err


def test_cli_validate(tmp_path, capsys):
    path = tmp_path / "c.cfg"
    path.write_text("scenario = free-2d\nny = 12\n")
    assert main(["validate", str(path)]) == 2
    path.write_text("scenario = free-2d\n")
    assert main(["validate", str(path)]) == 0


def test_cli_kernel_dump(tmp_path):
    out = tmp_path / "k.dat"
    assert main(["kernels", "--dump", "--n-steps", "12", "--distances", "0,0.1", "--output", str(out)]) == 0
    data = np.loadtxt(out)
    assert data.shape == (12, 6)
    assert np.allclose(data[::2, 1], [1, 0.5, 0.375, 0.3125, 0.2734375, 0.24609375])


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "exactbc.cli", "run", "driven-delta", "--output-dir", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert (tmp_path / "delta_series.dat").exists()
