import numpy as np
import pytest

from esmhd import io
from esmhd.cli import main
from esmhd.diagnostics import DIAG_COLUMNS


def test_alfven_smoke_run(tmp_path):
    out = tmp_path / "alfven"
    code = main(["run", "--problem", "alfven", "--nx", "64", "--flux", "kepec",
                 "--reconstruction", "minmod", "--integrator", "ssprk3", "--tend", "0.2",
                 "--snapshot-every", "0.1", "--out", str(out)])
    assert code == 0
    snaps = sorted(p.name for p in out.glob("snap_*.csv"))
    assert snaps == ["snap_0000.csv", "snap_0001.csv", "snap_0002.csv"]
    meta, rows = io.read_snapshot(out / "snap_0002.csv")
    assert meta["time"] == 0.2 and rows.shape == (64, 12)
    diag = io.read_diagnostics(out / "diagnostics.csv")
    t = diag[:, DIAG_COLUMNS.index("t")]
    assert t[0] == 0.0 and t[-1] == 0.2 and np.all(np.diff(t) > 0)
    assert 0.1 in t
    cfg = io.read_config(out / "config.txt")
    assert cfg["problem"] == "alfven" and cfg["flux"] == "kepec" and cfg["nx"] == "64"


def test_binary_snapshots(tmp_path):
    out = tmp_path / "bin"
    assert main(["run", "--problem", "briowu1d", "--nx", "32", "--tend", "0.01",
                 "--format", "bin", "--out", str(out)]) == 0
    meta, rows = io.read_snapshot(out / "snap_0001.bin")
    assert meta["time"] == 0.01 and rows.shape == (32, 12)


@pytest.mark.parametrize("argv", [
    ["run", "--problem", "nosuch"],
    ["run", "--problem", "alfven", "--flux", "roe"],
    ["run"],
    ["run", "--problem", "alfven", "--cfl", "2.0"],
    ["frobnicate"],
])
def test_usage_errors_exit_1(argv, capsys):
    try:
        code = main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == 1


def test_unknown_config_key_is_usage_error(tmp_path):
    cfg = tmp_path / "c.txt"
    cfg.write_text("problem = alfven\ncolour = blue\n")
    assert main(["run", "--config", str(cfg)]) == 1


def test_config_and_flag_precedence(tmp_path):
    cfg = tmp_path / "c.txt"
    cfg.write_text("# run settings\nproblem = briowu1d\nnx = 16\ntend = 0.005\nflux = kepec\n")
    out = tmp_path / "o"
    assert main(["run", "--config", str(cfg), "--nx", "24", "--out", str(out)]) == 0
    eff = io.read_config(out / "config.txt")
    assert eff["nx"] == "24" and eff["flux"] == "kepec" and eff["tend"] == "0.005"
    _, rows = io.read_snapshot(out / "snap_0001.csv")
    assert rows.shape[0] == 24


def test_identical_flags_give_identical_diagnostics(tmp_path):
    argv = ["run", "--problem", "orszag-tang", "--nx", "16", "--ny", "16", "--tend", "0.02"]
    assert main(argv + ["--out", str(tmp_path / "a")]) == 0
    assert main(argv + ["--out", str(tmp_path / "b")]) == 0
    a = (tmp_path / "a" / "diagnostics.csv").read_bytes()
    b = (tmp_path / "b" / "diagnostics.csv").read_bytes()
    assert a == b and len(a) > 0


def test_admissibility_failure_exits_2(tmp_path):
    # the arithmetic-mean dissipation with the full single-direction CFL
    # coefficient breaks down early in the wind tunnel
    out = tmp_path / "wt"
    code = main(["run", "--problem", "windtunnel", "--flux", "kepes-naive", "--cfl", "0.8",
                 "--out", str(out)])
    assert code == 2
    fail = io.read_config(out / "failure.txt")
    assert fail["status"] == "failed" and float(fail["time"]) < 1.0
    assert (out / "lastgood.csv").exists()
    meta, _ = io.read_snapshot(out / "lastgood.csv")
    assert meta["time"] == float(fail["time"])
    # diagnostics up to the last good step survive the abort
    diag = io.read_diagnostics(out / "diagnostics.csv")
    assert diag[-1, 0] == float(fail["time"])


def test_convergence_command(tmp_path, capsys):
    out = tmp_path / "conv.csv"
    assert main(["convergence", "--n", "8", "16", "--schemes", "linear", "--dt", "1e-3",
                 "--tend", "0.1", "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "scheme,N,L1,L2,EOC_L1,EOC_L2" and len(lines) == 3
    assert main(["convergence", "--n", "8", "--schemes", "constant", "--dt", "1e-2",
                 "--tend", "0.1"]) == 0
    assert "constant,8," in capsys.readouterr().out


def test_entropy_command(tmp_path, capsys):
    out = tmp_path / "ent.csv"
    assert main(["entropy-test", "--nx", "16", "--integrators", "euler", "--nsteps", "10", "20",
                 "--out", str(out)]) == 0
    assert "slope=" in capsys.readouterr().out
    assert len(out.read_text().splitlines()) == 3
