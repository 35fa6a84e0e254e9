import subprocess
import sys

import pytest

from wavebem import cli
from wavebem.assembly import NumericalError
from wavebem.experiments import (
    ConfigError,
    ConvergenceRow,
    ExperimentConfig,
    convergence_table,
    format_real,
    parse_grid,
    parse_levels,
    write_csv,
)


def test_parse_levels():
    assert parse_levels("3:8") == (3, 8)
    assert parse_levels("5") == (5, 5)
    for bad in ("8:3", "a:b", "1:2:3", "-1:2"):
        with pytest.raises(ConfigError):
            parse_levels(bad)


def test_parse_grid():
    assert parse_grid("1:8") == tuple(float(t) for t in range(1, 9))
    assert parse_grid("1:2:0.25") == (1.0, 1.25, 1.5, 1.75, 2.0)
    assert parse_grid("0.1:0.3:0.1") == (0.1, 0.2, 0.3)
    assert parse_grid("4") == (4.0,)
    for bad in ("2:1", "1:2:0", "x", "1:2:3:4"):
        with pytest.raises(ConfigError):
            parse_grid(bad)


def test_config_validation():
    with pytest.raises(ConfigError):
        ExperimentConfig("convergence", case="nope")
    with pytest.raises(ConfigError):
        ExperimentConfig("convergence", formulation="indirect")
    with pytest.raises(ConfigError):
        ExperimentConfig("convergence", L=-1.0)
    with pytest.raises(ConfigError):
        ExperimentConfig("spectral", T_grid=(1.0, 0.0))


def test_csv_format():
    rows = [ConvergenceRow(3, 16, 0.4475, None), ConvergenceRow(4, 32, 0.2109, 1.085)]
    text = write_csv(convergence_table(rows))
    assert text == "level,N_total,error_l2,eoc\n3,16,4.47500e-01,\n4,32,2.10900e-01,1.08500e+00\n"
    assert format_real(123456789.0) == "1.23457e+08"
    assert format_real(None) == ""


def test_convergence_file_is_reproducible(tmp_path):
    paths = [tmp_path / "a.csv", tmp_path / "b.csv"]
    for p in paths:
        argv = ["convergence", "--case", "traveling", "--formulation", "energetic", "--levels", "2:4", "--out", str(p)]
        assert cli.main(argv) == 0
    data = paths[0].read_bytes()
    assert data == paths[1].read_bytes()
    assert b"\r" not in data
    lines = data.decode("utf-8").splitlines()
    assert lines[0] == "level,N_total,error_l2,eoc"
    assert len(lines) == 4 and lines[1].endswith(",")


def test_spectral_to_stdout(capsys):
    assert cli.main(["spectral", "--L", "1", "--T", "1:2", "--m", "20"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "T,sqrt_lambda_max,conjectured,abs_diff"
    assert lines[1] == "1.00000e+00,0.00000e+00,0.00000e+00,0.00000e+00"
    assert len(lines) == 3


@pytest.mark.parametrize(
    "argv",
    [
        ["convergence", "--levels", "5:2"],
        ["convergence", "--L", "0"],
        ["spectral", "--T", "3:1"],
        ["spectral", "--m", "0"],
    ],
)
def test_invalid_config_exit_code(argv, capsys):
    assert cli.main(argv) == 2
    assert "invalid configuration" in capsys.readouterr().err


def test_unwritable_output_exit_code(tmp_path):
    out = tmp_path / "missing" / "x.csv"
    assert cli.main(["convergence", "--case", "traveling", "--levels", "1:1", "--out", str(out)]) == 2


def test_numeric_failure_exit_code(monkeypatch, capsys):
    def boom(cfg):
        raise NumericalError("relative residual too large")

    monkeypatch.setattr(cli, "run_convergence", boom)
    assert cli.main(["convergence"]) == 1
    assert "numeric failure" in capsys.readouterr().err


def test_argparse_rejects_unknown_choice():
    with pytest.raises(SystemExit) as exc:
        cli.main(["convergence", "--case", "bogus"])
    assert exc.value.code == 2


def test_verify_fast_subprocess():
    proc = subprocess.run([sys.executable, "-m", "wavebem", "verify", "--fast"], capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert "FAIL" not in proc.stdout
    assert "checks passed" in proc.stdout
