"""Command-line entry point: output layout, exit codes, determinism."""
import json
import subprocess
import sys

import pytest

from hyperwave import __version__
from hyperwave.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_verify_derivation(capsys):
    code, out, _ = call(capsys, "verify-derivation")
    assert code == 0
    doc = json.loads(out)
    assert doc["version"] == __version__ and doc["gamma_squared"] == "1/2"
    assert len(doc["reports"]) == 6 and all(r["passed"] for r in doc["reports"])
    assert all(set(r) == {"check_name", "passed", "detail"} for r in doc["reports"])


def test_eval_two_points(capsys):
    code, out, _ = call(capsys, "eval", "--n", "2", "--z-min", "-1", "--z-max", "0")
    assert code == 0
    lines = out.splitlines()
    data = [l for l in lines if not l.startswith("#")]
    assert data[0].startswith("z,") and len(data) == 3
    assert lines[0] == f"# hyperwave {__version__} eval"


def test_eval_to_file_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for f in (a, b):
        assert call(capsys, "eval", "--regime", "zero", "--E", "0.9", "--out", str(f))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    assert a.read_text().startswith(f"# hyperwave {__version__}")


@pytest.mark.parametrize("system", ["7", "10", "11c", "12", "14c"])
def test_residuals_pass(capsys, system):
    code, out, _ = call(capsys, "residuals", "--system", system)
    doc = json.loads(out)
    assert code == 0 and doc["passed"] and doc["max_rel_residual"] <= 1e-8


@pytest.mark.parametrize("system", ["7", "16-17", "19"])
def test_residuals_sigma0(capsys, system):
    code, out, _ = call(capsys, "residuals", "--system", system, "--regime", "zero", "--E", "0.9")
    assert code == 0


def test_residuals_failing_check_exits_one(capsys):
    code, out, _ = call(capsys, "residuals", "--system", "7", "--gamma", "1")
    assert code == 1 and json.loads(out)["passed"] is False


def test_family_mismatch_is_usage_error(capsys):
    code, _, err = call(capsys, "residuals", "--system", "19")
    assert code == 2 and "error" in err


@pytest.mark.parametrize("argv", [
    ["eval", "--E", "nan"],
    ["eval", "--E", "inf"],
    ["eval", "--n", "0"],
    ["eval", "--M", "abc"],
    ["residuals", "--system", "8"],
    ["residuals"],
    ["nosuch"],
    [],
])
def test_usage_errors_exit_two(capsys, argv):
    assert call(capsys, *argv)[0] == 2


def test_invalid_physics_is_usage_error(capsys):
    assert call(capsys, "eval", "--M", "0")[0] == 2
    assert call(capsys, "eval", "--a", "0", "--b", "0")[0] == 2
    assert call(capsys, "eval", "--z-max", "5")[0] == 2


def test_integrate_check(capsys):
    code, out, _ = call(capsys, "integrate-check")
    doc = json.loads(out)
    assert code == 0 and doc["max_deviation"] <= 1e-7


def test_flat_limit(capsys):
    code, out, _ = call(capsys, "flat-limit", "--rho", "10,100,1000")
    assert code == 0
    rows = [l.split(",") for l in out.splitlines() if not l.startswith("#")]
    assert rows[0] == ["rho", "residual"] and len(rows) == 4


def test_flat_limit_evanescent_warns(capsys):
    code, _, err = call(capsys, "flat-limit", "--epsilon", "0.01")
    assert code == 0 and "evanescent" in err


def test_scatter(capsys):
    code, out, _ = call(capsys, "scatter", "--k-list", "1,2", "--q-list", "1")
    assert code == 0
    assert sum(1 for l in out.splitlines() if not l.startswith("#")) == 3


def test_degenerate_family_warning_reaches_stderr(capsys):
    code, _, err = call(capsys, "eval", "--regime", "zero", "--family", "II", "--E", "0.5", "--n", "3")
    assert code == 0 and err.count("coincides") == 1


def test_console_script_version():
    out = subprocess.run([sys.executable, "-m", "hyperwave.cli", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and __version__ in out.stdout
