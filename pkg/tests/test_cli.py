import json
import subprocess
import sys

import pytest

from signedpartitions import cli, exactpartitions
from signedpartitions.errors import ConsistencyError


def run(capsys, *argv):
    code = cli.main(["-q", *argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_exact_csv(capsys, tmp_path, monkeypatch):
    monkeypatch.setattr(exactpartitions, "_memory", {})  # force a disk write
    code, out, _ = run(capsys, "exact", "--f", "mu", "--n-max", "10", "--cache-dir", str(tmp_path))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "n,p" and "4,0" in lines and len(lines) == 12
    assert any(p.name.startswith("exact_mu_10") for p in tmp_path.iterdir())


def test_no_cache_writes_nothing(capsys, tmp_path):
    code, _, _ = run(capsys, "exact", "--f", "lambda", "--n-max", "20", "--cache-dir", str(tmp_path / "c"), "--no-cache")
    assert code == 0 and not (tmp_path / "c").exists()


def test_global_flags_either_side(capsys):
    a = run(capsys, "--format", "json", "constants", "--which", "V", "--q", "4")
    b = run(capsys, "constants", "--which", "V", "--q", "4", "--format", "json")
    assert a == b
    assert json.loads(a[1])[0] == {"q": 4, "exact": "0", "numeric": 0}


def test_plot_and_out(capsys, tmp_path):
    target = tmp_path / "g.txt"
    code, out, _ = run(capsys, "gqr", "--q", "2", "--r", "1", "--terms", "1000", "--format", "plot", "--out", str(target))
    assert code == 0 and out == ""
    text = target.read_text()
    assert text.startswith("# ") and "2/3" in text


@pytest.mark.parametrize(
    "argv",
    [
        ["estimate", "--f", "mu", "--n", "50"],
        ["estimate", "--f", "one", "--n", "500"],
        ["exact", "--f", "bogus", "--n-max", "5"],
        ["exact", "--f", "mu", "--n-max", "-1"],
        ["compare", "--f", "mu", "--n", "200", "--n-min", "100", "--n-max", "300"],
        ["compare", "--f", "mu"],
        ["constants", "--which", "V"],
        ["arcs", "--f", "mu", "--X", "1000", "--scan", "classify"],
        ["arcs", "--f", "mu", "--X", "100", "--scan", "nonprincipal"],
        ["contour", "--f", "mu", "--n", "400"],
        ["saddle", "--f", "mu", "--x", "10"],
        [],
    ],
)
def test_user_errors_exit_1(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = cli.main(["-q", *argv])
        raise SystemExit(code)
    assert exc.value.code == 1


def test_unwritable_out_exits_1(capsys, tmp_path):
    code, _, err = run(capsys, "constants", "--which", "W", "--q", "3", "--out", str(tmp_path / "no" / "x.csv"))
    assert code == 1 and "error" in err


def test_consistency_failure_exits_2(capsys, monkeypatch):
    def boom(*a, **k):
        raise ConsistencyError("table mismatch")

    monkeypatch.setitem(cli.COMMANDS, "exact", boom)
    code, _, err = run(capsys, "exact", "--f", "mu", "--n-max", "5")
    assert code == 2 and "consistency" in err


def test_commands_run(capsys):
    for argv in (
        ["saddle", "--f", "lambda", "--x", "1000", "--sign", "-"],
        ["arcs", "--f", "mu", "--X", "1000", "--scan", "classify", "--alpha", "0.5", "0.61803398875"],
        ["arcs", "--f", "mu", "--X", "1000", "--scan", "major", "--q", "3", "--a", "1", "--grid", "3"],
        ["arcs", "--f", "lambda", "--X", "1000", "--scan", "taylor", "--grid", "5"],
        ["contour", "--f", "one", "--n", "100"],
        ["growth", "--f", "one", "--k", "50"],
    ):
        code, out, _ = run(capsys, *argv)
        assert code == 0 and out.count("\n") >= 2, argv
    code, out, _ = run(capsys, "contour", "--f", "one", "--n", "100")
    assert out.splitlines()[1] == "100,190569292"


def test_config_logged_to_stderr(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "signedpartitions.cli", "constants", "--which", "G", "--q", "6"],
        capture_output=True, text=True, cwd=tmp_path,
    )
    assert proc.returncode == 0
    assert proc.stdout == "q,exact,numeric\n6,1/24,0.0416666666667\n"
    assert "config" in proc.stderr and "backend" in proc.stderr


def test_subprocess_deterministic(tmp_path):
    argv = [sys.executable, "-m", "signedpartitions.cli", "-q", "compare", "--f", "lambda", "--n", "300", "301"]
    a = subprocess.run(argv, capture_output=True, cwd=tmp_path, env={"SPN_CACHE": str(tmp_path / "a"), "PATH": ""})
    b = subprocess.run(argv, capture_output=True, cwd=tmp_path, env={"SPN_CACHE": str(tmp_path / "b"), "PATH": ""})
    assert a.returncode == 0 and a.stdout == b.stdout
