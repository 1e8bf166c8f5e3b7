import json
import subprocess
import sys

import pytest

from hhverify.cli import main


def write_config(path, **kw):
    base = {"function_ids": ["quadratic"], "intervals": [[0, 1]], "alphas": [1], "ms": [1], "qs": [1]}
    base.update(kw)
    path.write_text(json.dumps(base))
    return str(path)


def test_verify_exit_codes(capsys):
    assert main(["verify"]) == 0
    assert "PASS  gamma_half_sqrt_pi" in capsys.readouterr().out
    assert main(["verify", "--tol", "1e-30"]) == 1


def test_verify_json_out(tmp_path):
    out = tmp_path / "v.json"
    assert main(["verify", "--out", str(out)]) == 0
    assert all(c["passed"] for c in json.loads(out.read_text()))


def test_sweep_writes_file_and_flags_override(tmp_path, capsys):
    cfg = write_config(tmp_path / "c.json")
    out = tmp_path / "o.csv"
    assert main(["sweep", "--config", cfg, "--out", str(out), "--qs", "1,2", "--tol", "1e-11"]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 3
    assert "evaluated=2" in capsys.readouterr().err


def test_sweep_to_stdout_json(tmp_path, capsys):
    cfg = write_config(tmp_path / "c.json")
    assert main(["sweep", "--config", cfg, "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data[0]["function_id"] == "quadratic"


@pytest.mark.parametrize("args", [
    ["sweep", "--config", "/definitely/missing.json"],
    ["check-convexity", "--function", "nope", "--alpha", "1", "--m", "1"],
])
def test_config_and_io_errors_exit_2(args, capsys):
    assert main(args) == 2
    assert "error" in capsys.readouterr().err


def test_empty_qs_exit_2(tmp_path):
    assert main(["sweep", "--config", write_config(tmp_path / "c.json", qs=[])]) == 2


def test_check_convexity(capsys):
    assert main(["check-convexity", "--function", "cubic", "--alpha", "1", "--m", "1"]) == 0
    verdict = json.loads(capsys.readouterr().out)
    assert verdict["holds"] is True and verdict["witness"] is None
    assert main(["check-convexity", "--function", "power_2.5", "--alpha", "1", "--m", "1"]) == 1
    verdict = json.loads(capsys.readouterr().out)
    assert verdict["holds"] is False and len(verdict["witness"]) == 3


def test_tightness_stdout(tmp_path, capsys):
    cfg = write_config(tmp_path / "c.json", qs=[1, 2])
    assert main(["tightness", "--config", cfg]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("alpha,m,q,rows,thm21")
    assert len(out) == 3


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hhverify", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0
    for cmd in ("verify", "sweep", "tightness", "check-convexity"):
        assert cmd in proc.stdout
