import csv
import io
import json
import math
import subprocess
import sys

import pytest

from zeno_discord import cli
from zeno_discord.correlations import discord_difference_phi


def run(args, capsys):
    code = cli.run(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def table(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_format_number():
    assert cli.format_number(0.1234567891234) == "0.123456789"
    assert cli.format_number(-0.0) == "0"
    assert cli.format_number(1.5e-20) == "1.5e-20"
    assert cli.format_number(math.nan) == ""
    assert cli.format_number(None) == ""
    assert cli.format_number(math.inf) == ""


def test_gamma_first_row_and_survival_column(capsys):
    code, out, _ = run(["gamma"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "tau,gamma,dgamma,survival_u2"
    assert lines[1] == "0,0,1,1"
    rows = table(out)
    assert len(rows) == 501
    for row in rows[::50]:
        g, tau = float(row["gamma"]), float(row["tau"])
        assert float(row["survival_u2"]) == pytest.approx(math.exp(-g * tau), rel=1e-8)


def test_gamma_derivative_sign_change(capsys):
    code, out, _ = run(["gamma", "--eta", "0.75", "--tau-max", "2", "--tau-steps", "201"], capsys)
    rows = {row["tau"]: float(row["dgamma"]) for row in table(out)}
    assert rows["1.73"] > 0 > rows["1.74"]


def test_crossover_records(capsys):
    _, out, _ = run(["crossover", "--eta", "1"], capsys)
    row = table(out)[0]
    assert row["kind"] == "unbiased" and float(row["tau_numeric"]) == pytest.approx(1.0, abs=1e-9)
    _, out, _ = run(["crossover", "--eta", "0.05"], capsys)
    assert out.splitlines()[1] == ",,,none"
    _, out, _ = run(["crossover", "--eta", "0.05", "--bias", "0.65", "--format", "json"], capsys)
    doc = json.loads(out)
    assert doc["params"]["beta"] == "inf"
    assert doc["rows"][0]["tau_numeric"] == pytest.approx(2.2395, abs=1e-4)
    assert 2 < doc["rows"][0]["mu"] < 3


def test_sweep_pure_state_row_and_identity(capsys):
    code, out, _ = run(["sweep", "--tau-steps", "10"], capsys)
    assert code == 0
    rows = table(out)
    assert "status" not in rows[0]
    first = rows[0]
    assert float(first["C_qq"]) == pytest.approx(0.8)
    assert float(first["D_qq"]) == pytest.approx(0.721928, abs=1e-6)
    assert float(first["C_rr"]) == 0 and abs(float(first["D_rr"])) < 1e-9
    for row in rows:
        u2 = float(row["u1sq"])
        expected = discord_difference_phi(0.8, math.sqrt(u2), math.sqrt(1 - u2))
        assert float(row["D_qq"]) - float(row["D_rr"]) == pytest.approx(expected, abs=1e-4)


def test_sweep_amp_axis_and_status_column(capsys):
    _, out, _ = run(["sweep", "--amp-steps", "3", "--tau-steps", "2"], capsys)
    assert out.splitlines()[0].startswith("amp,tau,")
    assert len(table(out)) == 6
    _, out, _ = run(["sweep", "--tau-max", "7", "--tau-steps", "8"], capsys)
    rows = table(out)
    assert rows[-1]["status"] == "indeterminate" and rows[-1]["D_qq"] == ""
    assert rows[0]["status"] == "determinate"


def test_nh_sweep_layout(capsys):
    _, out, _ = run(["nh-sweep", "--r-steps", "3", "--t-steps", "3", "--format", "json"], capsys)
    doc = json.loads(out)
    assert list(doc["rows"][0]) == ["r", "t", "P11", "P10", "D_qq", "D_rr", "status"]
    rs = [row["r"] for row in doc["rows"]]
    ts = [row["t"] for row in doc["rows"]]
    assert rs == sorted(rs) and ts[:3] == [0.0, 0.5, 1.0]
    first = doc["rows"][0]
    assert (first["P11"], first["P10"], first["status"]) == (1.0, 0.0, "determinate")
    assert any(row["status"] == "indeterminate" and row["D_qq"] is None for row in doc["rows"])


@pytest.mark.parametrize(
    "args",
    [
        ["gamma", "--tau-steps", "1"],
        ["gamma", "--tau-min", "5", "--tau-max", "1"],
        ["gamma", "--tau-max", "inf"],
        ["gamma", "--eta", "-1"],
        ["gamma", "--eta", "abc"],
        ["sweep", "--family", "chi"],
        ["nh-sweep", "--mode", "other"],
        ["gamma", "--threads", "-2"],
        ["gamma", "--format", "xml"],
        ["gamma", "--preset", "nope"],
        ["gamma", "--preset", "fig1"],
        ["bogus"],
    ],
)
def test_invalid_parameters_exit_2(args, capsys):
    assert run(args, capsys)[0] == 2


def test_numerical_failure_exit_3(capsys, monkeypatch):
    from zeno_discord.errors import QuadratureFailure

    def boom(*a, **k):
        raise QuadratureFailure("forced")

    monkeypatch.setattr(cli, "gamma_rate", boom)
    code, _, err = run(["gamma", "--tau-steps", "2"], capsys)
    assert code == 3 and "numerical failure" in err


def test_config_precedence(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"eta": 1.0, "tau-steps": 3, "tau-max": 2.0, "format": "json"}))
    _, out, _ = run(["gamma", "--config", str(cfg), "--tau-steps", "5"], capsys)
    doc = json.loads(out)
    assert doc["params"]["eta"] == 1.0
    assert doc["params"]["tau-steps"] == 5
    assert len(doc["rows"]) == 5


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"etaa": 1.0}))
    assert run(["gamma", "--config", str(cfg)], capsys)[0] == 2


def test_out_file_and_threads_identical(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    base = ["nh-sweep", "--r-steps", "5", "--t-steps", "5"]
    assert run(base + ["--out", str(a), "--threads", "1"], capsys)[0] == 0
    assert run(base + ["--out", str(b), "--threads", "4"], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()


def test_threads_env_fallback(monkeypatch):
    monkeypatch.setenv(cli.THREADS_ENV, "3")
    assert cli.thread_count(None) == 3
    assert cli.thread_count("2") == 2
    assert cli.thread_count(0) >= 1


def test_validate_command(capsys):
    code, out, _ = run(["validate"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 6 and all(line.startswith("PASS") for line in lines)


def test_validate_failure_exit_1(capsys, monkeypatch):
    from zeno_discord import selfcheck

    original = selfcheck.run_checks
    monkeypatch.setattr(selfcheck, "run_checks", lambda: original(quad_epsabs=1e-1, quad_limit=10))
    code, out, _ = run(["validate"], capsys)
    assert code == 1
    assert "FAIL closed form vs quadrature: max deviation" in out


def test_presets_resolve():
    assert cli.preset_names() == ["fig1", "fig2", "fig3", "fig4", "fig5"]
    for name in cli.preset_names():
        preset = cli.load_preset(name)
        cfg = cli.resolve(preset["command"], {}, preset)
        assert cfg["format"] == "csv"


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-c", "from zeno_discord.cli import main; main()", "crossover", "--eta", "1"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[1].startswith("1,1,,unbiased")
