import json
import subprocess
import sys

import pytest

from lcqaoa.graph import graph_from_json
from lcqaoa.harness.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_to_stdout(capsys, monkeypatch):
    monkeypatch.delenv("LCQAOA_OUTPUT_DIR", raising=False)
    code, out, _ = run(capsys, "gen", "--n", "10", "--d", "3", "--seed", "4")
    assert code == 0
    g = graph_from_json(out)
    assert g.n == 10 and g.num_edges == 15


def test_gen_uses_env_output_dir(capsys, monkeypatch, tmp_path):
    monkeypatch.setenv("LCQAOA_OUTPUT_DIR", str(tmp_path))
    code, out, _ = run(capsys, "gen", "--n", "6", "--d", "3")
    assert code == 0
    assert out.strip().startswith(str(tmp_path))


def test_chain_and_metrics(capsys, monkeypatch):
    monkeypatch.delenv("LCQAOA_OUTPUT_DIR", raising=False)
    code, out, _ = run(capsys, "chain", "--n", "12", "--d", "3", "--fraction", "0.5")
    doc = json.loads(out)
    assert code == 0 and doc["length"] == 11 and doc["used_length"] == 6
    code, out, _ = run(capsys, "metrics", "--n", "12", "--p", "2")
    m = json.loads(out)
    assert m["lc"]["two_qubit_count"] == 22 and m["lc_routed"]["swap_count"] == 0


def test_solve_writes_reports(capsys, tmp_path):
    code, out, _ = run(capsys, "solve", "--n", "8", "--ansatz", "lc", "--output", str(tmp_path))
    assert code == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["config"]["ansatz.kind"] == "lc"
    assert "mean_ar=" in out


def test_config_file_and_flag_override(capsys, tmp_path):
    ini = tmp_path / "exp.ini"
    ini.write_text("[instance]\nn = 8\nseed = 2\n[ansatz]\np = 2\n")
    code, _, _ = run(capsys, "solve", "--config", str(ini), "--p", "1", "--output", str(tmp_path))
    assert code == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert (report["config"]["instance.seed"], report["p"]) == (2, 1)


def test_sweep_and_postprocess(capsys, tmp_path):
    code, out, _ = run(capsys, "sweep", "--n", "8", "--vary", "n=8,10", "--repeats", "2", "--metrics-only",
                       "--output", str(tmp_path))
    assert code == 0
    lines = (tmp_path / "sweep_n.csv").read_text().splitlines()
    assert len(lines) == 1 + 2 * 2 + 2 * 2
    run(capsys, "gen", "--n", "8", "--d", "3", "--output", str(tmp_path))
    graph = next(tmp_path.glob("graph_*.json"))
    samples = tmp_path / "s.csv"
    samples.write_text("bitstring,count\n00000000,5\n11110000,3\n")
    code, out, _ = run(capsys, "postprocess", "--graph", str(graph), "--samples", str(samples),
                       "--output", str(tmp_path))
    assert code == 0
    summary = json.loads(out.splitlines()[-1])
    assert summary["mean_ar_after"] >= summary["mean_ar_before"]


@pytest.mark.parametrize("argv", [
    ["solve", "--n", "5", "--d", "3"],
    ["solve", "--n", "8", "--fraction", "0.5"],
    ["sweep", "--n", "8", "--vary", "colour=1,2"],
])
def test_config_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("config error: ")


def test_runtime_errors_exit_3(capsys, tmp_path):
    bad = tmp_path / "g.json"
    bad.write_text('{"n": 3, "edges": [[0, 0, 1.0]]}')
    code, _, err = run(capsys, "solve", "--graph", str(bad))
    assert code == 3 and "edges[0]" in err
    code, _, _ = run(capsys, "solve", "--n", "26", "--d", "3")
    assert code == 3


def test_console_entry_point():
    out = subprocess.run([sys.executable, "-m", "lcqaoa.harness.cli", "gen", "--n", "4", "--d", "3"],
                         capture_output=True, text=True, env={"PATH": "/usr/bin:/bin"})
    assert out.returncode == 0
    assert graph_from_json(out.stdout).num_edges == 6
