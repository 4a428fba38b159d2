import json
import os
import signal
import subprocess
import sys
import time

import pytest

from twindesk.orchestrator.cli import main


@pytest.fixture(scope="module")
def session_log(tmp_path_factory):
    path = tmp_path_factory.mktemp("logs") / "session.jsonl"
    rc = main(["autopilot", "--duration", "40", "--log", str(path)])
    assert rc == 0
    return str(path)


def test_autopilot_cli_writes_record(tmp_path, capsys):
    log = tmp_path / "run.jsonl"
    rc = main(["autopilot", "--duration", "5", "--seed", "2", "--log", str(log)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "autopilot finished" in out
    lines = log.read_text().splitlines()
    assert "config_hash" in json.loads(lines[0])


def test_analyze_json_output(session_log, capsys):
    rc = main(["analyze", "--log", session_log])
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert set(out) == {
        "log",
        "phase",
        "picks",
        "places",
        "collapses",
        "placing_rate",
        "collapse_rate",
        "still_in_place_rate",
        "towers",
    }
    assert out["picks"] >= 3
    assert out["towers"] >= 1
    assert out["phase"] == "TRIAL"


def test_analyze_table_output(session_log, capsys):
    rc = main(["analyze", "--log", session_log, "--table"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "placing_rate" in out
    assert "{" not in out


def test_analyze_requires_log(capsys):
    rc = main(["analyze"])
    assert rc == 2
    assert "--log is required" in capsys.readouterr().err


def test_analyze_compare(session_log, capsys):
    rc = main(
        [
            "analyze",
            "compare",
            "--a",
            session_log,
            session_log,
            "--b",
            session_log,
            session_log,
            "--metric",
            "placing_rate",
        ]
    )
    assert rc == 0
    out = json.loads(capsys.readouterr().out)
    assert out["metric"] == "placing_rate"
    assert out["U"] == 2.0  # all ties across identical logs
    assert out["p_two_sided"] == 1.0
    assert out["tier"] == "none"


def test_replay_cli(session_log, capsys):
    rc = main(["replay", "--log", session_log, "--speed", "1000"])
    assert rc == 0
    assert "replayed" in capsys.readouterr().out


def test_serve_sigterm_writes_clean_shutdown(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"rig": {"width": 64, "height": 36}}))
    log = tmp_path / "serve.jsonl"
    proc = subprocess.Popen(
        [
            sys.executable,
            "-m",
            "twindesk.orchestrator.cli",
            "serve",
            "--config",
            str(cfg),
            "--log",
            str(log),
            "--port",
            "0",
        ],
        stdout=subprocess.PIPE,
        stderr=subprocess.STDOUT,
        cwd=str(tmp_path),
    )
    try:
        time.sleep(2.0)
        assert proc.poll() is None, proc.stdout.read().decode()
        proc.send_signal(signal.SIGTERM)
        rc = proc.wait(timeout=20)
    finally:
        if proc.poll() is None:
            proc.kill()
    assert rc == 0
    lines = log.read_text().splitlines()
    assert len(lines) >= 2
    last = json.loads(lines[-1])
    assert last["type"] == "shutdown"
    assert last["detail"]["reason"] == "sigterm"
