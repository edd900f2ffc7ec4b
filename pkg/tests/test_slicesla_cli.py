import json

import pytest

from slicesla.cli import main
from slicesla.formats.report import RUNS_HEADER
from tests.utils import fixture

TRACE_HEAD = "timestamp,event_kind,incident_id,incident_class,metric_name,observed_value\n"


@pytest.fixture(autouse=True)
def workdir(tmp_path, monkeypatch):
    """Run every command away from any settings file."""
    monkeypatch.chdir(tmp_path)
    for name in ("SLICESLA_CONFIG", "SLICESLA_LOG_LEVEL", "SLICESLA_CATALOG", "SLICESLA_DATA_DIR"):
        monkeypatch.delenv(name, raising=False)
    return tmp_path


def test_validate(capsys, workdir):
    assert main(["validate", fixture("linear_contract.yaml")]) == 0
    assert "valid" in capsys.readouterr().out

    contract = workdir / "fast.yaml"
    with open(fixture("linear_contract.yaml")) as f:
        text = f.read().replace("target: 5, threshold: 10", "target: 0.5, threshold: 10")
    contract.write_text(text)
    assert main(["validate", str(contract)]) == 1
    assert "qos/latency/target" in capsys.readouterr().out
    assert main(["validate", "--no-catalog", str(contract)]) == 0

    assert main(["validate", fixture("bad_unknown_field.yaml")]) == 2
    err = capsys.readouterr().err
    assert "penalty/surcharge" in err
    assert "line 9" in err


def test_evaluate(capsys, workdir):
    args = ["evaluate", fixture("nonlinear_contract.yaml"), fixture("nonlinear_988.csv")]
    assert main(args + ["--format", "json", "--output", "report.json"]) == 0
    with open(fixture("report.json")) as f:
        expected = json.load(f)
    assert json.loads(capsys.readouterr().out) == expected
    assert json.loads((workdir / "report.json").read_text()) == expected

    assert main(args) == 0
    assert "schedule penalty 35%" in capsys.readouterr().out

    assert main(args + ["--now", "2026-01-10T00:00:00Z", "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["window"]["end"] == "2026-01-10T00:00:00Z"
    assert doc["lifecycle"]["penalized_incidents"] == ["inc-1"]


def test_evaluate_errors(capsys, workdir):
    contract = fixture("nonlinear_contract.yaml")
    assert main(["evaluate", contract, fixture("does_not_exist.csv")]) == 2

    trace = workdir / "jitter.csv"
    trace.write_text(TRACE_HEAD + "2026-01-02T00:00:00Z,incident_opened,a,minor,jitter,3\n")
    assert main(["evaluate", contract, str(trace)]) == 3
    assert "jitter" in capsys.readouterr().err

    trace.write_text(TRACE_HEAD + "2026-01-02T00:00:00Z,service_start,,,,\n2026-01-01T00:00:00Z,service_start,,,,\n")
    assert main(["evaluate", contract, str(trace)]) == 2
    assert "line 3" in capsys.readouterr().err

    with pytest.raises(SystemExit) as excinfo:
        main(["evaluate", contract, str(trace), "--now", "tomorrow"])
    assert excinfo.value.code == 2


def test_curve(capsys, workdir):
    assert main(["curve", "--schedule", "nonlinear-reference", "--resolution", "0.1%"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "availability_percent,penalty_percent"
    assert "98.8,35" in lines
    assert lines[-1] == "98.4,55"

    assert main(["curve", fixture("linear_contract.yaml"), "--output", "curve.csv"]) == 0
    lines = (workdir / "curve.csv").read_text().splitlines()
    # default resolution 0.001 from 100% down to 98.4%
    assert len(lines) == 1 + 17
    assert "99.6,5" in lines

    assert main(["curve", fixture("linear_contract.yaml"), "--schedule", "linear-reference"]) == 2


def test_simulate(capsys, workdir):
    args = ["simulate", fixture("nonlinear_contract.yaml"), fixture("remote_surgery.yaml"), "--runs", "3"]
    assert main(args + ["--format", "json", "--runs-csv", "runs.csv", "--trace-output", "first.csv"]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["runs"] == 3
    assert summary["seed"] == 20260101
    assert summary["currency"] == "EUR"

    rows = (workdir / "runs.csv").read_text().splitlines()
    assert rows[0] == ",".join(RUNS_HEADER)
    assert len(rows) == 4
    assert (workdir / "first.csv").read_text().startswith(TRACE_HEAD)

    assert main(args + ["--seed", "9", "--format", "json"]) == 0
    assert json.loads(capsys.readouterr().out)["seed"] == 9

    assert main(args[:3] + ["--runs", "0"]) == 3
    assert main(["simulate", fixture("nonlinear_contract.yaml"), fixture("linear_contract.yaml")]) == 2


def test_report(capsys, workdir):
    assert main(["report", fixture("report.json")]) == 0
    assert "net position 610.0000 EUR" in capsys.readouterr().out

    assert main(["report", fixture("report.json"), "--format", "json", "--output", "copy.json"]) == 0
    with open(fixture("report.json")) as f:
        assert json.loads((workdir / "copy.json").read_text()) == json.load(f)

    (workdir / "broken.json").write_text("{}")
    assert main(["report", "broken.json"]) == 2


def test_settings_errors(capsys, workdir, monkeypatch):
    assert main(["--config", "missing.yaml", "report", fixture("report.json")]) == 2
    assert "does not exist" in capsys.readouterr().err

    (workdir / "slicesla.yaml").write_text("runs: 10\ncolour: blue\n")
    assert main(["report", fixture("report.json")]) == 2
    assert "colour" in capsys.readouterr().err

    (workdir / "other.yaml").write_text("resolution: '0.002'\n")
    monkeypatch.setenv("SLICESLA_CONFIG", str(workdir / "other.yaml"))
    assert main(["curve", "--schedule", "linear-reference"]) == 0
    assert len(capsys.readouterr().out.splitlines()) == 1 + 9
