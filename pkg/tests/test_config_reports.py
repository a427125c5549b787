"""
Tests for configuration, run-config validation, helpers and report files.
"""

import json
import logging

import pytest

from config import get_config, reset_config
from graph.state import RunConfig
from qstate.states import PureState
from statelib.specs import CircuitSpec, EnsembleSpec
from utils.errors import SizeLimitError
from utils.helpers import format_number, get_output_path, load_json_argument, round_floats, setup_logging
from utils.report_writer import ReportWriter, write_report
from utils.validators import is_stochastic, validate_run_config, validate_spec_json

REPORT = {
    "command": "faf",
    "parameters": {"command": "faf", "state": "cat", "n": 4, "eps2": 0.5},
    "constants": {"mom_constant": 8.0},
    "results": {"faf1": 3.9999999999999996, "mixed": False},
    "rows": [],
}


def test_defaults(fresh_config):
    config = get_config()
    assert config.simulation.max_pure_qubits == 12
    assert config.simulation.max_mixed_qubits == 10
    assert config.estimator.mom_constant == 8.0
    assert config.optimizer.max_modes == 4
    assert get_config() is config


def test_env_overrides(monkeypatch, fresh_config):
    monkeypatch.setenv("FERMIPROBE_MAX_PURE_QUBITS", "5")
    monkeypatch.setenv("FERMIPROBE_MAX_MIXED_QUBITS", "4")
    monkeypatch.setenv("FERMIPROBE_OPTIMIZER_RESTARTS", "3")
    reset_config()
    assert get_config().optimizer.restarts == 3
    with pytest.raises(SizeLimitError):
        PureState.basis(0, 6)


def test_inconsistent_caps_rejected(monkeypatch, fresh_config):
    monkeypatch.setenv("FERMIPROBE_MAX_PURE_QUBITS", "4")
    reset_config()
    with pytest.raises(ValueError):
        get_config()


def test_output_path_uses_env(fresh_config, tmp_path):
    path = get_output_path("faf.json")
    assert path == tmp_path / "output" / "faf.json"
    assert path.parent.is_dir()


def test_module_logs_go_to_stderr(capsys, tmp_path):
    root = logging.getLogger()
    saved_handlers, saved_level = root.handlers[:], root.level
    try:
        logger = setup_logging("INFO", log_file=str(tmp_path / "run.log"))
        logging.getLogger("protocols.bell").info("sampling 10 shots")
        logger.debug("hidden")
        captured = capsys.readouterr()
        assert captured.out == ""
        assert "protocols.bell - INFO - sampling 10 shots" in captured.err
        assert "hidden" not in captured.err
        assert logger.name == "fermiprobe"
    finally:
        for handler in root.handlers:
            handler.close()
        root.handlers = saved_handlers
        root.setLevel(saved_level)
    assert "sampling 10 shots" in (tmp_path / "run.log").read_text()


def test_format_number():
    assert format_number(None) == ""
    assert format_number(True) == "true"
    assert format_number(0.1 + 0.2) == "0.3"
    assert format_number(3.9999999999999996) == "4"
    assert format_number(7) == "7"
    assert round_floats({"a": [0.1 + 0.2, 2], "b": None}) == {"a": [0.3, 2], "b": None}


def test_load_json_argument(tmp_path):
    assert load_json_argument('{"kind": "haar"}') == {"kind": "haar"}
    path = tmp_path / "spec.json"
    path.write_text('{"n_qubits": 2}')
    assert load_json_argument(str(path)) == {"n_qubits": 2}
    with pytest.raises(ValueError, match="line 1, column"):
        load_json_argument('{"kind": ')
    with pytest.raises(ValueError):
        load_json_argument(str(tmp_path / "missing.json"))


@pytest.mark.parametrize("fields,message", [
    ({"command": "faf"}, "requires --state"),
    ({"command": "faf", "state": "cat", "n": 4}, "--eps2"),
    ({"command": "faf", "state": "haar", "n": 3}, "--seed"),
    ({"command": "faf", "state": "defect", "n": 3}, "n >= 4"),
    ({"command": "faf", "state": "unicorn", "n": 3}, "Unknown state"),
    ({"command": "bell-estimate", "state": "ghz", "n": 4, "seed": 1}, "--shots"),
    ({"command": "bell-estimate", "state": "ghz", "n": 4, "shots": 100}, "--seed"),
    ({"command": "bell-estimate", "state": "ghz", "n": 4, "shots": 10, "seed": 1}, "at least 24 shots"),
    ({"command": "test-bell", "state": "ghz", "n": 4, "seed": 1}, "--epsilon"),
    ({"command": "sweep-theta"}, "--thetas"),
    ({"command": "brickwork", "n": 3, "depth": 2, "seed": 1}, "even"),
    ({"command": "brickwork", "n": 4, "depth": 2, "seed": 1, "noise": "dephasing"}, "--noise-strength"),
    ({"command": "layers"}, "--n"),
    ({"command": "sweep-depol", "state": "ghz", "n": 4}, "--ps"),
])
def test_run_config_requirements(fields, message):
    is_valid, error = validate_run_config(RunConfig(**fields))
    assert not is_valid
    assert message in error


def test_valid_run_configs():
    assert validate_run_config(RunConfig(command="faf", state="cat", n=4, eps2=0.5)) == (True, None)
    assert validate_run_config(RunConfig(command="layers", n=3)) == (True, None)
    assert validate_run_config(RunConfig(command="faf", state="basis", bits="0110")) == (True, None)


def test_stochastic_commands():
    assert is_stochastic(RunConfig(command="test-bell"))
    assert is_stochastic(RunConfig(command="faf", state_json={"kind": "subset_phase"}))
    assert not is_stochastic(RunConfig(command="sweep-theta", thetas=[0.0]))
    assert is_stochastic(RunConfig(command="sweep-theta", thetas=[0.0], shots=10))


def test_echo_excludes_output_fields():
    config = RunConfig(command="layers", n=3, output="x.json", format="csv", records=True)
    echo = config.echo()
    assert echo["n"] == 3
    assert "output" not in echo and "format" not in echo and "records" not in echo
    assert "seed" not in echo


def test_spec_json_validation():
    assert validate_spec_json(EnsembleSpec, {"kind": "haar", "n_qubits": 2}) == (True, None)
    is_valid, message = validate_spec_json(CircuitSpec, {"n_qubits": 2, "ops": [{"kind": "rz", "qubit": 5, "angle": 0.1}]})
    assert not is_valid
    assert message.startswith("CircuitSpec:")
    is_valid, message = validate_spec_json(EnsembleSpec, {"kind": "cat"})
    assert "n_qubits" in message


def test_json_report_puts_timestamp_first(tmp_path):
    path = write_report(REPORT, tmp_path / "r.json", "json", timestamp="2024-01-01T00:00:00")
    lines = path.read_text().splitlines()
    assert lines[1] == '  "timestamp": "2024-01-01T00:00:00",'
    data = json.loads(path.read_text())
    assert data["results"]["faf1"] == 4.0
    assert data["command"] == "faf"


def test_reports_differ_only_in_timestamp(tmp_path):
    writer = ReportWriter("json")
    first = writer.render(REPORT, "2024-01-01T00:00:00").splitlines()
    second = writer.render(REPORT, "2025-06-30T12:00:00").splitlines()
    assert first[0] == second[0]
    assert first[2:] == second[2:]
    assert first[1] != second[1]


def test_csv_report_layout():
    report = dict(REPORT, rows=[{"theta": 0.0, "witness_est": None}, {"theta": 1.5, "witness_est": 0.25}])
    text = ReportWriter("csv").render(report, "2024-01-01T00:00:00")
    lines = text.splitlines()
    assert lines[0] == "# timestamp=2024-01-01T00:00:00"
    assert lines[1] == "# command=faf"
    assert "# results.faf1=4" in lines
    assert "# parameters.eps2=0.5" in lines
    assert "# results.mixed=false" in lines
    assert lines[-3:] == ["theta,witness_est", "0,", "1.5,0.25"]


def test_unknown_report_format():
    with pytest.raises(ValueError):
        ReportWriter("xml")
