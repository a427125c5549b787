"""
End-to-end tests of the command-line front end and the run pipeline.
"""

import json

import pytest

from graph.workflow import EXIT_OK, EXIT_REJECT, EXIT_USAGE, run_workflow
from main import main
from protocols.records import read_bell_records


def _report(path):
    return json.loads(path.read_text())


def test_faf_of_cat_state(tmp_path, fresh_config):
    out = tmp_path / "faf.json"
    code = main(["faf", "--state", "cat", "--n", "4", "--eps2", "0.5", "--k", "1", "--output", str(out)])
    assert code == EXIT_OK
    report = _report(out)
    assert report["results"]["faf1"] == 4.0
    assert report["results"]["eps_g_sq_upper"] == 1.0
    assert report["parameters"]["eps2"] == 0.5
    assert "timestamp" in report


def test_default_output_location(tmp_path, fresh_config):
    assert main(["witness", "--state", "ghz", "--n", "3"]) == EXIT_OK
    report = _report(tmp_path / "output" / "witness.json")
    assert report["results"]["witness"] == pytest.approx(3.0)


def test_bell_test_accepts_gaussian_state(tmp_path, fresh_config):
    out = tmp_path / "test.json"
    code = main([
        "test-bell", "--state", "gaussian-random", "--n", "3", "--epsilon", "0.3",
        "--delta", "0.01", "--seed", "7", "--output", str(out),
    ])
    assert code == EXIT_OK
    assert _report(out)["results"]["verdict"] == "ACCEPT"


def test_bell_test_rejects_defect_state(tmp_path, fresh_config, capsys):
    out = tmp_path / "test.json"
    code = main([
        "test-bell", "--state", "defect", "--n", "4", "--epsilon", "0.5", "--seed", "1", "--output", str(out),
    ])
    assert code == EXIT_REJECT
    assert "REJECT" in capsys.readouterr().out
    assert _report(out)["results"]["evidence"]["lambda"] > 0


def test_single_copy_test_command(tmp_path, fresh_config):
    code = main([
        "test-single", "--state", "basis", "--bits", "00", "--epsilon", "0.8",
        "--seed", "5", "--output", str(tmp_path / "single.json"),
    ])
    assert code == EXIT_OK


def test_layers_listing(tmp_path, fresh_config, capsys):
    out = tmp_path / "layers.json"
    assert main(["layers", "--n", "2", "--output", str(out)]) == EXIT_OK
    printed = capsys.readouterr().out.splitlines()
    assert printed[:3] == ["layer 1: (1,4) (2,3)", "layer 2: (2,4) (1,3)", "layer 3: (3,4) (1,2)"]
    assert _report(out)["results"]["n_layers"] == 3


def test_missing_seed_is_a_usage_error(tmp_path, fresh_config, capsys):
    code = main(["bell-estimate", "--state", "ghz", "--n", "4", "--shots", "100", "--output", str(tmp_path / "b.json")])
    assert code == EXIT_USAGE
    assert "--seed" in capsys.readouterr().err
    assert not (tmp_path / "b.json").exists()


def test_malformed_state_json(tmp_path, fresh_config, capsys):
    code = main(["faf", "--state-json", '{"kind": ', "--output", str(tmp_path / "f.json")])
    assert code == EXIT_USAGE
    assert "line 1" in capsys.readouterr().err


def test_invalid_state_json_fields(tmp_path, fresh_config, capsys):
    code = main(["faf", "--state-json", '{"kind": "subset_phase", "n_qubits": 3, "q": 5}', "--seed", "1"])
    assert code == EXIT_USAGE
    assert "q=5" in capsys.readouterr().err


def test_size_cap_is_a_usage_error(tmp_path, fresh_config):
    code = main(["faf", "--state", "haar", "--n", "13", "--seed", "1", "--output", str(tmp_path / "f.json")])
    assert code == EXIT_USAGE


def test_bell_estimate_reports_are_reproducible(tmp_path, fresh_config):
    args = ["bell-estimate", "--state", "cat", "--n", "4", "--eps2", "0.5", "--shots", "2000", "--seed", "3",
            "--format", "csv"]
    assert main(args + ["--output", str(tmp_path / "a.csv")]) == EXIT_OK
    assert main(args + ["--output", str(tmp_path / "b.csv")]) == EXIT_OK
    first = (tmp_path / "a.csv").read_text().splitlines()
    second = (tmp_path / "b.csv").read_text().splitlines()
    assert first[0].startswith("# timestamp=")
    assert first[1:] == second[1:]
    assert "# results.purity_est=1" in first


def test_raw_bell_records(tmp_path, fresh_config):
    out = tmp_path / "bell.json"
    code = main([
        "bell-estimate", "--state", "ghz", "--n", "4", "--shots", "500", "--seed", "2",
        "--records", "--output", str(out),
    ])
    assert code == EXIT_OK
    record = read_bell_records(tmp_path / "bell.shots.ndjson", 4)
    assert len(record) == 500


def test_layer_shot_records(tmp_path, fresh_config):
    out = tmp_path / "single.json"
    code = main([
        "single-estimate", "--state", "basis", "--bits", "00", "--shots", "10", "--seed", "4",
        "--records", "--output", str(out),
    ])
    assert code == EXIT_OK
    lines = (tmp_path / "single.layers.csv").read_text().splitlines()
    assert lines[0] == "layer,shot,x_1,x_2"
    assert len(lines) == 1 + 3 * 10


def test_config_file_merges_with_flags(tmp_path, fresh_config):
    config_path = tmp_path / "run.json"
    config_path.write_text(json.dumps({"state": "cat", "n": 4, "eps2": 0.1}))
    out = tmp_path / "faf.json"
    assert main(["faf", "--config", str(config_path), "--eps2", "0.5", "--output", str(out)]) == EXIT_OK
    assert _report(out)["results"]["faf1"] == 4.0


def test_sweep_theta_csv(tmp_path, fresh_config):
    out = tmp_path / "sweep.csv"
    code = main(["sweep-theta", "--thetas", "0", "1.5707963267948966", "--ps", "0", "0.05", "--format", "csv",
                 "--output", str(out)])
    assert code == EXIT_OK
    lines = [line for line in out.read_text().splitlines() if not line.startswith("#")]
    assert lines[0] == "theta,p,witness_exact,witness_est,stderr,shots,seed,witness_predicted"
    assert len(lines) == 5


def test_sweep_depol_json(tmp_path, fresh_config):
    out = tmp_path / "depol.json"
    assert main(["sweep-depol", "--state", "ghz", "--n", "4", "--ps", "0", "0.5", "1", "--output", str(out)]) == EXIT_OK
    rows = _report(out)["rows"]
    assert [row["p"] for row in rows] == [0.0, 0.5, 1.0]
    assert rows[-1]["witness_exact"] == pytest.approx(0.0, abs=1e-9)


def test_brickwork_command(tmp_path, fresh_config):
    out = tmp_path / "brick.json"
    code = main(["brickwork", "--n", "4", "--depth", "3", "--seed", "2", "--instances", "2",
                 "--noise", "dephasing", "--noise-strength", "0.1", "--output", str(out)])
    assert code == EXIT_OK
    report = _report(out)
    assert [row["depth"] for row in report["rows"]] == [0, 1, 2, 3]
    assert report["constants"]["instances"] == 2


def test_ensemble_stats_command(tmp_path, fresh_config):
    out = tmp_path / "ens.json"
    code = main(["ensemble-stats", "--state", "haar", "--n", "3", "--draws", "20", "--seed", "1", "--output", str(out)])
    assert code == EXIT_OK
    results = _report(out)["results"]
    assert results["draws"] == 20
    assert results["closed_form"] == pytest.approx(3 - 15 / 9)


def test_workflow_state_after_error(fresh_config):
    final = run_workflow({"command": "faf", "state": "cat", "n": 4})
    assert final["status"] == "failed"
    assert final["errors"][0]["node"] == "validate_config"
    assert final["report_path"] is None


def test_workflow_rejects_unknown_command(fresh_config):
    final = run_workflow({"command": "explode"})
    assert final["errors"][0]["error_type"] == "ValidationError"
