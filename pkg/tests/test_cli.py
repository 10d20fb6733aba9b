import json

import numpy as np
import pytest

from netgof.cli import main
from netgof.graph import load_edge_list


def run_cli(args):
    return main(args)


def test_generate_fit_test_select_round_trip(tmp_path, capsys):
    out = str(tmp_path / "g.edges")
    code = run_cli([
        "generate", "--preset", "sbm_planted", "--n", "120",
        "--param", "rho=0.1", "--seed", "11", "--out", out,
    ])
    assert code == 0
    sidecar = json.loads((tmp_path / "g.edges.json").read_text())
    assert sidecar["model"]["family"] == "sbm"
    assert len(sidecar["model"]["labels"]) == 120
    A = load_edge_list(out)
    assert A.shape[0] <= 120  # trailing isolated nodes have no edges
    capsys.readouterr()

    code = run_cli(["fit", "--input", out, "--model", "er", "--seed", "1"])
    assert code == 0
    fitted = json.loads(capsys.readouterr().out)
    assert fitted["family"] == "er" and 0 < fitted["p"] < 1

    report_path = str(tmp_path / "test.json")
    code = run_cli([
        "test", "--input", out, "--model", "sbm", "--k", "3",
        "--alpha", "0.05", "--seed", "7", "--format", "json",
        "--out", report_path,
    ])
    assert code == 0
    report = json.loads(open(report_path).read())
    assert set(report) >= {"statistic", "p_value", "decision", "alpha"}

    code = run_cli([
        "select-k", "--input", out, "--kmax", "2", "--alpha", "0.001",
        "--seed", "5",
    ])
    assert code == 0
    selection = json.loads(capsys.readouterr().out)
    assert "k_hat" in selection and len(selection["trace"]) >= 1


def test_test_subcommand_on_named_dataset(capsys):
    code = run_cli(["test", "--dataset", "karate", "--model", "er"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["p_value"] == pytest.approx(0.2625, abs=2e-4)


def test_untestable_candidate_reports_cleanly(tmp_path, capsys):
    path = tmp_path / "star.edges"
    path.write_text("1 2\n1 3\n1 4\n")  # leaves have degree 1, hub n-1
    code = run_cli(["test", "--input", str(path), "--model", "beta"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["decision"] == "untestable"


def test_missing_dataset_exits_3(capsys):
    code = run_cli(["test", "--dataset", "dolphin", "--model", "er"])
    assert code == 3


def test_unknown_dataset_is_config_error(capsys):
    code = run_cli(["test", "--dataset", "mystery", "--model", "er"])
    assert code == 2


def test_missing_input_is_config_error(capsys):
    code = run_cli(["test", "--model", "er"])
    assert code == 2


def test_simulate_size_csv(tmp_path, capsys):
    cfg = tmp_path / "size.cfg"
    cfg.write_text(
        "experiment = size\ntruth = er\nn = 50\np = 0.2\n"
        "candidates = er\nreps = 4\nseed = 2\n"
    )
    out = tmp_path / "size.csv"
    code = run_cli([
        "simulate", "--experiment", "size", "--config", str(cfg),
        "--out", str(out), "--format", "csv",
    ])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "setting,estimate,stderr,reps,failures"
    assert len(lines) == 2


def test_simulate_null_writes_points(tmp_path, capsys):
    cfg = tmp_path / "null.cfg"
    cfg.write_text(
        "experiment = null\ntruth = er\nn = 50\np = 0.2\n"
        "oracle = true\nreps = 5\nseed = 2\n"
    )
    out = tmp_path / "null.csv"
    code = run_cli(["simulate", "--config", str(cfg), "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# ks_distance =")
    assert lines[1] == "statistic,normal_quantile"
    assert len(lines) == 7


def test_simulate_experiment_mismatch_is_config_error(tmp_path, capsys):
    cfg = tmp_path / "size.cfg"
    cfg.write_text(
        "experiment = size\ntruth = er\nn = 40\np = 0.2\n"
        "candidates = er\nreps = 2\n"
    )
    code = run_cli([
        "simulate", "--experiment", "kest", "--config", str(cfg),
    ])
    assert code == 2


def test_simulate_real_all_missing_exits_3(tmp_path, capsys):
    cfg = tmp_path / "real.cfg"
    cfg.write_text("experiment = real\ndatasets = dolphin\ncandidates = er\n")
    code = run_cli(["simulate", "--config", str(cfg)])
    assert code == 3


def test_simulate_seed_override_changes_nothing_but_seed(tmp_path):
    cfg = tmp_path / "size.cfg"
    cfg.write_text(
        "experiment = size\ntruth = er\nn = 50\np = 0.2\n"
        "candidates = er\nreps = 3\nseed = 1\n"
    )
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    assert run_cli(["simulate", "--config", str(cfg), "--out", str(out_a),
                    "--seed", "123"]) == 0
    assert run_cli(["simulate", "--config", str(cfg), "--out", str(out_b),
                    "--seed", "123"]) == 0
    assert out_a.read_bytes() == out_b.read_bytes()
