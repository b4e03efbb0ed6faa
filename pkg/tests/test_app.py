import json

import pytest
import yaml

from threshold_lab.api.router import verdict
from threshold_lab.app import dispatch
from threshold_lab.core.exceptions import (
    EXIT_ASSERTION,
    EXIT_CONFIG_INVALID,
    EXIT_INCONCLUSIVE,
    EXIT_REPLAY_MISMATCH,
)

MOMENT = ["--set", "h.kind=cycle", "--set", "h.n=16", "--set", "h.size=4", "--p", "0.1"]


def read_summary(out):
    return json.loads((out / "summary.json").read_text())


def test_threshold_of_triangle_free_family(tmp_path):
    out = tmp_path / "threshold"
    status = dispatch(["threshold", "--family", "triangle-free", "--n", "3", "--seed", "7", "--out", str(out)])
    assert status == 0
    summary = read_summary(out)
    assert summary["subcommand"] == "threshold"
    assert summary["result"]["threshold"]["value"] == pytest.approx(0.5 ** (1 / 3), abs=1e-5)
    assert summary["result"]["threshold"]["provenance"] == "exact"
    manifest = yaml.safe_load((out / "manifest.yaml").read_text())
    assert manifest["exit_status"] == 0
    assert set(manifest["data_files"]) == {"summary.json"}
    assert json.loads((out / "config.json").read_text())["master_seed"] == 7


def test_sandwich_from_family_file(tmp_path, downset_file):
    out = tmp_path / "sandwich"
    status = dispatch(["sandwich", "--family-file", str(downset_file), "--seed", "1", "--out", str(out)])
    assert status == 0
    assert read_summary(out)["result"]["passed"]


def test_missing_seed_writes_nothing(tmp_path):
    out = tmp_path / "missing"
    assert dispatch(["mu", "--family", "triangle-free", "--n", "3", "--p", "0.5", "--out", str(out)]) == EXIT_CONFIG_INVALID
    assert not out.exists()


def test_invalid_params_write_nothing(tmp_path):
    out = tmp_path / "bad"
    argv = ["mu", "--family", "triangle-free", "--n", "3", "--p", "1.5", "--seed", "1", "--out", str(out)]
    assert dispatch(argv) == EXIT_CONFIG_INVALID
    assert not out.exists()
    assert dispatch(["moment", "--seed", "1", "--out", str(out), "--set", "h=3"]) == EXIT_CONFIG_INVALID
    assert dispatch(["mu", "--seed", "1", "--out", str(out), "--set", "oops"]) == EXIT_CONFIG_INVALID


def test_reserved_family_is_rejected(tmp_path):
    out = tmp_path / "reserved"
    argv = ["mu", "--family", "clique-free-r", "--n", "4", "--p", "0.5", "--seed", "1", "--out", str(out)]
    assert dispatch(argv) == EXIT_CONFIG_INVALID
    assert not out.exists()


def test_vacuous_tail_bound_exits_inconclusive(tmp_path):
    out = tmp_path / "tail"
    argv = [
        "tail-undir", "--seed", "3", "--trials", "50", "--out", str(out), "--p", "0.00625",
        "--set", "h.kind=star", "--set", "h.n=64", "--set", "h.size=16",
    ]
    assert dispatch(argv) == EXIT_INCONCLUSIVE
    summary = read_summary(out)
    assert summary["status"] == EXIT_INCONCLUSIVE
    assert summary["result"]["vacuous"]


def test_verdict_statuses():
    assert verdict(True) == 0
    assert verdict(False) == EXIT_ASSERTION
    assert verdict(None) == EXIT_INCONCLUSIVE
    assert verdict(True, vacuous=True) == EXIT_INCONCLUSIVE


def test_run_from_config_file(tmp_path):
    out = tmp_path / "from-config"
    config = tmp_path / "experiment.yaml"
    config.write_text(
        yaml.safe_dump(
            {
                "subcommand": "mu",
                "params": {"family": "triangle-free", "n": 3, "p": 0.5},
                "master_seed": 11,
                "output_path": str(out),
            }
        )
    )
    assert dispatch(["run", "--config", str(config)]) == 0
    assert read_summary(out)["result"]["value"] == pytest.approx(0.875)


def test_run_rejects_unknown_command(tmp_path):
    config = tmp_path / "experiment.json"
    config.write_text(json.dumps({"subcommand": "nope", "master_seed": 1, "output_path": str(tmp_path / "x")}))
    assert dispatch(["run", "--config", str(config)]) == EXIT_CONFIG_INVALID


def test_trials_as_json(tmp_path):
    out = tmp_path / "moment"
    assert dispatch(["moment", "--seed", "2", "--trials", "20", "--format", "json", "--out", str(out), *MOMENT]) == 0
    records = json.loads((out / "trials.json").read_text())
    assert [r["trial"] for r in records] == list(range(20))
    assert not (out / "trials.csv").exists()


@pytest.fixture
def finished_run(tmp_path):
    out = tmp_path / "run"
    argv = ["moment", "--seed", "5", "--trials", "200", "--threads", "1", "--out", str(out), *MOMENT]
    assert dispatch(argv) == 0
    return out


@pytest.mark.parametrize("threads", ["1", "4", "8"])
def test_replay_matches_across_thread_counts(finished_run, threads):
    assert dispatch(["replay", str(finished_run / "manifest.yaml"), "--threads", threads]) == 0


def test_replay_after_config_tamper(finished_run):
    config = finished_run / "config.json"
    data = json.loads(config.read_text())
    data["master_seed"] = 6
    config.write_text(json.dumps(data))
    assert dispatch(["replay", str(finished_run / "manifest.yaml")]) == EXIT_CONFIG_INVALID


def test_replay_after_data_tamper(finished_run):
    trials = finished_run / "trials.csv"
    lines = trials.read_text().splitlines()
    lines[1] = lines[1].replace("0", "9", 1)
    trials.write_text("\n".join(lines) + "\n")
    assert dispatch(["replay", str(finished_run / "manifest.yaml")]) == EXIT_REPLAY_MISMATCH


def test_replay_of_missing_manifest(tmp_path):
    assert dispatch(["replay", str(tmp_path / "manifest.yaml")]) == EXIT_CONFIG_INVALID


def test_cover_check_reports_invalid_cover(tmp_path):
    out = tmp_path / "cover"
    assert dispatch(["cover-check", "--n", "5", "--k", "3", "--seed", "1", "--out", str(out)]) == EXIT_ASSERTION
    result = read_summary(out)["result"]
    assert result["valid"] is False
    assert result["cover_mode"] == "exact"
    assert len(result["witness"]["edges"]) == 5


QUANTITY_KEYS = {"value", "provenance", "half_width"}
# graphs, covers and certificates are data, not measurements
DATA_KEYS = {"witness", "certificate", "fractional_certificate", "members", "edges"}


def bare_floats(node, path="result"):
    """Paths of floats that are not the value or half-width of a Quantity."""
    if isinstance(node, dict):
        if set(node) == QUANTITY_KEYS:
            assert node["provenance"] in {"exact", "monte-carlo", "formula"}, path
            if node["provenance"] == "monte-carlo":
                assert node["half_width"] is not None, path
            return []
        return [p for key, value in node.items() if key not in DATA_KEYS for p in bare_floats(value, f"{path}.{key}")]
    if isinstance(node, list):
        return [p for i, value in enumerate(node) for p in bare_floats(value, f"{path}[{i}]")]
    return [path] if isinstance(node, float) else []


SMALL_GRAPH = ["--set", "h.kind=matching", "--set", "h.n=64", "--set", "h.size=16", "--p", "0.00625"]


@pytest.mark.parametrize(
    "argv",
    [
        ["moment", "--trials", "50", *MOMENT],
        ["tail-dir", "--trials", "50", *SMALL_GRAPH],
        ["tail-undir", "--trials", "50", *SMALL_GRAPH],
        ["mu", "--family", "triangle-free", "--n", "3", "--p", "0.5", "--trials", "50", "--set", "method=monte-carlo"],
        ["threshold", "--family", "triangle-free", "--n", "3", "--trials", "200", "--set", "method=monte-carlo"],
        ["qexact", "--family", "triangle-free", "--n", "3"],
        ["qfrac", "--family", "triangle-free", "--n", "3"],
        ["sandwich", "--family", "triangle-free", "--n", "3"],
        ["capture", "--n", "10", "--p", "0.2", "--trials", "30"],
        ["couple", "--n", "6", "--p", "0.2", "--trials", "100"],
        ["condition", "--n", "100", "--set", "cliques.k=20"],
        ["cover-check", "--n", "5", "--k", "3"],
        ["fbound", "--m", "3", "--n", "6", "--set", "cover_size=20"],
    ],
)
def test_every_reported_float_carries_provenance(tmp_path, argv):
    out = tmp_path / argv[0]
    dispatch([*argv, "--seed", "4", "--out", str(out)])
    summary = read_summary(out)
    assert bare_floats(summary["result"]) == []


@pytest.mark.parametrize(
    "argv, rows",
    [
        (["mu", "--family", "triangle-free", "--n", "3", "--p", "0.5", "--trials", "40", "--set", "method=monte-carlo"], 40),
        (["threshold", "--family", "triangle-free", "--n", "3", "--trials", "200", "--set", "method=monte-carlo"], None),
    ],
)
def test_monte_carlo_family_runs_write_trials(tmp_path, argv, rows):
    out = tmp_path / argv[0]
    assert dispatch([*argv, "--seed", "8", "--out", str(out)]) == 0
    lines = (out / "trials.csv").read_text().splitlines()
    assert lines[0].startswith("trial,")
    if rows is not None:
        assert len(lines) == rows + 1
    else:
        assert len(lines) - 1 == read_summary(out)["result"]["levels"]
    manifest = yaml.safe_load((out / "manifest.yaml").read_text())
    assert "trials.csv" in manifest["data_files"]
