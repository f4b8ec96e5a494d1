import json

import pytest
from click.testing import CliRunner

from greenpod.cli import main

FRESH_NODES = [
    {"name": "node-a", "category": "A", "vcpus": 2, "memory_gb": 4.0},
    {"name": "node-b", "category": "B", "vcpus": 2, "memory_gb": 8.0},
    {"name": "node-c", "category": "C", "vcpus": 4, "memory_gb": 16.0},
    {"name": "node-default", "category": "Default", "vcpus": 2, "memory_gb": 8.0},
]


@pytest.fixture()
def runner():
    return CliRunner()


def _write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


@pytest.fixture()
def nodes_file(tmp_path):
    return _write(tmp_path / "nodes.json", FRESH_NODES)


@pytest.fixture()
def pod_file(tmp_path):
    return _write(tmp_path / "pod.json", {"name": "pod-m", "workload_class": "Medium"})


# -------------------------------------------------------------------- rank

def test_rank_energy_scheme_picks_category_a(runner, nodes_file, pod_file):
    result = runner.invoke(main, ["rank", "--nodes", nodes_file, "--pod", pod_file,
                                  "--scheme", "energy"])
    assert result.exit_code == 0, result.output
    assert "best: node-a" in result.output


def test_rank_writes_structured_output(runner, nodes_file, pod_file, tmp_path):
    out = tmp_path / "decision.json"
    result = runner.invoke(main, ["rank", "--nodes", nodes_file, "--pod", pod_file,
                                  "--scheme", "energy", "--out", str(out)])
    assert result.exit_code == 0
    doc = json.loads(out.read_text())
    assert doc["best"] == "node-a"
    assert set(doc["closeness"]) == {n["name"] for n in FRESH_NODES}
    assert doc["ranking"][0] == "node-a"
    # machine output and human output agree
    for name, value in doc["closeness"].items():
        assert f"{name:<15s} {value:.6f}" in result.output


def test_rank_identical_nodes_first_wins(runner, tmp_path, pod_file):
    nodes = _write(tmp_path / "same.json",
                   [{"name": f"n{i}", "vcpus": 2, "memory_gb": 8.0} for i in range(3)])
    result = runner.invoke(main, ["rank", "--nodes", nodes, "--pod", pod_file,
                                  "--scheme", "general"])
    assert result.exit_code == 0
    assert "best: n0" in result.output
    assert result.output.count("1.000000") == 3


def test_rank_empty_node_file_is_usage_error(runner, tmp_path, pod_file):
    nodes = _write(tmp_path / "empty.json", [])
    result = runner.invoke(main, ["rank", "--nodes", nodes, "--pod", pod_file])
    assert result.exit_code == 2


def test_rank_unschedulable_exits_one(runner, tmp_path, pod_file):
    nodes = _write(tmp_path / "full.json",
                   [dict(n, allocated_cpu=n["vcpus"]) for n in FRESH_NODES])
    result = runner.invoke(main, ["rank", "--nodes", nodes, "--pod", pod_file])
    assert result.exit_code == 1
    assert "no feasible node" in result.output


def test_rank_unknown_scheme_is_usage_error(runner, nodes_file, pod_file):
    result = runner.invoke(main, ["rank", "--nodes", nodes_file, "--pod", pod_file,
                                  "--scheme", "warp"])
    assert result.exit_code == 2
    assert "general" in result.output  # valid choices listed


def test_rank_missing_file_is_usage_error(runner, pod_file):
    result = runner.invoke(main, ["rank", "--nodes", "/nonexistent.json", "--pod", pod_file])
    assert result.exit_code == 2


# ---------------------------------------------------------------- simulate

def test_simulate_deterministic_csv(runner, tmp_path):
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    for out in (out_a, out_b):
        result = runner.invoke(main, ["simulate", "--level", "medium", "--scheme", "energy",
                                      "--seed", "42", "--out", str(out)])
        assert result.exit_code == 0, result.output
    assert out_a.read_bytes() == out_b.read_bytes()


def test_simulate_prints_summary(runner):
    result = runner.invoke(main, ["simulate", "--level", "low", "--scheme", "energy",
                                  "--seed", "1"])
    assert result.exit_code == 0
    assert "optimization %" in result.output
    assert "energy-centric" in result.output


def test_simulate_unknown_level(runner):
    result = runner.invoke(main, ["simulate", "--level", "ultra", "--scheme", "energy"])
    assert result.exit_code == 2


# --------------------------------------------------------------- factorial

def test_factorial_small_grid(runner, tmp_path):
    out = tmp_path / "grid.csv"
    heatmap = tmp_path / "heat.csv"
    report = tmp_path / "report.json"
    result = runner.invoke(main, [
        "factorial", "--levels", "low", "--schemes", "energy,general",
        "--seeds", "1..3", "--out", str(out), "--heatmap", str(heatmap),
        "--report", str(report),
    ])
    assert result.exit_code == 0, result.output
    assert len(out.read_text().splitlines()) == 7  # header + 2 schemes x 3 seeds
    heat = heatmap.read_text().splitlines()
    assert heat[0] == "scheme,low"
    assert len(heat) == 3
    doc = json.loads(report.read_text())
    assert len(doc["runs"]) == 6
    assert "average" in result.output


def test_factorial_unknown_scheme_lists_valid_names(runner):
    result = runner.invoke(main, ["factorial", "--schemes", "bogus", "--seeds", "1"])
    assert result.exit_code == 2
    assert "resource" in result.output


def test_factorial_bad_seed_spec(runner):
    result = runner.invoke(main, ["factorial", "--seeds", ",,"])
    assert result.exit_code == 2


# ------------------------------------------------------------------ impact

def test_impact_defaults_render_reference_table(runner):
    result = runner.invoke(main, ["impact"])
    assert result.exit_code == 0
    for cell in ("0.0293 MWh", "10.70 MWh", "3.99 metric tons", "0.87 vehicles",
                 "$1,380", "$1,381", "$2,047", "$6,907", "$10,233",
                 "107.02 MWh", "39.94 metric tons", "$13,795", "$102,326"):
        assert cell in result.output, cell


def test_impact_zero_optimization(runner):
    result = runner.invoke(main, ["impact", "--optimization", "0"])
    assert result.exit_code == 0
    assert "$0" in result.output
    assert "0.0000 MWh" in result.output


def test_impact_writes_files(runner, tmp_path):
    json_path = tmp_path / "impact.json"
    csv_path = tmp_path / "impact.csv"
    result = runner.invoke(main, ["impact", "--json", str(json_path), "--csv", str(csv_path)])
    assert result.exit_code == 0
    doc = json.loads(json_path.read_text())
    assert doc["rendered"]["Annual Energy Savings"] == ["10.70 MWh", "107.02 MWh"]
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "metric,single_cluster,clusters_10"
    assert len(lines) == 12


def test_impact_non_numeric_flag_is_usage_error(runner):
    result = runner.invoke(main, ["impact", "--jobs-per-day", "many"])
    assert result.exit_code == 2


def test_impact_invalid_assumption_exits_one(runner):
    result = runner.invoke(main, ["impact", "--optimization", "1.5"])
    assert result.exit_code == 1


# -------------------------------------------------------------------- help

def test_every_subcommand_documents_flags(runner):
    result = runner.invoke(main, ["--help"])
    assert result.exit_code == 0
    for sub in ("rank", "simulate", "factorial", "impact", "serve"):
        assert sub in result.output
        sub_help = runner.invoke(main, [sub, "--help"])
        assert sub_help.exit_code == 0
        assert "--help" in sub_help.output
