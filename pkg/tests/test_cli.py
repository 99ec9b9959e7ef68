import csv
import json
import subprocess
import sys

import pytest

CLI = [sys.executable, "-m", "loopfield.cli"]


def run_cli(*args, cwd=None):
    return subprocess.run(CLI + list(args), capture_output=True, text=True,
                          cwd=cwd)


@pytest.fixture()
def graph_file(tmp_path):
    path = tmp_path / "graph.json"
    path.write_text(json.dumps({
        "vertices": ["a", "b", "c"],
        "edges": [["a", "b", 1.0], ["b", "c", 1.0]],
        "kappa": {"a": 1.0},
        "x0": "a",
        "u": 0.8,
    }))
    return path


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_sample_gff_outputs_and_determinism(graph_file, tmp_path):
    out1, out2 = tmp_path / "o1", tmp_path / "o2"
    for out in (out1, out2):
        res = run_cli("sample-gff", "--graph", str(graph_file),
                      "--n", "3", "--seed", "5", "--out", str(out))
        assert res.returncode == 0, res.stderr
    rows = read_csv(out1 / "fields.csv")
    assert rows[0] == ["vertex", "value"]
    assert len(rows) == 1 + 3 * 3  # header + n replicas x 3 vertices
    assert (out1 / "summary.txt").exists()
    # apart from the timestamped summary, reruns are byte identical
    assert (out1 / "fields.csv").read_bytes() == (out2 / "fields.csv").read_bytes()


def test_sample_gff_pins_root(graph_file, tmp_path):
    res = run_cli("sample-gff", "--graph", str(graph_file), "--n", "1",
                  "--seed", "0", "--out", str(tmp_path / "o"))
    assert res.returncode == 0, res.stderr
    rows = read_csv(tmp_path / "o" / "fields.csv")
    pinned = {r[0]: float(r[1]) for r in rows[1:]}
    assert pinned["a"] == pytest.approx((2 * 0.8) ** 0.5)


def test_unconditioned_sampling_needs_killing(tmp_path):
    path = tmp_path / "recurrent.json"
    path.write_text(json.dumps({"vertices": ["a", "b"],
                                "edges": [["a", "b", 1.0]]}))
    res = run_cli("sample-gff", "--graph", str(path), "--n", "1",
                  "--seed", "0", "--out", str(tmp_path / "o"))
    assert res.returncode == 2
    assert res.stderr.strip()


def test_missing_and_invalid_graph_files(tmp_path):
    res = run_cli("sample-gff", "--graph", str(tmp_path / "absent.json"),
                  "--n", "1", "--seed", "0", "--out", str(tmp_path / "o"))
    assert res.returncode == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    res = run_cli("sample-gff", "--graph", str(bad), "--n", "1",
                  "--seed", "0", "--out", str(tmp_path / "o"))
    assert res.returncode == 2


def test_inverse_rk_engines(graph_file, tmp_path):
    for engine in ("stack", "jump-rate", "discrete"):
        out = tmp_path / engine
        res = run_cli("inverse-rk", "--graph", str(graph_file),
                      "--engine", engine, "--n", "2", "--seed", "3",
                      "--out", str(out))
        assert res.returncode == 0, res.stderr
        records = [json.loads(ln)
                   for ln in (out / "runs.jsonl").read_text().splitlines()]
        assert len(records) == 2
        for rec in records:
            assert rec["terminal_vertex"] == "a"
            assert "crossings" in rec and "cluster_count" in rec
            if engine == "discrete":
                assert rec["duration"] is None
            else:
                assert rec["duration"] > 0
        assert (out / "events.csv").exists()
        assert (out / "trajectory.csv").exists() == (engine != "discrete")


def test_engine_choice_is_validated(graph_file, tmp_path):
    res = run_cli("inverse-rk", "--graph", str(graph_file),
                  "--engine", "warp", "--n", "1", "--seed", "0",
                  "--out", str(tmp_path / "o"))
    assert res.returncode == 2


def test_oracle_probabilities_sum_to_one(graph_file, tmp_path):
    for which in ("ising", "fk", "current"):
        out = tmp_path / which
        res = run_cli("oracle", which, "--graph", str(graph_file),
                      "--out", str(out))
        assert res.returncode == 0, res.stderr
        rows = read_csv(out / "oracle.csv")
        assert rows[0] == ["outcome", "probability"]
        total = sum(float(r[1]) for r in rows[1:])
        assert total == pytest.approx(1.0, abs=1e-6)


def test_verify_runs_a_suite(tmp_path):
    out = tmp_path / "v"
    res = run_cli("verify", "single-edge-couplings", "--seed", "7",
                  "--out", str(out))
    assert res.returncode == 0, res.stderr
    assert "suite single-edge-couplings seed=7: PASS" in res.stdout
    rows = read_csv(out / "report.csv")
    assert rows[0] == ["suite", "seed", "check", "kind", "statistic",
                       "p_value", "threshold", "passed", "passed_raw",
                       "detail"]
    assert len(rows) > 1
    assert "PASS" in (out / "verify.txt").read_text()


def test_verify_validation():
    res = run_cli("verify", "no-such-suite", "--seed", "1")
    assert res.returncode == 2
    res = run_cli("verify", "single-edge-couplings")  # seed is mandatory
    assert res.returncode == 2


def test_help_documents_every_flag():
    res = run_cli("--help")
    assert res.returncode == 0
    for cmd in ("sample-gff", "sample-loopsoup", "forward-rk",
                "forward-enlarged", "inverse-rk", "invert-loopsoup",
                "couple-fk", "invert-current", "oracle", "verify"):
        assert cmd in res.stdout
    res = run_cli("inverse-rk", "--help")
    for flag in ("--graph", "--x0", "--u", "--n", "--seed", "--engine",
                 "--out"):
        assert flag in res.stdout
