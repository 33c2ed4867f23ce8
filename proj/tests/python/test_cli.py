"""End-to-end checks of the ftspan command line, driven via subprocess."""

import json
import os
import subprocess

import pytest

CLI = os.environ.get("FTSPAN_CLI", "ftspan")


def run(*args, cwd=None):
    return subprocess.run([CLI, *args], capture_output=True, text=True, cwd=cwd)


def test_generate_complete(tmp_path):
    out = tmp_path / "k4.graph"
    res = run("generate", "--type", "complete", "-n", "4", "--directed", "-o", str(out))
    assert res.returncode == 0
    lines = [l for l in out.read_text().splitlines() if l and not l.startswith("#")]
    assert lines[0] == "directed 4"
    assert len(lines) == 1 + 12


def test_generate_gap_fixture(tmp_path):
    out = tmp_path / "gap.graph"
    assert run("generate", "--type", "gap_fixture", "--big-cost", "1000", "-r", "3",
               "-o", str(out)).returncode == 0
    lines = [l for l in out.read_text().splitlines() if l and not l.startswith("#")]
    assert lines[0] == "directed 5"
    assert len(lines) == 1 + 7
    assert "0 1 1 1000" in lines[1]


def test_generate_gnp_empty(tmp_path):
    out = tmp_path / "empty.graph"
    assert run("generate", "--type", "gnp", "-n", "5", "--prob", "0", "-o", str(out)).returncode == 0
    lines = [l for l in out.read_text().splitlines() if l and not l.startswith("#")]
    assert len(lines) == 1


def test_usage_errors():
    assert run("generate", "--type", "nosuch", "-o", "/tmp/x.graph").returncode == 64
    assert run("generate").returncode == 64  # --type required


def test_incompatible_algorithm_exits_65(tmp_path):
    graph = tmp_path / "k4d.graph"
    run("generate", "--type", "complete", "-n", "4", "--directed", "-o", str(graph))
    res = run("build", "--graph", str(graph), "--algo", "greedy", "-k", "3",
              "-o", str(tmp_path / "x.spanner"))
    assert res.returncode == 65  # greedy wants an undirected graph


def test_build_greedy_tree(tmp_path):
    graph = tmp_path / "p.graph"
    run("generate", "--type", "path", "-n", "6", "-o", str(graph))
    spanner = tmp_path / "p.spanner"
    res = run("build", "--graph", str(graph), "--algo", "greedy", "-k", "3", "-o", str(spanner))
    assert res.returncode == 0
    metrics = json.loads(res.stdout)
    assert metrics["size"] == 5  # n - 1 on a tree


def test_build_verify_roundtrip(tmp_path):
    graph = tmp_path / "k5.graph"
    run("generate", "--type", "complete", "-n", "5", "-o", str(graph))
    spanner = tmp_path / "k5.spanner"
    res = run("build", "--graph", str(graph), "--algo", "ft-greedy", "-k", "3", "-r", "1",
              "--seed", "3", "-o", str(spanner))
    assert res.returncode == 0
    v = run("verify", "--graph", str(graph), "--spanner", str(spanner), "-k", "3", "-r", "1")
    assert v.returncode == 0
    assert json.loads(v.stdout)["valid"] is True


def test_build_ft2_lp_includes_forced_edge(tmp_path):
    graph = tmp_path / "gap.graph"
    run("generate", "--type", "gap_fixture", "--big-cost", "1000", "-r", "3", "-o", str(graph))
    spanner = tmp_path / "gap.spanner"
    sol = tmp_path / "gap.lp.json"
    res = run("build", "--graph", str(graph), "--algo", "ft2-lp", "-r", "3", "--seed", "1",
              "-o", str(spanner), "--solution", str(sol))
    assert res.returncode == 0
    body = [l for l in spanner.read_text().splitlines() if l and not l.startswith("#")]
    ids = [int(l) for l in body[1:]]  # body[0] is the "k r seed" header
    assert 0 in ids  # edge id 0 is the expensive direct edge, forced to x = 1
    lp = json.loads(sol.read_text())
    assert abs(lp["objective"] - 1006.0) < 1e-4
    assert abs(lp["x"]["0:1"] - 1.0) < 1e-6


def test_verify_detects_missing_edge(tmp_path):
    graph = tmp_path / "star.graph"
    graph.write_text("undirected 4\n0 1 1 1\n0 2 1 1\n0 3 1 1\n")
    spanner = tmp_path / "bad.spanner"
    spanner.write_text("3 0 0\n0\n1\n")
    res = run("verify", "--graph", str(graph), "--spanner", str(spanner), "-k", "3", "-r", "0")
    assert res.returncode == 2
    witness = json.loads(res.stdout)["witness"]
    assert witness["edge"] == 2
    assert witness["faults"] == []


def test_verify_budget_exceeded(tmp_path):
    graph = tmp_path / "big.graph"
    run("generate", "--type", "complete", "-n", "80", "--directed", "-o", str(graph))
    spanner = tmp_path / "big.spanner"
    body = "\n".join(str(i) for i in range(80 * 79))
    spanner.write_text("2 4 0\n" + body + "\n")
    res = run("verify", "--graph", str(graph), "--spanner", str(spanner), "-k", "2", "-r", "4")
    assert res.returncode == 3


def test_sweep_monotone_and_resumable(tmp_path):
    csv = tmp_path / "sweep.csv"
    args = ("sweep", "--gen", "complete", "--algo", "greedy", "--n", "8,12,16", "--k", "3",
            "--r", "0", "--seeds", "0:1", "-o", str(csv))
    assert run(*args).returncode == 0
    first = csv.read_text()
    rows = [l for l in first.splitlines() if l and not l.startswith("#") and not l.startswith("n,")]
    sizes = [int(r.split(",")[3]) for r in rows]
    assert sizes == sorted(sizes)
    assert len(rows) == 3
    # rerun: everything already done, file unchanged byte for byte
    assert run(*args).returncode == 0
    assert csv.read_text() == first


def test_sweep_empty_range(tmp_path):
    csv = tmp_path / "empty.csv"
    assert run("sweep", "--gen", "complete", "--algo", "greedy", "--n", "8", "--k", "3",
               "--r", "0", "--seeds", "0:0", "-o", str(csv)).returncode == 0
    lines = csv.read_text().splitlines()
    assert lines[-1] == "n,r,k,size,cost,lp,ratio,rounds,seed"


def test_sweep_ft2_lp_ratio_bound(tmp_path):
    import math
    csv = tmp_path / "lp.csv"
    assert run("sweep", "--gen", "complete", "--algo", "ft2-lp", "--n", "5,6", "--k", "2",
               "--r", "1", "--seeds", "0:2", "-o", str(csv)).returncode == 0
    rows = [l.split(",") for l in csv.read_text().splitlines()
            if l and not l.startswith("#") and not l.startswith("n,")]
    assert len(rows) == 4
    for row in rows:
        n, ratio = int(row[0]), float(row[6])
        alpha = 3.0 * math.log(n)
        assert ratio <= 6 * alpha + 1e-9  # accepted runs obey the cost cap


def test_build_ft2_lll(tmp_path):
    graph = tmp_path / "circ.graph"
    run("generate", "--type", "regular", "-n", "12", "--degree", "3", "-o", str(graph))
    spanner = tmp_path / "circ.spanner"
    res = run("build", "--graph", str(graph), "--algo", "ft2-lll", "-r", "1", "--seed", "2",
              "-o", str(spanner))
    assert res.returncode == 0
    metrics = json.loads(res.stdout)
    assert metrics["cost"] <= 8 * metrics["alpha"] * metrics["lp_value"] + 1e-9
    v = run("verify", "--graph", str(graph), "--spanner", str(spanner), "-k", "2", "-r", "1")
    assert v.returncode == 0


def test_simulate_dist(tmp_path):
    graph = tmp_path / "k6.graph"
    run("generate", "--type", "complete", "-n", "6", "--directed", "-o", str(graph))
    res = run("simulate", "--graph", str(graph), "--algo", "ft2-dist", "-r", "1",
              "--t", "3", "--seed", "1")
    assert res.returncode == 0
    assert '"summary"' in res.stdout


def test_simulate_padded(tmp_path):
    graph = tmp_path / "grid.graph"
    run("generate", "--type", "grid", "--width", "4", "--height", "4", "-o", str(graph))
    res = run("simulate", "--graph", str(graph), "--algo", "padded", "--r-cap", "6",
              "--seed", "3")
    assert res.returncode == 0
    lines = res.stdout.strip().splitlines()
    records = [json.loads(l) for l in lines]
    assert any("round" in r for r in records)
    assert any("summary" in r for r in records)


def test_invocation_reproducibility(tmp_path):
    a, b = tmp_path / "a.graph", tmp_path / "b.graph"
    run("generate", "--type", "gnp", "-n", "12", "--prob", "0.4", "--seed", "9", "-o", str(a))
    run("generate", "--type", "gnp", "-n", "12", "--prob", "0.4", "--seed", "9", "-o", str(b))
    ta, tb = a.read_text(), b.read_text()
    # identical modulo the output path inside the embedded invocation line
    strip = lambda t: [l for l in t.splitlines() if not l.startswith("#")]
    assert strip(ta) == strip(tb)
    assert ta.splitlines()[0].startswith("# invocation: ftspan generate")
