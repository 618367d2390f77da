import json

from covsat.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_solve(capsys, cnf_files):
    assert run(capsys, "solve", cnf_files["F1"])[:2] == (10, "s SATISFIABLE\nv 1 2 -3 0\n")
    assert run(capsys, "solve", cnf_files["FD"])[:2] == (20, "s UNSATISFIABLE\n")
    assert run(capsys, "solve", cnf_files["FC"])[:2] == (10, "s SATISFIABLE\nv -1 -2 0\n")
    assert run(capsys, "solve", cnf_files["FC"], "--alpha", "1")[0] == 20


def test_solve_malformed(capsys, tmp_path):
    bad = tmp_path / "bad.cnf"
    bad.write_text("p cnf 2\n1 0\n")
    code, out, err = run(capsys, "solve", bad)
    assert code == 1 and out == "" and "error" in err
    code, _, err = run(capsys, "solve", tmp_path / "absent.cnf")
    assert code == 1 and "cannot read" in err


def test_usage_errors(capsys):
    assert run(capsys, "solve")[0] == 1
    assert run(capsys, "bogus")[0] == 1


def test_solve_trace_and_oracle_check(capsys, cnf_files, tmp_path):
    trace = tmp_path / "t.jsonl"
    code, out, _ = run(capsys, "solve", cnf_files["F1"], "--trace", trace, "--oracle-check")
    assert code == 10
    assert out.splitlines()[-1] == "c oracle SATISFIABLE agree"
    records = [json.loads(line) for line in trace.read_text().splitlines()]
    assert records[0]["event"] == "SeedVertex" and records[0]["vertex"] == 2


def test_graph(capsys, cnf_files, tmp_path):
    code, out, _ = run(capsys, "graph", cnf_files["F1"], "--alpha", "1", "--stage", "raw")
    assert code == 0 and 'v1 -> v2 [label="&c1"]' in out
    dot = tmp_path / "fc.dot"
    assert run(capsys, "graph", cnf_files["FC"], "--alpha", "1", "--dot", dot)[0] == 0
    text = dot.read_text()
    assert 'v1 -> v2 [label="&c1"]' in text and 'v2 -> v1 [label="&c2"]' in text
    code, _, err = run(capsys, "graph", cnf_files["FC"], "--alpha", "1", "--stage", "clean")
    assert code == 1 and "Unstable" in err
    code, out, _ = run(capsys, "graph", cnf_files["F1"], "--stage", "final")
    assert code == 0 and "v3" in out and "v1" not in out


def test_graph_from_decomposition_text(capsys, tmp_path):
    p = tmp_path / "f1.dec"
    p.write_text("1 : {1} | {3}\n2 : {2} | {1}\n3 : {2} | {3}\n")
    code, out, _ = run(capsys, "graph", p)
    assert code == 0 and 'v1 -> v2 [label="&c1"]' in out


def test_fuzz(capsys, tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    flags = ["fuzz", "--seed", 7, "--count", 100, "--vars", 6, "--clauses", 12]
    code, out, _ = run(capsys, *flags, "--report", a)
    assert code == 0
    run(capsys, *flags, "--report", b)
    assert a.read_bytes() == b.read_bytes()
    summary = json.loads(a.read_text().splitlines()[-1])["summary"]["counts"]
    assert summary["agree"] + summary["false-unsat"] + summary["anomaly"] == 100
    assert "count=100" in out
    assert run(capsys, "fuzz", "--vars", 3, "--max-len", 5)[0] == 1


def test_fuzz_corpus(capsys, cnf_files):
    code, out, _ = run(capsys, "fuzz", "--corpus", *cnf_files.values())
    assert code == 0 and out.startswith("agree=3 ")


def test_proportional(capsys, cnf_files):
    code, out, _ = run(capsys, "proportional", cnf_files["F1"], "--oracle")
    assert code == 0
    assert out == "c inverted {1,2}\np cnf 3 3\n-1 2 0\n-2 3 0\n1 -3 0\n"
    assert run(capsys, "proportional", cnf_files["F1"])[1].startswith("c inverted {3}\n")
    assert "not transformable" in run(capsys, "proportional", cnf_files["FD"])[1]


def test_oracle(capsys, cnf_files):
    assert run(capsys, "oracle", cnf_files["FD"])[:2] == (20, "s UNSATISFIABLE\n")
    assert run(capsys, "oracle", cnf_files["F1"])[:2] == (10, "s SATISFIABLE\nv -1 -2 3 0\n")


def test_check_cover(capsys, cnf_files):
    assert run(capsys, "check-cover", cnf_files["F1"], "111")[:2] == (0, "false\n")
    assert run(capsys, "check-cover", cnf_files["F1"], "110")[:2] == (0, "true\n")
    assert run(capsys, "check-cover", cnf_files["F1"], "001")[:2] == (0, "true\n")
    assert run(capsys, "check-cover", cnf_files["F1"], "01")[0] == 1
    assert run(capsys, "check-cover", cnf_files["F1"], "0a1")[0] == 1


def test_cover(capsys, cnf_files):
    assert run(capsys, "cover", cnf_files["F1"])[:2] == (10, "s COVERED\nv 001\n")
    assert run(capsys, "cover", cnf_files["FD"])[0] == 20
