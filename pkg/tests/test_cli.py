import json
import subprocess
import sys

import pytest

from eolo.cli import main

TRIANGLE_FLAGS = ["--records", "3", "--complete", "--p-match", "0.5",
                  "--p-nonmatch", "0.5", "--jitter", "0", "--seed", "1"]


def gen_triangle(tmp_path):
    inst = tmp_path / "inst.json"
    truth = tmp_path / "truth.json"
    rc = main(["gen", *TRIANGLE_FLAGS, "--out", str(inst),
               "--truth-out", str(truth), "--quiet"])
    assert rc == 0
    return inst, truth


def test_gen_writes_canonical_triangle(tmp_path):
    inst, truth = gen_triangle(tmp_path)
    doc = json.loads(inst.read_text())
    assert doc["records"] == ["a", "b", "c"]
    assert [p["p"] for p in doc["pairs"]] == [0.5, 0.5, 0.5]
    blocks = json.loads(truth.read_text())["clusters"]
    assert sorted(r for block in blocks for r in block) == ["a", "b", "c"]


def test_gen_missing_out_is_usage_error():
    with pytest.raises(SystemExit) as err:
        main(["gen", "--records", "3"])
    assert err.value.code == 2


def test_gen_records_one_is_runtime_error(tmp_path):
    rc = main(["gen", "--records", "1", "--out", str(tmp_path / "x.json")])
    assert rc == 1


def test_gen_is_deterministic(tmp_path):
    (tmp_path / "a").mkdir()
    a, _ = gen_triangle(tmp_path / "a")
    b = tmp_path / "b.json"
    rc = main(["gen", *TRIANGLE_FLAGS, "--out", str(b), "--quiet"])
    assert rc == 0
    assert a.read_bytes() == b.read_bytes()


def test_eval_exact_golden(tmp_path, capsys):
    inst, _ = gen_triangle(tmp_path)
    rc = main(["--format", "json", "eval", "--instance", str(inst),
               "--strategies", "desc,asc,random:7,optimal,worst",
               "--method", "exact"])
    assert rc == 0
    rows = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert len(rows) == 5
    for row in rows:
        assert row["expected_asked"] == pytest.approx(2.4, abs=1e-9)
    optimal = next(r for r in rows if r["strategy"] == "optimal")
    assert optimal["per_pair_ask_prob"] == pytest.approx([1.0, 1.0, 0.4], abs=1e-9)


def test_eval_independence_warns(tmp_path, capsys):
    inst, _ = gen_triangle(tmp_path)
    rc = main(["--format", "json", "eval", "--instance", str(inst),
               "--strategies", "desc", "--method", "independence"])
    assert rc == 0
    captured = capsys.readouterr()
    assert "known to misestimate" in captured.err
    row = json.loads(captured.out.splitlines()[0])
    assert row["expected_asked"] == pytest.approx(2.25, abs=1e-9)
    assert row["per_pair_ask_prob"] == pytest.approx([1.0, 1.0, 0.25], abs=1e-9)


def test_eval_table_rounds_to_four_decimals(tmp_path, capsys):
    inst, _ = gen_triangle(tmp_path)
    rc = main(["eval", "--instance", str(inst), "--strategies", "desc"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "2.4000" in out and "0.6000" in out


def test_eval_unknown_strategy_is_usage_error(tmp_path, capsys):
    inst, _ = gen_triangle(tmp_path)
    rc = main(["eval", "--instance", str(inst), "--strategies", "bogus"])
    assert rc == 2
    assert "canonical forms" in capsys.readouterr().err


def test_eval_brute_force_cap_is_runtime_error(tmp_path, capsys):
    big = tmp_path / "big.json"
    rc = main(["gen", "--records", "5", "--out", str(big), "--quiet"])
    assert rc == 0
    rc = main(["eval", "--instance", str(big), "--strategies", "optimal"])
    assert rc == 1
    assert "capped" in capsys.readouterr().err


def test_eval_explicit_strategy(tmp_path, capsys):
    inst, _ = gen_triangle(tmp_path)
    order_file = tmp_path / "order.json"
    order_file.write_text("[2, 1, 0]")
    rc = main(["--format", "json", "eval", "--instance", str(inst),
               "--strategies", f"explicit:{order_file}"])
    assert rc == 0
    row = json.loads(capsys.readouterr().out.splitlines()[0])
    assert row["order"] == [2, 1, 0]


def test_simulate_all_match(tmp_path, capsys):
    inst, truth = gen_triangle(tmp_path)
    truth.write_text(json.dumps({"clusters": [["a", "b", "c"]]}))
    trace = tmp_path / "trace.jsonl"
    rc = main(["simulate", "--instance", str(inst), "--truth", str(truth),
               "--strategy", "desc", "--trace-out", str(trace)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "asked=2 deduced=1" in out
    assert "{a,b,c}" in out
    entries = [json.loads(line) for line in trace.read_text().splitlines()]
    assert [e["outcome"] for e in entries] == ["asked", "asked", "deduced"]


def test_simulate_all_nonmatch_json(tmp_path, capsys):
    inst, truth = gen_triangle(tmp_path)
    truth.write_text(json.dumps(
        {"clusters": [["a"], ["b"], ["c"]]}))
    rc = main(["--format", "json", "simulate", "--instance", str(inst),
               "--truth", str(truth), "--strategy", "desc"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["asked"] == 3 and doc["deduced"] == 0
    assert doc["clusters"] == [["a"], ["b"], ["c"]]


def test_simulate_four_records_all_match(tmp_path, capsys):
    inst = tmp_path / "inst4.json"
    truth = tmp_path / "truth4.json"
    rc = main(["gen", "--records", "4", "--p-match", "0.9", "--jitter", "0",
               "--seed", "3", "--out", str(inst), "--quiet"])
    assert rc == 0
    truth.write_text(json.dumps({"clusters": [["a", "b", "c", "d"]]}))
    rc = main(["--format", "json", "simulate", "--instance", str(inst),
               "--truth", str(truth), "--strategy", "asc"])
    assert rc == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["asked"] == 3   # spanning tree over 4 records


def test_serve_port_zero_is_usage_error(capsys):
    rc = main(["serve", "--port", "0"])
    assert rc == 2
    assert "--port" in capsys.readouterr().err


def test_serve_missing_static_dir_is_runtime_error(tmp_path):
    rc = main(["serve", "--port", "8123",
               "--static-dir", str(tmp_path / "nope")])
    assert rc == 1


def test_serve_port_in_use_is_runtime_error(capsys):
    import socket

    sock = socket.socket()
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
    try:
        rc = main(["serve", "--port", str(port), "--quiet"])
    finally:
        sock.close()
    assert rc == 1
    assert "failed to start" in capsys.readouterr().err


def test_pipeline_in_subprocess(tmp_path):
    """Real processes: gen -> eval -> simulate with stable exit codes."""
    inst = tmp_path / "inst.json"
    truth = tmp_path / "truth.json"
    run = lambda *args: subprocess.run(
        [sys.executable, "-m", "eolo", *args],
        capture_output=True, text=True)

    gen = run("gen", *TRIANGLE_FLAGS, "--out", str(inst),
              "--truth-out", str(truth))
    assert gen.returncode == 0, gen.stderr
    ev = run("--format", "json", "eval", "--instance", str(inst),
             "--strategies", "optimal", "--method", "exact")
    assert ev.returncode == 0, ev.stderr
    row = json.loads(ev.stdout.splitlines()[0])
    assert row["expected_asked"] == pytest.approx(2.4, abs=1e-9)
    sim = run("--format", "json", "simulate", "--instance", str(inst),
              "--truth", str(truth), "--strategy", "desc")
    assert sim.returncode == 0, sim.stderr
    doc = json.loads(sim.stdout)
    assert doc["asked"] + doc["deduced"] == 3
    usage = run("eval", "--instance", str(inst), "--strategies", "bogus")
    assert usage.returncode == 2
