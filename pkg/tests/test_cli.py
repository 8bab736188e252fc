import json

import pytest

from lpdecode.cli import main
from lpdecode.tanner import girth, read_graph_file


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_gen_graph_six_cycle_stdout(capsys):
    code, out, err = run_cli(capsys, "gen-graph", "--n", "3", "--dl", "2", "--dr", "2",
                             "--min-girth", "6")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "3 3 2 2"
    assert len(lines) == 4
    assert err.startswith("# config ")


def test_gen_graph_file_roundtrip(tmp_path, capsys):
    path = tmp_path / "g.graph"
    code, out, _ = run_cli(capsys, "gen-graph", "--n", "16", "--dl", "3", "--dr", "6",
                           "--seed", "4", "--out", str(path))
    assert code == 0
    meta = json.loads(out)
    g = read_graph_file(path)
    assert (g.n, g.m) == (meta["n"], meta["m"])
    assert girth(g) == meta["girth"]


def test_decode_emits_json_lines(tmp_path, capsys):
    path = tmp_path / "g.graph"
    run_cli(capsys, "gen-graph", "--n", "16", "--dl", "3", "--dr", "6",
            "--seed", "4", "--out", str(path))
    code, out, _ = run_cli(capsys, "decode", "--graph", str(path),
                           "--channel", "biawgn:0.4", "--trials", "3", "--seed", "1")
    assert code == 0
    rows = [json.loads(line) for line in out.strip().splitlines()]
    assert [r["trial"] for r in rows] == [0, 1, 2]
    assert all(set(r) == {"trial", "integral", "unique", "failed"} for r in rows)


def test_decode_rejects_bad_channel(tmp_path, capsys):
    path = tmp_path / "g.graph"
    run_cli(capsys, "gen-graph", "--n", "16", "--dl", "3", "--dr", "6",
            "--out", str(path))
    with pytest.raises(SystemExit) as exc:
        main(["decode", "--graph", str(path), "--channel", "foo:1", "--trials", "1"])
    assert exc.value.code == 2


def test_gen_graph_unreachable_girth_is_domain_error(capsys):
    code, _, err = run_cli(capsys, "gen-graph", "--n", "3", "--dl", "2", "--dr", "2",
                           "--min-girth", "8")
    assert code == 1
    assert "error" in err


def test_certify_roundtrip(tmp_path, capsys):
    gpath = tmp_path / "g.graph"
    run_cli(capsys, "gen-graph", "--n", "32", "--dl", "3", "--dr", "6",
            "--min-girth", "6", "--seed", "1", "--out", str(gpath))
    g = read_graph_file(gpath)
    (tmp_path / "word").write_text(" ".join("0" * g.n))
    (tmp_path / "good.llr").write_text(" ".join(["1.0"] * g.n))
    code, out, _ = run_cli(capsys, "certify", "--graph", str(gpath),
                           "--llr", str(tmp_path / "good.llr"),
                           "--word", str(tmp_path / "word"), "--T", "1")
    assert code == 0
    assert json.loads(out) == {"certified": True}

    (tmp_path / "bad.llr").write_text(" ".join(["-1.0"] * g.n))
    code, out, _ = run_cli(capsys, "certify", "--graph", str(gpath),
                           "--llr", str(tmp_path / "bad.llr"),
                           "--word", str(tmp_path / "word"), "--T", "1")
    assert code == 1
    payload = json.loads(out)
    assert payload["certified"] is False
    assert payload["witness_cost"] <= 0
    assert payload["witness_root"] in payload["witness_support"]


def test_threshold_json(capsys):
    code, out, _ = run_cli(capsys, "threshold", "--dl", "3", "--dr", "6", "--s", "0")
    assert code == 0
    payload = json.loads(out)
    assert abs(payload["sigma0"] - 0.605) <= 0.005
    assert abs(payload["eb_n0_db"] - 4.36) <= 0.05
    assert payload["c_just_below"] < 1


def test_bound_json(capsys):
    code, out, _ = run_cli(capsys, "bound", "--n", "1024", "--girth", "20",
                           "--channel", "biawgn:0.55", "--s", "0")
    assert code == 0
    payload = json.loads(out)
    assert 0 < payload["bound"] <= 1
    assert payload["regime"] == "nonuniform"
    assert payload["T"] == 4


def test_bound_condition_failure_is_domain_error(capsys):
    code, _, err = run_cli(capsys, "bound", "--n", "1024", "--girth", "20",
                           "--channel", "biawgn:0.9", "--s", "0")
    assert code == 1
    assert "error" in err


def test_densities_csv(capsys):
    code, out, _ = run_cli(capsys, "densities", "--channel", "biawgn:0.7", "--s", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "level,kind,x,mass"
    levels = {line.split(",")[0] for line in lines[1:]}
    kinds = {line.split(",")[1] for line in lines[1:]}
    assert levels == {"0", "1"} and kinds == {"X", "Y"}
    # masses per (level, kind) sum to ~1
    total = sum(float(l.split(",")[3]) for l in lines[1:] if l.startswith("1,X"))
    assert abs(total - 1.0) < 1e-6


def test_laplace_curve_csv(capsys):
    code, out, _ = run_cli(capsys, "laplace-curve", "--channel", "biawgn:0.7",
                           "--s", "2", "--points", "9", "--t-max", "0.6")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "t,ln_laplace"
    rows = [tuple(map(float, line.split(","))) for line in lines[1:]]
    assert len(rows) == 9
    assert rows[0] == (0.0, 0.0)
    assert min(v for _, v in rows) < -0.1  # dips to a proper minimum


def test_simulate_tree_json(capsys):
    code, out, _ = run_cli(capsys, "simulate", "--mode", "tree",
                           "--channel", "biawgn:0.7", "--trials", "5000",
                           "--seed", "2", "--T", "2")
    assert code == 0
    payload = json.loads(out)
    assert payload["trials"] == 5000
    assert 0 <= payload["estimate"] <= 1


def test_simulate_lp_json(tmp_path, capsys):
    gpath = tmp_path / "g.graph"
    run_cli(capsys, "gen-graph", "--n", "32", "--dl", "3", "--dr", "6",
            "--min-girth", "6", "--seed", "1", "--out", str(gpath))
    code, out, _ = run_cli(capsys, "simulate", "--mode", "lp", "--graph", str(gpath),
                           "--channel", "bsc:0.02", "--trials", "10", "--seed", "3")
    assert code == 0
    payload = json.loads(out)
    assert payload["certified_and_failed"] == 0
    assert payload["certified"] > 0
    assert payload["trials"] == 10


def test_table1_rows(capsys):
    code, out, _ = run_cli(capsys, "table1", "--max-s", "1")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].split() == ["s", "sigma0", "Eb/N0[dB]", "reference"]
    values = {int(line.split()[0]): float(line.split()[1]) for line in lines[1:]}
    # printed values are rounded to the 0.005 reporting grid
    assert abs(values[0] - 0.605) <= 0.005 + 1e-9
    assert abs(values[1] - 0.635) <= 0.005 + 1e-9
