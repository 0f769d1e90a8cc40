import json
import os

import pytest

from pdoracle.cli import main


def run(argv):
    return main(argv)


def test_end_to_end_simple(tmp_path, capsys):
    gfile = str(tmp_path / "g.pg")
    ofile = str(tmp_path / "o.pdo")
    assert run(["gen", "--kind", "grid", "--k", "6", "--seed", "1",
                "--lengths", "uniform", "--out", gfile]) == 0
    assert run(["build", "--in", gfile, "--oracle", "simple",
                "--out", ofile]) == 0
    capsys.readouterr()
    assert run(["query", "--oracle", ofile, "--u", "3", "--v", "3"]) == 0
    assert capsys.readouterr().out.strip() == "0"
    assert run(["verify", "--oracle", ofile, "--graph", gfile,
                "--pairs", "all"]) == 0
    out = capsys.readouterr().out
    assert "mismatches: 0" in out
    assert run(["stats", "--oracle", ofile]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    first = json.loads(lines[0])
    assert {"id", "level", "n", "b", "holes", "separator_len"} <= set(first)
    assert "space" in json.loads(lines[-1])
    assert run(["bench", "--oracle", ofile, "--graph", gfile,
                "--queries", "50", "--seed", "2"]) == 0
    assert "us_per_query" in capsys.readouterr().out


def test_end_to_end_tradeoff(tmp_path, capsys):
    gfile = str(tmp_path / "g.pg")
    ofile = str(tmp_path / "o.pdo")
    run(["gen", "--kind", "random", "--n", "90", "--seed", "5",
         "--lengths", "uniform", "--out", gfile])
    assert run(["build", "--in", gfile, "--oracle", "tradeoff", "--r", "16",
                "--out", ofile]) == 0
    capsys.readouterr()
    assert run(["verify", "--oracle", ofile, "--graph", gfile,
                "--pairs", "sample:200:1", "--json"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["mismatches"] == 0


def test_tradeoff_requires_r(tmp_path):
    gfile = str(tmp_path / "g.pg")
    run(["gen", "--kind", "grid", "--k", "4", "--out", gfile])
    with pytest.raises(SystemExit) as exc:
        run(["build", "--in", gfile, "--oracle", "tradeoff",
             "--out", str(tmp_path / "o.pdo")])
    assert exc.value.code == 2


def test_unknown_flag_rejected(tmp_path):
    with pytest.raises(SystemExit) as exc:
        run(["gen", "--kind", "grid", "--k", "4", "--out",
             str(tmp_path / "g.pg"), "--bogus"])
    assert exc.value.code == 2


def test_verify_detects_corruption(tmp_path, capsys):
    gfile = str(tmp_path / "g.pg")
    g2file = str(tmp_path / "g2.pg")
    ofile = str(tmp_path / "o.pdo")
    run(["gen", "--kind", "grid", "--k", "5", "--lengths", "uniform",
         "--seed", "3", "--out", gfile])
    run(["gen", "--kind", "grid", "--k", "5", "--lengths", "uniform",
         "--seed", "4", "--out", g2file])
    run(["build", "--in", gfile, "--oracle", "simple", "--out", ofile])
    capsys.readouterr()
    # verifying against a different-length graph must report mismatches
    assert run(["verify", "--oracle", ofile, "--graph", g2file,
                "--pairs", "sample:100:0"]) == 1


def test_verify_threads(tmp_path, capsys):
    gfile = str(tmp_path / "g.pg")
    ofile = str(tmp_path / "o.pdo")
    run(["gen", "--kind", "grid", "--k", "5", "--out", gfile])
    run(["build", "--in", gfile, "--oracle", "simple", "--out", ofile])
    capsys.readouterr()
    assert run(["verify", "--oracle", ofile, "--graph", gfile,
                "--pairs", "all", "--threads", "4"]) == 0
    assert "mismatches: 0" in capsys.readouterr().out


def test_plot(tmp_path, capsys):
    gfile = str(tmp_path / "g.pg")
    ofile = str(tmp_path / "o.pdo")
    jfile = str(tmp_path / "d.json")
    run(["gen", "--kind", "grid", "--k", "6", "--out", gfile])
    run(["build", "--in", gfile, "--oracle", "simple", "--out", ofile])
    capsys.readouterr()
    # find an owner present at the root split
    from pdoracle.serialize import load_oracle
    with open(ofile, "rb") as fh:
        o = load_oracle(fh.read())
    data = o.nodes[0]
    owner = next(iter(data.pools[0][0].owner_slot))
    assert run(["plot", "--oracle", ofile, "--piece", "0",
                "--diagram", f"{owner}:0", "--out", jfile]) == 0
    blob = json.load(open(jfile))
    assert blob["owner"] == owner
    assert "nodes" in blob and "edges" in blob


def test_roundtrip_cli_files_identical(tmp_path):
    gfile = str(tmp_path / "g.pg")
    o1 = str(tmp_path / "o1.pdo")
    o2 = str(tmp_path / "o2.pdo")
    run(["gen", "--kind", "random", "--n", "70", "--seed", "9",
         "--out", gfile])
    run(["build", "--in", gfile, "--oracle", "simple", "--out", o1])
    run(["build", "--in", gfile, "--oracle", "simple", "--out", o2])
    assert open(o1, "rb").read() == open(o2, "rb").read()
