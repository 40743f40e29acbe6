"""End-to-end command tests through run(argv)."""

import json

import pytest

from kfl.cli import run
from kfl.frame import Frame, cluster_decomposition
from kfl.model import Model
from kfl.partition import Partition, is_proper

CYCLE3 = {"n": 3, "edges": [[0, 1], [1, 2], [2, 0]]}
TOWER = {"n": 3, "edges": [[0, 1], [1, 0], [0, 2], [1, 2], [2, 2]],
         "val": {"p1": [2]}}


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def out_json(capsys):
    return json.loads(capsys.readouterr().out)


def err_json(capsys):
    return json.loads(capsys.readouterr().err)


def test_gen_examples(capsys):
    assert run(["gen", "mn-axiom", "--m", "1", "--n", "2"]) == 0
    assert capsys.readouterr().out.strip() == "<><>p1 -> <>p1"
    assert run(["gen", "bh", "--h", "1", "--m", "0"]) == 0
    assert capsys.readouterr().out.strip() == "p1 -> p1"
    assert run(["gen", "pretrans-axiom", "--m", "1"]) == 0
    assert capsys.readouterr().out.strip() == "<><>p1 -> p1 | <>p1"
    assert run(["gen", "glivenko", "--m", "1", "--formula", "p1"]) == 0
    assert capsys.readouterr().out.strip() == "p1 & []p1 | <>(p1 & []p1)"


def test_classify_cycle3(tmp_path, capsys):
    path = write(tmp_path, "f.json", CYCLE3)
    assert run(["classify", "--frame", path, "--m", "2", "--n", "4"]) == 0
    got = out_json(capsys)
    assert got == {"points": 3, "edges": 3, "pretransitivity_index": 2,
                   "height": 1, "cluster_sizes": {"3": 1},
                   "m_transitive": True, "mn_frame": False}


def test_classify_pretty(tmp_path, capsys):
    path = write(tmp_path, "f.json", CYCLE3)
    assert run(["classify", "--frame", path, "--pretty"]) == 0
    out = capsys.readouterr().out
    assert "pretransitivity_index" in out and "{" not in out.splitlines()[0]


def test_classify_n_without_m(tmp_path, capsys):
    path = write(tmp_path, "f.json", CYCLE3)
    assert run(["classify", "--frame", path, "--n", "2"]) == 2
    assert "error" in err_json(capsys)


def test_check(tmp_path, capsys):
    path = write(tmp_path, "m.json", TOWER)
    assert run(["check", "--model", path, "--formula", "<> p1"]) == 0
    assert out_json(capsys)["satisfying_points"] == [0, 1, 2]
    assert run(["check", "--model", path, "--formula", "p1", "--point", "2"]) == 0
    assert out_json(capsys) == {"point": 2, "satisfied": True}
    assert run(["check", "--model", path, "--formula", "p1", "--point", "9"]) == 1
    assert "error" in err_json(capsys)


def test_valid_with_witness(tmp_path, capsys):
    path = write(tmp_path, "f.json", CYCLE3)
    assert run(["valid", "--frame", path, "--formula", "<><><>p1 -> p1"]) == 0
    assert out_json(capsys) == {"valid": True}
    assert run(["valid", "--frame", path, "--formula", "<>p1 -> p1"]) == 0
    got = out_json(capsys)
    assert got["valid"] is False and got["witness"] == {"p1": [0]}


def test_filtrate_roundtrip(tmp_path, capsys):
    path = write(tmp_path, "m.json", TOWER)
    om = str(tmp_path / "out_model.json")
    orep = str(tmp_path / "out_report.json")
    assert run(["filtrate", "--model", path, "--formula", "<> p1",
                "--class", "g:2", "--out-model", om, "--out-report", orep]) == 0
    got = out_json(capsys)
    assert got["report"]["satisfied"] and got["report"]["class_ok"]
    assert got["report"]["output_points"] == 2
    # written files match stdout and re-load as a genuine model
    assert json.loads(open(om).read()) == got["model"]
    assert json.loads(open(orep).read()) == got["report"]
    M = Model.from_dict(got["model"])
    assert M.frame.n == 2


def test_filtrate_errors(tmp_path, capsys):
    path = write(tmp_path, "m.json", TOWER)
    assert run(["filtrate", "--model", path, "--formula", "p1 & ~p1",
                "--class", "g:2"]) == 1
    assert "nowhere" in err_json(capsys)["error"]
    chain = write(tmp_path, "c.json",
                  {"n": 3, "edges": [[0, 1], [1, 2]], "val": {"p1": [2]}})
    assert run(["filtrate", "--model", chain, "--formula", "p1",
                "--class", "g:1"]) == 1
    assert run(["filtrate", "--model", path, "--formula", "p1",
                "--class", "nope"]) == 1


def test_proper_refine(tmp_path, capsys):
    fpath = write(tmp_path, "f.json", CYCLE3)
    ppath = write(tmp_path, "p.json", {"blocks": [[0, 1], [2]]})
    assert run(["proper-refine", "--frame", fpath, "--partition", ppath]) == 0
    got = out_json(capsys)
    assert got["proper"] is True
    B = Partition.from_dict(got["partition"])
    assert is_proper(Frame.from_dict(CYCLE3), B)
    assert B.block_sets() == ({0}, {1}, {2})


def test_enumerate_stream(capsys):
    assert run(["enumerate", "--size", "1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2
    assert json.loads(lines[0]) == {"n": 1, "edges": []}
    assert run(["enumerate", "--size", "2", "--class", "mn:0,1"]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 4
    assert run(["enumerate", "--size", "0"]) == 1


def test_enumerate_respects_height_filter(capsys):
    assert run(["enumerate", "--size", "2", "--class", "g:1"]) == 0
    frames = [Frame.from_dict(json.loads(line))
              for line in capsys.readouterr().out.strip().splitlines()]
    assert all(cluster_decomposition(F).height <= 2 for F in frames)


def test_verify_cli(capsys):
    assert run(["verify", "--suite", "filtration", "--cases", "25",
                "--seed", "7"]) == 0
    first = out_json(capsys)
    assert first["passed"] is True and first["failures"] == []
    assert run(["verify", "--suite", "filtration", "--cases", "25",
                "--seed", "7"]) == 0
    assert out_json(capsys) == first  # deterministic under a fixed seed
    assert run(["verify", "--suite", "nosuch"]) == 2


def test_usage_errors(tmp_path, capsys):
    assert run([]) == 2
    assert "error" in err_json(capsys)
    assert run(["bogus"]) == 2
    capsys.readouterr()
    assert run(["classify"]) == 2
    capsys.readouterr()
    assert run(["--help"]) == 0
    capsys.readouterr()
    path = write(tmp_path, "m.json", TOWER)
    assert run(["check", "--model", path, "--formula", "p1 ->"]) == 2
    assert "formula syntax" in err_json(capsys)["error"]


def test_file_errors(tmp_path, capsys):
    assert run(["classify", "--frame", str(tmp_path / "missing.json")]) == 1
    capsys.readouterr()
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    assert run(["classify", "--frame", str(bad)]) == 2
    capsys.readouterr()
    notframe = write(tmp_path, "nf.json", {"n": 2, "edges": [[0, 5]]})
    assert run(["classify", "--frame", notframe]) == 1
