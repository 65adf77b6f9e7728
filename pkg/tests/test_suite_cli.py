import json

import pytest

from wideknap.cli import main
from wideknap.geometry import Box
from wideknap.model import Profile, generate_packing, instance_to_json, packing_to_json
from wideknap.suite import SuiteSpec, format_table, report_json, run_suite

TRIVIAL = {"box_w": [2, 2], "box_h": [2, 2], "n_items": [1, 1], "width": [2, 2], "k": 1}


def test_empty_suite():
    rep = run_suite(SuiteSpec("empty"))
    assert rep["cases"] == [] and rep["pass"]


def test_trivial_suite_table():
    spec = SuiteSpec("one", Profile.from_dict(TRIVIAL), seeds=[0])
    rep = run_suite(spec)
    assert rep["pass"] and len(rep["cases"]) == 1 and rep["cases"][0]["ratio"] == 1.0
    table = format_table(rep).splitlines()
    assert len(table) == 4          # title, header, one row, summary


def test_suite_reports_are_byte_identical(tmp_path):
    d = {"name": "small", "profile": {"box_w": [3, 5], "box_h": [3, 5], "n_items": [2, 5],
                                      "max_aspect": "3"},
         "eps": ["1/2", "1/3"], "seeds": 6}
    spec = SuiteSpec.from_dict(d)
    a = report_json(run_suite(spec, tmp_path / "g1"))
    b = report_json(run_suite(spec, tmp_path / "g2"))
    assert a == b and json.loads(a)["pass"]
    svgs = sorted(p.name for p in (tmp_path / "g1" / "small").iterdir())
    assert svgs and all(n.startswith("seed") and n.endswith(".svg") for n in svgs)


@pytest.fixture
def files(tmp_path):
    inst, pk = generate_packing(2, Box(8, 6), 5, 2)
    ip, pp = tmp_path / "inst.json", tmp_path / "pack.json"
    ip.write_text(instance_to_json(inst))
    pp.write_text(packing_to_json(pk))
    return tmp_path, ip, pp, inst


def test_cli_solve_and_verify(files, capsys):
    tmp, ip, _, inst = files
    out = tmp / "sol.json"
    assert main(["solve", str(ip), "--epsilon", "1/2", "--seed", "3", "--output", str(out)]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["verdict"] == "packing" and rep["size"] >= rep["guarantee"]
    assert main(["verify", str(ip), str(out)]) == 0
    assert json.loads(capsys.readouterr().out)["ok"]


def test_cli_solve_flags(files, capsys):
    _, ip, _, _ = files
    rc = main(["solve", str(ip), "--epsilon", "1/3", "--coloring-mode", "exhaustive",
               "--coloring-seed", "1", "--coloring-failure-bound", "0.05", "--budget-nodes", "0"])
    assert rc == 3
    assert json.loads(capsys.readouterr().out)["verdict"] == "inconclusive-budget"
    with pytest.raises(SystemExit):
        main(["solve", str(ip), "--epsilon", "half"])


def test_cli_verify_rejects(files, tmp_path, capsys):
    _, ip, _, inst = files
    bad = tmp_path / "bad.json"
    i = inst.items[0].id
    bad.write_text(json.dumps({"placements": [{"id": i, "x": 0, "y": 0}, {"id": i, "x": 0, "y": 0}]}))
    assert main(["verify", str(ip), str(bad)]) == 1
    ghost = tmp_path / "ghost.json"
    ghost.write_text(json.dumps({"placements": [{"id": 999, "x": 0, "y": 0}]}))
    assert main(["verify", str(ip), str(ghost)]) == 1
    capsys.readouterr()


def test_cli_exact(tmp_path, capsys):
    q = tmp_path / "q.json"
    q.write_text(json.dumps({"box": {"w": 2, "h": 2}, "rects": [{"w": 2, "h": 1}, {"w": 1, "h": 2}],
                             "cells": [[0, 0], [1, 0], [0, 1]]}))
    assert main(["exact", str(q)]) == 0
    assert json.loads(capsys.readouterr().out)["status"] == "infeasible"
    q.write_text(json.dumps({"box": {"w": 2, "h": 2}, "rects": [{"w": 2, "h": 1}] * 2}))
    assert main(["exact", str(q)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["status"] == "feasible" and len(out["placements"]) == 2


def test_cli_oracle(files, capsys):
    _, ip, _, inst = files
    assert main(["oracle", str(ip)]) == 0
    assert json.loads(capsys.readouterr().out)["opt"] == len(inst.items)


def test_cli_structure_and_render(files, tmp_path, capsys):
    _, ip, pp, _ = files
    dot, dump, svg = tmp_path / "g.dot", tmp_path / "s.json", tmp_path / "s.svg"
    assert main(["structure", str(ip), str(pp), "--epsilon", "1/2", "--ell", "1",
                 "--dot", str(dot), "--output", str(dump)]) == 0
    d = json.loads(dump.read_text())
    assert d["verification"]["ok"] and d["grid_scale"] == 2
    assert dot.read_text().startswith("graph conflict {")
    assert main(["render", str(dump), "--output", str(svg)]) == 0
    assert svg.read_text().lstrip().startswith("<svg")
    assert main(["render", str(pp), "--instance", str(ip)]) == 0
    assert "<rect" in capsys.readouterr().out
    with pytest.raises(SystemExit):
        main(["render", str(pp)])


def test_cli_gen(tmp_path, capsys):
    assert main(["gen", "--seed", "4", "--profile", json.dumps(TRIVIAL)]) == 0
    first = capsys.readouterr().out
    prof = tmp_path / "p.json"
    prof.write_text(json.dumps(TRIVIAL))
    assert main(["gen", "--seed", "4", "--profile", str(prof)]) == 0
    assert capsys.readouterr().out == first
    assert json.loads(first)["k"] == 1


def test_cli_suite(tmp_path, capsys):
    spec = tmp_path / "suite.json"
    spec.write_text(json.dumps({"name": "cli", "profile": TRIVIAL, "seeds": [0, 1]}))
    assert main(["suite", str(spec), "--gallery", str(tmp_path / "out")]) == 0
    captured = capsys.readouterr()
    assert json.loads(captured.out)["summary"]["pass"] == 2
    assert "suite cli" in captured.err
    assert (tmp_path / "out" / "cli").is_dir()


def test_cli_reports_errors_without_traceback(tmp_path, capsys):
    inst = tmp_path / "i.json"
    inst.write_text('{"box": {"w": 4, "h": 2}, "k": 1, "items": [{"id": 0, "w": 1, "h": 1}]}')
    pk = tmp_path / "p.json"
    pk.write_text('{"placements": [{"id": 0, "x": 0, "y": 0}]}')
    assert main(["structure", str(inst), str(pk)]) == 2
    assert "width" in capsys.readouterr().err
    assert main(["verify", str(inst), str(tmp_path / "missing.json")]) == 2
