import json
import subprocess
import sys

import pytest

from twolevel.cli import main
from twolevel.io import parse_instance, read_edge_list


@pytest.fixture
def inst_file(tmp_path):
    p = tmp_path / "inst.json"
    assert main(["generate", "--n", "14", "--radius", "0.25", "--seed", "3", "--k", "2", "-o", str(p)]) == 0
    return p


def test_generate(tmp_path, inst_file):
    inst = parse_instance(inst_file)
    assert inst.graph.n == 14 and inst.k == 2
    el = tmp_path / "g.txt"
    main(["generate", "--n", "14", "--radius", "0.25", "--seed", "3", "--points", "--edge-list", str(el), "-o", str(tmp_path / "b.json")])
    assert read_edge_list(el) == inst.graph
    assert len(parse_instance(tmp_path / "b.json").points) == 14


def test_solve_matches_oracle(tmp_path, inst_file, capsys):
    stats = tmp_path / "stats.jsonl"
    assert main(["solve", str(inst_file), "--stats", str(stats)]) == 0
    solved = json.loads(capsys.readouterr().out)
    assert main(["oracle", str(inst_file)]) == 0
    oracle = json.loads(capsys.readouterr().out)
    assert solved["objective"] == oracle["objective"]
    assert solved["status"] == "optimal"
    stages = [json.loads(line)["stage"] for line in stats.read_text().splitlines()]
    assert stages == ["y", "yz", "z", "bb"]


def test_overrides(inst_file, capsys):
    main(["solve", str(inst_file), "--k", "3", "--no-preprocess", "--no-symmetry"])
    a = json.loads(capsys.readouterr().out)
    main(["oracle", str(inst_file), "--k", "3", "--symmetry"])
    assert a["objective"] == json.loads(capsys.readouterr().out)["objective"]


def test_bad_input_exits_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"n": 2, "edges": [[0, 0]], "k": 2, "kprime": 2}))
    assert main(["solve", str(p)]) == 2
    assert "self-loop" in capsys.readouterr().err
    p.write_text(json.dumps({"n": 2, "edges": [[0, 1]], "k": 2, "kprime": 2, "w": 1, "wprime": 2}))
    assert main(["solve", str(p)]) == 2
    assert main(["solve", str(p), "--allow-any-weights"]) == 0


def test_preprocess(inst_file, capsys):
    assert main(["preprocess", str(inst_file)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert {"leaves", "edge_elimination", "largest_leaf_fraction"} <= set(out)


def test_export_lp(tmp_path, inst_file):
    out = tmp_path / "m.lp"
    assert main(["export-lp", str(inst_file), "--with-cuts", "-o", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("\\") and "Subject To" in text and "Generals" in text


def test_experiment(tmp_path, capsys):
    outdir = tmp_path / "exp"
    code = main(["experiment", "--n", "12", "--radii", "0.2", "--ks", "2", "--replicates", "2", "--no-timings", "-o", str(outdir)])
    assert code == 0
    assert capsys.readouterr().out.startswith("k,radius,y_gap")
    assert (outdir / "aggregate.csv").exists()


def test_module_entry_point(inst_file):
    proc = subprocess.run([sys.executable, "-m", "twolevel.cli", "solve", str(inst_file)], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["status"] == "optimal"
