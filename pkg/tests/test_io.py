import json

import pytest

from twolevel.graph import Graph
from twolevel.io import (
    FormatError,
    instance_from_dict,
    instance_to_dict,
    parse_instance,
    read_edge_list,
    read_solution,
    write_edge_list,
    write_instance,
    write_solution,
)
from twolevel.model import Instance
from twolevel.solver import solve

from conftest import complete

MINIMAL = {"n": 2, "edges": [[0, 1]], "k": 2, "kprime": 2, "w": 1, "wprime": 1}


def test_minimal_instance():
    inst = instance_from_dict(MINIMAL)
    assert inst.graph.n == 2 and inst.graph.edges == ((0, 1),) and inst.k == inst.kprime == 2


@pytest.mark.parametrize(
    "change, message",
    [
        ({"edges": [[0, 0]]}, "self-loop"),
        ({"edges": [[0, 1], [1, 0]]}, "duplicates"),
        ({"edges": [[0, 5]]}, "unknown node"),
        ({"edges": [[0]]}, "pair"),
        ({"w": 1, "wprime": 2}, "w must be at least"),
        ({"w": "abc"}, "not a number"),
        ({"k": 1}, "at least 2"),
        ({"n": -1}, "non-negative"),
        ({"k": 2.5}, "integer"),
    ],
)
def test_rejections(change, message):
    with pytest.raises(FormatError, match=message):
        instance_from_dict({**MINIMAL, **change})


def test_missing_field():
    data = dict(MINIMAL)
    del data["kprime"]
    with pytest.raises(FormatError, match="kprime"):
        instance_from_dict(data)


def test_weight_override_and_rationals():
    inst = instance_from_dict({**MINIMAL, "w": "1/2", "wprime": 2}, allow_any_weights=True)
    assert (inst.w, inst.wprime) == (0.5, 2)


def test_json_error_has_position(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"n": 2,\n "edges": [[0, 1]\n}')
    with pytest.raises(FormatError, match=r"bad\.json:3:1"):
        parse_instance(p)


def test_instance_round_trip(tmp_path):
    inst = Instance(Graph([3, 7, 9], [(3, 7), (7, 9)]), 3, 2, 2.0, 1.0, points=((0.1, 0.2), (0.3, 0.4), (0.5, 0.6)))
    p = tmp_path / "inst.json"
    write_instance(inst, p)
    back = parse_instance(p)
    assert back == inst and back.points == inst.points
    assert instance_to_dict(back)["nodes"] == [3, 7, 9]


def test_solution_round_trip(tmp_path):
    inst = Instance(complete(5), 2, 2)
    res = solve(inst)
    p = tmp_path / "sol.json"
    write_solution(res, inst, p)
    data = read_solution(p)
    assert data["objective"] == 5 and data["status"] == "optimal" and len(data["colours"]) == 5
    assert (data["y_conflicts"], data["z_conflicts"]) == (4, 1)
    p.write_text(json.dumps({"objective": 1}))
    with pytest.raises(FormatError):
        read_solution(p)


def test_edge_list_round_trip(tmp_path):
    g = Graph.from_edges(4, [(2, 3), (0, 1), (1, 3)])
    p = tmp_path / "g.txt"
    write_edge_list(g, p)
    assert p.read_text() == "4 3\n0 1\n1 3\n2 3\n"
    assert read_edge_list(p) == g


@pytest.mark.parametrize(
    "text, message",
    [
        ("", "empty"),
        ("3 2\n0 1\n", "announces 2"),
        ("3 1\n1 1\n", ":2: self-loop"),
        ("3 1\n0 x\n", ":2: expected two integers"),
        ("3 1\n0 3\n", ":2: node outside"),
        ("3 2\n0 1\n1 0\n", ":3: duplicate"),
    ],
)
def test_edge_list_errors(tmp_path, text, message):
    p = tmp_path / "g.txt"
    p.write_text(text)
    with pytest.raises(FormatError, match=message):
        read_edge_list(p)
