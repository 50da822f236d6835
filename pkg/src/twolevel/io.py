"""Instance, solution and edge-list files."""

from __future__ import annotations

import json
import math
from fractions import Fraction
from pathlib import Path

from .graph import Graph
from .model import Instance


class FormatError(ValueError):
    """Malformed input file; the message names the file, line or field."""


def _number(value, field: str, where: str):
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise FormatError(f"{where}: field {field!r} must be a number, got {value!r}")
    if isinstance(value, str):
        # Rationals such as "3/2" are accepted for the weights.
        try:
            value = float(Fraction(value))
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"{where}: field {field!r} is not a number: {value!r}") from None
    if not math.isfinite(value):
        raise FormatError(f"{where}: field {field!r} must be finite")
    return value


def _integer(value, field: str, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        if isinstance(value, float) and value.is_integer():
            return int(value)
        raise FormatError(f"{where}: field {field!r} must be an integer, got {value!r}")
    return value


def instance_from_dict(data: dict, where: str = "<instance>", allow_any_weights: bool = False) -> Instance:
    if not isinstance(data, dict):
        raise FormatError(f"{where}: top level must be a JSON object")
    for key in ("n", "edges", "k", "kprime"):
        if key not in data:
            raise FormatError(f"{where}: missing field {key!r}")
    n = _integer(data["n"], "n", where)
    if n < 0:
        raise FormatError(f"{where}: field 'n' must be non-negative")
    if "nodes" in data:
        nodes = [_integer(v, f"nodes[{i}]", where) for i, v in enumerate(data["nodes"])]
        if len(nodes) != n:
            raise FormatError(f"{where}: 'nodes' has {len(nodes)} entries but n = {n}")
        if len(set(nodes)) != n:
            raise FormatError(f"{where}: 'nodes' contains duplicates")
    else:
        nodes = list(range(n))
    known = set(nodes)
    edges = []
    seen = set()
    if not isinstance(data["edges"], list):
        raise FormatError(f"{where}: field 'edges' must be a list")
    for i, e in enumerate(data["edges"]):
        field = f"edges[{i}]"
        if not isinstance(e, list) or len(e) != 2:
            raise FormatError(f"{where}: {field} must be a pair [u, v]")
        u, v = (_integer(x, field, where) for x in e)
        if u == v:
            raise FormatError(f"{where}: {field} = [{u}, {v}] is a self-loop")
        if u not in known or v not in known:
            raise FormatError(f"{where}: {field} = [{u}, {v}] uses an unknown node")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise FormatError(f"{where}: {field} = [{u}, {v}] duplicates an earlier edge")
        seen.add(key)
        edges.append(key)
    k = _integer(data["k"], "k", where)
    kprime = _integer(data["kprime"], "kprime", where)
    w = _number(data.get("w", 1), "w", where)
    wprime = _number(data.get("wprime", 1), "wprime", where)
    points = None
    if data.get("points") is not None:
        pts = data["points"]
        if not isinstance(pts, list) or len(pts) != n:
            raise FormatError(f"{where}: 'points' must list one [x, y] per node")
        points = tuple(
            (_number(p[0], f"points[{i}]", where), _number(p[1], f"points[{i}]", where))
            if isinstance(p, list) and len(p) == 2
            else (_ for _ in ()).throw(FormatError(f"{where}: points[{i}] must be [x, y]"))
            for i, p in enumerate(pts)
        )
    try:
        return Instance(Graph(nodes, edges), k, kprime, w, wprime, allow_any_weights, points)
    except ValueError as exc:
        raise FormatError(f"{where}: {exc}") from None


def parse_instance(path, allow_any_weights: bool = False) -> Instance:
    """Read a JSON instance ``{n, edges, k, kprime, w, wprime, points?}``."""
    path = Path(path)
    text = path.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    return instance_from_dict(data, str(path), allow_any_weights)


def _plain(x: float):
    return int(x) if float(x).is_integer() else x


def instance_to_dict(inst: Instance) -> dict:
    g = inst.graph
    d: dict = {"n": g.n}
    if g.nodes != tuple(range(g.n)):
        d["nodes"] = list(g.nodes)
    d["edges"] = [list(e) for e in g.edges]
    d.update(k=inst.k, kprime=inst.kprime, w=_plain(inst.w), wprime=_plain(inst.wprime))
    if inst.points is not None:
        d["points"] = [list(p) for p in inst.points]
    return d


def write_instance(inst: Instance, path) -> None:
    Path(path).write_text(json.dumps(instance_to_dict(inst)) + "\n")


def write_solution(result, inst: Instance, path) -> None:
    """Solution JSON ``{colours, objective, y_conflicts, z_conflicts, status, bound}``;
    ``colours`` follows the instance's node order."""
    Path(path).write_text(json.dumps(result.to_dict(inst.graph.nodes)) + "\n")


def read_solution(path) -> dict:
    data = json.loads(Path(path).read_text())
    for key in ("colours", "objective", "status", "bound"):
        if key not in data:
            raise FormatError(f"{path}: missing field {key!r}")
    return data


def write_edge_list(g: Graph, path) -> None:
    """Text format: ``n m`` then one sorted ``u v`` line per edge; nodes are ``0..n-1``."""
    if g.nodes != tuple(range(g.n)):
        g, _ = g.relabel()
    lines = [f"{g.n} {g.m}"] + [f"{u} {v}" for u, v in g.edges]
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list(path) -> Graph:
    path = Path(path)
    rows = [(i + 1, line.split()) for i, line in enumerate(path.read_text().splitlines())]
    rows = [(i, r) for i, r in rows if r and not r[0].startswith("#")]
    if not rows:
        raise FormatError(f"{path}: empty file")

    def ints(i, r):
        if len(r) != 2:
            raise FormatError(f"{path}:{i}: expected two integers, got {' '.join(r)!r}")
        try:
            return int(r[0]), int(r[1])
        except ValueError:
            raise FormatError(f"{path}:{i}: expected two integers, got {' '.join(r)!r}") from None

    n, m = ints(*rows[0])
    if len(rows) - 1 != m:
        raise FormatError(f"{path}: header announces {m} edges, found {len(rows) - 1}")
    edges = []
    seen = set()
    for i, r in rows[1:]:
        u, v = ints(i, r)
        if u == v:
            raise FormatError(f"{path}:{i}: self-loop on node {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(f"{path}:{i}: node outside 0..{n - 1}")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise FormatError(f"{path}:{i}: duplicate edge {u} {v}")
        seen.add(key)
        edges.append(key)
    return Graph.from_edges(n, edges)
