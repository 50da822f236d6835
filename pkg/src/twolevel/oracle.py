"""Brute-force ground truth for small instances."""

from __future__ import annotations

import itertools
import math

from .model import Instance, evaluate_colouring, phi
from .solver import SolveResult, SolveStatus

DEFAULT_MAX_SPACE = 6**13


class OracleLimitError(RuntimeError):
    pass


def _search_order(inst: Instance) -> list[int]:
    # Breadth-first from the highest-degree node, so each new node tends to
    # have coloured neighbours and partial costs grow early.
    g = inst.graph
    order: list[int] = []
    seen: set[int] = set()
    for start in sorted(g.nodes, key=lambda v: (-g.degree(v), v)):
        if start in seen:
            continue
        seen.add(start)
        queue = [start]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for u in sorted(g.neighbours(v), key=lambda u: (-g.degree(u), u)):
                if u not in seen:
                    seen.add(u)
                    queue.append(u)
    return order


def brute_force_optimum(
    inst: Instance,
    max_space: int = DEFAULT_MAX_SPACE,
    prune: bool = True,
    symmetry: bool = False,
) -> SolveResult:
    """Exact optimum by depth-first enumeration of colourings.

    The first node in search order is pinned to colour 0, which any
    colour permutation preserving residues mod ``k`` allows. With
    ``symmetry`` the full rank-based fixings are applied instead (node of
    rank ``v`` only takes colours with ``phi(c) < v``), in search order.
    With ``prune`` a branch is cut once its partial cost reaches the
    incumbent; partial costs only grow because both weights are positive.
    """
    g = inst.graph
    K, k = inst.n_colours, inst.k
    n = g.n
    if n == 0:
        return SolveResult(SolveStatus.OPTIMAL, {}, 0.0, 0.0, method="oracle")
    if K ** (n - 1) > max_space:
        raise OracleLimitError(f"search space {K}^{n - 1} exceeds cap {max_space}")
    order = _search_order(inst)
    pos = {v: i for i, v in enumerate(order)}
    earlier = [[pos[u] for u in g.neighbours(v) if pos[u] < i] for i, v in enumerate(order)]
    if symmetry:
        choices = [[c for c in range(K) if phi(c, k) < i + 1] for i in range(n)]
    else:
        choices = [[0]] + [list(range(K))] * (n - 1)
    w, wp = inst.w, inst.wprime

    colour = [0] * n
    best = [math.inf, None]

    def rec(i: int, cost: float) -> None:
        if i == n:
            if cost < best[0]:
                best[0] = cost
                best[1] = list(colour)
            return
        nb = earlier[i]
        for c in choices[i]:
            add = 0.0
            r = c % k
            for j in nb:
                cj = colour[j]
                if cj % k == r:
                    add += w + (wp if cj == c else 0.0)
            total = cost + add
            if prune and total >= best[0]:
                continue
            colour[i] = c
            rec(i + 1, total)

    rec(0, 0.0)
    col = {order[i]: c for i, c in enumerate(best[1])}
    cost = evaluate_colouring(inst, col)
    return SolveResult(
        SolveStatus.OPTIMAL, col, cost.objective, cost.objective, method="oracle",
        y_conflicts=cost.y_conflicts, z_conflicts=cost.z_conflicts,
    )


def exhaustive_optimum(inst: Instance) -> float:
    """Minimum over every colouring, with no pruning or symmetry; tiny graphs only."""
    g = inst.graph
    best = math.inf
    for cols in itertools.product(range(inst.n_colours), repeat=g.n):
        best = min(best, evaluate_colouring(inst, dict(zip(g.nodes, cols))).objective)
    return best if g.n else 0.0
