"""Cut-and-branch for the two-level partition problem.

The pipeline for one (sub)instance:

1. enumerate maximal cliques;
2. minimise ``w * sum(y)`` over ``y in [0, 1]``, adding y-clique cuts until
   none is violated, then drop cuts with slack above ``eps``;
3. add ``z in [0, 1]``, switch to the full objective and add yz-clique
   cuts, then z-clique cuts (or both together), then purge again;
4. add the assignment variables, linking rows and symmetry fixings and run
   branch-and-bound on the resulting 0-1 program.

:func:`solve` wraps this with graph preprocessing and recombination.
"""

from __future__ import annotations

import heapq
import json
import math
import time
from collections.abc import Iterable
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .cliques import DEFAULT_MAX_CLIQUES, CliqueCatalogue, maximal_cliques
from .cuts import (
    DEFAULT_MAX_CUTS,
    SLACK_EPS,
    VIOLATION_TOL,
    CutPool,
    EdgePoint,
    Family,
    purge_slack,
    separate,
)
from .graph import preprocess, recombine
from .lp import Basis, LpStatus, MatrixModel, solve_lp
from .model import Instance, build_full_ip, evaluate_colouring, symmetry_fixings

INT_TOL = 1e-6
BOUND_TOL = 1e-6


class SolveStatus(str, Enum):
    OPTIMAL = "optimal"
    FEASIBLE = "feasible-with-gap"
    INFEASIBLE = "infeasible-input"
    LIMIT = "limit"


@dataclass(frozen=True)
class SolverConfig:
    eps: float = SLACK_EPS
    max_cuts: int = DEFAULT_MAX_CUTS
    violation_tol: float = VIOLATION_TOL
    time_limit: float | None = None
    node_limit: int | None = None
    branching: str = "most-fractional"
    seed: int = 0
    symmetry: bool = True
    dominance_filter: bool = True
    combined_z_phase: bool = False
    max_cliques: int = DEFAULT_MAX_CLIQUES
    heuristic_every: int = 10

    def __post_init__(self):
        if not self.eps > 0:
            raise ValueError("eps must be positive")
        if self.max_cuts < 1:
            raise ValueError("max_cuts must be positive")
        if self.branching != "most-fractional":
            raise ValueError(f"unknown branching rule {self.branching!r}")


@dataclass
class StageRecord:
    stage: str
    cuts_added: int
    bound: float
    time_ms: float
    rounds: int = 0
    lp_iterations: int = 0

    def to_json(self) -> str:
        return json.dumps(
            {"stage": self.stage, "cuts_added": self.cuts_added, "bound": self.bound, "time_ms": self.time_ms}
        )


@dataclass
class SolveResult:
    status: SolveStatus
    colouring: dict[int, int] | None
    objective: float
    bound: float
    method: str = "cut-and-branch"
    y_conflicts: int | None = None
    z_conflicts: int | None = None
    stages: list[StageRecord] = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def gap(self) -> float:
        if self.objective == math.inf:
            return math.inf
        if self.objective == 0:
            return 0.0
        return (self.objective - self.bound) / abs(self.objective)

    def stage(self, name: str) -> StageRecord | None:
        for s in self.stages:
            if s.stage == name:
                return s
        return None

    def to_dict(self, nodes: Iterable[int] | None = None) -> dict:
        col = self.colouring or {}
        nodes = sorted(col) if nodes is None else list(nodes)
        return {
            "colours": [col.get(v) for v in nodes],
            "objective": self.objective,
            "y_conflicts": self.y_conflicts,
            "z_conflicts": self.z_conflicts,
            "status": self.status.value,
            "bound": self.bound,
        }


# ------------------------------------------------------------------ helpers


class _Clock:
    def __init__(self, limit: float | None):
        self.start = time.perf_counter()
        self.limit = limit

    def elapsed(self) -> float:
        return time.perf_counter() - self.start

    def expired(self) -> bool:
        return self.limit is not None and self.elapsed() >= self.limit


def _prunable(bound: float, incumbent: float, step: float | None) -> bool:
    if incumbent == math.inf:
        return False
    if step:
        return math.ceil((bound - BOUND_TOL) / step) * step >= incumbent - 1e-9
    return bound >= incumbent - BOUND_TOL


def edge_lp(inst: Instance, with_z: bool) -> MatrixModel:
    """LP over the edge variables only: ``y`` (and ``z``) boxed in [0, 1]."""
    g = inst.graph
    model = MatrixModel()
    model.y_index = {e: model.add_variable(0.0, 1.0, inst.w, name=f"y_{e[0]}_{e[1]}") for e in g.edges}
    if with_z:
        model.z_index = {e: model.add_variable(0.0, 1.0, inst.wprime, name=f"z_{e[0]}_{e[1]}") for e in g.edges}
    else:
        model.z_index = None
    return model


def _add_cut_rows(model: MatrixModel, cuts, kprime: int) -> None:
    for cut in cuts:
        model.add_row(cut.row(model.y_index, model.z_index, kprime), ">=", cut.rhs, name=f"{cut.family.name}{model.n_rows}")


def _edge_point(model: MatrixModel, x, edges) -> EdgePoint:
    return EdgePoint.from_vector(x, edges, model.y_index, model.z_index)


@dataclass
class CutLoopResult:
    bound: float
    pool: CutPool
    solution: object
    model: MatrixModel
    rounds: int
    history: list[float]
    lp_iterations: int
    timed_out: bool = False

    def __iter__(self):
        return iter((self.bound, self.pool, self.solution))


def run_cut_loop(
    model: MatrixModel,
    families: Iterable[Family],
    cat: CliqueCatalogue,
    inst: Instance,
    cfg: SolverConfig,
    pool: CutPool | None = None,
    clock: _Clock | None = None,
) -> CutLoopResult:
    """Solve, separate, add the most violated cuts; repeat until clean.

    ``model`` is an edge LP from :func:`edge_lp` and is not modified; the
    cuts already in ``pool`` are added as rows first. The final pool is
    returned unpurged together with the last LP solution and the bound
    after every round.
    """
    families = list(families)
    work = model.copy()
    pool = CutPool(pool or ())
    _add_cut_rows(work, pool, inst.kprime)
    edges = inst.graph.edges
    basis = None
    history: list[float] = []
    rounds = iters = 0
    timed_out = False
    while True:
        sol = solve_lp(work, warm_start=basis)
        iters += sol.iterations
        if sol.status is not LpStatus.OPTIMAL:
            raise RuntimeError(f"cut-loop LP ended with status {sol.status.value}")
        history.append(sol.objective)
        if clock is not None and clock.expired():
            timed_out = True
            break
        point = _edge_point(work, sol.x, edges)
        found = separate(
            point, families, cat, inst, cfg.max_cuts, cfg.violation_tol, cfg.dominance_filter
        )
        fresh = pool.add(found)
        if not fresh:
            break
        _add_cut_rows(work, fresh, inst.kprime)
        basis = sol.basis.with_rows_added(len(fresh))
        rounds += 1
    return CutLoopResult(history[-1], pool, sol, work, rounds, history, iters, timed_out)


def _purge(model: MatrixModel, loop: CutLoopResult, inst: Instance, cfg: SolverConfig):
    """Drop slack cuts and re-solve; returns the pool and the re-solved value."""
    point = _edge_point(loop.model, loop.solution.x, inst.graph.edges)
    kept = purge_slack(loop.pool, point, inst.kprime, cfg.eps)
    work = model.copy()
    _add_cut_rows(work, kept, inst.kprime)
    sol = solve_lp(work)
    return kept, sol


# ------------------------------------------------------------ heuristics


def canonical_colouring(col: dict[int, int], order: Iterable[int], k: int, kprime: int) -> dict[int, int]:
    """Relabel residues, then levels within each residue, by first
    appearance along ``order``.

    The relabelling keeps both conflict counts, and the node of 1-based rank
    ``v`` ends with ``c // k + c % k < v``, so the result survives the
    symmetry fixings.
    """
    residue_map: dict[int, int] = {}
    level_map: dict[int, dict[int, int]] = {}
    out = {}
    for v in order:
        q, r = divmod(col[v], k)
        if r not in residue_map:
            residue_map[r] = len(residue_map)
        levels = level_map.setdefault(r, {})
        if q not in levels:
            levels[q] = len(levels)
        out[v] = levels[q] * k + residue_map[r]
    return out


def _local_search(inst: Instance, col: dict[int, int], allowed: dict[int, list[int]], passes: int = 50) -> dict[int, int]:
    g, k, w, wp = inst.graph, inst.k, inst.w, inst.wprime

    def node_cost(v, c):
        t = 0.0
        for u in g.neighbours(v):
            cu = col[u]
            if cu % k == c % k:
                t += w + (wp if cu == c else 0.0)
        return t

    for _ in range(passes):
        improved = False
        for v in g.nodes:
            cur = node_cost(v, col[v])
            if cur == 0:
                continue
            best_c, best_t = col[v], cur
            for c in allowed[v]:
                t = node_cost(v, c)
                if t < best_t - 1e-12:
                    best_c, best_t = c, t
            if best_c != col[v]:
                col[v] = best_c
                improved = True
        if not improved:
            break
    return col


def greedy_colouring(inst: Instance, scores=None, allowed: dict[int, list[int]] | None = None) -> dict[int, int]:
    """Saturation-ordered greedy colouring followed by 1-move local search.

    ``scores[v][c]`` (e.g. LP values of ``x_vc``) breaks ties between colours
    of equal incremental cost; ``allowed`` restricts each node's colours.
    """
    g, k, K = inst.graph, inst.k, inst.n_colours
    w, wp = inst.w, inst.wprime
    if allowed is None:
        allowed = {v: list(range(K)) for v in g.nodes}
    col: dict[int, int] = {}
    residues: dict[int, set[int]] = {v: set() for v in g.nodes}
    coloured_nb = dict.fromkeys(g.nodes, 0)
    remaining = set(g.nodes)
    while remaining:
        v = max(remaining, key=lambda u: (len(residues[u]), coloured_nb[u], g.degree(u), -u))
        best = None
        for c in allowed[v]:
            cost = 0.0
            for u in g.neighbours(v):
                if u in col and col[u] % k == c % k:
                    cost += w + (wp if col[u] == c else 0.0)
            tie = -scores[v][c] if scores is not None else 0.0
            key = (cost, tie, c)
            if best is None or key < best:
                best = key
        if best is None:
            raise ValueError(f"node {v} has no allowed colour")
        col[v] = best[2]
        remaining.discard(v)
        for u in g.neighbours(v):
            residues[u].add(best[2] % k)
            coloured_nb[u] += 1
    return _local_search(inst, col, allowed)


# ------------------------------------------------------- branch and bound


def _model_colouring_ok(model: MatrixModel, lb, ub, col: dict[int, int]) -> bool:
    lay = model.layout
    K = lay.n_colours
    for v in lay.nodes:
        for c in range(K):
            j = lay.x(v, c)
            val = 1.0 if col[v] == c else 0.0
            if val < lb[j] - 1e-9 or val > ub[j] + 1e-9:
                return False
    return True


def _reduced_cost_fixings(sol, ints, changes, lb0, ub0, incumbent, step) -> tuple:
    """Binaries whose move off their bound would push the LP value past the
    incumbent; they are fixed for the whole subtree."""
    if incumbent == math.inf:
        return ()
    fixed = {j for j, _ in changes}
    d = sol.reduced_costs
    x = sol.x
    out = []
    for j in ints:
        j = int(j)
        if j in fixed or lb0[j] == ub0[j]:
            continue
        dj = d[j]
        if dj > BOUND_TOL and x[j] <= INT_TOL and _prunable(sol.objective + dj, incumbent, step):
            out.append((j, 0.0))
        elif dj < -BOUND_TOL and x[j] >= 1 - INT_TOL and _prunable(sol.objective - dj, incumbent, step):
            out.append((j, 1.0))
    return tuple(out)


def branch_and_bound(
    model: MatrixModel,
    cfg: SolverConfig = SolverConfig(),
    inst: Instance | None = None,
    clock: _Clock | None = None,
) -> SolveResult:
    """Exact optimum of a 0-1 model by LP-based branch-and-bound.

    Branches on the most fractional integer variable (lowest index on ties),
    diving into the ``= 1`` child and backtracking to the open node with the
    smallest bound. When ``inst`` is given and the model carries an
    ``IpLayout``, a greedy colouring rounded from LP points supplies
    incumbents and integral LP points are scored as colourings.
    """
    clock = clock or _Clock(cfg.time_limit)
    ints = np.nonzero(model.integer)[0]
    lb0 = np.asarray(model.lb, dtype=float)
    ub0 = np.asarray(model.ub, dtype=float)
    layout = getattr(model, "layout", None)
    use_colours = inst is not None and layout is not None
    step = inst.objective_step() if inst is not None else None
    stats = {"nodes": 0, "lp_iterations": 0, "heuristic_incumbents": 0, "integral_incumbents": 0}

    incumbent = math.inf
    best_x = None
    best_col = None

    def try_colouring(col):
        nonlocal incumbent, best_col, best_x
        if not use_colours:
            return False
        if not _model_colouring_ok(model, lb0, ub0, col):
            col = canonical_colouring(col, layout.nodes, inst.k, inst.kprime)
            if not _model_colouring_ok(model, lb0, ub0, col):
                return False
        cost = evaluate_colouring(inst, col).objective
        if cost < incumbent - 1e-9:
            incumbent, best_col, best_x = cost, dict(col), None
            return True
        return False

    def heuristic(x):
        K = layout.n_colours
        xs = np.asarray(x[: layout.y0]).reshape(len(layout.nodes), K)
        scores = {v: xs[i] for i, v in enumerate(layout.nodes)}
        allowed = {v: list(range(K)) for v in layout.nodes}
        if try_colouring(greedy_colouring(inst, scores, allowed)):
            stats["heuristic_incumbents"] += 1

    root = solve_lp(model)
    stats["lp_iterations"] += root.iterations
    stats["nodes"] = 1
    if root.status is LpStatus.INFEASIBLE:
        return SolveResult(SolveStatus.INFEASIBLE, None, math.inf, math.inf, "branch-and-bound", stats=stats)
    if root.status is not LpStatus.OPTIMAL:
        raise RuntimeError(f"root LP ended with status {root.status.value}")
    stats["root_bound"] = root.objective
    if use_colours:
        heuristic(root.x)

    # Open nodes: (bound, seq, changes, basis).
    heap: list = []
    seq = 0
    current = (root.objective, 0, (), root)
    global_limit = False

    def bounds_for(changes):
        lb, ub = lb0.copy(), ub0.copy()
        for j, val in changes:
            lb[j] = ub[j] = val
        return lb, ub

    while True:
        if current is None:
            while heap and _prunable(heap[0][0], incumbent, step):
                heapq.heappop(heap)
            if not heap:
                break
            bnd, _, changes, basis = heapq.heappop(heap)
            if clock.expired() or (cfg.node_limit is not None and stats["nodes"] >= cfg.node_limit):
                heapq.heappush(heap, (bnd, -1, changes, basis))
                global_limit = True
                break
            lb, ub = bounds_for(changes)
            sol = solve_lp(model, warm_start=basis, lb=lb, ub=ub)
            stats["nodes"] += 1
            stats["lp_iterations"] += sol.iterations
            current = (sol.objective, len(changes), changes, sol)
        bnd, depth, changes, sol = current
        current = None
        if sol.status is LpStatus.INFEASIBLE:
            continue
        if sol.status is not LpStatus.OPTIMAL:
            raise RuntimeError(f"node LP ended with status {sol.status.value}")
        if _prunable(sol.objective, incumbent, step):
            continue
        x = sol.x
        xi = x[ints]
        frac = np.abs(xi - np.round(xi))
        if frac.max(initial=0.0) <= INT_TOL:
            if use_colours:
                col = layout.colouring(np.round(x))
                cost = evaluate_colouring(inst, col).objective
                if cost < incumbent - 1e-9:
                    incumbent, best_col, best_x = cost, col, None
                    stats["integral_incumbents"] += 1
            elif sol.objective < incumbent - 1e-9:
                incumbent, best_x = sol.objective, x.copy()
                stats["integral_incumbents"] += 1
            continue
        if use_colours and cfg.heuristic_every and stats["nodes"] % cfg.heuristic_every == 0:
            heuristic(x)
        # Most fractional; lowest index among ties.
        dist = np.abs(xi - 0.5)
        j = int(ints[np.argmin(dist)])
        changes = changes + _reduced_cost_fixings(sol, ints, changes, lb0, ub0, incumbent, step)
        down = changes + ((j, 0.0),)
        up = changes + ((j, 1.0),)
        seq += 1
        heapq.heappush(heap, (sol.objective, seq, down, sol.basis))
        if clock.expired() or (cfg.node_limit is not None and stats["nodes"] >= cfg.node_limit):
            seq += 1
            heapq.heappush(heap, (sol.objective, seq, up, sol.basis))
            global_limit = True
            break
        lb, ub = bounds_for(up)
        child = solve_lp(model, warm_start=sol.basis, lb=lb, ub=ub)
        stats["nodes"] += 1
        stats["lp_iterations"] += child.iterations
        current = (child.objective, depth + 1, up, child)

    open_bounds = [h[0] for h in heap]
    if global_limit:
        bound = min([incumbent] + open_bounds)
    else:
        bound = incumbent
    if incumbent == math.inf:
        if global_limit:
            return SolveResult(SolveStatus.LIMIT, None, math.inf, min(open_bounds, default=-math.inf), "branch-and-bound", stats=stats)
        return SolveResult(SolveStatus.INFEASIBLE, None, math.inf, math.inf, "branch-and-bound", stats=stats)
    if step and bound < incumbent:
        bound = min(incumbent, math.ceil((bound - BOUND_TOL) / step) * step)
    status = SolveStatus.OPTIMAL if bound >= incumbent - BOUND_TOL else SolveStatus.FEASIBLE
    if status is SolveStatus.OPTIMAL:
        bound = incumbent
    res = SolveResult(status, best_col, incumbent, bound, "branch-and-bound", stats=stats)
    if best_x is not None:
        res.stats["x"] = best_x
    if best_col is not None and inst is not None:
        cost = evaluate_colouring(inst, best_col)
        res.y_conflicts, res.z_conflicts = cost.y_conflicts, cost.z_conflicts
    return res


# ------------------------------------------------------------ pipeline


@dataclass
class RootCuts:
    pool: CutPool
    stages: list[StageRecord]
    checks: dict
    n_cliques: int
    time_ms: float


def root_cuts(inst: Instance, cfg: SolverConfig = SolverConfig(), clock: _Clock | None = None) -> RootCuts:
    """The cutting-plane stages on the edge LPs: y-clique cuts, purge, then
    yz- and z-clique cuts on the full objective, purge."""
    clock = clock or _Clock(cfg.time_limit)
    checks = {"cut_monotone": True, "purge_deltas": [], "bound_histories": []}
    stages: list[StageRecord] = []
    t0 = time.perf_counter()
    cat = maximal_cliques(inst.graph, cfg.max_cliques)

    def loop(base, families, pool, name):
        t = time.perf_counter()
        res = run_cut_loop(base, families, cat, inst, cfg, pool, clock)
        hist = res.history
        checks["cut_monotone"] &= all(b >= a - 1e-9 for a, b in zip(hist, hist[1:]))
        checks["bound_histories"].append(hist)
        added = len(res.pool) - len(pool or ())
        stages.append(StageRecord(name, added, res.bound, (time.perf_counter() - t) * 1e3, res.rounds, res.lp_iterations))
        return res

    lp1 = edge_lp(inst, with_z=False)
    r1 = loop(lp1, [Family.Y], None, "y")
    pool1, resolved = _purge(lp1, r1, inst, cfg)
    checks["purge_deltas"].append(abs(resolved.objective - r1.bound))

    lp2 = edge_lp(inst, with_z=True)
    if cfg.combined_z_phase:
        last = loop(lp2, [Family.YZ, Family.Z], pool1, "yz")
        rec = stages[-1]
        fresh = [c for c in last.pool if c not in pool1]
        rec.cuts_added = sum(c.family is Family.YZ for c in fresh)
        stages.append(StageRecord("z", sum(c.family is Family.Z for c in fresh), last.bound, 0.0))
    else:
        r_yz = loop(lp2, [Family.YZ], pool1, "yz")
        last = loop(lp2, [Family.Z], r_yz.pool, "z")
    pool2, resolved = _purge(lp2, last, inst, cfg)
    checks["purge_deltas"].append(abs(resolved.objective - last.bound))
    return RootCuts(pool2, stages, checks, len(cat), (time.perf_counter() - t0) * 1e3)


def cut_and_branch(inst: Instance, cfg: SolverConfig = SolverConfig(), clock: _Clock | None = None) -> SolveResult:
    """Run the staged cutting-plane pipeline and branch-and-bound on one
    instance, without graph preprocessing."""
    clock = clock or _Clock(cfg.time_limit)
    g = inst.graph
    rc = root_cuts(inst, cfg, clock)
    stages = list(rc.stages)

    # Full 0-1 model with the surviving cuts and the symmetry fixings.
    fix = symmetry_fixings(g.n, inst.k, inst.kprime) if (cfg.symmetry and g.n) else None
    ip = build_full_ip(inst, rc.pool, fix)
    t = time.perf_counter()
    bb = branch_and_bound(ip, cfg, inst, clock)
    bb_ms = (time.perf_counter() - t) * 1e3
    stages.append(StageRecord("bb", 0, bb.bound, bb_ms, 0, bb.stats.get("lp_iterations", 0)))

    stats = dict(bb.stats)
    by_stage = {s.stage: s.cuts_added for s in rc.stages}
    stats.update(
        {
            "maximal_cliques": rc.n_cliques,
            "cuts_y": by_stage["y"],
            "cuts_yz": by_stage["yz"],
            "cuts_z": by_stage["z"],
            "final_pool": len(rc.pool),
            "cp_time_ms": rc.time_ms,
            "bb_time_ms": bb_ms,
            "checks": rc.checks,
            "incumbent_rule": "greedy saturation + local search, rounded from LP points",
            "node_order": "depth-first dive on x=1, best-bound backtracking",
        }
    )
    return SolveResult(bb.status, bb.colouring, bb.objective, bb.bound, "cut-and-branch",
                       bb.y_conflicts, bb.z_conflicts, stages, stats)


STAGE_NAMES = ("y", "yz", "z")


def solve(inst: Instance, cfg: SolverConfig = SolverConfig(), preprocess_graph: bool = True) -> SolveResult:
    """Preprocess, solve every leaf with :func:`cut_and_branch`, recombine.

    Stage bounds and cut counts in the result are sums over leaves.
    """
    clock = _Clock(cfg.time_limit)
    g = inst.graph
    if not preprocess_graph:
        return cut_and_branch(inst, cfg, clock)
    t0 = time.perf_counter()
    tree = preprocess(g, inst.k)
    pre_ms = (time.perf_counter() - t0) * 1e3
    # Small leaves first, each taking an even share of the remaining time,
    # so one hard leaf cannot starve the rest. Results keep leaf order.
    leaves = tree.leaves
    leaf_results: list = [None] * len(leaves)
    by_size = sorted(range(len(leaves)), key=lambda i: (leaves[i].m, leaves[i].n, i))
    for done, i in enumerate(by_size):
        leaf_cfg = cfg
        if cfg.time_limit is not None:
            left = max(cfg.time_limit - clock.elapsed(), 0.0)
            leaf_cfg = replace(cfg, time_limit=left / (len(leaves) - done))
        leaf_results[i] = cut_and_branch(inst.restrict(leaves[i]), leaf_cfg)
    bad = [r for r in leaf_results if r.colouring is None]
    stats = {
        "preprocess_time_ms": pre_ms,
        "leaves": len(tree.leaves),
        "leaf_sizes": [leaf.n for leaf in tree.leaves],
        "edge_elimination": (tree.edges_eliminated() / g.m) if g.m else 1.0,
        "largest_leaf_fraction": (max((leaf.n for leaf in tree.leaves), default=0) / g.n) if g.n else 0.0,
    }
    for key in ("cuts_y", "cuts_yz", "cuts_z", "nodes", "lp_iterations", "cp_time_ms", "bb_time_ms"):
        stats[key] = sum(r.stats.get(key) or 0 for r in leaf_results)
    stats["checks"] = {
        "cut_monotone": all(r.stats["checks"]["cut_monotone"] for r in leaf_results),
        "purge_deltas": [d for r in leaf_results for d in r.stats["checks"]["purge_deltas"]],
    }
    stages = []
    for name in STAGE_NAMES + ("bb",):
        recs = [r.stage(name) for r in leaf_results]
        stages.append(
            StageRecord(
                name,
                sum(s.cuts_added for s in recs if s),
                sum(s.bound for s in recs if s),
                sum(s.time_ms for s in recs if s),
            )
        )
    bound = sum(r.bound for r in leaf_results)
    if bad:
        status = SolveStatus.LIMIT if any(r.status is SolveStatus.LIMIT for r in bad) else SolveStatus.INFEASIBLE
        return SolveResult(status, None, math.inf, bound, "cut-and-branch", stages=stages, stats=stats)
    col = recombine(tree, [r.colouring for r in leaf_results])
    cost = evaluate_colouring(inst, col)
    if all(r.status is SolveStatus.OPTIMAL for r in leaf_results):
        status = SolveStatus.OPTIMAL
        bound = cost.objective
    else:
        status = SolveStatus.FEASIBLE
    stats["leaf_objectives"] = [r.objective for r in leaf_results]
    return SolveResult(status, col, cost.objective, bound, "cut-and-branch",
                       cost.y_conflicts, cost.z_conflicts, stages, stats)
