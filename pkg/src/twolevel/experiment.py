"""Replicated random-instance experiments: cut-phase gaps, cut counts,
timings and preprocessing statistics per (k, radius) cell."""

from __future__ import annotations

import csv
import io
import math
from collections.abc import Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from .graph import DecompositionTree, GeneratorParams, Graph, generate_neighbourhood_graph, preprocess
from .model import Instance
from .solver import SolverConfig, SolveStatus, solve

AGGREGATE_COLUMNS = [
    "k", "radius", "y_gap", "yz_gap", "z_gap", "n_ycuts", "n_yzcuts", "n_zcuts", "cp_time_ms", "bb_time_ms",
    "replicates", "failures", "unsolved", "zero_optimum",
]
PREPROCESS_COLUMNS = [
    "k", "radius", "mean_edge_elimination", "mean_largest_component_fraction",
    "se_edge_elimination", "se_largest_component_fraction", "replicates",
]
REPLICATE_COLUMNS = [
    "k", "radius", "replicate", "seed", "n", "m", "status", "objective",
    "y_bound", "yz_bound", "z_bound", "y_gap", "yz_gap", "z_gap", "zero_optimum",
    "n_ycuts", "n_yzcuts", "n_zcuts", "bb_nodes", "cp_time_ms", "bb_time_ms",
    "edge_elimination", "largest_component_fraction", "error",
]


@dataclass(frozen=True)
class ExperimentConfig:
    n: int = 60
    radii: tuple[float, ...] = (0.10, 0.12, 0.14)
    ks: tuple[int, ...] = (2, 3, 4)
    kprime: int = 2
    replicates: int = 10
    seed_base: int = 0
    output: str | None = None
    w: float = 1.0
    wprime: float = 1.0
    metric: str = "torus"
    solve: bool = True
    solver: SolverConfig = field(default_factory=SolverConfig)
    record_timings: bool = True
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        object.__setattr__(self, "ks", tuple(int(k) for k in self.ks))
        if not self.radii or not self.ks:
            raise ValueError("radius and k grids must be non-empty")
        if self.replicates < 1:
            raise ValueError("replicates must be at least 1")
        if self.n < 1:
            raise ValueError("n must be at least 1")


def replicate_seed(seed_base: int, r: int) -> int:
    return (seed_base ^ r) & 0xFFFFFFFFFFFFFFFF


def preprocessing_stats(g: Graph, tree: DecompositionTree) -> tuple[float, float]:
    """Share of edges not in any leaf, and share of nodes in the largest leaf.

    An edgeless graph counts as fully eliminated.
    """
    elim = tree.edges_eliminated() / g.m if g.m else 1.0
    largest = max((leaf.n for leaf in tree.leaves), default=0)
    return elim, (largest / g.n if g.n else 0.0)


def _gap(opt: float, bound: float) -> float:
    if opt == 0:
        return 0.0
    return (opt - bound) / opt


def run_replicate(cfg: ExperimentConfig, k: int, radius: float, r: int) -> dict:
    seed = replicate_seed(cfg.seed_base, r)
    row: dict = {"k": k, "radius": radius, "replicate": r, "seed": seed}
    try:
        g = generate_neighbourhood_graph(GeneratorParams(cfg.n, radius, seed, cfg.metric))
        row.update(n=g.n, m=g.m)
        tree = preprocess(g, k)
        row["edge_elimination"], row["largest_component_fraction"] = preprocessing_stats(g, tree)
        if not cfg.solve:
            return row
        res = solve(Instance(g, k, cfg.kprime, cfg.w, cfg.wprime), cfg.solver)
        if res.colouring is None:
            raise RuntimeError(f"no colouring found (status {res.status.value})")
        opt = res.objective
        bounds = {s.stage: s.bound for s in res.stages}
        row.update(
            status=res.status.value,
            objective=opt,
            y_bound=bounds["y"],
            yz_bound=bounds["yz"],
            z_bound=bounds["z"],
            y_gap=_gap(opt, bounds["y"]),
            yz_gap=_gap(opt, bounds["yz"]),
            z_gap=_gap(opt, bounds["z"]),
            zero_optimum=int(opt == 0),
            n_ycuts=res.stats["cuts_y"],
            n_yzcuts=res.stats["cuts_yz"],
            n_zcuts=res.stats["cuts_z"],
            bb_nodes=res.stats["nodes"],
            cp_time_ms=res.stats["cp_time_ms"] if cfg.record_timings else 0.0,
            bb_time_ms=res.stats["bb_time_ms"] if cfg.record_timings else 0.0,
        )
        row["checks"] = res.stats["checks"]
    except Exception as exc:  # recorded, the run continues
        row["error"] = f"{type(exc).__name__}: {exc}"
    return row


def _mean(values: Sequence[float]) -> float:
    return math.fsum(values) / len(values) if values else math.nan


def _stderr(values: Sequence[float]) -> float:
    if len(values) < 2:
        return 0.0
    mu = _mean(values)
    var = math.fsum((v - mu) ** 2 for v in values) / (len(values) - 1)
    return math.sqrt(var / len(values))


@dataclass
class CellSummary:
    k: int
    radius: float
    replicates: int
    failures: int
    unsolved: int = 0
    zero_optimum: int = 0
    y_gap: float = math.nan
    yz_gap: float = math.nan
    z_gap: float = math.nan
    n_ycuts: float = math.nan
    n_yzcuts: float = math.nan
    n_zcuts: float = math.nan
    cp_time_ms: float = math.nan
    bb_time_ms: float = math.nan
    mean_edge_elimination: float = math.nan
    mean_largest_component_fraction: float = math.nan
    se_edge_elimination: float = math.nan
    se_largest_component_fraction: float = math.nan


@dataclass
class ExperimentReport:
    config: ExperimentConfig
    rows: list[dict]
    cells: dict[tuple[int, float], CellSummary]

    def cell(self, k: int, radius: float) -> CellSummary:
        return self.cells[(k, float(radius))]

    def _csv(self, columns, records) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, columns, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for rec in records:
            w.writerow({c: rec.get(c, "") for c in columns})
        return buf.getvalue()

    def replicate_csv(self) -> str:
        return self._csv(REPLICATE_COLUMNS, self.rows)

    def aggregate_csv(self) -> str:
        return self._csv(AGGREGATE_COLUMNS, [vars(c) for c in self.cells.values()])

    def preprocessing_csv(self) -> str:
        return self._csv(PREPROCESS_COLUMNS, [vars(c) for c in self.cells.values()])

    def write(self, directory) -> list[Path]:
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        files = [out / "preprocessing.csv"]
        files[0].write_text(self.preprocessing_csv())
        if self.config.solve:
            files.append(out / "replicates.csv")
            files[-1].write_text(self.replicate_csv())
            files.append(out / "aggregate.csv")
            files[-1].write_text(self.aggregate_csv())
        else:
            files.append(out / "replicates.csv")
            files[-1].write_text(self.replicate_csv())
        return files


def _summarise(cfg: ExperimentConfig, k: int, radius: float, rows: list[dict]) -> CellSummary:
    rows = sorted(rows, key=lambda r: r["replicate"])
    failed = [r for r in rows if "error" in r]
    ok = [r for r in rows if "error" not in r]
    cell = CellSummary(k, radius, len(rows), len(failed))
    pre_ok = [r for r in rows if "edge_elimination" in r]
    ee = [r["edge_elimination"] for r in pre_ok]
    lc = [r["largest_component_fraction"] for r in pre_ok]
    cell.mean_edge_elimination, cell.se_edge_elimination = _mean(ee), _stderr(ee)
    cell.mean_largest_component_fraction, cell.se_largest_component_fraction = _mean(lc), _stderr(lc)
    if cfg.solve and ok:
        for key in ("y_gap", "yz_gap", "z_gap", "n_ycuts", "n_yzcuts", "n_zcuts", "cp_time_ms", "bb_time_ms"):
            setattr(cell, key, _mean([r[key] for r in ok]))
        cell.zero_optimum = sum(r["zero_optimum"] for r in ok)
        cell.unsolved = sum(r["status"] != SolveStatus.OPTIMAL.value for r in ok)
    return cell


def _job(args):
    return run_replicate(*args)


def run_experiment(cfg: ExperimentConfig) -> ExperimentReport:
    """Every (k, radius, replicate) combination; replicate ``r`` uses the
    graph seed ``seed_base ^ r`` for all radii and k."""
    jobs = [(cfg, k, radius, r) for k in cfg.ks for radius in cfg.radii for r in range(cfg.replicates)]
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as pool:
            rows = list(pool.map(_job, jobs, chunksize=4))
    else:
        rows = [_job(j) for j in jobs]
    cells = {}
    for k in cfg.ks:
        for radius in cfg.radii:
            cell_rows = [r for r in rows if r["k"] == k and r["radius"] == radius]
            cells[(k, radius)] = _summarise(cfg, k, radius, cell_rows)
    report = ExperimentReport(cfg, rows, cells)
    if cfg.output:
        report.write(cfg.output)
    return report


def with_solver(cfg: ExperimentConfig, **changes) -> ExperimentConfig:
    return replace(cfg, solver=replace(cfg.solver, **changes))
