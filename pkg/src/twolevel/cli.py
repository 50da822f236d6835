"""Command-line entry point: ``twolevel <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .graph import GeneratorParams, generate_neighbourhood_graph, preprocess, sample_points
from .io import FormatError, instance_from_dict, instance_to_dict, parse_instance, write_edge_list, write_solution
from .lp import write_lp
from .model import Instance, build_full_ip, symmetry_fixings
from .oracle import OracleLimitError, brute_force_optimum
from .solver import SolverConfig, root_cuts, solve


def _add_instance_overrides(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("instance overrides")
    g.add_argument("--k", type=int, help="override k")
    g.add_argument("--kprime", type=int, help="override k'")
    g.add_argument("--w", type=float, help="override w")
    g.add_argument("--wprime", type=float, help="override w'")
    g.add_argument("--allow-any-weights", action="store_true", help="accept w < w'")


def _add_solver_flags(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("solver")
    d = SolverConfig()
    g.add_argument("--eps", type=float, default=d.eps, help="slack above which cuts are purged")
    g.add_argument("--max-cuts", type=int, default=d.max_cuts, help="cuts added per round")
    g.add_argument("--violation-tol", type=float, default=d.violation_tol)
    g.add_argument("--time-limit", type=float, help="seconds")
    g.add_argument("--node-limit", type=int)
    g.add_argument("--seed", type=int, default=d.seed)
    g.add_argument("--no-symmetry", action="store_true", help="skip the symmetry fixings")
    g.add_argument("--no-dominance-filter", action="store_true", help="separate dominated clique sizes too")
    g.add_argument("--combined-z-phase", action="store_true", help="separate yz- and z-cliques together")


def _solver_config(a) -> SolverConfig:
    return SolverConfig(
        eps=a.eps,
        max_cuts=a.max_cuts,
        violation_tol=a.violation_tol,
        time_limit=a.time_limit,
        node_limit=a.node_limit,
        seed=a.seed,
        symmetry=not a.no_symmetry,
        dominance_filter=not a.no_dominance_filter,
        combined_z_phase=a.combined_z_phase,
    )


def _load(a) -> Instance:
    inst = parse_instance(a.instance, allow_any_weights=True)
    d = instance_to_dict(inst)
    for key in ("k", "kprime", "w", "wprime"):
        if getattr(a, key) is not None:
            d[key] = getattr(a, key)
    return instance_from_dict(d, a.instance, a.allow_any_weights)


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=1)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def cmd_generate(a) -> int:
    params = GeneratorParams(a.n, a.radius, a.seed, a.metric)
    g = generate_neighbourhood_graph(params)
    pts = tuple(map(tuple, sample_points(a.n, a.seed).tolist())) if a.points else None
    inst = Instance(g, a.k, a.kprime, a.w, a.wprime, a.allow_any_weights, pts)
    if a.edge_list:
        write_edge_list(g, a.edge_list)
    _emit(instance_to_dict(inst), a.out)
    return 0


def cmd_preprocess(a) -> int:
    inst = _load(a)
    tree = preprocess(inst.graph, inst.k)
    g = inst.graph
    _emit(
        {
            "n": g.n,
            "m": g.m,
            "k": inst.k,
            "leaves": [{"nodes": list(leaf.nodes), "m": leaf.m} for leaf in tree.leaves],
            "edges_eliminated": tree.edges_eliminated(),
            "edge_elimination": tree.edges_eliminated() / g.m if g.m else 1.0,
            "largest_leaf_fraction": max((leaf.n for leaf in tree.leaves), default=0) / g.n if g.n else 0.0,
        },
        a.out,
    )
    return 0


def cmd_solve(a) -> int:
    inst = _load(a)
    res = solve(inst, _solver_config(a), preprocess_graph=not a.no_preprocess)
    if a.stats:
        with open(a.stats, "w") as fh:
            for s in res.stages:
                fh.write(s.to_json() + "\n")
    if a.out:
        write_solution(res, inst, a.out)
    else:
        print(json.dumps(res.to_dict(inst.graph.nodes)))
    return 0 if res.colouring is not None else 1


def cmd_oracle(a) -> int:
    inst = _load(a)
    try:
        res = brute_force_optimum(inst, symmetry=a.symmetry)
    except OracleLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if a.out:
        write_solution(res, inst, a.out)
    else:
        print(json.dumps(res.to_dict(inst.graph.nodes)))
    return 0


def cmd_experiment(a) -> int:
    from .experiment import ExperimentConfig, run_experiment

    cfg = ExperimentConfig(
        n=a.n,
        radii=tuple(a.radii),
        ks=tuple(a.ks),
        kprime=a.kprime,
        replicates=a.replicates,
        seed_base=a.seed_base,
        output=a.out,
        w=a.w,
        wprime=a.wprime,
        solve=not a.no_solve,
        solver=_solver_config(a),
        record_timings=not a.no_timings,
        workers=a.workers,
    )
    report = run_experiment(cfg)
    print(report.aggregate_csv() if cfg.solve else report.preprocessing_csv(), end="")
    return 0


def cmd_export_lp(a) -> int:
    inst = _load(a)
    pool = ()
    if a.with_cuts:
        pool = root_cuts(inst, _solver_config(a)).pool
    fix = symmetry_fixings(inst.graph.n, inst.k, inst.kprime) if not a.no_symmetry and inst.graph.n else None
    model = build_full_ip(inst, pool, fix)
    if a.out:
        with open(a.out, "w") as fh:
            write_lp(model, fh)
    else:
        write_lp(model, sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twolevel", description="Exact two-level graph partitioning.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a random neighbourhood-graph instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--radius", type=float, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--metric", choices=["torus", "plain-euclidean"], default="torus")
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--kprime", type=int, default=2)
    g.add_argument("--w", type=float, default=1.0)
    g.add_argument("--wprime", type=float, default=1.0)
    g.add_argument("--allow-any-weights", action="store_true")
    g.add_argument("--points", action="store_true", help="store the sampled coordinates")
    g.add_argument("--edge-list", help="also write the graph as an edge list")
    g.add_argument("-o", "--out")
    g.set_defaults(func=cmd_generate)

    for name, func, helptext in (
        ("preprocess", cmd_preprocess, "k-core and block decomposition summary"),
        ("solve", cmd_solve, "solve exactly by cut-and-branch"),
        ("oracle", cmd_oracle, "solve by brute-force enumeration (small graphs)"),
        ("export-lp", cmd_export_lp, "write the 0-1 model in LP format"),
    ):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("instance")
        sp.add_argument("-o", "--out")
        _add_instance_overrides(sp)
        if name in ("solve", "export-lp"):
            _add_solver_flags(sp)
        if name == "solve":
            sp.add_argument("--stats", help="write stage statistics as JSON lines")
            sp.add_argument("--no-preprocess", action="store_true")
        if name == "oracle":
            sp.add_argument("--symmetry", action="store_true", help="apply the rank-based fixings")
        if name == "export-lp":
            sp.add_argument("--with-cuts", action="store_true", help="include the surviving root cuts")
        sp.set_defaults(func=func)

    e = sub.add_parser("experiment", help="replicated random-instance study")
    e.add_argument("--n", type=int, default=60)
    e.add_argument("--radii", type=float, nargs="+", default=[0.10, 0.12, 0.14])
    e.add_argument("--ks", type=int, nargs="+", default=[2, 3, 4])
    e.add_argument("--kprime", type=int, default=2)
    e.add_argument("--replicates", type=int, default=10)
    e.add_argument("--seed-base", type=int, default=0)
    e.add_argument("--w", type=float, default=1.0)
    e.add_argument("--wprime", type=float, default=1.0)
    e.add_argument("--no-solve", action="store_true", help="preprocessing statistics only")
    e.add_argument("--no-timings", action="store_true", help="write zero timings (byte-stable CSV)")
    e.add_argument("--workers", type=int, default=1)
    e.add_argument("-o", "--out", help="directory for the CSV files")
    _add_solver_flags(e)
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
