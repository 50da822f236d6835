"""Solve one small random instance end to end and check it by brute force.

    python demos/01_small_instance.py
"""

from twolevel.graph import GeneratorParams, generate_neighbourhood_graph, preprocess
from twolevel.model import Instance, evaluate_colouring
from twolevel.oracle import brute_force_optimum
from twolevel.solver import SolverConfig, solve

g = generate_neighbourhood_graph(GeneratorParams(n=12, radius=0.22, seed=7))
inst = Instance(g, k=2, kprime=2)
print(f"graph: {g.n} nodes, {g.m} edges")

# Peeling and block splitting usually leave only a few dense pieces.
tree = preprocess(g, inst.k)
print(f"leaves after preprocessing: {[leaf.n for leaf in tree.leaves]}, "
      f"{tree.edges_eliminated()} of {g.m} edges never reach the solver")

res = solve(inst, SolverConfig())
print(f"status {res.status.value}, objective {res.objective:g} "
      f"({res.y_conflicts} residue clashes, {res.z_conflicts} exact clashes)")
for s in res.stages:
    print(f"  stage {s.stage:>2}: bound {s.bound:7.3f}  cuts {s.cuts_added:3d}  {s.time_ms:6.1f} ms")

oracle = brute_force_optimum(inst)
assert oracle.objective == res.objective
assert evaluate_colouring(inst, res.colouring).objective == res.objective
print(f"brute force agrees: {oracle.objective:g}")
