"""A reduced replicate study: mean relative gap after each cut stage and the
mean number of cuts per family, per (k, radius) cell.

    python demos/03_gap_table.py [replicates]
"""

import sys

from twolevel.experiment import ExperimentConfig, run_experiment
from twolevel.solver import SolverConfig

reps = int(sys.argv[1]) if len(sys.argv) > 1 else 5
cfg = ExperimentConfig(n=60, radii=(0.10, 0.12, 0.14), ks=(2, 3, 4), replicates=reps,
                       solver=SolverConfig(time_limit=5))
rep = run_experiment(cfg)

print(f"{'k':>2} {'radius':>6} {'y_gap':>6} {'yz_gap':>6} {'z_gap':>6} {'y':>6} {'yz':>6} {'z':>6}  unsolved")
for (k, radius), c in rep.cells.items():
    print(f"{k:>2} {radius:>6.2f} {c.y_gap:6.3f} {c.yz_gap:6.3f} {c.z_gap:6.3f} "
          f"{c.n_ycuts:6.1f} {c.n_yzcuts:6.1f} {c.n_zcuts:6.1f}  {c.unsolved}")
# Gaps of unsolved instances are measured against the best colouring found.
