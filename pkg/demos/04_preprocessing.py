"""How much of a random neighbourhood graph survives preprocessing, as the
radius grows. Plots if matplotlib is available, prints either way.

    python demos/04_preprocessing.py [replicates]
"""

import sys

from twolevel.experiment import ExperimentConfig, run_experiment

reps = int(sys.argv[1]) if len(sys.argv) > 1 else 50
radii = (0.03, 0.05, 0.075, 0.10, 0.125, 0.15, 0.20)
ks = (3, 4, 5)
rep = run_experiment(ExperimentConfig(n=100, radii=radii, ks=ks, replicates=reps, solve=False))

for k in ks:
    cells = [rep.cell(k, r) for r in radii]
    print(f"k={k}")
    for c in cells:
        print(f"  r={c.radius:.3f}  eliminated {c.mean_edge_elimination:.3f}±{c.se_edge_elimination:.3f}"
              f"  largest leaf {c.mean_largest_component_fraction:.3f}")

try:
    import matplotlib.pyplot as plt
except ImportError:
    sys.exit(0)

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
for k in ks:
    cells = [rep.cell(k, r) for r in radii]
    ax1.plot(radii, [c.mean_edge_elimination for c in cells], marker="o", label=f"k={k}")
    ax2.plot(radii, [c.mean_largest_component_fraction for c in cells], marker="o", label=f"k={k}")
ax1.set(xlabel="radius", ylabel="edges eliminated")
ax2.set(xlabel="radius", ylabel="largest leaf / n")
ax1.legend()
fig.tight_layout()
fig.savefig("preprocessing.png", dpi=120)
print("wrote preprocessing.png")
