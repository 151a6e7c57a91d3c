"""
Example families and their limits
=================================

Six tree families with known limits. Paths tend to the unit interval. Stars
and complete binary trees tend to a point mass at height 1/2, which means
two random vertices are almost surely at normalized distance 1. Combs tend
to a uniform rectangle, and two families need finite truncations of their
infinite limits.
"""

from dendrolim import families, tree_core
from dendrolim.convergence import energy_distance
from dendrolim.dendron import kernel_supremum, tau_sample

N = 5 * 10**4
ladders = {
    "path": (10, 20, 40, 80),
    "star": (10, 20, 40, 80),
    "binary": (4, 6, 8, 10),
    "stretched-binary": (3, 4, 5, 6),
    "comb": (5, 10, 20, 40),
    "deep2": (4, 6, 8, 10),
}
for name, sizes in ladders.items():
    limit = families.limit_of(name, depth=6)
    target = tau_sample(limit, 2, N, seed=0)
    eds = [energy_distance(tree_core.tau_sample(families.GENERATORS[name](k), 2, N, seed=1), target)
           for k in sizes]
    print(f"{name:>16}: sup kernel {kernel_supremum(limit):.3f}, truncated mass {limit.truncation_mass:.4f}, "
          "energies " + " ".join(f"{e:.4f}" for e in eds))
