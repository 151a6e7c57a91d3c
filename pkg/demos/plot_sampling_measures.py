"""
Sampling measures of small trees
================================

Pick ``r`` vertices of a finite tree uniformly and independently and record
their pairwise distances, normalized so the tree has diameter 1. The law of
that ``r x r`` matrix is the sampling measure. For tiny trees we can list it
exactly, and for bigger ones we estimate it by Monte Carlo.
"""

import numpy as np

from dendrolim import families, tree_core
from dendrolim.convergence import energy_distance, mean_offdiag
from dendrolim.sampling import SamplingMeasure

# The path on three vertices: nine ordered pairs, three distance values.
p3 = families.gen_path(3)
print(tree_core.normalized_distance_matrix(p3))
for (d12,), w in tree_core.tau_exact(p3, 2).as_dict().items():
    print(f"d_12 = {d12:.2f} with probability {w:.4f}")

# Stars concentrate on distance 1: almost every pair is two leaves.
point_mass = SamplingMeasure(2, np.array([[1.0]]), np.array([1.0]))
for n in (4, 10, 50, 200):
    m = tree_core.tau_exact(families.gen_star(n), 2)
    print(f"K_1,{n - 1}: mean distance {mean_offdiag(m):.4f}, "
          f"energy distance to the point mass {energy_distance(m, point_mass):.4f}")

# Monte-Carlo estimates agree with exact enumeration to about 1/sqrt(N).
comb = families.gen_comb(6)
exact = tree_core.tau_exact(comb, 3)
for N in (10**3, 10**4, 10**5):
    est = tree_core.tau_sample(comb, 3, N, seed=1)
    print(f"N={N:>6}: energy distance to exact {energy_distance(est, exact):.5f}")
