"""
Empirical frequencies of a dendron sample
=========================================

A long i.i.d. sample from a dendron visits each region about as often as the
region's mass predicts. We check that on rectangles of the comb limit, which
is uniform on an interval of length 1/3 times heights in [0, 1/3].
"""

import numpy as np

from dendrolim import families
from dendrolim.convergence import Rectangle, obeys_check
from dendrolim.dendron import sample_marked_points
from dendrolim.real_tree import minimal_spanning_subtree

d = families.limit_comb()
s = d.skeleton
points = sample_marked_points(d, 10**5, np.random.default_rng(3))

for a, b, lo, hi in [(0, 1 / 6, 0, 1 / 3), (0.05, 0.1, 0.1, 0.3), (0.1, 1 / 3, 0.25, 1 / 3)]:
    base = minimal_spanning_subtree(s, [s.point(0, a), s.point(0, b)])
    rep = obeys_check(points, d, Rectangle(base, lo, hi), tolerance=0.01)
    print(f"[{a:.3f}, {b:.3f}] x [{lo:.3f}, {hi:.3f}]: frequency {rep.frequency:.4f}, "
          f"mass {rep.measure:.4f}, within tolerance: {rep.passed}")
