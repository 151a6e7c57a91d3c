"""
From a real tree back to graph trees
====================================

Stretch each edge of a real tree into a path of about ``a * n`` vertices and
hang about ``mu(v) * n^2`` leaves at each atom. As ``n`` grows, the graph
tree's sampling measure approaches the real tree's.
"""

from dendrolim import real_tree, tree_core
from dendrolim.convergence import energy_distance
from dendrolim.discretize import realize
from dendrolim.real_tree import MeasuredRealTree, RealTreeSkeleton

skeleton = RealTreeSkeleton(4, ((0, 1, 0.4), (1, 2, 0.3), (1, 3, 0.5)))
tree = MeasuredRealTree(skeleton, ((0, 0.5), (2, 0.2), (3, 0.3)))
target = real_tree.tau_exact(tree, 2)

print(" n   vertices  diameter  energy")
for n in (10, 20, 40, 80, 160):
    graph = realize(tree, n).tree
    est = tree_core.tau_sample(graph, 2, 10**5, seed=n)
    print(f"{n:>3} {graph.n:>9} {graph.diameter:>9} {energy_distance(est, target):>8.4f}")
