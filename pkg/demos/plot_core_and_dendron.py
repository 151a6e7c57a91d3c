"""
Core, feathers and the associated dendron
=========================================

A measured real tree carries mass on a few vertices. Branches without mass
("feathers") hang off the core, the smallest subtree holding every atom.
The associated dendron keeps only the core and moves each atom to its
closest core point, recording the distance as a height. Atoms always lie in
their own core, so here every height is 0 and the feathers simply vanish;
positive heights appear in limits of graph trees. Sampling distances do not
notice the difference.
"""

from dendrolim.convergence import measures_close
from dendrolim.dendron import tau_exact_atomic
from dendrolim.real_tree import (
    MeasuredRealTree,
    RealTreeSkeleton,
    TreePoint,
    associated_dendron,
    core,
    feathers,
    is_inner,
    tau_exact,
)

# A spine 0-1-2 with two side branches. Atoms sit at 0, 2 and at the tip of
# the branch through 3, so the branch through 5 carries no mass at all.
skeleton = RealTreeSkeleton(6, ((0, 1, 0.3), (1, 2, 0.3), (1, 3, 0.1), (3, 4, 0.15), (2, 5, 0.2)))
tree = MeasuredRealTree(skeleton, ((0, 0.4), (2, 0.35), (4, 0.25)))

print("inner vertices:", [v for v in range(skeleton.n) if is_inner(tree, TreePoint.at(v))])
print("core:", core(tree))
for f in feathers(tree):
    print("feather at", f.attachment, "edges", f.edges)

assoc = associated_dendron(tree)
for p in assoc.projection:
    print(f"atom at vertex {p.vertex} -> core vertex {p.core_vertex}, height {p.height:.2f}, mass {p.mass}")

# The tree and its dendron have the same sampling measures.
for r in (2, 3):
    same = measures_close(tau_exact(tree, r), tau_exact_atomic(assoc.dendron, r))
    print(f"r={r}: identical sampling measures: {same}")
