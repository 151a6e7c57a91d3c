"""Random distance matrices of finite trees, real trees and dendrons.

Exact and Monte-Carlo sampling measures, the core of a measured real tree,
tree reconstruction from distance matrices, and discretization of real
trees into graph trees.
"""

__version__ = "0.1.0"

from .convergence import energy_distance, matrix_metric, mean_offdiag, obeys_check
from .dendron import (
    FiniteDendron,
    FixedHeight,
    MarkedPoint,
    MeasureComponent,
    PointBase,
    SegmentBase,
    UniformHeight,
    d_D,
    is_dendron,
    validate_dendron,
)
from .discretize import realize
from .real_tree import (
    MeasuredRealTree,
    RealTreeSkeleton,
    Subtree,
    TreePoint,
    associated_dendron,
    core,
    feathers,
    minimal_spanning_subtree,
    point_distance,
    retract,
)
from .reconstruct import build_a_tree, measured_isometry_check, rho_of_sample, t_d_x
from .sampling import SamplingMeasure
from .tree_core import FiniteTree, normalized_distance_matrix, validate_tree
