"""Trees realizing distance matrices, sample trees of dendrons, and
measured-isometry checks between finite measured real trees.
"""
from __future__ import annotations

from itertools import combinations

import numpy as np

from .dendron import FiniteDendron, MarkedPoint, d_D
from .errors import NegativeGromovProduct, NotATreeMetric, NotSpanned, TooManyAtoms
from .real_tree import (
    SNAP,
    MeasuredRealTree,
    RealTreeSkeleton,
    TreePoint,
    minimal_spanning_subtree,
    refine,
)
from .sampling import validate_distance_matrix

TOL = 1e-9
MAX_ISOMETRY_ATOMS = 12


class _GrowingTree:
    """Mutable weighted tree used while inserting points one at a time."""

    def __init__(self):
        self.adj: list[dict[int, float]] = [{}]

    def add_vertex(self) -> int:
        self.adj.append({})
        return len(self.adj) - 1

    def link(self, a, b, length):
        self.adj[a][b] = length
        self.adj[b][a] = length

    def path(self, a, b) -> list[int]:
        parent = {a: None}
        stack = [a]
        while stack:
            x = stack.pop()
            if x == b:
                break
            for y in self.adj[x]:
                if y not in parent:
                    parent[y] = x
                    stack.append(y)
        out = [b]
        while out[-1] != a:
            out.append(parent[out[-1]])
        return out[::-1]

    def point_at(self, a, b, depth) -> int:
        """Vertex at distance ``depth`` from ``a`` on the path to ``b``, splitting an edge if needed."""
        path = self.path(a, b)
        walked = 0.0
        for x, y in zip(path, path[1:]):
            if depth <= walked + SNAP:
                return x
            length = self.adj[x][y]
            if depth < walked + length - SNAP:
                mid = self.add_vertex()
                del self.adj[x][y], self.adj[y][x]
                self.link(x, mid, depth - walked)
                self.link(mid, y, walked + length - depth)
                return mid
            walked += length
        return path[-1]

    def skeleton(self) -> RealTreeSkeleton:
        edges = [(a, b, w) for a, nbrs in enumerate(self.adj) for b, w in nbrs.items() if a < b]
        return RealTreeSkeleton(len(self.adj), tuple(edges))


def _atoms(points, n) -> tuple:
    masses: dict[int, float] = {}
    for v in points:
        masses[v] = masses.get(v, 0) + 1
    return tuple((v, c / n) for v, c in sorted(masses.items()))


def a_tree(A) -> tuple[MeasuredRealTree, list[int]]:
    """Like :func:`build_a_tree`, also returning the vertex of each ``q_i``."""
    A = validate_distance_matrix(A, atol=1e-12)
    n = A.shape[0]
    g = _GrowingTree()
    q = [0]
    for i in range(1, n):
        best, best_j = 0.0, 0
        for j in range(1, i):
            gp = (A[0, i] + A[0, j] - A[i, j]) / 2
            if gp < -TOL:
                raise NegativeGromovProduct(f"Gromov product of ({i + 1}, {j + 1}) at 1 is {gp:.3g} < 0")
            if gp > best:
                best, best_j = gp, j
        depth = min(best, A[0, best_j], A[0, i])
        attach = g.point_at(q[0], q[best_j], depth)
        pendant = A[0, i] - depth
        if pendant > SNAP:
            qi = g.add_vertex()
            g.link(attach, qi, pendant)
        else:
            qi = attach
        q.append(qi)

    tree = MeasuredRealTree(g.skeleton(), _atoms(q, n))
    D = tree.skeleton.vertex_distances[np.ix_(q, q)]
    residual = float(np.max(np.abs(D - A))) if n > 1 else 0.0
    if residual > TOL * max(1.0, float(A.max())):
        raise NotATreeMetric(f"no tree realizes the matrix (residual {residual:.3g})")
    return tree, q


def build_a_tree(A) -> MeasuredRealTree:
    """Measured real tree spanned by points whose distances are ``A``.

    Points are inserted in index order with the first as basepoint; point
    ``i`` branches off the arc towards the earlier point with the largest
    Gromov product ``(d_1i + d_1j - d_ij) / 2``, at that depth. Each point
    carries mass ``1/n``; coincident points merge. Raises
    :class:`NotATreeMetric` when the result does not reproduce ``A``.
    """
    return a_tree(A)[0]


def four_point_defect(A) -> float:
    """Largest violation of the four-point condition over all quadruples (slow).

    For each quadruple, the two largest of the three pair sums must agree;
    the defect is their gap. Tree metrics have defect 0.
    """
    A = np.asarray(A, dtype=float)
    worst = 0.0
    for i, j, k, l in combinations(range(A.shape[0]), 4):
        s = sorted((A[i, j] + A[k, l], A[i, k] + A[j, l], A[i, l] + A[j, k]))
        worst = max(worst, s[2] - s[1])
    return worst


def rho_of_sample(d: FiniteDendron, x) -> np.ndarray:
    """Kernel matrix of a sample, diagonal forced to zero."""
    n = len(x)
    out = np.zeros((n, n))
    for i, j in combinations(range(n), 2):
        out[i, j] = out[j, i] = d_D(d, x[i], x[j])
    return out


def sample_tree(d: FiniteDendron, x) -> tuple[MeasuredRealTree, list[int]]:
    """Like :func:`t_d_x`, also returning the vertex of each ``q_i``."""
    x = [m if isinstance(m, MarkedPoint) else MarkedPoint(*m) for m in x]
    n = len(x)
    ref = refine(d.skeleton, [m.base for m in x])
    bases = [ref.map_point(m.base).vertex for m in x]
    t0 = minimal_spanning_subtree(ref.skeleton, [TreePoint.at(v) for v in bases])
    skel0, vmap = t0.as_skeleton()
    edges = list(skel0.edges)
    nv = skel0.n
    q = []
    for m, b in zip(x, bases):
        if m.height > SNAP:
            edges.append((vmap[b], nv, m.height))
            q.append(nv)
            nv += 1
        else:
            q.append(vmap[b])
    tree = MeasuredRealTree(RealTreeSkeleton(nv, tuple(edges)), _atoms(q, n))
    return tree, q


def t_d_x(d: FiniteDendron, x) -> MeasuredRealTree:
    """The sample tree of an ``n``-sample ``x``.

    The minimal subtree spanning the bases ``p_i``, with a fresh arc of
    length ``a_i`` hung at each ``p_i`` ending in ``q_i``; each ``q_i``
    carries mass ``1/n``.
    """
    return sample_tree(d, x)[0]


def is_spanned(m: MeasuredRealTree) -> bool:
    """True iff no proper subtree contains every atom."""
    sub = minimal_spanning_subtree(m.skeleton, [TreePoint.at(v) for v in m.support])
    return sub.is_whole()


def measured_isometry_check(m1: MeasuredRealTree, m2: MeasuredRealTree, tol: float = TOL) -> bool:
    """Whether two atom-spanned trees are isometric by a mass-preserving map.

    For trees spanned by their atoms it suffices to match the atoms: a
    mass-preserving bijection that preserves all pairwise atom distances
    extends to an isometry of the trees.
    """
    for m in (m1, m2):
        if len(m.atoms) > MAX_ISOMETRY_ATOMS:
            raise TooManyAtoms(f"{len(m.atoms)} atoms exceeds the backtracking bound {MAX_ISOMETRY_ATOMS}")
        if not is_spanned(m):
            raise NotSpanned("tree is not the minimal subtree of its atoms")
    if len(m1.atoms) != len(m2.atoms):
        return False
    D1, D2 = m1.atom_distances(), m2.atom_distances()
    w1, w2 = m1.masses, m2.masses
    k = len(w1)
    used = [False] * k
    image = [0] * k

    def extend(i):
        if i == k:
            return True
        for c in range(k):
            if used[c] or abs(w1[i] - w2[c]) > tol:
                continue
            if all(abs(D1[i, a] - D2[c, image[a]]) <= tol for a in range(i)):
                used[c], image[i] = True, c
                if extend(i + 1):
                    return True
                used[c] = False
        return False

    return extend(0)
