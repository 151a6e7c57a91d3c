"""Example tree families and their limit dendrons.

Paths converge to the unit interval, stars and complete binary trees to a
single point mass at height 1/2, combs to the uniform measure on a
rectangle, and two infinite limits (stretched binary trees, the depth-two
trees ``D_n``) are represented by finite truncations whose unresolved mass
is recorded in ``FiniteDendron.truncation_mass``.
"""
from __future__ import annotations

import math

from .dendron import FiniteDendron, MeasureComponent, SegmentBase, FixedHeight, UniformHeight
from .errors import ValidationError
from .real_tree import RealTreeSkeleton, TreePoint
from .tree_core import FiniteTree

# edge lengths C/k^2 put the boundary of the infinite tree at distance 1/2
# from the root: C * sum(1/k^2) = 1/2
STRETCH_C = 3.0 / math.pi**2


def _need(cond, msg):
    if not cond:
        raise ValidationError(msg)


def gen_path(n: int) -> FiniteTree:
    _need(n >= 2, "path needs n >= 2")
    return FiniteTree(n, tuple((i, i + 1) for i in range(n - 1)))


def limit_path() -> FiniteDendron:
    s = RealTreeSkeleton(2, ((0, 1, 1.0),))
    comp = MeasureComponent(1.0, SegmentBase(TreePoint.at(0), TreePoint.at(1)), FixedHeight(0.0))
    return FiniteDendron(s, (comp,))


def gen_star(n: int) -> FiniteTree:
    """``K_{1,n-1}`` with center 0."""
    _need(n >= 3, "star needs n >= 3")
    return FiniteTree(n, tuple((0, i) for i in range(1, n)))


def limit_star() -> FiniteDendron:
    return FiniteDendron(RealTreeSkeleton(1, ()), (MeasureComponent.atom(TreePoint.at(0), 0.5, 1.0),))


def gen_binary(h: int) -> FiniteTree:
    """Complete binary tree with ``2**h - 1`` vertices (heap numbering)."""
    _need(h >= 2, "binary tree needs h >= 2")
    n = 2**h - 1
    return FiniteTree(n, tuple(((i - 1) // 2, i) for i in range(1, n)))


def gen_stretched_binary(n: int) -> FiniteTree:
    """``B_n`` with each edge from depth ``k-1`` to ``k`` replaced by a path of
    ``floor(n^2 / k^2)`` edges."""
    _need(n >= 2, "stretched binary tree needs n >= 2")
    edges = []
    nv = 1
    frontier = [0]
    for k in range(1, n):
        length = (n * n) // (k * k)
        nxt = []
        for parent in frontier:
            for _ in range(2):
                chain = [parent] + list(range(nv, nv + length))
                nv += length
                edges.extend(zip(chain, chain[1:]))
                nxt.append(chain[-1])
        frontier = nxt
    return FiniteTree(nv, tuple(edges))


def limit_stretched_binary(depth_k: int) -> FiniteDendron:
    """Depth-``k`` truncation of the stretched binary limit.

    The skeleton is the binary tree of depth ``k`` with level-``i`` edges of
    length ``C/i^2``. The uniform measure on the boundary at distance 1/2 is
    replaced by ``2^k`` atoms of weight ``2^-k``, one per depth-``k`` tip,
    at height equal to the remaining distance ``1/2 - C sum_{i<=k} 1/i^2``.
    Kernel values between different tips are then exact; only pairs inside
    one tip subtree (mass ``2^-k``) are coarsened.
    """
    _need(depth_k >= 1, "depth_k must be >= 1")
    edges, nv, frontier = [], 1, [0]
    for i in range(1, depth_k + 1):
        nxt = []
        for parent in frontier:
            for _ in range(2):
                edges.append((parent, nv, STRETCH_C / i**2))
                nxt.append(nv)
                nv += 1
        frontier = nxt
    height = 0.5 - STRETCH_C * sum(1.0 / i**2 for i in range(1, depth_k + 1))
    w = 2.0**-depth_k
    comps = tuple(MeasureComponent.atom(TreePoint.at(v), height, w) for v in frontier)
    return FiniteDendron(RealTreeSkeleton(nv, tuple(edges)), comps, truncation_mass=w)


def gen_comb(n: int) -> FiniteTree:
    """Spine ``P_n`` with an ``n``-vertex path (sharing its first vertex) at each
    spine vertex: ``n^2`` vertices."""
    _need(n >= 2, "comb needs n >= 2")
    edges = [(i, i + 1) for i in range(n - 1)]
    nv = n
    for i in range(n):
        chain = [i] + list(range(nv, nv + n - 1))
        nv += n - 1
        edges.extend(zip(chain, chain[1:]))
    return FiniteTree(nv, tuple(edges))


def limit_comb() -> FiniteDendron:
    third = 1.0 / 3.0
    s = RealTreeSkeleton(2, ((0, 1, third),))
    comp = MeasureComponent(1.0, SegmentBase(TreePoint.at(0), TreePoint.at(1)), UniformHeight(0.0, third))
    return FiniteDendron(s, (comp,))


def gen_deep2(n: int) -> FiniteTree:
    """Root 0 with children ``1..n``; child ``i`` has ``2^i`` leaf children."""
    _need(n >= 2, "deep2 needs n >= 2")
    edges = [(0, i) for i in range(1, n + 1)]
    nv = n + 1
    for i in range(1, n + 1):
        edges.extend((i, x) for x in range(nv, nv + 2**i))
        nv += 2**i
    return FiniteTree(nv, tuple(edges))


def limit_deep2(arm_k: int) -> FiniteDendron:
    """Star of ``arm_k`` arms of length 1/4 with atoms ``(p_i, 1/4)`` of weight
    proportional to ``2^-i``; the dropped tail ``2^-arm_k`` is recorded."""
    _need(arm_k >= 1, "arm_k must be >= 1")
    raw = [2.0**-i for i in range(1, arm_k + 1)]
    total = sum(raw)
    if arm_k == 1:
        # a single arm has no branch at the center; the arm collapses to its tip
        s = RealTreeSkeleton(1, ())
        comps = (MeasureComponent.atom(TreePoint.at(0), 0.25, 1.0),)
        return FiniteDendron(s, comps, truncation_mass=0.5)
    s = RealTreeSkeleton(arm_k + 1, tuple((0, i, 0.25) for i in range(1, arm_k + 1)))
    comps = tuple(MeasureComponent.atom(TreePoint.at(i), 0.25, w / total) for i, w in enumerate(raw, 1))
    return FiniteDendron(s, comps, truncation_mass=2.0**-arm_k)


GENERATORS = {
    "path": gen_path,
    "star": gen_star,
    "binary": gen_binary,
    "stretched-binary": gen_stretched_binary,
    "comb": gen_comb,
    "deep2": gen_deep2,
}


def limit_of(name: str, depth: int = 4) -> FiniteDendron:
    """Limit dendron of a family; ``depth`` sets the truncation where needed."""
    if name == "path":
        return limit_path()
    if name in ("star", "binary"):
        return limit_star()
    if name == "stretched-binary":
        return limit_stretched_binary(depth)
    if name == "comb":
        return limit_comb()
    if name == "deep2":
        return limit_deep2(depth)
    raise ValidationError(f"unknown family {name!r}")
