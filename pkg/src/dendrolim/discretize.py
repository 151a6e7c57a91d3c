"""Graph trees whose sampling measures approach a given finite real tree."""
from __future__ import annotations

import math
from typing import NamedTuple

from .errors import DiameterTooLarge, ValidationError
from .real_tree import MeasuredRealTree
from .tree_core import FiniteTree

# products like 0.3 * 10 land just above an integer; treat them as that integer
_CEIL_SLACK = 1e-9


def _ceil(x: float) -> int:
    nearest = round(x)
    if abs(x - nearest) <= _CEIL_SLACK:
        return int(nearest)
    return math.ceil(x)


class Realization(NamedTuple):
    tree: FiniteTree
    leaf_classes: dict  # atom vertex -> list of its leaf ids
    scaffold_diameter: int  # diameter before the extension path
    extension: int  # length of the path added to reach diameter n

    def report(self) -> dict:
        return {
            "leaf_classes": {str(v): ids for v, ids in self.leaf_classes.items()},
            "scaffold_diameter": self.scaffold_diameter,
            "extension": self.extension,
        }


def realize(m: MeasuredRealTree, n: int) -> Realization:
    """Graph tree at scale ``n`` for a finite real tree of diameter at most 1.

    Each edge of length ``a`` becomes a path of ``ceil(a n)`` unit edges,
    each atom ``v`` of mass ``w`` gets ``ceil(w n^2)`` new pendant leaves, and
    if the diameter is still below ``n`` a path is hung at one end of a
    longest path so the diameter becomes exactly ``n``.
    """
    if n < 2:
        raise ValidationError("scale n must be >= 2")
    diam = m.diameter()
    if diam > 1 + 1e-12:
        raise DiameterTooLarge(f"tree diameter {diam:.6g} exceeds 1")
    s = m.skeleton
    nv = s.n
    edges = []
    for u, v, length in s.edges:
        k = max(1, _ceil(length * n))
        chain = [u] + list(range(nv, nv + k - 1)) + [v]
        nv += k - 1
        edges.extend(zip(chain, chain[1:]))
    leaf_classes = {}
    for v, w in m.atoms:
        k = max(1, _ceil(w * n * n))
        leaf_classes[v] = list(range(nv, nv + k))
        edges.extend((v, x) for x in leaf_classes[v])
        nv += k

    scaffold = FiniteTree(nv, tuple(edges))
    scaffold_diam = scaffold.diameter if nv > 1 else 0
    extension = max(0, n - scaffold_diam)
    if extension == 0:
        return Realization(scaffold, leaf_classes, scaffold_diam, 0)
    end = scaffold.diameter_path_ends[1] if nv > 1 else 0
    chain = [end] + list(range(nv, nv + extension))
    edges.extend(zip(chain, chain[1:]))
    tree = FiniteTree(nv + extension, tuple(edges))
    return Realization(tree, leaf_classes, scaffold_diam, extension)
