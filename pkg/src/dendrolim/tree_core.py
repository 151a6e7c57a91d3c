"""Finite graph-theoretic trees, their normalized metric and sampling measures."""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import breadth_first_order, shortest_path

from .errors import BadEdgeIndex, EnumerationTooLarge, HasCycle, NotConnected, TrivialTree, ValidationError
from .sampling import (
    DEFAULT_CAP,
    SamplingMeasure,
    empirical,
    enumerate_kernel,
    pair_index,
    run_sharded,
)

# above this many vertices, sampled distances go through an LCA table
# instead of the all-pairs matrix
_ALL_PAIRS_LIMIT = 2048


def validate_tree(n: int, edges) -> list[ValidationError]:
    """Check that ``edges`` form a tree on vertices ``0..n-1``.

    Returns an empty list for a valid tree, otherwise a one-element list
    naming the first violated invariant (index range, acyclicity,
    connectivity, in that order).
    """
    if n < 1:
        return [BadEdgeIndex(f"vertex count must be positive, got {n}")]
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e in edges:
        u, v = e
        if not (0 <= u < n and 0 <= v < n):
            return [BadEdgeIndex(f"edge {tuple(e)} has an endpoint outside [0, {n})")]
    components = n
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return [HasCycle(f"edge ({u}, {v}) closes a cycle")]
        parent[ru] = rv
        components -= 1
    if components != 1:
        return [NotConnected(f"graph has {components} components")]
    return []


@dataclass(frozen=True)
class FiniteTree:
    """A tree on vertices ``0..n-1`` with unit-length edges and uniform measure."""

    n: int
    edges: tuple

    def __post_init__(self):
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        errors = validate_tree(self.n, edges)
        if errors:
            raise errors[0]

    @cached_property
    def adjacency(self):
        if self.n == 1:
            return coo_matrix((1, 1)).tocsr()
        u, v = np.array(self.edges).T
        data = np.ones(2 * len(u))
        return coo_matrix((data, (np.r_[u, v], np.r_[v, u])), shape=(self.n, self.n)).tocsr()

    def degrees(self) -> np.ndarray:
        return np.diff(self.adjacency.indptr)

    def bfs_hops(self, source: int) -> np.ndarray:
        d = shortest_path(self.adjacency, unweighted=True, indices=source)
        return d.astype(np.int64)

    @cached_property
    def hops(self) -> np.ndarray:
        """All-pairs hop distances (one BFS per vertex)."""
        return shortest_path(self.adjacency, unweighted=True).astype(np.int64)

    @cached_property
    def diameter_path_ends(self) -> tuple[int, int]:
        a = int(np.argmax(self.bfs_hops(0)))
        db = self.bfs_hops(a)
        return a, int(np.argmax(db))

    @cached_property
    def diameter(self) -> int:
        a, b = self.diameter_path_ends
        return int(self.bfs_hops(a)[b])

    @cached_property
    def _lca_table(self):
        order, pred = breadth_first_order(self.adjacency, 0, directed=False)
        parent = np.where(pred < 0, 0, pred).astype(np.int64)
        parent[0] = 0
        depth = np.zeros(self.n, dtype=np.int64)
        for v in order[1:]:
            depth[v] = depth[parent[v]] + 1
        levels = max(1, int(depth.max()).bit_length())
        up = [parent]
        for _ in range(1, levels):
            up.append(up[-1][up[-1]])
        return np.array(up), depth

    def hop_distance(self, u, v) -> np.ndarray:
        """Vectorized hop distance between vertex arrays ``u`` and ``v``."""
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        if self.n <= _ALL_PAIRS_LIMIT:
            return self.hops[u, v]
        up, depth = self._lca_table
        a, b = u.ravel().copy(), v.ravel().copy()
        swap = depth[a] < depth[b]
        a[swap], b[swap] = b[swap], a[swap]
        diff = depth[a] - depth[b]
        for k in range(up.shape[0]):
            m = ((diff >> k) & 1).astype(bool)
            a[m] = up[k][a[m]]
        for k in range(up.shape[0] - 1, -1, -1):
            m = up[k][a] != up[k][b]
            a[m] = up[k][a[m]]
            b[m] = up[k][b[m]]
        lca = np.where(a == b, a, up[0][a])
        out = depth[u.ravel()] + depth[v.ravel()] - 2 * depth[lca]
        return out.reshape(u.shape)

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, obj: dict) -> "FiniteTree":
        return cls(int(obj["n"]), tuple(tuple(e) for e in obj["edges"]))


def normalized_distance_matrix(t: FiniteTree) -> np.ndarray:
    """Hop distances divided by the diameter; the largest entry is exactly 1."""
    if t.n < 2:
        raise TrivialTree("the normalized metric needs at least two vertices")
    return t.hops / t.diameter


def tau_exact(t: FiniteTree, r: int, cap: int = DEFAULT_CAP) -> SamplingMeasure:
    """Exact sampling measure by enumerating all ``n**r`` vertex tuples."""
    if t.n < 2:
        raise TrivialTree("sampling measures need a nontrivial tree")
    if r < 1:
        raise ValidationError("r must be >= 1")
    if t.n**r > cap:
        raise EnumerationTooLarge(f"{t.n}^{r} = {t.n**r} tuples exceeds cap {cap}")
    if r == 1:
        return enumerate_kernel(np.zeros((1, 1)), 1)
    return enumerate_kernel(normalized_distance_matrix(t), r, cap=cap)


def tau_sample(t: FiniteTree, r: int, num_samples: int, seed: int,
               shards: int = 1, threads: int = 1) -> SamplingMeasure:
    """Monte-Carlo sampling measure from ``num_samples`` i.i.d. uniform tuples."""
    if t.n < 2:
        raise TrivialTree("sampling measures need a nontrivial tree")
    if r < 1:
        raise ValidationError("r must be >= 1")
    pi, pj = pair_index(r)
    diam = t.diameter

    def draw(rng, count):
        idx = rng.integers(0, t.n, size=(count, r))
        return t.hop_distance(idx[:, pi], idx[:, pj]) / diam

    return empirical(run_sharded(draw, num_samples, seed, shards, threads), r)
