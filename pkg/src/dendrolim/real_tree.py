"""Finite real trees: skeletons with edge lengths, points on them, subtrees,
retractions, branches, and the core/feather decomposition of an atomic
measure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import breadth_first_order, shortest_path

from .errors import BadEdgeLength, InvalidPoint, ValidationError, WeightsNotNormalized
from .sampling import DEFAULT_CAP, SamplingMeasure, empirical, enumerate_kernel, pair_index, run_sharded
from .tree_core import validate_tree

# offsets closer than this to an edge end are snapped to the vertex
SNAP = 1e-12
# comparison tolerance for derived distances
ATOL = 1e-9


@dataclass(frozen=True)
class TreePoint:
    """A point of a skeleton: a vertex, or an interior point of an edge.

    ``offset`` is measured from the first endpoint of ``edge``. Build points
    through :meth:`RealTreeSkeleton.point` to get boundary offsets
    canonicalized to vertices.
    """

    vertex: int | None = None
    edge: int | None = None
    offset: float = 0.0

    @classmethod
    def at(cls, v: int) -> "TreePoint":
        return cls(vertex=int(v))

    @property
    def is_vertex(self) -> bool:
        return self.vertex is not None

    def to_json(self) -> dict:
        if self.is_vertex:
            return {"vertex": self.vertex}
        return {"edge": [self.edge, self.offset]}

    def __repr__(self):
        if self.is_vertex:
            return f"V({self.vertex})"
        return f"E({self.edge}, {self.offset:g})"


class PointArray(NamedTuple):
    """Vectorized points: ``edge == -1`` marks a vertex point."""

    edge: np.ndarray
    vertex: np.ndarray
    offset: np.ndarray

    def __len__(self):
        return len(self.edge)

    def __getitem__(self, i):
        if isinstance(i, (int, np.integer)):
            if self.edge[i] < 0:
                return TreePoint.at(int(self.vertex[i]))
            return TreePoint(edge=int(self.edge[i]), offset=float(self.offset[i]))
        return PointArray(self.edge[i], self.vertex[i], self.offset[i])

    @classmethod
    def from_points(cls, points) -> "PointArray":
        points = list(points)
        edge = np.array([-1 if p.is_vertex else p.edge for p in points], dtype=np.int64)
        vertex = np.array([p.vertex if p.is_vertex else -1 for p in points], dtype=np.int64)
        offset = np.array([0.0 if p.is_vertex else p.offset for p in points], dtype=float)
        return cls(edge, vertex, offset)


@dataclass(frozen=True)
class RealTreeSkeleton:
    """A finite tree whose edges ``(u, v, length)`` are real intervals."""

    n: int
    edges: tuple

    def __post_init__(self):
        edges = tuple((int(u), int(v), float(length)) for u, v, length in self.edges)
        object.__setattr__(self, "edges", edges)
        errors = validate_tree(self.n, [(u, v) for u, v, _ in edges])
        if errors:
            raise errors[0]
        for i, (_, _, length) in enumerate(edges):
            if not (length > 0 and math.isfinite(length)):
                raise BadEdgeLength(f"edge {i} has non-positive or non-finite length {length}")

    @cached_property
    def incident(self) -> list[list[tuple[int, int]]]:
        """``incident[v]`` lists ``(edge index, neighbor)`` pairs."""
        out = [[] for _ in range(self.n)]
        for e, (u, v, _) in enumerate(self.edges):
            out[u].append((e, v))
            out[v].append((e, u))
        return out

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        out = {}
        for e, (u, v, _) in enumerate(self.edges):
            out[(u, v)] = e
            out[(v, u)] = e
        return out

    @cached_property
    def _csr(self):
        if not self.edges:
            return coo_matrix((self.n, self.n)).tocsr()
        u, v, w = (np.array(c) for c in zip(*self.edges))
        return coo_matrix((np.r_[w, w], (np.r_[u, v], np.r_[v, u])), shape=(self.n, self.n)).tocsr()

    @cached_property
    def _all_pairs(self):
        return shortest_path(self._csr, directed=False, return_predecessors=True)

    @property
    def vertex_distances(self) -> np.ndarray:
        return self._all_pairs[0]

    @cached_property
    def diameter(self) -> float:
        return float(self.vertex_distances.max())

    @cached_property
    def lengths(self) -> np.ndarray:
        return np.array([length for _, _, length in self.edges], dtype=float)

    @cached_property
    def _edge_ends(self):
        if not self.edges:
            return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        u, v, _ = zip(*self.edges)
        return np.array(u, dtype=np.int64), np.array(v, dtype=np.int64)

    def total_length(self) -> float:
        return float(self.lengths.sum())

    def degree(self, v: int) -> int:
        return len(self.incident[v])

    def point(self, edge: int, offset: float) -> TreePoint:
        """Canonical point at ``offset`` along ``edge`` (ends become vertices)."""
        if not 0 <= edge < len(self.edges):
            raise InvalidPoint(f"no edge {edge}")
        u, v, length = self.edges[edge]
        if offset < -SNAP or offset > length + SNAP:
            raise InvalidPoint(f"offset {offset} outside edge {edge} of length {length}")
        if offset <= SNAP:
            return TreePoint.at(u)
        if offset >= length - SNAP:
            return TreePoint.at(v)
        return TreePoint(edge=int(edge), offset=float(offset))

    def check_point(self, p: TreePoint) -> TreePoint:
        if p.is_vertex:
            if not 0 <= p.vertex < self.n:
                raise InvalidPoint(f"no vertex {p.vertex}")
            return p
        if p.edge is None or not 0 <= p.edge < len(self.edges):
            raise InvalidPoint(f"no edge {p.edge}")
        if not 0 < p.offset < self.edges[p.edge][2]:
            raise InvalidPoint(f"offset {p.offset} is not strictly inside edge {p.edge}")
        return p

    def point_from_json(self, obj) -> TreePoint:
        if "vertex" in obj:
            return self.check_point(TreePoint.at(int(obj["vertex"])))
        e, t = obj["edge"]
        return self.point(int(e), float(t))

    def _ends(self, p: TreePoint):
        if p.is_vertex:
            return ((p.vertex, 0.0),)
        u, v, length = self.edges[p.edge]
        return ((u, p.offset), (v, length - p.offset))

    def distance(self, p: TreePoint, q: TreePoint) -> float:
        self.check_point(p)
        self.check_point(q)
        if not p.is_vertex and p.edge == q.edge:
            return float(abs(p.offset - q.offset))
        D = self.vertex_distances
        return float(min(ta + D[a, b] + tb for a, ta in self._ends(p) for b, tb in self._ends(q)))

    def _end_arrays(self, pts: PointArray):
        edge = pts.edge
        is_v = edge < 0
        eu, ev = self._edge_ends
        safe = np.where(is_v, 0, edge)
        a = np.where(is_v, pts.vertex, eu[safe] if eu.size else 0)
        b = np.where(is_v, pts.vertex, ev[safe] if ev.size else 0)
        lengths = self.lengths[safe] if self.lengths.size else np.zeros_like(pts.offset)
        ta = np.where(is_v, 0.0, pts.offset)
        tb = np.where(is_v, 0.0, lengths - pts.offset)
        return a, ta, b, tb

    def distance_arrays(self, p: PointArray, q: PointArray) -> np.ndarray:
        """Elementwise distances between two equally long point arrays."""
        D = self.vertex_distances
        pa, pta, pb, ptb = self._end_arrays(p)
        qa, qta, qb, qtb = self._end_arrays(q)
        best = np.minimum.reduce([
            pta + D[pa, qa] + qta,
            pta + D[pa, qb] + qtb,
            ptb + D[pb, qa] + qta,
            ptb + D[pb, qb] + qtb,
        ])
        same = (p.edge >= 0) & (p.edge == q.edge)
        return np.where(same, np.abs(p.offset - q.offset), best)

    def vertex_path(self, a: int, b: int) -> list[int]:
        pred = self._all_pairs[1]
        path = [b]
        while path[-1] != a:
            path.append(int(pred[a, path[-1]]))
        return path[::-1]

    def path_pieces(self, p: TreePoint, q: TreePoint) -> list[tuple[int, float, float]]:
        """The arc from ``p`` to ``q`` as ordered ``(edge, t_from, t_to)`` pieces.

        Offsets are in each edge's own coordinate; zero-length pieces are
        omitted.
        """
        self.check_point(p)
        self.check_point(q)
        if not p.is_vertex and p.edge == q.edge:
            return [] if p.offset == q.offset else [(p.edge, p.offset, q.offset)]
        D = self.vertex_distances
        _, (a, ta), (b, tb) = min(
            (ta + D[a, b] + tb, (a, ta), (b, tb)) for a, ta in self._ends(p) for b, tb in self._ends(q)
        )
        pieces = []
        if not p.is_vertex:
            u, _, length = self.edges[p.edge]
            pieces.append((p.edge, p.offset, 0.0 if a == u else length))
        path = self.vertex_path(a, b)
        for x, y in zip(path, path[1:]):
            e = self.edge_index[(x, y)]
            u, _, length = self.edges[e]
            pieces.append((e, 0.0, length) if x == u else (e, length, 0.0))
        if not q.is_vertex:
            u, _, length = self.edges[q.edge]
            pieces.append((q.edge, 0.0 if b == u else length, q.offset))
        return pieces

    def point_on_arc(self, p: TreePoint, q: TreePoint, s: float) -> TreePoint:
        """The point at distance ``s`` from ``p`` along ``[p, q]``."""
        for e, t0, t1 in self.path_pieces(p, q):
            seg = abs(t1 - t0)
            if s <= seg:
                return self.point(e, t0 + math.copysign(s, t1 - t0))
            s -= seg
        return q

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [[u, v, length] for u, v, length in self.edges]}

    @classmethod
    def from_json(cls, obj) -> "RealTreeSkeleton":
        return cls(int(obj["n"]), tuple(tuple(e) for e in obj["edges"]))


def point_distance(s: RealTreeSkeleton, p: TreePoint, q: TreePoint) -> float:
    """Length of the arc between ``p`` and ``q``."""
    return s.distance(p, q)


@dataclass(frozen=True, eq=False)
class Subtree:
    """A closed connected part of a skeleton.

    ``spans[e] = (lo, hi)`` is the covered interval of edge ``e`` (edge
    coordinates); ``vertices`` are the skeleton vertices it contains.
    """

    skeleton: RealTreeSkeleton
    vertices: frozenset
    spans: dict

    @classmethod
    def from_segments(cls, s: RealTreeSkeleton, segments) -> "Subtree":
        vertices: set[int] = set()
        spans: dict[int, tuple[float, float]] = {}
        for p, q in segments:
            for x in (p, q):
                if x.is_vertex:
                    vertices.add(x.vertex)
                else:
                    lo, hi = spans.get(x.edge, (x.offset, x.offset))
                    spans[x.edge] = (min(lo, x.offset), max(hi, x.offset))
            for e, t0, t1 in s.path_pieces(p, q):
                lo, hi = min(t0, t1), max(t0, t1)
                if e in spans:
                    lo, hi = min(lo, spans[e][0]), max(hi, spans[e][1])
                spans[e] = (lo, hi)
        for e, (lo, hi) in spans.items():
            u, v, length = s.edges[e]
            if lo <= SNAP:
                vertices.add(u)
            if hi >= length - SNAP:
                vertices.add(v)
        return cls(s, frozenset(vertices), spans)

    @classmethod
    def whole(cls, s: RealTreeSkeleton) -> "Subtree":
        return cls(s, frozenset(range(s.n)), {e: (0.0, length) for e, (_, _, length) in enumerate(s.edges)})

    def contains(self, p: TreePoint, tol: float = SNAP) -> bool:
        self.skeleton.check_point(p)
        if p.is_vertex:
            return p.vertex in self.vertices
        span = self.spans.get(p.edge)
        return span is not None and span[0] - tol <= p.offset <= span[1] + tol

    def contains_segment(self, p: TreePoint, q: TreePoint, tol: float = SNAP) -> bool:
        if not (self.contains(p, tol) and self.contains(q, tol)):
            return False
        for e, t0, t1 in self.skeleton.path_pieces(p, q):
            span = self.spans.get(e)
            if span is None or min(t0, t1) < span[0] - tol or max(t0, t1) > span[1] + tol:
                return False
        return True

    def full_edges(self) -> list[int]:
        return [e for e, (lo, hi) in self.spans.items()
                if lo <= SNAP and hi >= self.skeleton.edges[e][2] - SNAP]

    def is_vertex_aligned(self) -> bool:
        return len(self.full_edges()) == len(self.spans) and bool(self.vertices)

    def is_whole(self) -> bool:
        return len(self.vertices) == self.skeleton.n and len(self.full_edges()) == len(self.skeleton.edges)

    def length(self) -> float:
        return float(sum(hi - lo for lo, hi in self.spans.values()))

    def points(self) -> list[TreePoint]:
        """Vertices of the subtree plus the ends of partially covered edges."""
        out = [TreePoint.at(v) for v in sorted(self.vertices)]
        for e, (lo, hi) in sorted(self.spans.items()):
            for t in (lo, hi):
                p = self.skeleton.point(e, t)
                if not p.is_vertex and p not in out:
                    out.append(p)
        return out

    def boundary(self) -> list[TreePoint]:
        """Points of the subtree through which the skeleton leaves it."""
        s = self.skeleton
        out = []
        for v in sorted(self.vertices):
            if any(e not in self.spans or not self._touches(e, v) for e, _ in s.incident[v]):
                out.append(TreePoint.at(v))
        for e, (lo, hi) in sorted(self.spans.items()):
            length = s.edges[e][2]
            for t, inner in ((lo, lo > SNAP), (hi, hi < length - SNAP)):
                if inner:
                    p = s.point(e, t)
                    if p not in out:
                        out.append(p)
        return out

    def _touches(self, e: int, v: int) -> bool:
        u, w, length = self.skeleton.edges[e]
        lo, hi = self.spans[e]
        return lo <= SNAP if v == u else hi >= length - SNAP

    def as_skeleton(self):
        """The subtree as a skeleton of its own (vertex-aligned subtrees only).

        Returns ``(skeleton, vertex_map)`` with ``vertex_map[old] = new``.
        """
        if not self.is_vertex_aligned():
            raise ValidationError("subtree ends inside an edge; refine the skeleton first")
        vmap = {v: i for i, v in enumerate(sorted(self.vertices))}
        edges = [(vmap[u], vmap[v], length) for e, (u, v, length) in enumerate(self.skeleton.edges)
                 if e in self.spans]
        return RealTreeSkeleton(len(vmap), tuple(edges)), vmap

    def __eq__(self, other):
        if not isinstance(other, Subtree) or other.skeleton != self.skeleton:
            return NotImplemented
        if self.vertices != other.vertices or set(self.spans) != set(other.spans):
            return False
        return all(abs(a - b) <= ATOL for e in self.spans for a, b in zip(self.spans[e], other.spans[e]))

    __hash__ = None

    def __repr__(self):
        return f"Subtree(vertices={sorted(self.vertices)}, spans={dict(sorted(self.spans.items()))})"


def minimal_spanning_subtree(s: RealTreeSkeleton, pts) -> Subtree:
    """Smallest subtree containing ``pts``: the union of arcs from the first point."""
    pts = [s.check_point(p) for p in pts]
    if not pts:
        raise InvalidPoint("need at least one point")
    return Subtree.from_segments(s, [(pts[0], p) for p in pts])


def retract(s: RealTreeSkeleton, y: Subtree, p: TreePoint) -> TreePoint:
    """Closest point of ``y`` to ``p``."""
    if y.contains(p):
        return p
    # distance to p is piecewise linear along each covered interval, so the
    # minimum sits at a vertex of y or at an end of a partial span
    return min(y.points(), key=lambda c: s.distance(p, c))


class Refinement(NamedTuple):
    """A skeleton with extra vertices inserted at interior points."""

    skeleton: RealTreeSkeleton
    original: RealTreeSkeleton
    cuts: dict  # original edge -> sorted list of (offset, new vertex)
    edge_map: list  # refined edge -> (original edge, lo, hi)

    def map_point(self, p: TreePoint) -> TreePoint:
        """Express a point of the original skeleton on the refined one."""
        self.original.check_point(p)
        if p.is_vertex:
            return p
        u, v, length = self.original.edges[p.edge]
        stops = [(0.0, u)] + self.cuts.get(p.edge, []) + [(length, v)]
        for (t0, a), (t1, b) in zip(stops, stops[1:]):
            if abs(p.offset - t0) <= SNAP:
                return TreePoint.at(a)
            if abs(p.offset - t1) <= SNAP:
                return TreePoint.at(b)
            if t0 < p.offset < t1:
                e = self.skeleton.edge_index[(a, b)]
                eu = self.skeleton.edges[e][0]
                return self.skeleton.point(e, p.offset - t0 if eu == a else t1 - p.offset)
        raise InvalidPoint(f"{p} not found on refined skeleton")


def refine(s: RealTreeSkeleton, points) -> Refinement:
    """Insert a vertex at every interior point in ``points``."""
    cuts: dict[int, list[float]] = {}
    for p in points:
        s.check_point(p)
        if not p.is_vertex:
            cuts.setdefault(p.edge, []).append(p.offset)
    n = s.n
    edges, edge_map, cut_vertices = [], [], {}
    for e, (u, v, length) in enumerate(s.edges):
        offs = []
        for t in sorted(cuts.get(e, [])):
            if t > SNAP and t < length - SNAP and (not offs or t - offs[-1] > SNAP):
                offs.append(t)
        chain = [(0.0, u)]
        for t in offs:
            chain.append((t, n))
            n += 1
        chain.append((length, v))
        cut_vertices[e] = chain[1:-1]
        for (t0, a), (t1, b) in zip(chain, chain[1:]):
            edges.append((a, b, t1 - t0))
            edge_map.append((e, t0, t1))
    return Refinement(RealTreeSkeleton(n, tuple(edges)), s, cut_vertices, edge_map)


@dataclass(frozen=True)
class MeasuredRealTree:
    """A finite real tree with an atomic probability measure on its vertices."""

    skeleton: RealTreeSkeleton
    atoms: tuple  # ((vertex, mass), ...)

    def __post_init__(self):
        atoms = tuple((int(v), float(w)) for v, w in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        seen = set()
        for v, w in atoms:
            if not 0 <= v < self.skeleton.n:
                raise InvalidPoint(f"atom at missing vertex {v}")
            if v in seen:
                raise ValidationError(f"two atoms at vertex {v}")
            if not w > 0:
                raise ValidationError(f"atom mass {w} at vertex {v} is not positive")
            seen.add(v)
        total = sum(w for _, w in atoms)
        if abs(total - 1.0) > 1e-12:
            raise WeightsNotNormalized(f"atom masses sum to {total!r}, not 1")

    @property
    def support(self) -> list[int]:
        return [v for v, _ in self.atoms]

    @property
    def masses(self) -> np.ndarray:
        return np.array([w for _, w in self.atoms])

    def mass_at(self, p: TreePoint) -> float:
        if not p.is_vertex:
            return 0.0
        return dict(self.atoms).get(p.vertex, 0.0)

    def atom_distances(self) -> np.ndarray:
        idx = np.array(self.support)
        return self.skeleton.vertex_distances[np.ix_(idx, idx)]

    def diameter(self) -> float:
        return self.skeleton.diameter

    @classmethod
    def from_points(cls, s: RealTreeSkeleton, weighted_points) -> "MeasuredRealTree":
        """Build from ``(TreePoint, mass)`` pairs, splitting edges under interior atoms."""
        weighted_points = list(weighted_points)
        ref = refine(s, [p for p, _ in weighted_points])
        masses: dict[int, float] = {}
        for p, w in weighted_points:
            v = ref.map_point(p).vertex
            masses[v] = masses.get(v, 0.0) + float(w)
        return cls(ref.skeleton, tuple(sorted(masses.items())))

    def to_json(self) -> dict:
        out = self.skeleton.to_json()
        out["atoms"] = [[v, w] for v, w in self.atoms]
        return out

    @classmethod
    def from_json(cls, obj) -> "MeasuredRealTree":
        s = RealTreeSkeleton.from_json(obj)
        pts = [(TreePoint.at(v), w) for v, w in obj.get("atoms", [])]
        pts += [(s.point(int(e), float(t)), w) for e, t, w in obj.get("atoms_interior", [])]
        return cls.from_points(s, pts)


def _side_masses(m: MeasuredRealTree, root: int) -> np.ndarray:
    """``out[w]`` = mass of the part of the tree hanging below ``w`` when rooted at ``root``."""
    s = m.skeleton
    mass = np.zeros(s.n)
    for v, w in m.atoms:
        mass[v] += w
    if s.n == 1:
        return mass
    order, pred = breadth_first_order(s._csr, root, directed=False)
    for v in order[:0:-1]:
        mass[pred[v]] += mass[v]
    return mass


def branch_masses_at(m: MeasuredRealTree, p: TreePoint) -> list[tuple[int, float]]:
    """Mass of each ``p``-branch, keyed by the neighbor vertex it leads to."""
    s = m.skeleton
    s.check_point(p)
    if p.is_vertex:
        below = _side_masses(m, p.vertex)
        return [(w, float(below[w])) for _, w in s.incident[p.vertex]]
    u, v, _ = s.edges[p.edge]
    below = _side_masses(m, u)
    return [(u, float(below[u] - below[v])), (v, float(below[v]))]


def is_inner(m: MeasuredRealTree, p: TreePoint) -> bool:
    """True iff no ``p``-branch carries the full mass."""
    return all(mass < 1.0 - 1e-12 for _, mass in branch_masses_at(m, p))


def core(m: MeasuredRealTree) -> Subtree:
    """Closure of the inner points.

    For an atomic measure a point is inner iff it carries mass or mass lies
    in at least two of its branches, which makes the closure the minimal
    subtree spanning the atoms.
    """
    return minimal_spanning_subtree(m.skeleton, [TreePoint.at(v) for v in m.support])


@dataclass(frozen=True, eq=False)
class Feather:
    """A component of the complement of the core, with its attachment point.

    ``closure`` is the feather together with ``attachment``.
    """

    attachment: TreePoint
    edges: tuple
    closure: Subtree


def feathers(m: MeasuredRealTree) -> list[Feather]:
    s = m.skeleton
    c = core(m)
    out = []
    for v in sorted(c.vertices):
        for e, w in s.incident[v]:
            if e in c.spans:
                continue
            verts, edges, stack = {v, w}, [e], [w]
            while stack:
                x = stack.pop()
                for f, y in s.incident[x]:
                    if y not in verts:
                        verts.add(y)
                        edges.append(f)
                        stack.append(y)
            closure = Subtree(s, frozenset(verts), {f: (0.0, s.edges[f][2]) for f in edges})
            out.append(Feather(TreePoint.at(v), tuple(sorted(edges)), closure))
    return out


def associated_projection(m: MeasuredRealTree, p: TreePoint, c: Subtree | None = None):
    """``(core retraction of p, distance from p to it)`` on the original skeleton."""
    c = core(m) if c is None else c
    base = retract(m.skeleton, c, p)
    return base, m.skeleton.distance(p, base)


class AtomProjection(NamedTuple):
    vertex: int
    core_vertex: int
    height: float
    mass: float


class AssociatedDendron(NamedTuple):
    dendron: object
    projection: list
    vertex_map: dict


def associated_dendron(m: MeasuredRealTree) -> AssociatedDendron:
    """The core as a dendron carrying the projected measure.

    Each atom ``(v, w)`` becomes a point mass ``w`` at
    ``(retraction of v onto the core, distance of v to the core)``;
    coincident marked points merge.
    """
    from .dendron import FiniteDendron, MeasureComponent

    c = core(m)
    skel, vmap = c.as_skeleton()
    report, merged = [], {}
    for v, w in m.atoms:
        base, h = associated_projection(m, TreePoint.at(v), c)
        cv = vmap[base.vertex]
        report.append(AtomProjection(v, cv, h, w))
        merged[(cv, h)] = merged.get((cv, h), 0.0) + w
    comps = [MeasureComponent.atom(TreePoint.at(cv), h, w) for (cv, h), w in sorted(merged.items())]
    return AssociatedDendron(FiniteDendron(skel, tuple(comps)), report, vmap)


def tau_exact(m: MeasuredRealTree, r: int, cap: int = DEFAULT_CAP) -> SamplingMeasure:
    """Exact sampling measure of ``(T, d, mu)`` over all atom tuples."""
    if r < 1:
        raise ValidationError("r must be >= 1")
    return enumerate_kernel(m.atom_distances(), r, weights=m.masses, cap=cap)


def tau_sample(m: MeasuredRealTree, r: int, num_samples: int, seed: int,
               shards: int = 1, threads: int = 1) -> SamplingMeasure:
    K = m.atom_distances()
    w = m.masses
    pi, pj = pair_index(r)

    def draw(rng, count):
        idx = rng.choice(len(w), size=(count, r), p=w)
        return K[idx[:, pi], idx[:, pj]]

    return empirical(run_sharded(draw, num_samples, seed, shards, threads), r)
