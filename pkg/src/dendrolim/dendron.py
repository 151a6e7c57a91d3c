"""Finite dendrons: a skeleton plus a finite mixture measure on
skeleton x [0, inf), the kernel ``d(u, v) + a + b`` and its sampling
measures.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import BranchWithZeroMass, NotAtomic, ValidationError, WeightsNotNormalized
from .real_tree import (
    PointArray,
    RealTreeSkeleton,
    Subtree,
    TreePoint,
    minimal_spanning_subtree,
)
from .sampling import DEFAULT_CAP, SamplingMeasure, empirical, enumerate_kernel, pair_index, run_sharded


@dataclass(frozen=True)
class MarkedPoint:
    base: TreePoint
    height: float = 0.0

    def __post_init__(self):
        if not self.height >= 0:
            raise ValidationError(f"height must be >= 0, got {self.height}")

    def to_json(self) -> dict:
        return {"point": self.base.to_json(), "height": self.height}


@dataclass(frozen=True)
class PointBase:
    point: TreePoint


@dataclass(frozen=True)
class SegmentBase:
    """Uniform (by length) distribution along the arc ``[p, q]``."""

    p: TreePoint
    q: TreePoint

    def __post_init__(self):
        if self.p == self.q:
            raise ValidationError("segment base needs distinct endpoints; use PointBase")


@dataclass(frozen=True)
class FixedHeight:
    value: float

    def __post_init__(self):
        if not self.value >= 0:
            raise ValidationError(f"height must be >= 0, got {self.value}")

    @property
    def top(self) -> float:
        return self.value


@dataclass(frozen=True)
class UniformHeight:
    lo: float
    hi: float

    def __post_init__(self):
        if not 0 <= self.lo < self.hi:
            raise ValidationError(f"need 0 <= lo < hi, got [{self.lo}, {self.hi}]")

    @property
    def top(self) -> float:
        return self.hi


@dataclass(frozen=True)
class MeasureComponent:
    weight: float
    base: PointBase | SegmentBase
    height: FixedHeight | UniformHeight

    def __post_init__(self):
        if not self.weight > 0:
            raise ValidationError(f"component weight must be positive, got {self.weight}")

    @classmethod
    def atom(cls, p: TreePoint, height: float, weight: float) -> "MeasureComponent":
        return cls(float(weight), PointBase(p), FixedHeight(float(height)))

    @property
    def is_atomic(self) -> bool:
        return isinstance(self.base, PointBase) and isinstance(self.height, FixedHeight)

    def support_points(self) -> list[TreePoint]:
        if isinstance(self.base, PointBase):
            return [self.base.point]
        return [self.base.p, self.base.q]


@dataclass(frozen=True, eq=False)
class FiniteDendron:
    """A finite dendron ``(T, d, nu)``.

    ``truncation_mass`` records how much of an infinite limit object the
    finite representation does not resolve (0 for exact objects).
    """

    skeleton: RealTreeSkeleton
    components: tuple
    truncation_mass: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise ValidationError("a dendron needs at least one measure component")
        for c in self.components:
            for p in c.support_points():
                self.skeleton.check_point(p)

    @property
    def weights(self) -> np.ndarray:
        return np.array([c.weight for c in self.components])

    @cached_property
    def _segment_tables(self):
        # per segment component: pieces and cumulative start lengths
        out = {}
        for i, c in enumerate(self.components):
            if isinstance(c.base, SegmentBase):
                pieces = self.skeleton.path_pieces(c.base.p, c.base.q)
                lens = np.array([abs(t1 - t0) for _, t0, t1 in pieces])
                out[i] = (pieces, np.r_[0.0, np.cumsum(lens)])
        return out

    def segment_length(self, i: int) -> float:
        return float(self._segment_tables[i][1][-1])

    def to_json(self) -> dict:
        comps = []
        for c in self.components:
            if isinstance(c.base, PointBase):
                base = {"point": c.base.point.to_json()}
            else:
                base = {"segment": [c.base.p.to_json(), c.base.q.to_json()]}
            if isinstance(c.height, FixedHeight):
                height = {"fixed": c.height.value}
            else:
                height = {"uniform": [c.height.lo, c.height.hi]}
            comps.append({"weight": c.weight, "base": base, "height": height})
        out = {"skeleton": self.skeleton.to_json(), "components": comps}
        if self.truncation_mass:
            out["truncation_mass"] = self.truncation_mass
        return out

    @classmethod
    def from_json(cls, obj) -> "FiniteDendron":
        s = RealTreeSkeleton.from_json(obj["skeleton"])
        comps = []
        for c in obj["components"]:
            b, h = c["base"], c["height"]
            if "point" in b:
                base = PointBase(s.point_from_json(b["point"]))
            else:
                p, q = b["segment"]
                base = SegmentBase(s.point_from_json(p), s.point_from_json(q))
            height = FixedHeight(float(h["fixed"])) if "fixed" in h else UniformHeight(*map(float, h["uniform"]))
            comps.append(MeasureComponent(float(c["weight"]), base, height))
        return cls(s, tuple(comps), float(obj.get("truncation_mass", 0.0)))


def d_D(d: FiniteDendron, x: MarkedPoint, y: MarkedPoint) -> float:
    """The dendron kernel ``d(u, v) + a + b``; note ``d_D(x, x) = 2a``."""
    return d.skeleton.distance(x.base, y.base) + x.height + y.height


def support_subtree(d: FiniteDendron) -> Subtree:
    pts = [p for c in d.components for p in c.support_points()]
    return minimal_spanning_subtree(d.skeleton, pts)


def validate_dendron(d: FiniteDendron) -> list[ValidationError]:
    """Check weight normalization and that every branch has positive mass.

    A branch misses every base support iff the subtree spanned by the
    supports leaves part of the skeleton uncovered, so positivity reduces to
    that subtree being the whole skeleton.
    """
    errors: list[ValidationError] = []
    total = float(d.weights.sum())
    if abs(total - 1.0) > 1e-12:
        errors.append(WeightsNotNormalized(f"component weights sum to {total!r}, not 1"))
    span = support_subtree(d)
    if not span.is_whole():
        witness = span.boundary()[0]
        errors.append(BranchWithZeroMass(
            f"a branch at {witness!r} carries no mass (supports do not span the skeleton)",
            attachment=witness,
        ))
    return errors


def check_dendron(d: FiniteDendron) -> FiniteDendron:
    errors = validate_dendron(d)
    if errors:
        raise errors[0]
    return d


def kernel_supremum(d: FiniteDendron) -> float:
    """Largest kernel value over the closed supports of all component pairs.

    Distance from a point is convex along arcs of a tree, so the supremum
    over two bases is attained at their endpoints; heights contribute their
    upper bounds.
    """
    s = d.skeleton
    comps = d.components
    best = 0.0
    for i, ci in enumerate(comps):
        for cj in comps[i:]:
            far = max(s.distance(p, q) for p in ci.support_points() for q in cj.support_points())
            best = max(best, far + ci.height.top + cj.height.top)
    return best


def is_dendron(d: FiniteDendron) -> bool:
    """True iff the kernel is almost surely at most 1 (otherwise a long dendron)."""
    check_dendron(d)
    return kernel_supremum(d) <= 1.0 + 1e-12


def sample_marked_points(d: FiniteDendron, size: int, rng) -> tuple[PointArray, np.ndarray]:
    """Draw ``size`` i.i.d. marked points from the dendron's measure."""
    comp = rng.choice(len(d.components), size=size, p=d.weights / d.weights.sum())
    edge = np.full(size, -1, dtype=np.int64)
    vertex = np.full(size, -1, dtype=np.int64)
    offset = np.zeros(size)
    height = np.zeros(size)
    for i, c in enumerate(d.components):
        idx = np.flatnonzero(comp == i)
        if idx.size == 0:
            continue
        if isinstance(c.base, PointBase):
            p = c.base.point
            if p.is_vertex:
                vertex[idx] = p.vertex
            else:
                edge[idx], offset[idx] = p.edge, p.offset
        else:
            pieces, cum = d._segment_tables[i]
            s = rng.uniform(0.0, cum[-1], size=idx.size)
            k = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(pieces) - 1)
            e = np.array([pc[0] for pc in pieces])[k]
            t0 = np.array([pc[1] for pc in pieces])[k]
            sign = np.sign(np.array([pc[2] - pc[1] for pc in pieces]))[k]
            edge[idx], offset[idx] = e, t0 + sign * (s - cum[k])
        if isinstance(c.height, FixedHeight):
            height[idx] = c.height.value
        else:
            height[idx] = rng.uniform(c.height.lo, c.height.hi, size=idx.size)
    return PointArray(edge, vertex, offset), height


def sample_marked_point(d: FiniteDendron, rng) -> MarkedPoint:
    pts, h = sample_marked_points(d, 1, rng)
    return MarkedPoint(as_tree_point(d.skeleton, pts, 0), float(h[0]))


def as_tree_point(s: RealTreeSkeleton, pts: PointArray, i: int) -> TreePoint:
    if pts.edge[i] < 0:
        return TreePoint.at(int(pts.vertex[i]))
    return s.point(int(pts.edge[i]), float(pts.offset[i]))


def sample_n(d: FiniteDendron, n: int, rng) -> list[MarkedPoint]:
    """An ``n``-sample: ``n`` i.i.d. marked points."""
    pts, h = sample_marked_points(d, n, rng)
    return [MarkedPoint(as_tree_point(d.skeleton, pts, i), float(h[i])) for i in range(n)]


def tau_sample(d: FiniteDendron, r: int, num_samples: int, seed: int,
               shards: int = 1, threads: int = 1) -> SamplingMeasure:
    """Monte-Carlo sampling measure of the dendron kernel."""
    check_dendron(d)
    if r < 1:
        raise ValidationError("r must be >= 1")
    pi, pj = pair_index(r)

    def draw(rng, count):
        pts, h = sample_marked_points(d, count * r, rng)
        pts = PointArray(*(a.reshape(count, r) for a in pts))
        h = h.reshape(count, r)
        left = PointArray(pts.edge[:, pi].ravel(), pts.vertex[:, pi].ravel(), pts.offset[:, pi].ravel())
        right = PointArray(pts.edge[:, pj].ravel(), pts.vertex[:, pj].ravel(), pts.offset[:, pj].ravel())
        dist = d.skeleton.distance_arrays(left, right).reshape(count, -1)
        return dist + h[:, pi] + h[:, pj]

    return empirical(run_sharded(draw, num_samples, seed, shards, threads), r)


def atomic_kernel(d: FiniteDendron) -> tuple[np.ndarray, np.ndarray]:
    """Kernel matrix and weights of an all-atomic dendron."""
    if not all(c.is_atomic for c in d.components):
        raise NotAtomic("exact enumeration needs point bases with fixed heights")
    pts = [c.base.point for c in d.components]
    h = np.array([c.height.value for c in d.components])
    k = len(pts)
    K = np.array([[d.skeleton.distance(pts[a], pts[b]) for b in range(k)] for a in range(k)])
    return K + h[:, None] + h[None, :], d.weights


def tau_exact_atomic(d: FiniteDendron, r: int, cap: int = DEFAULT_CAP) -> SamplingMeasure:
    """Exact sampling measure for dendrons made only of point masses."""
    check_dendron(d)
    if r < 1:
        raise ValidationError("r must be >= 1")
    K, w = atomic_kernel(d)
    return enumerate_kernel(K, r, weights=w, cap=cap)
