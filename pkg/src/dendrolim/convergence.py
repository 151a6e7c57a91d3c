"""Comparing sampling measures: energy distance, summaries, and the
empirical-frequency ("obeys") diagnostic for dendron samples.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dendron import FiniteDendron, FixedHeight, MarkedPoint, PointBase
from .errors import OrderMismatch, UnsupportedRegion, ValidationError
from .real_tree import PointArray, Subtree, TreePoint
from .sampling import SamplingMeasure, check_same_order

_BLOCK = 1024


def matrix_metric(a, b) -> float:
    """Euclidean distance between the upper triangles of two matrices."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise OrderMismatch(f"orders differ: {a.shape} vs {b.shape}")
    iu = np.triu_indices(a.shape[0], k=1)
    return float(np.linalg.norm(a[iu] - b[iu]))


def _mean_pairwise(x, wx, y, wy) -> float:
    # blocks are summed in a fixed order so the result does not depend on scheduling
    total = 0.0
    for start in range(0, x.shape[0], _BLOCK):
        xb = x[start:start + _BLOCK]
        dist = np.sqrt(((xb[:, None, :] - y[None, :, :]) ** 2).sum(axis=2))
        total += float(wx[start:start + _BLOCK] @ dist @ wy)
    return total


def _energy_1d(x, wx, y, wy) -> float:
    # 2 * integral of (F - G)^2 equals the energy distance on the line
    z = np.union1d(x, y)
    F = np.cumsum(np.bincount(np.searchsorted(z, x), weights=wx, minlength=z.size))
    G = np.cumsum(np.bincount(np.searchsorted(z, y), weights=wy, minlength=z.size))
    return float(2.0 * np.sum((F[:-1] - G[:-1]) ** 2 * np.diff(z)))


def energy_distance(p: SamplingMeasure, q: SamplingMeasure, method: str = "auto") -> float:
    """Energy distance ``2 E|X-Y| - E|X-X'| - E|Y-Y'|`` between two measures.

    Computed exactly over the weighted atoms (V-statistic form) with the
    upper-triangle Euclidean ground metric. For ``r = 2`` the atoms are
    scalars and the equivalent CDF formula is used unless
    ``method="pairwise"``.
    """
    check_same_order(p, q)
    if p.order == 1:
        return 0.0
    x, wx, y, wy = p.upper, p.weights, q.upper, q.weights
    if method == "auto" and x.shape[1] == 1:
        return max(0.0, _energy_1d(x[:, 0], wx, y[:, 0], wy))
    value = 2 * _mean_pairwise(x, wx, y, wy) - _mean_pairwise(x, wx, x, wx) - _mean_pairwise(y, wy, y, wy)
    return max(0.0, value)


def mean_offdiag(p: SamplingMeasure) -> float:
    """Weighted mean of the off-diagonal entries."""
    if p.order < 2:
        raise OrderMismatch("mean of off-diagonal entries needs order >= 2")
    return float(p.weights @ p.upper.mean(axis=1))


def measures_close(p: SamplingMeasure, q: SamplingMeasure, atol: float = 1e-9) -> bool:
    """Equality of two finite measures up to ``atol`` in entries and weights.

    Atoms of both measures whose matrices lie within ``atol`` (max-norm) of
    each other are grouped; each group must carry the same total weight in
    ``p`` and ``q``.
    """
    check_same_order(p, q)
    x = np.vstack([p.upper, q.upper])
    w = np.r_[p.weights, -q.weights]
    k = x.shape[0]
    group = list(range(k))

    def find(a):
        while group[a] != a:
            group[a] = group[group[a]]
            a = group[a]
        return a

    order = np.lexsort(x.T[::-1]) if x.shape[1] else np.arange(k)
    for a_pos, a in enumerate(order):
        for b in order[a_pos + 1:]:
            if x.shape[1] and x[b, 0] - x[a, 0] > atol:
                break
            if np.max(np.abs(x[a] - x[b]), initial=0.0) <= atol:
                group[find(a)] = find(b)
    totals: dict[int, float] = {}
    for i in range(k):
        totals[find(i)] = totals.get(find(i), 0.0) + w[i]
    return all(abs(t) <= atol for t in totals.values())


def compare_report(a: SamplingMeasure, b: SamplingMeasure) -> dict:
    check_same_order(a, b)
    means = [mean_offdiag(a), mean_offdiag(b)] if a.order >= 2 else [0.0, 0.0]
    return {
        "r": a.order,
        "energy_distance": energy_distance(a, b),
        "mean_offdiag": means,
        "n_atoms": [len(a), len(b)],
    }


@dataclass(frozen=True)
class Rectangle:
    """``base x [lo, hi]``; ``base=None`` means the whole skeleton."""

    base: Subtree | TreePoint | None
    lo: float = 0.0
    hi: float = float("inf")

    def __post_init__(self):
        if not 0 <= self.lo <= self.hi:
            raise UnsupportedRegion(f"bad height interval [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class ObeysReport:
    frequency: float
    measure: float
    tolerance: float
    passed: bool


def _base_subtree(d: FiniteDendron, base) -> Subtree | TreePoint:
    if base is None:
        return Subtree.whole(d.skeleton)
    if isinstance(base, (Subtree, TreePoint)):
        return base
    raise UnsupportedRegion(f"unsupported base {base!r}")


def _base_mass(d: FiniteDendron, i: int, base) -> float:
    c = d.components[i]
    if isinstance(c.base, PointBase):
        if isinstance(base, TreePoint):
            return float(c.base.point == base)
        return float(base.contains(c.base.point))
    if isinstance(base, TreePoint):
        return 0.0
    pieces, cum = d._segment_tables[i]
    covered = 0.0
    for e, t0, t1 in pieces:
        span = base.spans.get(e)
        if span is not None:
            covered += max(0.0, min(max(t0, t1), span[1]) - max(min(t0, t1), span[0]))
    return covered / cum[-1]


def _height_mass(c, lo, hi) -> float:
    if isinstance(c.height, FixedHeight):
        return float(lo <= c.height.value <= hi)
    overlap = min(hi, c.height.hi) - max(lo, c.height.lo)
    return max(0.0, overlap) / (c.height.hi - c.height.lo)


def _bases_meet(a, b) -> bool:
    if isinstance(a, TreePoint) and isinstance(b, TreePoint):
        return a == b
    if isinstance(a, TreePoint):
        return b.contains(a)
    if isinstance(b, TreePoint):
        return a.contains(b)
    if a.vertices & b.vertices:
        return True
    return any(e in b.spans and min(a.spans[e][1], b.spans[e][1]) >= max(a.spans[e][0], b.spans[e][0])
               for e in a.spans)


def region_measure(d: FiniteDendron, region) -> float:
    """Exact mass of a finite union of pairwise disjoint rectangles."""
    rects = [region] if isinstance(region, Rectangle) else list(region)
    bases = [_base_subtree(d, r.base) for r in rects]
    for i in range(len(rects)):
        for j in range(i + 1, len(rects)):
            heights_meet = max(rects[i].lo, rects[j].lo) <= min(rects[i].hi, rects[j].hi)
            if heights_meet and _bases_meet(bases[i], bases[j]):
                raise UnsupportedRegion("rectangles overlap; pass a disjoint union")
    total = 0.0
    for r, base in zip(rects, bases):
        for i, c in enumerate(d.components):
            total += c.weight * _base_mass(d, i, base) * _height_mass(c, r.lo, r.hi)
    return total


def _in_base(pts: PointArray, base) -> np.ndarray:
    if isinstance(base, TreePoint):
        if base.is_vertex:
            return (pts.edge < 0) & (pts.vertex == base.vertex)
        return (pts.edge == base.edge) & (pts.offset == base.offset)
    inside = np.isin(pts.vertex, list(base.vertices)) & (pts.edge < 0)
    for e, (lo, hi) in base.spans.items():
        inside |= (pts.edge == e) & (pts.offset >= lo) & (pts.offset <= hi)
    return inside


def region_frequency(d: FiniteDendron, points, heights, region) -> float:
    rects = [region] if isinstance(region, Rectangle) else list(region)
    hit = np.zeros(len(heights), dtype=bool)
    for r in rects:
        base = _base_subtree(d, r.base)
        hit |= _in_base(points, base) & (heights >= r.lo) & (heights <= r.hi)
    return float(hit.mean())


def obeys_check(points, d: FiniteDendron, region, tolerance: float) -> ObeysReport:
    """Compare the fraction of sampled marked points in ``region`` with its mass.

    ``points`` is a list of :class:`MarkedPoint` or a ``(PointArray,
    heights)`` pair as returned by ``sample_marked_points``.
    """
    if isinstance(points, tuple) and len(points) == 2 and isinstance(points[0], PointArray):
        pts, heights = points
    else:
        points = list(points)
        if not points or not all(isinstance(p, MarkedPoint) for p in points):
            raise ValidationError("need a non-empty list of marked points")
        pts = PointArray.from_points([p.base for p in points])
        heights = np.array([p.height for p in points])
    measure = region_measure(d, region)
    freq = region_frequency(d, pts, np.asarray(heights), region)
    return ObeysReport(freq, measure, tolerance, abs(freq - measure) <= tolerance)
