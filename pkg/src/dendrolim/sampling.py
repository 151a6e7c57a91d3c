"""Sampling measures on the space of r x r distance matrices.

A measure is stored by the upper-triangle entries of its atoms (row-major,
``d_12, d_13, ..., d_{r-1,r}``); the diagonal is zero by construction.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .errors import EnumerationTooLarge, OrderMismatch, ValidationError, WeightsNotNormalized

DEFAULT_CAP = 10**7
_CHUNK = 1 << 18


def n_pairs(r: int) -> int:
    return r * (r - 1) // 2


def pair_index(r: int) -> tuple[np.ndarray, np.ndarray]:
    """Row/column indices of the upper triangle, row-major."""
    pairs = list(combinations(range(r), 2))
    if not pairs:
        return np.zeros(0, dtype=np.intp), np.zeros(0, dtype=np.intp)
    i, j = zip(*pairs)
    return np.asarray(i, dtype=np.intp), np.asarray(j, dtype=np.intp)


def validate_distance_matrix(a, atol: float = 0.0) -> np.ndarray:
    """Return ``a`` as a float array after checking it lies in M_r.

    Checks squareness, symmetry, a zero diagonal and nonnegativity.
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise ValidationError(f"distance matrix must be square, got shape {a.shape}")
    if np.any(np.diag(a) != 0):
        raise ValidationError("distance matrix must have a zero diagonal")
    if not np.allclose(a, a.T, rtol=0, atol=atol):
        raise ValidationError("distance matrix must be symmetric")
    if np.any(a < -atol) or not np.all(np.isfinite(a)):
        raise ValidationError("distance matrix entries must be finite and nonnegative")
    return a


def to_matrix(upper: np.ndarray, r: int) -> np.ndarray:
    """Expand upper-triangle rows ``(k, r(r-1)/2)`` to matrices ``(k, r, r)``."""
    upper = np.atleast_2d(np.asarray(upper, dtype=float))
    out = np.zeros((upper.shape[0], r, r))
    i, j = pair_index(r)
    out[:, i, j] = upper
    out[:, j, i] = upper
    return out


@dataclass(frozen=True, eq=False)
class SamplingMeasure:
    """A finitely supported probability measure on M_r.

    ``upper`` has one row per atom; rows are unique and sorted.
    ``kind`` is ``"exact"`` for full enumeration and ``"empirical"`` for a
    Monte-Carlo estimate built from ``sample_count`` draws.
    """

    order: int
    upper: np.ndarray
    weights: np.ndarray
    kind: str = "exact"
    sample_count: int | None = None
    _checked: bool = field(default=False, repr=False)

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=float).reshape(-1)
        upper = np.asarray(self.upper, dtype=float).reshape(weights.size, n_pairs(self.order))
        object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "weights", weights)
        if self.order < 1:
            raise ValidationError("order must be >= 1")
        if upper.shape[0] != weights.shape[0] or weights.size == 0:
            raise ValidationError("need one weight per atom and at least one atom")
        if np.any(weights <= 0):
            raise ValidationError("atom weights must be positive")
        if abs(weights.sum() - 1.0) > 1e-12:
            raise WeightsNotNormalized(f"weights sum to {weights.sum()!r}, not 1")
        if self.kind not in ("exact", "empirical"):
            raise ValidationError(f"unknown kind {self.kind!r}")
        upper.setflags(write=False)
        weights.setflags(write=False)

    def __len__(self):
        return self.weights.size

    @property
    def matrices(self) -> np.ndarray:
        return to_matrix(self.upper, self.order)

    def atoms(self):
        """List of ``(matrix, weight)`` pairs."""
        return list(zip(self.matrices, self.weights.tolist()))

    def as_dict(self) -> dict:
        """Map upper-triangle tuples to weights; handy for small measures."""
        return {tuple(row): w for row, w in zip(self.upper.tolist(), self.weights.tolist())}

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        i, j = pair_index(self.order)
        writer.writerow(["weight"] + [f"d_{a + 1}_{b + 1}" for a, b in zip(i, j)])
        for row, w in zip(self.upper, self.weights):
            writer.writerow([f"{w:.17g}"] + [f"{x:.17g}" for x in row])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text

    @classmethod
    def from_csv(cls, path, kind="exact") -> "SamplingMeasure":
        with open(path) as fh:
            return cls.from_csv_text(fh.read(), kind=kind)

    @classmethod
    def from_csv_text(cls, text: str, kind="exact") -> "SamplingMeasure":
        """Parse the CSV written by :meth:`to_csv`."""
        rows = list(csv.reader(io.StringIO(text)))
        header, body = rows[0], [r for r in rows[1:] if r]
        if not header or header[0] != "weight":
            raise ValidationError("sampling-measure CSV must start with a 'weight' column")
        m = len(header) - 1
        r = int(round((1 + np.sqrt(1 + 8 * m)) / 2))
        if n_pairs(r) != m:
            raise ValidationError(f"{m} matrix columns is not an upper triangle")
        data = np.array([[float(x) for x in row] for row in body], dtype=float).reshape(-1, m + 1)
        return aggregate(data[:, 1:], data[:, 0], r, kind=kind)


def aggregate(upper, weights, r: int, kind="exact", sample_count=None) -> SamplingMeasure:
    """Merge identical rows (exact float equality) and sum their weights."""
    weights = np.asarray(weights, dtype=float).reshape(-1)
    if r == 1:
        return SamplingMeasure(1, np.zeros((1, 0)), np.ones(1), kind, sample_count)
    upper = np.asarray(upper, dtype=float).reshape(weights.size, n_pairs(r))
    uniq, inv = np.unique(upper, axis=0, return_inverse=True)
    w = np.bincount(inv.reshape(-1), weights=weights, minlength=uniq.shape[0])
    w = w / w.sum()
    return SamplingMeasure(r, uniq, w, kind, sample_count)


def empirical(upper, r: int) -> SamplingMeasure:
    """Empirical measure of ``N`` sampled matrices, each of weight ``1/N``.

    ``upper`` has shape ``(N, r(r-1)/2)``.
    """
    upper = np.asarray(upper, dtype=float)
    if upper.ndim != 2:
        upper = upper.reshape(-1, n_pairs(r))
    n = upper.shape[0]
    if n < 1:
        raise ValidationError("need at least one sample")
    if r == 1:
        return SamplingMeasure(1, np.zeros((1, 0)), np.ones(1), "empirical", n)
    uniq, counts = np.unique(upper, axis=0, return_counts=True)
    return SamplingMeasure(r, uniq, counts / n, "empirical", n)


def enumerate_kernel(kernel, r: int, weights=None, cap: int = DEFAULT_CAP) -> SamplingMeasure:
    """Exact push-forward of ``weights^r`` along rho_r for a finite kernel.

    ``kernel[a, b]`` is the value of the kernel between atoms ``a`` and
    ``b``; ``kernel[a, a]`` is used when the same atom is drawn twice in
    different coordinates (it need not vanish). With ``weights=None`` the
    atoms are uniform and tuple counts are kept as integers so the resulting
    weights are correctly rounded ratios.
    """
    kernel = np.asarray(kernel, dtype=float)
    k = kernel.shape[0]
    total = k**r
    if total > cap:
        raise EnumerationTooLarge(f"{k}^{r} = {total} tuples exceeds cap {cap}")
    if r == 1:
        return SamplingMeasure(1, np.zeros((1, 0)), np.ones(1), "exact")
    values, codes = np.unique(kernel, return_inverse=True)
    codes = codes.reshape(k, k).astype(np.int64)
    m = n_pairs(r)
    base = max(len(values), 2)
    if m * np.log2(base) >= 62:
        raise EnumerationTooLarge("matrix key does not fit in 64 bits; lower r")
    pi, pj = pair_index(r)
    place = base ** np.arange(m - 1, -1, -1, dtype=np.int64)
    powers = k ** np.arange(r - 1, -1, -1, dtype=np.int64)
    w = None if weights is None else np.asarray(weights, dtype=float)

    acc: dict[int, float] = {}
    for start in range(0, total, _CHUNK):
        lin = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        idx = (lin[:, None] // powers[None, :]) % k
        keys = codes[idx[:, pi], idx[:, pj]] @ place
        uk, inv = np.unique(keys, return_inverse=True)
        if w is None:
            contrib = np.bincount(inv, minlength=uk.size)
        else:
            contrib = np.bincount(inv, weights=np.prod(w[idx], axis=1), minlength=uk.size)
        for key, c in zip(uk.tolist(), contrib.tolist()):
            acc[key] = acc.get(key, 0) + c

    keys = np.array(sorted(acc), dtype=np.int64)
    digits = (keys[:, None] // place[None, :]) % base
    upper = values[digits]
    if w is None:
        wts = np.array([acc[key] for key in keys.tolist()], dtype=float) / total
    else:
        wts = np.array([acc[key] for key in keys.tolist()], dtype=float)
        wts = wts / wts.sum()
    # codes follow the sorted order of kernel values, so rows are already sorted
    return SamplingMeasure(r, upper, wts, "exact")


def check_same_order(p: SamplingMeasure, q: SamplingMeasure):
    if p.order != q.order:
        raise OrderMismatch(f"orders differ: {p.order} vs {q.order}")


def shard_sizes(num_samples: int, shards: int) -> list[int]:
    q, rem = divmod(num_samples, shards)
    return [q + (1 if s < rem else 0) for s in range(shards)]


def run_sharded(draw, num_samples: int, seed: int, shards: int = 1, threads: int = 1) -> np.ndarray:
    """Run ``draw(rng, count) -> rows`` over independent random streams.

    With one shard the stream is ``default_rng(seed)`` and the output is
    bit-reproducible from ``seed``. With several shards, shard ``s`` uses the
    ``s``-th child of ``SeedSequence(seed)``; the concatenated output is
    reproducible from ``(seed, shards)`` whatever the thread count.
    """
    if num_samples < 1:
        raise ValidationError("num_samples must be >= 1")
    if shards < 1 or threads < 1:
        raise ValidationError("shards and threads must be >= 1")
    if shards == 1:
        return draw(np.random.default_rng(seed), num_samples)
    children = np.random.SeedSequence(seed).spawn(shards)
    jobs = [(np.random.default_rng(c), n) for c, n in zip(children, shard_sizes(num_samples, shards))]
    if threads == 1:
        parts = [draw(rng, n) for rng, n in jobs]
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(lambda job: draw(*job), jobs))
    return np.concatenate(parts, axis=0)
