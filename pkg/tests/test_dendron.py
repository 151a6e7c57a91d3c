import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dendrolim import families
from dendrolim.convergence import energy_distance, mean_offdiag
from dendrolim.dendron import (
    FiniteDendron,
    FixedHeight,
    MarkedPoint,
    MeasureComponent,
    PointBase,
    SegmentBase,
    UniformHeight,
    check_dendron,
    d_D,
    is_dendron,
    kernel_supremum,
    sample_marked_point,
    sample_marked_points,
    tau_exact_atomic,
    tau_sample,
    validate_dendron,
)
from dendrolim.errors import BranchWithZeroMass, NotAtomic, ValidationError, WeightsNotNormalized
from dendrolim.real_tree import RealTreeSkeleton, TreePoint

V = TreePoint.at
SEG = RealTreeSkeleton(2, ((0, 1, 1.0),))
STAR3 = RealTreeSkeleton(4, ((0, 1, 0.25), (0, 2, 0.25), (0, 3, 0.25)))


def point_dendron(height):
    return FiniteDendron(RealTreeSkeleton(1, ()), (MeasureComponent.atom(V(0), height, 1.0),))


class TestTypes:
    def test_negative_height(self):
        with pytest.raises(ValidationError):
            MarkedPoint(V(0), -0.1)

    def test_degenerate_segment(self):
        with pytest.raises(ValidationError):
            SegmentBase(V(0), V(0))

    def test_height_bounds(self):
        with pytest.raises(ValidationError):
            UniformHeight(0.3, 0.3)

    def test_json_round_trip(self):
        d = FiniteDendron(SEG, (
            MeasureComponent(0.5, SegmentBase(V(0), SEG.point(0, 0.5)), UniformHeight(0.0, 0.2)),
            MeasureComponent(0.5, PointBase(V(1)), FixedHeight(0.1)),
        ))
        back = FiniteDendron.from_json(d.to_json())
        assert back.components == d.components and back.skeleton == d.skeleton


class TestKernel:
    def test_substitution(self):
        d = FiniteDendron(SEG, (MeasureComponent.atom(V(0), 0, 1.0),))
        x, y = MarkedPoint(SEG.point(0, 0.1), 0.2), MarkedPoint(SEG.point(0, 0.4), 0.1)
        assert d_D(d, x, y) == pytest.approx(0.6)

    def test_same_point(self):
        x = MarkedPoint(V(0), 0.5)
        assert d_D(point_dendron(0.5), x, x) == 1.0

    def test_zero_heights(self):
        d = FiniteDendron(SEG, (MeasureComponent.atom(V(0), 0, 1.0),))
        assert d_D(d, MarkedPoint(V(0)), MarkedPoint(V(1))) == 1.0


class TestValidation:
    def test_branch_without_mass(self):
        d = FiniteDendron(STAR3, (MeasureComponent.atom(V(1), 0, 0.5), MeasureComponent.atom(V(2), 0, 0.5)))
        errs = validate_dendron(d)
        assert len(errs) == 1 and isinstance(errs[0], BranchWithZeroMass)
        assert errs[0].attachment == V(0)

    def test_point_dendron_ok(self):
        assert validate_dendron(point_dendron(0.5)) == []

    def test_weights(self):
        d = FiniteDendron(RealTreeSkeleton(1, ()), (MeasureComponent.atom(V(0), 0, 0.6),
                                                     MeasureComponent.atom(V(0), 0.1, 0.5)))
        with pytest.raises(WeightsNotNormalized):
            check_dendron(d)


class TestIsDendron:
    def test_point(self):
        assert is_dendron(point_dendron(0.5))

    def test_comb_sup_exactly_one(self):
        d = families.limit_comb()
        assert kernel_supremum(d) == pytest.approx(1.0, abs=1e-15) and is_dendron(d)

    def test_long(self):
        assert not is_dendron(point_dendron(0.6))
        assert kernel_supremum(point_dendron(0.6)) == pytest.approx(1.2)

    @settings(max_examples=50)
    @given(st.lists(st.floats(0, 1), min_size=1, max_size=4), st.lists(st.integers(1, 4), min_size=4, max_size=4))
    def test_valid_atomic_heights_at_most_half(self, heights, raw):
        w = np.array(raw[:len(heights)], dtype=float)
        w /= w.sum()
        comps = tuple(MeasureComponent.atom(V(0), h, wi) for h, wi in zip(heights, w))
        w_last = 1.0 - sum(c.weight for c in comps[:-1])
        comps = comps[:-1] + (MeasureComponent.atom(V(0), heights[-1], w_last),)
        d = FiniteDendron(RealTreeSkeleton(1, ()), comps)
        if is_dendron(d):
            assert max(heights) <= 0.5 + 1e-12


class TestSampling:
    def test_point_component(self):
        rng = np.random.default_rng(0)
        d = point_dendron(0.3)
        assert all(sample_marked_point(d, rng) == MarkedPoint(V(0), 0.3) for _ in range(20))

    def test_segment_mean(self):
        L = 0.8
        s = RealTreeSkeleton(3, ((0, 1, 0.3), (1, 2, 0.5)))
        d = FiniteDendron(s, (MeasureComponent(1.0, SegmentBase(V(2), V(0)), FixedHeight(0.0)),))
        pts, _ = sample_marked_points(d, 10**5, np.random.default_rng(1))
        from dendrolim.real_tree import PointArray
        start = PointArray.from_points([V(2)] * len(pts.edge))
        dist = s.distance_arrays(pts, start)
        assert abs(dist.mean() - L / 2) < 0.01 * L
        assert dist.min() >= 0 and dist.max() <= L + 1e-12

    def test_component_frequencies(self):
        d = FiniteDendron(SEG, (MeasureComponent.atom(V(0), 0.0, 0.25), MeasureComponent.atom(V(1), 0.0, 0.75)))
        pts, _ = sample_marked_points(d, 10**5, np.random.default_rng(2))
        assert abs(np.mean(pts.vertex == 0) - 0.25) < 0.01

    def test_uniform_heights(self):
        _, h = sample_marked_points(families.limit_comb(), 10**4, np.random.default_rng(3))
        assert h.min() >= 0 and h.max() <= 1 / 3 and abs(h.mean() - 1 / 6) < 0.01


class TestTau:
    def test_star_limit(self):
        m = tau_sample(point_dendron(0.5), 2, 1000, seed=0)
        assert m.as_dict() == {(1.0,): 1.0}

    def test_path_limit_mean(self):
        assert abs(mean_offdiag(tau_sample(families.limit_path(), 2, 10**5, seed=3)) - 1 / 3) < 0.01

    def test_r1(self):
        m = tau_sample(families.limit_comb(), 1, 100, seed=0)
        assert m.matrices.tolist() == [[[0.0]]]

    def test_exact_two_atoms(self):
        d = FiniteDendron(SEG, (MeasureComponent.atom(V(0), 0, 0.5), MeasureComponent.atom(V(1), 0, 0.5)))
        assert tau_exact_atomic(d, 2).as_dict() == {(0.0,): 0.5, (1.0,): 0.5}

    def test_exact_single_atom(self):
        assert tau_exact_atomic(point_dendron(0.2), 3).as_dict() == {(0.4, 0.4, 0.4): 1.0}

    def test_exact_deep2_three_arms(self):
        m = tau_exact_atomic(families.limit_deep2(3), 2)
        w = np.array([4, 2, 1]) / 7
        same = float(np.sum(w**2))
        got = m.as_dict()
        assert set(got) == {(0.5,), (1.0,)}
        assert got[(0.5,)] == pytest.approx(same, abs=1e-15)
        assert got[(1.0,)] == pytest.approx(1 - same, abs=1e-15)

    def test_not_atomic(self):
        with pytest.raises(NotAtomic):
            tau_exact_atomic(families.limit_path(), 2)

    def test_offdiag_bounded_for_dendrons(self):
        for name in families.GENERATORS:
            d = families.limit_of(name)
            m = tau_sample(d, 3, 5000, seed=1)
            assert m.upper.max() <= 1 + 1e-9
            assert np.all(np.diagonal(m.matrices, axis1=1, axis2=2) == 0)

    @pytest.mark.parametrize("seed", range(5))
    def test_sample_vs_exact(self, seed):
        d = families.limit_stretched_binary(3)
        N = 10**4
        assert energy_distance(tau_sample(d, 2, N, seed), tau_exact_atomic(d, 2)) <= 3 / np.sqrt(N)

    def test_relabel_invariance(self):
        d = families.limit_deep2(3)
        perm = [3, 1, 0, 2]
        s = RealTreeSkeleton(4, tuple((perm[u], perm[v], a) for u, v, a in d.skeleton.edges))
        comps = tuple(MeasureComponent.atom(V(perm[c.base.point.vertex]), c.height.value, c.weight)
                      for c in d.components)
        relabeled = FiniteDendron(s, comps)
        assert tau_exact_atomic(relabeled, 3).to_csv() == tau_exact_atomic(d, 3).to_csv()

    def test_segment_reparameterization(self):
        fwd = families.limit_path()
        rev = FiniteDendron(fwd.skeleton, (MeasureComponent(1.0, SegmentBase(V(1), V(0)), FixedHeight(0.0)),))
        a, b = tau_sample(fwd, 2, 2 * 10**4, seed=5), tau_sample(rev, 2, 2 * 10**4, seed=6)
        assert energy_distance(a, b) <= 3 / np.sqrt(2 * 10**4)
