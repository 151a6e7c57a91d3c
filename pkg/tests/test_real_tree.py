import math

import numpy as np
import pytest
from hypothesis import given, settings

from corpus import measured_corpus, measured_trees, path_abc, star_xyz, tree_points
from dendrolim.convergence import measures_close
from dendrolim.dendron import MarkedPoint, d_D, tau_exact_atomic, validate_dendron
from dendrolim.errors import HasCycle, InvalidPoint, ValidationError, WeightsNotNormalized
from dendrolim.real_tree import (
    MeasuredRealTree,
    RealTreeSkeleton,
    Subtree,
    TreePoint,
    associated_dendron,
    associated_projection,
    branch_masses_at,
    core,
    feathers,
    is_inner,
    minimal_spanning_subtree,
    point_distance,
    retract,
    tau_exact,
)

A, B, C = TreePoint.at(0), TreePoint.at(1), TreePoint.at(2)
PATH = path_abc().skeleton


class TestPoints:
    def test_path_distance(self):
        assert point_distance(PATH, A, C) == 2.0

    def test_same_edge(self):
        assert point_distance(PATH, PATH.point(0, 0.2), PATH.point(0, 0.7)) == pytest.approx(0.5, abs=1e-12)

    def test_self_distance(self):
        p = PATH.point(1, 0.4)
        assert point_distance(PATH, p, p) == 0.0

    def test_boundary_offsets_canonicalize(self):
        assert PATH.point(0, 0.0) == A and PATH.point(0, 1.0) == B

    def test_invalid_point(self):
        with pytest.raises(InvalidPoint):
            point_distance(PATH, TreePoint.at(7), A)
        with pytest.raises(InvalidPoint):
            PATH.check_point(TreePoint(edge=0, offset=1.5))

    def test_skeleton_rejects_cycle_and_lengths(self):
        with pytest.raises(HasCycle):
            RealTreeSkeleton(3, ((0, 1, 1.0), (1, 2, 1.0), (2, 0, 1.0)))
        with pytest.raises(ValidationError):
            RealTreeSkeleton(2, ((0, 1, 0.0),))

    @given(measured_trees())
    def test_metric_axioms(self, m):
        s = m.skeleton
        pts = tree_points(m)[:8]
        for p in pts:
            for q in pts:
                d = point_distance(s, p, q)
                assert d == pytest.approx(point_distance(s, q, p), abs=1e-12)
                for x in pts[:4]:
                    assert d <= point_distance(s, p, x) + point_distance(s, x, q) + 1e-9


class TestSubtrees:
    def test_endpoints_span_path(self):
        assert minimal_spanning_subtree(PATH, [A, C]).is_whole()

    def test_singleton(self):
        sub = minimal_spanning_subtree(PATH, [B])
        assert sub.vertices == {1} and sub.spans == {} and sub.length() == 0

    def test_star_excludes_third_leg(self):
        s = star_xyz([(1, 1.0)]).skeleton
        sub = minimal_spanning_subtree(s, [TreePoint.at(1), TreePoint.at(2)])
        assert not sub.contains(TreePoint.at(3)) and not sub.contains(s.point(2, 0.5))
        assert sub.contains(TreePoint.at(0))
        # points of the z-leg are farther from x and y than the center is
        z_mid = s.point(2, 0.5)
        for leaf in (1, 2):
            assert point_distance(s, z_mid, TreePoint.at(leaf)) > point_distance(s, TreePoint.at(0), TreePoint.at(leaf))

    def test_partial_edges(self):
        sub = minimal_spanning_subtree(PATH, [PATH.point(0, 0.5), PATH.point(1, 0.25)])
        assert sub.length() == pytest.approx(0.75)
        assert sub.contains(B) and not sub.contains(A)

    @given(measured_trees())
    def test_spanning_subtree_is_convex(self, m):
        s = m.skeleton
        pts = tree_points(m)
        sub = minimal_spanning_subtree(s, pts[:: max(1, len(pts) // 3)])
        inside = [p for p in pts if sub.contains(p)]
        for p in inside:
            for q in inside:
                assert sub.contains_segment(p, q)


class TestRetract:
    def test_inside(self):
        y = minimal_spanning_subtree(PATH, [A, B])
        p = PATH.point(0, 0.3)
        assert retract(PATH, y, p) == p

    def test_onto_boundary(self):
        assert retract(PATH, minimal_spanning_subtree(PATH, [A, B]), C) == B

    @settings(max_examples=40, deadline=None)
    @given(measured_trees(max_n=7))
    def test_decomposition_and_idempotence(self, m):
        s = m.skeleton
        pts = tree_points(m)
        rng = np.random.default_rng(len(pts))
        chosen = [pts[i] for i in rng.choice(len(pts), size=min(3, len(pts)), replace=False)]
        y = minimal_spanning_subtree(s, chosen)
        for p in pts:
            r = retract(s, y, p)
            assert y.contains(r)
            assert retract(s, y, r) == r
            for q in y.points():
                assert point_distance(s, p, q) == pytest.approx(
                    point_distance(s, p, r) + point_distance(s, r, q), abs=1e-9)


class TestBranches:
    def test_symmetric_split(self):
        masses = sorted(w for _, w in branch_masses_at(path_abc(), B))
        assert masses == [0.5, 0.5]

    def test_leaf(self):
        assert [w for _, w in branch_masses_at(path_abc(), A)] == [0.5]

    def test_edge_interior(self):
        m = MeasuredRealTree(RealTreeSkeleton(2, ((0, 1, 1.0),)), ((0, 0.5), (1, 0.5)))
        assert sorted(w for _, w in branch_masses_at(m, m.skeleton.point(0, 0.3))) == [0.5, 0.5]

    @given(measured_trees())
    def test_masses_sum_to_one(self, m):
        for p in tree_points(m):
            total = sum(w for _, w in branch_masses_at(m, p)) + m.mass_at(p)
            assert abs(total - 1) <= 1e-12


class TestInnerAndCore:
    def test_is_inner_examples(self):
        m = path_abc(((0, 0.5), (1, 0.5)))
        assert is_inner(m, A)
        assert not is_inner(m, C)
        single = MeasuredRealTree(RealTreeSkeleton(2, ((0, 1, 1.0),)), ((0, 1.0),))
        assert is_inner(single, A)

    def test_core_examples(self):
        m = path_abc(((0, 0.5), (1, 0.5)))
        assert core(m) == minimal_spanning_subtree(m.skeleton, [A, B])
        single = path_abc(((1, 1.0),))
        c = core(single)
        assert c.vertices == {1} and c.spans == {}
        star = star_xyz([(1, 1 / 3), (2, 1 / 3), (3, 1 / 3)])
        assert core(star).is_whole()

    @settings(max_examples=60, deadline=None)
    @given(measured_trees())
    def test_core_matches_inner_points(self, m):
        c = core(m)
        for p in tree_points(m):
            assert is_inner(m, p) == c.contains(p)

    @given(measured_trees())
    def test_core_fixed_point(self, m):
        c = core(m)
        skel, vmap = c.as_skeleton()
        restricted = MeasuredRealTree(skel, tuple((vmap[v], w) for v, w in m.atoms))
        assert core(restricted).is_whole()


class TestFeathers:
    def test_path(self):
        fs = feathers(path_abc(((0, 0.5), (1, 0.5))))
        assert len(fs) == 1 and fs[0].attachment == B and fs[0].edges == (1,)

    def test_full_support(self):
        assert feathers(path_abc()) == []
        assert feathers(star_xyz([(1, 0.25), (2, 0.25), (3, 0.5)])) == []

    def test_star_two_leaves(self):
        fs = feathers(star_xyz([(1, 0.5), (2, 0.5)]))
        assert len(fs) == 1 and fs[0].attachment == TreePoint.at(0) and fs[0].edges == (2,)

    @given(measured_trees())
    def test_feathers_and_core_cover(self, m):
        c = core(m)
        covered = set(c.spans)
        for f in feathers(m):
            assert c.contains(f.attachment)
            assert not set(f.edges) & covered
            covered |= set(f.edges)
            assert sum(m.mass_at(TreePoint.at(v)) for v in f.closure.vertices - c.vertices) == 0
        assert covered == set(range(len(m.skeleton.edges)))


class TestAssociatedDendron:
    def test_atoms_in_core(self):
        ad = associated_dendron(path_abc())
        assert [(p.height, p.mass) for p in ad.projection] == [(0.0, 0.5), (0.0, 0.5)]
        assert ad.dendron.skeleton.n == 3

    def test_partial_core(self):
        ad = associated_dendron(path_abc(((0, 0.5), (1, 0.5))))
        assert ad.dendron.skeleton.n == 2
        assert all(p.height == 0 for p in ad.projection)

    def test_star_center_atom(self):
        ad = associated_dendron(star_xyz([(1, 1 / 3), (2, 1 / 3), (0, 1 / 3)]))
        d = ad.dendron
        assert d.skeleton.n == 3 and d.skeleton.total_length() == pytest.approx(2.0)
        center = ad.vertex_map[0]
        comp = [c for c in d.components if c.base.point == TreePoint.at(center)]
        assert len(comp) == 1 and comp[0].height.value == 0 and comp[0].weight == pytest.approx(1 / 3)

    def test_interior_atoms_json(self):
        obj = {"n": 2, "edges": [[0, 1, 1.0]], "atoms": [[0, 0.5]], "atoms_interior": [[0, 0.25, 0.5]]}
        m = MeasuredRealTree.from_json(obj)
        assert m.skeleton.n == 3 and len(m.atoms) == 2
        assert sorted(m.atom_distances().ravel().tolist()) == [0, 0, 0.25, 0.25]

    def test_weights_must_normalize(self):
        with pytest.raises(WeightsNotNormalized):
            path_abc(((0, 0.5), (2, 0.6)))

    @settings(max_examples=40, deadline=None)
    @given(measured_trees())
    def test_valid_dendron_and_feather_distances(self, m):
        ad = associated_dendron(m)
        assert validate_dendron(ad.dendron) == []
        fs = feathers(m)
        owner = {}
        for k, f in enumerate(fs):
            for v in f.closure.vertices - {f.attachment.vertex}:
                owner[v] = k
        marked = {p.vertex: MarkedPoint(TreePoint.at(p.core_vertex), p.height) for p in ad.projection}
        for x, _ in m.atoms:
            for y, _ in m.atoms:
                if x != y and (owner.get(x) is None or owner.get(x) != owner.get(y)):
                    assert point_distance(m.skeleton, TreePoint.at(x), TreePoint.at(y)) == pytest.approx(
                        d_D(ad.dendron, marked[x], marked[y]), abs=1e-9)

    @pytest.mark.parametrize("r", [2, 3])
    def test_measure_equality_on_corpus(self, r):
        for m in measured_corpus()[:12]:
            assert measures_close(tau_exact(m, r), tau_exact_atomic(associated_dendron(m).dendron, r))

    def test_projection_distance(self):
        m = path_abc(((0, 0.5), (1, 0.5)))
        base, h = associated_projection(m, C)
        assert base == B and h == 1.0


def test_tau_exact_two_atoms():
    m = MeasuredRealTree(RealTreeSkeleton(2, ((0, 1, 0.8),)), ((0, 0.5), (1, 0.5)))
    assert tau_exact(m, 2).as_dict() == {(0.0,): 0.5, (0.8,): 0.5}
    assert math.isclose(m.diameter(), 0.8)
