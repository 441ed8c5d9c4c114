import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from ensemble_geometry import (
    DistanceSummary,
    EnsembleGroup,
    IdealLabels,
    ScoreMatrix,
    ScoreRangeError,
    ShapeError,
    dissimilarity_matrix,
    distance_summary,
    euclidean_distance,
    flatten_index,
    performance_distances,
    unflatten_index,
)

from _helpers import worked_group


class TestFlattenIndex:
    @pytest.mark.parametrize("i, j, p, expected", [(1, 1, 3, 1), (2, 1, 3, 4), (2, 3, 3, 6)])
    def test_examples(self, i, j, p, expected):
        assert flatten_index(i, j, p) == expected

    @pytest.mark.parametrize("n, p", [(2, 3), (5, 2), (3, 7), (1, 4)])
    def test_bijection(self, n, p):
        seen = [flatten_index(i, j, p) for i in range(1, n + 1) for j in range(1, p + 1)]
        assert sorted(seen) == list(range(1, n * p + 1))
        for i, j in itertools.product(range(1, n + 1), range(1, p + 1)):
            assert unflatten_index(flatten_index(i, j, p), p) == (i, j)

    def test_matches_numpy_row_major(self):
        a = np.arange(12).reshape(4, 3)
        for i in range(1, 5):
            for j in range(1, 4):
                assert a.reshape(-1)[flatten_index(i, j, 3) - 1] == a[i - 1, j - 1]

    @pytest.mark.parametrize("args", [(0, 1, 3), (1, 0, 3), (1, 4, 3)])
    def test_out_of_range(self, args):
        with pytest.raises(ValueError):
            flatten_index(*args)


class TestTypes:
    def test_score_range_rejected(self):
        with pytest.raises(ScoreRangeError):
            ScoreMatrix("bad", [[0.2, 1.2]])
        with pytest.raises(ScoreRangeError):
            ScoreMatrix("bad", [[-0.1, 0.5]])

    def test_fused_points_may_leave_unit_cube(self):
        assert ScoreMatrix("f", [[-0.5, 2.0]], check_range=False).shape == (1, 2)

    def test_needs_two_classes(self):
        with pytest.raises(ShapeError):
            ScoreMatrix("x", [[0.5]])

    def test_ideal_rows_need_a_one(self):
        with pytest.raises(ScoreRangeError):
            IdealLabels([[0, 0], [1, 0]])
        with pytest.raises(ScoreRangeError):
            IdealLabels([[0.5, 1]])

    def test_multilabel_rows_allowed(self):
        ideal = IdealLabels([[0, 1, 0], [1, 0, 1]])
        assert not ideal.is_single_label

    def test_group_shape_and_ids(self):
        with pytest.raises(ShapeError):
            EnsembleGroup.from_arrays([np.zeros((2, 3)), np.zeros((3, 2))])
        with pytest.raises(ShapeError):
            EnsembleGroup.from_arrays([np.zeros((1, 2))] * 2, ids=["a", "a"])
        with pytest.raises(ShapeError):
            EnsembleGroup(())

    def test_distance_summary_invariants(self):
        with pytest.raises(ShapeError):
            DistanceSummary([1.0, 1.0], [[0, 1], [2, 0]])
        with pytest.raises(ShapeError):
            DistanceSummary([1.0, 1.0], [[1, 1], [1, 0]])

    def test_matrices_are_read_only(self):
        s = ScoreMatrix("a", [[0.1, 0.2]])
        with pytest.raises(ValueError):
            s.scores[0, 0] = 0.5


class TestDistances:
    def test_example_performance(self):
        group, ideal = worked_group()
        perf = performance_distances(group, ideal)
        np.testing.assert_allclose(perf, [0.83, 1.11, 1.26], atol=0.005)
        np.testing.assert_allclose(perf ** 2, [0.69, 1.23, 1.60], rtol=0, atol=1e-12)

    def test_example_pairwise(self):
        group, _ = worked_group()
        assert euclidean_distance(group[0], group[1]) == pytest.approx(np.sqrt(0.32), abs=1e-12)
        d = dissimilarity_matrix(group)
        np.testing.assert_allclose(
            [d[0, 1], d[0, 2], d[1, 2]], np.sqrt([0.32, 0.41, 0.11]), rtol=0, atol=1e-12
        )
        assert np.round(d[0, 1], 4) == 0.5657

    def test_identity(self):
        group, _ = worked_group()
        assert euclidean_distance(group[1], group[1]) == 0.0

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            euclidean_distance(np.zeros((1, 2)), np.zeros((2, 1)))
        group, _ = worked_group()
        with pytest.raises(ShapeError):
            performance_distances(group, IdealLabels([[1, 0]]))

    def test_identical_copies_equal_performance(self):
        s = np.random.default_rng(0).random((4, 3))
        group = EnsembleGroup.from_arrays([s, s, s])
        perf = performance_distances(group, IdealLabels.from_classes([0, 1, 2, 0], 3))
        assert np.all(perf == perf[0])
        assert np.all(dissimilarity_matrix(group) == 0)

    def test_standard_basis(self):
        m = 4
        basis = np.eye(m)
        group = EnsembleGroup.from_arrays([row.reshape(2, 2) for row in basis])
        origin = np.zeros((2, 2))
        np.testing.assert_allclose(performance_distances(group, origin), 1.0)
        d = dissimilarity_matrix(group)
        off = d[~np.eye(m, dtype=bool)]
        np.testing.assert_allclose(off, np.sqrt(2.0))

    def test_summary(self):
        group, ideal = worked_group()
        s = distance_summary(group, ideal)
        assert s.m == 3
        assert np.array_equal(s.dissimilarity, s.dissimilarity.T)


shapes = st.tuples(st.integers(1, 6), st.integers(2, 5))
unit = st.floats(0.0, 1.0, allow_nan=False)


@st.composite
def triples(draw):
    shape = draw(shapes)
    return tuple(draw(arrays(np.float64, shape, elements=unit)) for _ in range(3))


class TestMetricProperties:
    @settings(max_examples=200, deadline=None)
    @given(triples())
    def test_metric_axioms(self, abc):
        a, b, c = abc
        ab, ba = euclidean_distance(a, b), euclidean_distance(b, a)
        assert ab == ba
        assert (ab == 0) == bool(np.array_equal(a, b))
        assert euclidean_distance(a, c) <= ab + euclidean_distance(b, c) + 1e-12

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_row_permutation_invariance(self, seed):
        rng = np.random.default_rng(seed)
        n, p, m = rng.integers(2, 8), rng.integers(2, 5), rng.integers(2, 6)
        mats = [rng.random((n, p)) for _ in range(m)]
        labels = IdealLabels.from_classes(rng.integers(0, p, n), p)
        perm = rng.permutation(n)
        g1 = EnsembleGroup.from_arrays(mats)
        g2 = EnsembleGroup.from_arrays([x[perm] for x in mats])
        l2 = IdealLabels(labels.labels[perm])
        np.testing.assert_allclose(performance_distances(g1, labels), performance_distances(g2, l2), rtol=1e-14)
        np.testing.assert_allclose(dissimilarity_matrix(g1), dissimilarity_matrix(g2), rtol=1e-14)
