import itertools
import math

import numpy as np
import pytest

from ensemble_geometry import (
    BudgetError,
    EnsembleGroup,
    centroid_fuse,
    diversity_objective,
    euclidean_distance,
    exact_best_subset,
    greedy_forward_subset,
    local_search_subset,
    performance_distances,
)
from ensemble_geometry.selection import _combination_at, subset_objective

from _helpers import six_point_group, random_group, random_groups


def _brute_force(group, ideal, k):
    # oracle: refuse every subset, keep the lexicographically first minimum
    best, best_val = None, math.inf
    for combo in itertools.combinations(range(group.m), k):
        v = euclidean_distance(centroid_fuse(group.subset(combo)).fused, ideal)
        if v < best_val - 1e-12:
            best, best_val = combo, v
    return best, best_val


class TestSixPoints:
    def test_single_point(self):
        group, origin = six_point_group()
        res = exact_best_subset(group, origin, 1)
        assert res.chosen == (0,) and res.objective == pytest.approx(1.0)
        assert res.evaluations == 6

    def test_pairs_follow_the_coordinates(self):
        group, origin = six_point_group()
        res = exact_best_subset(group, origin, 2)
        assert (res.chosen, res.objective) == _brute_force(group, origin, 2)
        # S2+S5 and S3+S4 tie below the 0.5 reached by S1+S6 and S2+S3
        assert res.chosen == (1, 4)
        assert res.objective == pytest.approx(0.29467948690059853, abs=1e-12)

    def test_triples_tie_at_zero(self):
        group, origin = six_point_group()
        res = exact_best_subset(group, origin, 3)
        assert res.objective == 0.0
        # both {S1,S2,S3} and {S4,S5,S6} have centroid exactly at O
        for combo in [(0, 1, 2), (3, 4, 5)]:
            assert subset_objective(group, origin, combo) == 0.0
        assert res.chosen == (0, 1, 2)

    def test_greedy_pair(self):
        group, origin = six_point_group()
        res = greedy_forward_subset(group, origin, 2)
        assert res.chosen == (0, 5) and res.objective == pytest.approx(0.5, abs=1e-12)

    def test_local_search_reaches_zero(self):
        group, origin = six_point_group()
        res = local_search_subset(group, origin, 3)
        assert res.objective == 0.0

    def test_diversity_of_outer_triangle(self):
        group, origin = six_point_group()
        div = diversity_objective(group, [3, 4, 5])
        assert div == pytest.approx(4.0, abs=1e-3)
        perf2 = performance_distances(group.subset([3, 4, 5]), origin) ** 2
        assert perf2.mean() - div == pytest.approx(0.0, abs=1e-12)


class TestDiversityObjective:
    def test_trivial(self):
        group, _ = six_point_group()
        assert diversity_objective(group, [2]) == 0.0
        twins = EnsembleGroup.from_arrays([[[0.3, 0.4]], [[0.3, 0.4]]])
        assert diversity_objective(twins, [0, 1]) == 0.0
        with pytest.raises(ValueError):
            diversity_objective(group, [])

    def test_identity_with_centroid_distance(self):
        rng = np.random.default_rng(41)
        for group, ideal in random_groups(200, seed=42):
            k = int(rng.integers(1, group.m + 1))
            sub = sorted(rng.choice(group.m, size=k, replace=False))
            perf2 = performance_distances(group.subset(sub), ideal) ** 2
            lhs = perf2.mean() - diversity_objective(group, sub)
            rhs = euclidean_distance(centroid_fuse(group.subset(sub)).fused, ideal) ** 2
            assert lhs == pytest.approx(rhs, abs=1e-9)


class TestExact:
    def test_matches_brute_force(self):
        rng = np.random.default_rng(43)
        for _ in range(60):
            group, ideal = random_group(rng, (3, 8))
            k = int(rng.integers(2, group.m))
            res = exact_best_subset(group, ideal, k)
            ref_combo, ref_val = _brute_force(group, ideal, k)
            assert res.objective == pytest.approx(ref_val, abs=1e-12)
            assert res.chosen == ref_combo
            assert res.evaluations == math.comb(group.m, k)

    def test_budget(self):
        rng = np.random.default_rng(44)
        group, ideal = random_group(rng, (20, 20))
        with pytest.raises(BudgetError, match="greedy or local"):
            exact_best_subset(group, ideal, 10, cap=1000)

    def test_m_prime_bounds(self):
        group, origin = six_point_group()
        with pytest.raises(ValueError):
            exact_best_subset(group, origin, 6)
        with pytest.raises(ValueError):
            exact_best_subset(group, origin, 2, objective="median")

    def test_wmv_never_worse_than_mv(self):
        for group, ideal in random_groups(40, seed=45, m_range=(4, 7), n_range=(3, 8)):
            k = 2
            mv = exact_best_subset(group, ideal, k, "mv")
            wmv = exact_best_subset(group, ideal, k, "wmv")
            assert wmv.objective <= mv.objective + 1e-10

    def test_combination_unranking(self):
        for m, k in [(6, 3), (9, 4), (10, 1)]:
            for rank, combo in enumerate(itertools.combinations(range(m), k)):
                assert _combination_at(m, k, rank) == combo


class TestHeuristics:
    def test_greedy_full_group(self):
        group, origin = six_point_group()
        res = greedy_forward_subset(group, origin, group.m)
        assert res.chosen == tuple(range(6))
        assert res.objective == pytest.approx(centroid_fuse(group, origin).distance_to_ideal)

    @pytest.mark.parametrize("objective", ["mv", "wmv"])
    def test_ordering_exact_local_greedy(self, objective):
        count = 60 if objective == "mv" else 20
        for group, ideal in random_groups(count, seed=46, m_range=(6, 9)):
            e = exact_best_subset(group, ideal, 3, objective)
            l = local_search_subset(group, ideal, 3, objective)
            g = greedy_forward_subset(group, ideal, 3, objective)
            assert e.objective <= l.objective + 1e-12
            assert l.objective <= g.objective + 1e-12

    def test_local_search_quality(self):
        close = 0
        for group, ideal in random_groups(200, seed=47, m_range=(10, 10)):
            e = exact_best_subset(group, ideal, 3)
            l = local_search_subset(group, ideal, 3)
            close += l.objective <= 1.1 * e.objective
        assert close >= 180

    def test_determinism(self):
        group, ideal = random_groups(1, seed=48, m_range=(9, 9))[0]
        a = local_search_subset(group, ideal, 4, seed=7)
        b = local_search_subset(group, ideal, 4, seed=7)
        assert a == b
        assert greedy_forward_subset(group, ideal, 4) == greedy_forward_subset(group, ideal, 4)

    def test_iteration_cap(self):
        group, ideal = random_groups(1, seed=49, m_range=(9, 9))[0]
        res = local_search_subset(group, ideal, 3, iterations=1, restarts=0)
        g = greedy_forward_subset(group, ideal, 3)
        assert res.objective <= g.objective
        assert res.evaluations <= g.evaluations + 3 * 6
