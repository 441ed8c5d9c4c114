"""
Picking a sub-ensemble
======================

Choosing ``m'`` of ``m`` members to fuse is a hard combinatorial problem.
Exhaustive search is exact for small ``m``; greedy forward selection and
swap local search scale further.
"""

import numpy as np

from ensemble_geometry import (
    EnsembleGroup,
    IdealLabels,
    diversity_objective,
    exact_best_subset,
    greedy_forward_subset,
    local_search_subset,
    subset_objective,
)

# six points in the plane around a target at the origin
points = [(0.0, -1.0), (-1.42, 0.5), (1.42, 0.5), (-1.732, -1.0), (1.732, -1.0), (0.0, 2.0)]
group = EnsembleGroup.from_arrays([[pt] for pt in points], check_range=False)
origin = np.zeros((1, 2))

for k in (1, 2, 3):
    res = exact_best_subset(group, origin, k)
    names = [group.ids[i] for i in res.chosen]
    print(f"m'={k}: best {names} at {res.objective:.4f}")

###############################################################################
# With three members two triangles hit the origin exactly.  The tie goes to
# the lexicographically smaller index set.

for sub in [(0, 1, 2), (3, 4, 5)]:
    print(sub, f"{subset_objective(group, origin, sub):.2e}")

###############################################################################
# Squared centroid distance is mean squared member distance minus a
# diversity term, so the best subset trades accuracy against spread.

sub = (3, 4, 5)
perf2 = np.mean([np.sum(np.square(points[i])) for i in sub])
print(f"{perf2:.3f} - {diversity_objective(group, sub):.3f}")

###############################################################################
# On a larger random instance the heuristics stay close to the exact answer.

rng = np.random.default_rng(3)
labels = IdealLabels.from_classes(rng.integers(0, 3, size=8), 3)
big = EnsembleGroup.from_arrays(rng.random((14, 8, 3)))
for name, fn in [
    ("exact", exact_best_subset),
    ("local", local_search_subset),
    ("greedy", greedy_forward_subset),
]:
    res = fn(big, labels, 4)
    print(f"{name:>6}: {res.chosen} {res.objective:.4f} ({res.evaluations} evaluations)")
