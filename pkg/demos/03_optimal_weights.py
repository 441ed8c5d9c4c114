"""
Least-squares weights
=====================

Weighted voting combines members linearly.  The weights that bring the
fused point closest to the ideal point solve a small linear system: the
fused point is the projection of the ideal point onto the members' span.
"""

import numpy as np

from ensemble_geometry import (
    EnsembleGroup,
    IdealLabels,
    build_normal_equations,
    centroid_fuse,
    predict_weighted_distance,
    solve_optimal_weights,
    weighted_fuse,
)

rng = np.random.default_rng(0)
n, p, m = 20, 3, 5
labels = rng.integers(0, p, size=n)
ideal = IdealLabels.from_classes(labels, p)

# noisy members: the true class gets a boost of varying strength
members = []
for k in range(m):
    s = rng.random((n, p))
    s[np.arange(n), labels] += 0.3 * (k + 1)
    members.append(s / s.sum(axis=1, keepdims=True))
group = EnsembleGroup.from_arrays(members)

eq = build_normal_equations(group, ideal)
print("Gram matrix\n", np.round(eq.gram, 3))

sol = solve_optimal_weights(group, ideal)
print("weights", np.round(sol.weights.values, 4))
print(f"weights sum to {sol.weights.values.sum():.4f}; nothing forces them to 1")

mv = centroid_fuse(group, ideal).distance_to_ideal
wmv = weighted_fuse(group, sol.weights, ideal).distance_to_ideal
print(f"majority voting {mv:.4f}  weighted voting {wmv:.4f}")

# the weighted distance can also be predicted from distances alone
print(f"predicted {predict_weighted_distance(group, sol.weights, ideal):.4f}")

###############################################################################
# Adding a member never hurts the optimum on the data the weights were fit
# on: the old weights padded with a zero remain available.

for k in range(1, m + 1):
    d = solve_optimal_weights(group.subset(range(k)), ideal).distance
    print(f"first {k} members: {d:.4f}")

###############################################################################
# Two identical members make the system singular.  A tiny ridge is added
# and flagged.

twin = EnsembleGroup.from_arrays([members[0], members[0]])
sol = solve_optimal_weights(twin, ideal)
print(f"ridge applied: {sol.ridge_applied}, lambda {sol.ridge_lambda:.2e}")
