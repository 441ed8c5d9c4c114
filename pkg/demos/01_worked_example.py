"""
Classifiers as points in score space
====================================

Three classifiers score two instances over three classes.  Each score
matrix is a single point in a six-dimensional space, and so is the 0/1
label matrix.  Majority voting takes the centroid of the three points.
"""

import numpy as np

from ensemble_geometry import (
    EnsembleGroup,
    IdealLabels,
    centroid_fuse,
    dissimilarity_matrix,
    performance_distances,
    predict_centroid_distance,
)

scores = [
    [[0.5, 0.6, 0.3], [0.7, 0.3, 0.9]],
    [[0.4, 0.7, 0.2], [0.3, 0.6, 0.7]],
    [[0.6, 0.8, 0.4], [0.2, 0.6, 0.8]],
]
group = EnsembleGroup.from_arrays(scores, ids=["cf1", "cf2", "cf3"])

# the second instance belongs to two classes at once
ideal = IdealLabels([[0, 1, 0], [1, 0, 1]])

# distance to the ideal point measures how good each classifier is
perf = performance_distances(group, ideal)
for cid, d in zip(group.ids, perf):
    print(f"{cid}: distance to ideal {d:.4f}")

# distance between two classifiers measures how different they are
diss = dissimilarity_matrix(group)
print("pairwise distances\n", np.round(diss, 4))

###############################################################################
# Fusing by the coordinate-wise mean gives a point closer to the ideal than
# the average member.

res = centroid_fuse(group, ideal)
print("centroid scores\n", res.fused.scores)
print(f"centroid distance {res.distance_to_ideal:.4f}  vs mean member {perf.mean():.4f}")

###############################################################################
# The centroid distance follows from the member distances alone, without
# building the centroid.

print(f"from distances only: {predict_centroid_distance(perf, diss):.4f}")
