"""Dataset-level geometry of majority and weighted majority voting.

Every classifier's scores over a dataset are one point in an ``n*p``
space; the 0/1 labels are the ideal point.  Majority voting takes the
centroid of the points, weighted majority voting a linear combination.
"""

from .core import (
    DistanceSummary,
    EnsembleGroup,
    IdealLabels,
    ScoreMatrix,
    as_point,
    dissimilarity_matrix,
    distance_summary,
    euclidean_distance,
    flatten_index,
    performance_distances,
    unflatten_index,
)
from .errors import (
    BudgetError,
    DomainError,
    EnsembleGeometryError,
    FormatError,
    GeometryError,
    ScoreRangeError,
    ShapeError,
    StratificationError,
    UndefinedStatisticError,
    UnsupportedMetricError,
)
from .fusion import (
    FusionResult,
    centroid_fuse,
    instance_level_objective,
    leave_one_out_centroids,
    predict_centroid_distance,
    predict_weighted_distance,
    theta_limit_curve,
    weighted_fuse,
)
from .selection import (
    SelectionResult,
    diversity_objective,
    exact_best_subset,
    greedy_forward_subset,
    local_search_subset,
    subset_objective,
)
from .weights import (
    NormalEquations,
    OptimalWeights,
    WeightVector,
    build_normal_equations,
    solve_optimal_weights,
)

__version__ = "0.1.0"
