"""Majority voting as centroid fusion, weighted linear fusion, and the
closed-form distance predictors built on top of them."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Optional

import numpy as np

from .core import (
    EnsembleGroup,
    IdealLabels,
    ScoreMatrix,
    as_point,
    dissimilarity_matrix,
    euclidean_distance,
    performance_distances,
)
from .errors import DomainError, GeometryError, ShapeError

__all__ = [
    "FusionResult",
    "centroid_fuse",
    "weighted_fuse",
    "predict_centroid_distance",
    "predict_weighted_distance",
    "theta_limit_curve",
    "instance_level_objective",
    "leave_one_out_centroids",
]

RADICAND_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class FusionResult:
    fused: ScoreMatrix
    method: Literal["centroid", "weighted"]
    weights: Optional[np.ndarray] = None
    distance_to_ideal: Optional[float] = None


def _with_distance(fused: ScoreMatrix, ideal: IdealLabels | None) -> float | None:
    return None if ideal is None else euclidean_distance(fused, ideal)


def centroid_fuse(group: EnsembleGroup, ideal: IdealLabels | None = None) -> FusionResult:
    """Coordinate-wise mean of the member points (soft majority voting).

    If ``ideal`` is given, the fused point's distance to it is filled in.
    """
    if group.m < 1:
        raise ShapeError("cannot fuse an empty group")
    c = np.mean([s.scores for s in group], axis=0)
    fused = ScoreMatrix("fused", c, check_range=False)
    return FusionResult(fused, "centroid", None, _with_distance(fused, ideal))


def weighted_fuse(
    group: EnsembleGroup, w, ideal: IdealLabels | None = None
) -> FusionResult:
    """Linear combination ``sum_k w[k] * S^k``.

    Weights are unconstrained, so the fused entries may leave ``[0, 1]``.
    """
    w = np.asarray(w, dtype=np.float64).reshape(-1)
    if w.size != group.m:
        raise ShapeError(f"got {w.size} weights for {group.m} members")
    f = np.tensordot(w, np.stack([s.scores for s in group]), axes=1)
    fused = ScoreMatrix("fused", f, check_range=False)
    return FusionResult(fused, "weighted", w, _with_distance(fused, ideal))


def _centroid_radicand(perf, diss) -> tuple[float, int]:
    perf = np.asarray(perf, dtype=np.float64).reshape(-1)
    diss = np.asarray(diss, dtype=np.float64)
    m = perf.size
    if m < 1:
        raise ShapeError("need at least one performance distance")
    if diss.shape != (m, m):
        raise ShapeError(f"dissimilarity must be {m}x{m}, got {diss.shape}")
    if np.any(perf < 0) or np.any(diss < 0):
        raise GeometryError("distances must be nonnegative")
    if not np.allclose(diss, diss.T, rtol=0, atol=1e-12) or np.any(np.diag(diss) != 0):
        raise GeometryError("dissimilarity must be symmetric with zero diagonal")
    pair_sq = np.sum(np.triu(diss, 1) ** 2)
    return m * np.sum(perf**2) - pair_sq, m


def predict_centroid_distance(perf, diss) -> float:
    """Distance from the centroid to the ideal point, from distances alone.

    ``(1/m) * sqrt(m * sum_i perf_i**2 - sum_{i<j} diss_ij**2)``

    Parameters
    ----------
    perf : array_like of shape (m,)
        Each member's distance to the ideal point.
    diss : array_like of shape (m, m)
        Pairwise member distances; symmetric with a zero diagonal.

    Raises
    ------
    GeometryError
        If the radicand is below ``-1e-9``: no point set has these distances.
    """
    radicand, m = _centroid_radicand(perf, diss)
    if radicand < 0:
        if radicand < -RADICAND_TOL:
            raise GeometryError(
                f"inconsistent distance data: radicand {radicand:.3e} < 0"
            )
        radicand = 0.0
    return float(np.sqrt(radicand) / m)


def predict_weighted_distance(group: EnsembleGroup, w, ideal: IdealLabels) -> float:
    """Distance of ``sum_k w[k] S^k`` to the ideal point via the centroid formula.

    Each member is scaled by ``m * w[k]`` first, so the centroid of the
    scaled points coincides with the weighted fusion.
    """
    w = np.asarray(w, dtype=np.float64).reshape(-1)
    if w.size != group.m:
        raise ShapeError(f"got {w.size} weights for {group.m} members")
    if group.shape != as_point(ideal).shape:
        raise ShapeError(f"group shape {group.shape} != ideal shape {as_point(ideal).shape}")
    scaled = EnsembleGroup(
        tuple(
            ScoreMatrix(s.classifier_id, group.m * wk * s.scores, check_range=False)
            for s, wk in zip(group, w)
        )
    )
    return predict_centroid_distance(
        performance_distances(scaled, ideal), dissimilarity_matrix(scaled)
    )


def theta_limit_curve(theta: float, m: int) -> float:
    """Centroid distance, in units of the common member distance, for ``m``
    equidistant members whose pairwise distance is ``theta`` times that unit.

    Raises
    ------
    DomainError
        When ``theta`` exceeds ``sqrt(2m / (m - 1))``, the largest ratio
        realisable for this ``m``.
    """
    if m < 2:
        raise DomainError(f"m must be >= 2, got {m}")
    if theta < 0:
        raise DomainError(f"theta must be nonnegative, got {theta}")
    radicand = 1.0 - (m - 1) / (2.0 * m) * theta**2
    if radicand < 0:
        # absorb rounding at the exact bound, e.g. theta = sqrt(3), m = 3
        if radicand < -1e-12:
            limit = np.sqrt(2.0 * m / (m - 1))
            raise DomainError(
                f"theta={theta} exceeds the maximum {limit:.6g} for m={m}"
            )
        radicand = 0.0
    return float(np.sqrt(radicand))


def instance_level_objective(F, ideal: IdealLabels) -> float:
    """Sum over instances of each instance's own Euclidean distance."""
    f, o = as_point(F), as_point(ideal)
    if f.shape != o.shape:
        raise ShapeError(f"shape mismatch: {f.shape} vs {o.shape}")
    return float(np.sum(np.sqrt(np.sum((f - o) ** 2, axis=1))))


def leave_one_out_centroids(group: EnsembleGroup) -> list[ScoreMatrix]:
    """Centroids of the ``m`` subgroups that each drop one member."""
    if group.m < 2:
        raise ShapeError("leave-one-out needs at least two members")
    x = np.stack([s.scores for s in group])
    total = x.sum(axis=0)
    return [
        ScoreMatrix(f"loo-{s.classifier_id}", (total - x[k]) / (group.m - 1), check_range=False)
        for k, s in enumerate(group)
    ]
