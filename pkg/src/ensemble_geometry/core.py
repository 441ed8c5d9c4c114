"""Score-space data model and Euclidean metrics.

Each classifier's scores for a whole dataset (``n`` instances by ``p``
classes) form a single point in an ``n*p``-dimensional space.  The 0/1
label matrix is the ideal point.  Performance of a classifier is its
distance to the ideal point; dissimilarity of two classifiers is the
distance between their points.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np

from .errors import ScoreRangeError, ShapeError

__all__ = [
    "ScoreMatrix",
    "IdealLabels",
    "EnsembleGroup",
    "DistanceSummary",
    "as_point",
    "flatten_index",
    "unflatten_index",
    "euclidean_distance",
    "performance_distances",
    "dissimilarity_matrix",
    "distance_summary",
]


def _as_matrix(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be a 2-D (n, p) array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ScoreMatrix:
    """Probability scores of one classifier for all instances and classes.

    Parameters
    ----------
    classifier_id : str
        Identifier, unique within an :class:`EnsembleGroup`.
    scores : array_like of shape (n, p)
        Entries must lie in ``[0, 1]`` unless ``check_range=False``.
    check_range : bool
        Switched off for fused points, which leave the unit cube under
        arbitrary weights, and for purely geometric configurations.
    """

    classifier_id: str
    scores: np.ndarray
    check_range: InitVar[bool] = True

    def __post_init__(self, check_range: bool) -> None:
        scores = _as_matrix(self.scores, "scores")
        n, p = scores.shape
        if n < 1 or p < 2:
            raise ShapeError(f"need n >= 1 and p >= 2, got n={n}, p={p}")
        if not np.all(np.isfinite(scores)):
            raise ScoreRangeError(f"{self.classifier_id}: scores contain NaN or Inf")
        if check_range and (scores.min() < 0.0 or scores.max() > 1.0):
            bad = np.argwhere((scores < 0.0) | (scores > 1.0))[0]
            raise ScoreRangeError(
                f"{self.classifier_id}: score at instance {bad[0]}, class {bad[1]} "
                f"is {scores[tuple(bad)]!r}, outside [0, 1]"
            )
        object.__setattr__(self, "scores", scores)

    @property
    def n(self) -> int:
        return self.scores.shape[0]

    @property
    def p(self) -> int:
        return self.scores.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.scores.shape

    @property
    def flat(self) -> np.ndarray:
        """Instance-major flattening, length ``n*p``."""
        return self.scores.reshape(-1)

    def __array__(self, dtype=None, copy=None):
        return self.scores if dtype is None else self.scores.astype(dtype)


@dataclass(frozen=True, eq=False)
class IdealLabels:
    """The 0/1 real-label matrix, i.e. the ideal point.

    Rows may hold several ones (multi-label instances) but never none.
    """

    labels: np.ndarray

    def __post_init__(self) -> None:
        labels = _as_matrix(self.labels, "labels")
        n, p = labels.shape
        if n < 1 or p < 2:
            raise ShapeError(f"need n >= 1 and p >= 2, got n={n}, p={p}")
        if not np.all((labels == 0.0) | (labels == 1.0)):
            raise ScoreRangeError("ideal labels must be 0 or 1")
        empty = np.flatnonzero(labels.sum(axis=1) == 0)
        if empty.size:
            raise ScoreRangeError(f"instance {empty[0]} has no true label")
        object.__setattr__(self, "labels", labels)

    @classmethod
    def from_classes(cls, classes: Sequence[int], p: int) -> "IdealLabels":
        """One-hot ideal point from a vector of class indices."""
        classes = np.asarray(classes, dtype=np.intp)
        if classes.size and (classes.min() < 0 or classes.max() >= p):
            raise ScoreRangeError(f"class index out of range for p={p}")
        onehot = np.zeros((classes.size, p))
        onehot[np.arange(classes.size), classes] = 1.0
        return cls(onehot)

    @property
    def n(self) -> int:
        return self.labels.shape[0]

    @property
    def p(self) -> int:
        return self.labels.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.labels.shape

    @property
    def flat(self) -> np.ndarray:
        return self.labels.reshape(-1)

    @property
    def is_single_label(self) -> bool:
        return bool(np.all(self.labels.sum(axis=1) == 1))

    def __array__(self, dtype=None, copy=None):
        return self.labels if dtype is None else self.labels.astype(dtype)


@dataclass(frozen=True, eq=False)
class EnsembleGroup:
    """An ordered set of ``m`` score points sharing one ``(n, p)`` shape."""

    members: tuple[ScoreMatrix, ...] = field()

    def __post_init__(self) -> None:
        members = tuple(self.members)
        if not members:
            raise ShapeError("an ensemble group needs at least one member")
        shape = members[0].shape
        for s in members[1:]:
            if s.shape != shape:
                raise ShapeError(
                    f"member {s.classifier_id!r} has shape {s.shape}, expected {shape}"
                )
        ids = [s.classifier_id for s in members]
        if len(set(ids)) != len(ids):
            raise ShapeError("classifier ids must be unique within a group")
        object.__setattr__(self, "members", members)

    @classmethod
    def from_arrays(
        cls,
        arrays: Iterable,
        ids: Sequence[str] | None = None,
        check_range: bool = True,
    ) -> "EnsembleGroup":
        """Build a group from raw ``(n, p)`` arrays.

        ``check_range=False`` admits arbitrary real points, which is how
        purely geometric configurations are expressed.
        """
        arrays = list(arrays)
        if ids is None:
            ids = [f"S{k + 1}" for k in range(len(arrays))]
        return cls(tuple(ScoreMatrix(i, a, check_range) for i, a in zip(ids, arrays)))

    @property
    def m(self) -> int:
        return len(self.members)

    @property
    def shape(self) -> tuple[int, int]:
        return self.members[0].shape

    @property
    def ids(self) -> list[str]:
        return [s.classifier_id for s in self.members]

    def stacked(self) -> np.ndarray:
        """Members as rows of an ``(m, n*p)`` array."""
        return np.stack([s.flat for s in self.members])

    def subset(self, indices: Iterable[int]) -> "EnsembleGroup":
        return EnsembleGroup(tuple(self.members[i] for i in indices))

    def __len__(self) -> int:
        return self.m

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, k: int) -> ScoreMatrix:
        return self.members[k]


@dataclass(frozen=True, eq=False)
class DistanceSummary:
    """Performance distances (to the ideal point) and pairwise dissimilarities."""

    performance: np.ndarray
    dissimilarity: np.ndarray

    def __post_init__(self) -> None:
        perf = np.array(self.performance, dtype=np.float64).reshape(-1)
        diss = np.array(self.dissimilarity, dtype=np.float64)
        m = perf.size
        if diss.shape != (m, m):
            raise ShapeError(f"dissimilarity must be {m}x{m}, got {diss.shape}")
        if np.any(perf < 0) or np.any(diss < 0):
            raise ScoreRangeError("distances must be nonnegative")
        if not np.array_equal(diss, diss.T) or np.any(np.diag(diss) != 0):
            raise ShapeError("dissimilarity must be symmetric with zero diagonal")
        perf.setflags(write=False)
        diss.setflags(write=False)
        object.__setattr__(self, "performance", perf)
        object.__setattr__(self, "dissimilarity", diss)

    @property
    def m(self) -> int:
        return self.performance.size


Point = Union[ScoreMatrix, IdealLabels, np.ndarray]


def flatten_index(i: int, j: int, p: int) -> int:
    """1-based linear index of instance ``i``, class ``j`` (instance-major)."""
    if p < 1 or i < 1 or not 1 <= j <= p:
        raise ValueError(f"indices out of range: i={i}, j={j}, p={p}")
    return (i - 1) * p + j


def unflatten_index(l: int, p: int) -> tuple[int, int]:
    """Inverse of :func:`flatten_index`."""
    if p < 1 or l < 1:
        raise ValueError(f"index out of range: l={l}, p={p}")
    q, r = divmod(l - 1, p)
    return q + 1, r + 1


def as_point(x: Point) -> np.ndarray:
    """The ``(n, p)`` values of a score matrix, label matrix or plain array."""
    if isinstance(x, ScoreMatrix):
        return x.scores
    if isinstance(x, IdealLabels):
        return x.labels
    return np.asarray(x, dtype=np.float64)


def euclidean_distance(a: Point, b: Point) -> float:
    """Distance between two points of the same ``(n, p)`` shape."""
    av, bv = as_point(a), as_point(b)
    if av.shape != bv.shape:
        raise ShapeError(f"shape mismatch: {av.shape} vs {bv.shape}")
    diff = av - bv
    ss = np.sum(diff**2)
    if ss < 1e-280:
        # squares underflow for subnormal-scale differences; rescale first
        scale = np.max(np.abs(diff))
        if scale == 0:
            return 0.0
        return float(scale * np.sqrt(np.sum((diff / scale) ** 2)))
    return float(np.sqrt(ss))


def performance_distances(group: EnsembleGroup, ideal: Point) -> np.ndarray:
    o = as_point(ideal)
    if group.shape != o.shape:
        raise ShapeError(f"group shape {group.shape} != ideal shape {o.shape}")
    diff = group.stacked() - o.reshape(-1)
    return np.sqrt(np.sum(diff**2, axis=1))


def dissimilarity_matrix(group: EnsembleGroup) -> np.ndarray:
    # explicit differences, not the Gram identity: keeps tiny distances accurate
    x = group.stacked()
    m = x.shape[0]
    out = np.zeros((m, m))
    for i in range(m - 1):
        d = np.sqrt(np.sum((x[i + 1 :] - x[i]) ** 2, axis=1))
        out[i, i + 1 :] = d
        out[i + 1 :, i] = d
    return out


def distance_summary(group: EnsembleGroup, ideal: Point) -> DistanceSummary:
    return DistanceSummary(performance_distances(group, ideal), dissimilarity_matrix(group))
