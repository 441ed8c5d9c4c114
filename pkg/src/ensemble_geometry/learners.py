"""Bootstrap-trained random trees: a small, dependency-free source of many
nearly equally good base classifiers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .core import EnsembleGroup, IdealLabels, ScoreMatrix
from .errors import ShapeError, StratificationError

__all__ = [
    "Dataset",
    "RandomTreeModel",
    "Forest",
    "stratified_split",
    "bootstrap_sample",
    "train_random_tree",
    "predict_scores",
    "build_forest",
]

Seed = Union[int, np.random.SeedSequence, None]


@dataclass(frozen=True, eq=False)
class Dataset:
    features: np.ndarray
    labels: np.ndarray
    class_names: tuple[str, ...]

    def __post_init__(self) -> None:
        x = np.array(self.features, dtype=np.float64)
        y = np.array(self.labels, dtype=np.intp).reshape(-1)
        names = tuple(str(c) for c in self.class_names)
        if x.ndim != 2 or x.shape[1] < 1:
            raise ShapeError(f"features must be (n, d) with d >= 1, got {x.shape}")
        if x.shape[0] != y.size:
            raise ShapeError(f"{x.shape[0]} feature rows but {y.size} labels")
        if not np.all(np.isfinite(x)):
            raise ValueError("features contain NaN or Inf")
        if y.size and (y.min() < 0 or y.max() >= len(names)):
            raise ValueError(f"label index out of range for {len(names)} classes")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "features", x)
        object.__setattr__(self, "labels", y)
        object.__setattr__(self, "class_names", names)

    @property
    def n(self) -> int:
        return self.labels.size

    @property
    def d(self) -> int:
        return self.features.shape[1]

    @property
    def p(self) -> int:
        return len(self.class_names)

    def take(self, idx) -> "Dataset":
        idx = np.asarray(idx, dtype=np.intp)
        return Dataset(self.features[idx], self.labels[idx], self.class_names)

    def ideal(self) -> IdealLabels:
        return IdealLabels.from_classes(self.labels, self.p)


def _rng(seed: Seed) -> np.random.Generator:
    return np.random.default_rng(seed)


def stratified_split(
    ds: Dataset, train_fraction: float = 0.8, seed: Seed = 42
) -> tuple[Dataset, Dataset]:
    """Per-class proportional train/test split.

    Each class contributes ``round(train_fraction * count)`` instances to
    the training side (half rounds up), clipped so that both sides keep at
    least one instance of every class.  Instances keep their original
    relative order on each side.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    if ds.p < 2:
        raise StratificationError(f"need at least two classes, got {ds.p}")
    rng = _rng(seed)
    train_idx = []
    for c in range(ds.p):
        members = np.flatnonzero(ds.labels == c)
        if members.size < 2:
            raise StratificationError(
                f"class {ds.class_names[c]!r} has {members.size} instance(s); "
                "at least 2 are needed to stratify"
            )
        k = int(math.floor(train_fraction * members.size + 0.5))
        k = min(max(k, 1), members.size - 1)
        train_idx.append(rng.permutation(members)[:k])
    train = np.sort(np.concatenate(train_idx))
    test = np.setdiff1d(np.arange(ds.n), train)
    return ds.take(train), ds.take(test)


def bootstrap_sample(ds: Dataset, seed: Seed = 42) -> Dataset:
    """``n`` draws with replacement."""
    if ds.n < 1:
        raise ValueError("cannot bootstrap an empty dataset")
    return ds.take(_rng(seed).integers(0, ds.n, size=ds.n))


@dataclass(frozen=True, eq=False)
class RandomTreeModel:
    """A binary tree stored as parallel node arrays.

    Internal node ``i`` sends ``x[feature[i]] <= threshold[i]`` to
    ``left[i]``, otherwise to ``right[i]``.  Leaves have ``feature == -1``
    and keep the raw class counts of the training instances reaching them.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray
    n_features: int
    params: dict = field(default_factory=dict)

    @property
    def n_nodes(self) -> int:
        return self.feature.size

    @property
    def n_leaves(self) -> int:
        return int(np.sum(self.feature < 0))

    @property
    def p(self) -> int:
        return self.counts.shape[1]

    @property
    def depth(self) -> int:
        depth = np.zeros(self.n_nodes, dtype=np.intp)
        for i in range(self.n_nodes):
            if self.feature[i] >= 0:
                depth[self.left[i]] = depth[self.right[i]] = depth[i] + 1
        return int(depth.max())

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Leaf index reached by each row of ``x``."""
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.n_features:
            raise ShapeError(
                f"expected {self.n_features} features, got array of shape {x.shape}"
            )
        node = np.zeros(x.shape[0], dtype=np.intp)
        rows = np.arange(x.shape[0])
        while True:
            f = self.feature[node]
            active = f >= 0
            if not active.any():
                return node
            a = rows[active]
            na = node[active]
            go_left = x[a, f[active]] <= self.threshold[na]
            node[active] = np.where(go_left, self.left[na], self.right[na])


def _best_split(xs: np.ndarray, y: np.ndarray, p: int, min_leaf: int):
    """Gini-optimal midpoint split over the columns of ``xs``.

    Returns ``(column, threshold)`` or ``None`` when no column admits a
    split leaving ``min_leaf`` instances on each side.
    """
    n, k = xs.shape
    order = np.argsort(xs, axis=0, kind="stable")
    sv = np.take_along_axis(xs, order, axis=0)
    onehot = np.zeros((n, p))
    onehot[np.arange(n), y] = 1.0
    left = np.cumsum(onehot[order], axis=0)[:-1]  # (n-1, k, p)
    total = left[-1] + onehot[order[-1]]
    right = total - left
    nl = np.arange(1, n, dtype=np.float64)[:, None]
    nr = n - nl
    # minimising weighted Gini == maximising sum_c cl^2/nl + sum_c cr^2/nr
    purity = np.sum(left**2, axis=2) / nl + np.sum(right**2, axis=2) / nr
    valid = sv[1:] > sv[:-1]
    if min_leaf > 1:
        valid &= (nl >= min_leaf) & (nr >= min_leaf)
    if not valid.any():
        return None
    purity = np.where(valid, purity, -np.inf)
    # column-major argmax: first sampled feature wins ties, then lowest position
    flat = int(np.argmax(purity.T))
    col, pos = divmod(flat, n - 1)
    lo, hi = sv[pos, col], sv[pos + 1, col]
    thr = 0.5 * (lo + hi)
    if not lo <= thr < hi:
        thr = lo
    return col, thr


def train_random_tree(
    ds: Dataset,
    K: int,
    seed: Seed = 42,
    max_depth: int = 20,
    min_leaf: int = 1,
) -> RandomTreeModel:
    """Grow a random tree by greedy Gini splitting.

    At every node ``K`` distinct features are drawn and the best midpoint
    threshold among them is used.  Growth stops at pure nodes, at
    ``max_depth``, when a node is too small to leave ``min_leaf`` instances
    per side, or when none of the drawn features varies.
    """
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if ds.n < 1:
        raise ValueError("cannot train on an empty dataset")
    rng = _rng(seed)
    K = min(K, ds.d)
    x, y, p = ds.features, ds.labels, ds.p
    feature, threshold, left, right, counts = [], [], [], [], []

    def new_node(idx):
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        counts.append(np.bincount(y[idx], minlength=p))
        return len(feature) - 1

    stack = [(new_node(np.arange(ds.n)), np.arange(ds.n), 0)]
    while stack:
        node, idx, depth = stack.pop()
        c = counts[node]
        if depth >= max_depth or idx.size < 2 * min_leaf or np.count_nonzero(c) <= 1:
            continue
        feats = rng.choice(ds.d, size=K, replace=False)
        split = _best_split(x[np.ix_(idx, feats)], y[idx], p, min_leaf)
        if split is None:
            continue
        col, thr = split
        f = int(feats[col])
        mask = x[idx, f] <= thr
        li, ri = idx[mask], idx[~mask]
        feature[node], threshold[node] = f, float(thr)
        left[node], right[node] = new_node(li), new_node(ri)
        stack.append((right[node], ri, depth + 1))
        stack.append((left[node], li, depth + 1))

    return RandomTreeModel(
        np.array(feature, dtype=np.intp),
        np.array(threshold),
        np.array(left, dtype=np.intp),
        np.array(right, dtype=np.intp),
        np.array(counts, dtype=np.float64),
        ds.d,
        {"max_depth": max_depth, "min_leaf": min_leaf, "K": K},
    )


def predict_scores(model: RandomTreeModel, ds: Dataset, classifier_id: str = "tree") -> ScoreMatrix:
    """Laplace-smoothed leaf frequencies ``(count_j + 1) / (total + p)``."""
    if ds.p != model.p:
        raise ShapeError(f"dataset has {ds.p} classes, model was trained on {model.p}")
    leaf_counts = model.counts[model.apply(ds.features)]
    scores = (leaf_counts + 1.0) / (leaf_counts.sum(axis=1, keepdims=True) + model.p)
    return ScoreMatrix(classifier_id, scores)


@dataclass(frozen=True, eq=False)
class Forest:
    """Independently trained random trees; scores any compatible dataset."""

    trees: tuple[RandomTreeModel, ...]
    ids: tuple[str, ...]

    @property
    def m(self) -> int:
        return len(self.trees)

    def score_group(self, ds: Dataset, members: Sequence[int] | None = None) -> EnsembleGroup:
        members = range(self.m) if members is None else members
        return EnsembleGroup(
            tuple(predict_scores(self.trees[k], ds, self.ids[k]) for k in members)
        )


def build_forest(train: Dataset, m: int, seed: int = 42, max_depth: int = 20, min_leaf: int = 1) -> Forest:
    """Train ``m`` trees, each on its own bootstrap sample with
    ``K = ceil(sqrt(d))``; tree ``k`` derives its randomness from ``seed + k``."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    K = math.ceil(math.sqrt(train.d))
    trees = []
    for k in range(m):
        boot_seed, tree_seed = np.random.SeedSequence(seed + k).spawn(2)
        sample = bootstrap_sample(train, boot_seed)
        trees.append(train_random_tree(sample, K, tree_seed, max_depth, min_leaf))
    return Forest(tuple(trees), tuple(f"tree-{k}" for k in range(m)))
