"""Accuracy, the ensemble-shrinking experiment, and paired statistics."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, fields
from typing import Sequence

import numpy as np

from .core import EnsembleGroup, IdealLabels, ScoreMatrix, euclidean_distance
from .errors import ShapeError, UndefinedStatisticError, UnsupportedMetricError
from .fusion import centroid_fuse, weighted_fuse
from .learners import Dataset, build_forest, stratified_split
from .weights import solve_optimal_weights

__all__ = [
    "ExperimentRow",
    "PairedT",
    "InvariantCheck",
    "accuracy",
    "shrink_trial",
    "shrink_trials",
    "average_rows",
    "shrink_experiment",
    "check_train_invariants",
    "pearson",
    "paired_t",
]

INVARIANT_SLACK = 1e-10


@dataclass(frozen=True)
class ExperimentRow:
    m: int
    rf_train_acc: float
    wrf_train_acc: float
    rf_train_dist: float
    wrf_train_dist: float
    rf_test_acc: float
    wrf_test_acc: float
    rf_test_dist: float
    wrf_test_dist: float
    best_single_acc: float
    avg_single_acc: float
    # not part of the results table; kept for the train-side invariant checks
    avg_single_train_dist: float = math.nan

    @classmethod
    def table_fields(cls) -> list[str]:
        return [f.name for f in fields(cls) if f.name != "avg_single_train_dist"]

    def as_table_dict(self) -> dict:
        d = asdict(self)
        d.pop("avg_single_train_dist")
        return d


def accuracy(S, ideal: IdealLabels) -> float:
    """Fraction of instances whose highest score hits the true class.

    Ties go to the lowest class index.  Only defined for single-label data.
    """
    if not ideal.is_single_label:
        raise UnsupportedMetricError(
            "accuracy needs exactly one true class per instance; use distance instead"
        )
    s = S.scores if isinstance(S, ScoreMatrix) else np.asarray(S, dtype=np.float64)
    if s.shape != ideal.shape:
        raise ShapeError(f"shape mismatch: {s.shape} vs {ideal.shape}")
    return float(np.mean(np.argmax(s, axis=1) == np.argmax(ideal.labels, axis=1)))


def shrink_trial(
    ds: Dataset,
    m_max: int = 30,
    seed=42,
    train_fraction: float = 0.8,
) -> list[ExperimentRow]:
    """One trial: split, grow ``m_max`` trees, then drop one random tree at a
    time down to two, refitting optimal weights on the training side at
    every size.  Rows come back in ascending ``m``.

    ``best_single_acc`` and ``avg_single_acc`` describe the current members
    on the test partition.
    """
    if m_max < 2:
        raise ValueError(f"m_max must be >= 2, got {m_max}")
    if isinstance(seed, np.random.SeedSequence):
        # fresh copy: spawning mutates the caller's sequence
        root = np.random.SeedSequence(seed.entropy, spawn_key=seed.spawn_key)
    else:
        root = np.random.SeedSequence(seed)
    split_ss, forest_ss, drop_ss = root.spawn(3)
    train, test = stratified_split(ds, train_fraction, split_ss)
    forest = build_forest(train, m_max, int(forest_ss.generate_state(1)[0]))
    ideal_tr, ideal_te = train.ideal(), test.ideal()
    g_tr, g_te = forest.score_group(train), forest.score_group(test)
    single_dist_tr = np.array([euclidean_distance(s, ideal_tr) for s in g_tr])
    single_acc_te = np.array([accuracy(s, ideal_te) for s in g_te])

    order = list(np.random.default_rng(drop_ss).permutation(m_max))
    rows = []
    active = sorted(range(m_max))
    while len(active) >= 2:
        sub_tr, sub_te = g_tr.subset(active), g_te.subset(active)
        mv_tr = centroid_fuse(sub_tr, ideal_tr)
        mv_te = centroid_fuse(sub_te, ideal_te)
        w = solve_optimal_weights(sub_tr, ideal_tr).weights
        wmv_tr = weighted_fuse(sub_tr, w, ideal_tr)
        wmv_te = weighted_fuse(sub_te, w, ideal_te)
        rows.append(
            ExperimentRow(
                m=len(active),
                rf_train_acc=accuracy(mv_tr.fused, ideal_tr),
                wrf_train_acc=accuracy(wmv_tr.fused, ideal_tr),
                rf_train_dist=mv_tr.distance_to_ideal,
                wrf_train_dist=wmv_tr.distance_to_ideal,
                rf_test_acc=accuracy(mv_te.fused, ideal_te),
                wrf_test_acc=accuracy(wmv_te.fused, ideal_te),
                rf_test_dist=mv_te.distance_to_ideal,
                wrf_test_dist=wmv_te.distance_to_ideal,
                best_single_acc=float(single_acc_te[active].max()),
                avg_single_acc=float(single_acc_te[active].mean()),
                avg_single_train_dist=float(single_dist_tr[active].mean()),
            )
        )
        active.remove(int(order.pop()))
    return rows[::-1]


def shrink_trials(
    ds: Dataset,
    m_max: int = 30,
    seed: int = 42,
    trials: int = 30,
    train_fraction: float = 0.8,
    threads: int = 1,
) -> list[list[ExperimentRow]]:
    """Independent trials; trial ``t`` is seeded from ``(seed, t)`` so results
    do not depend on ``threads``."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    seeds = [np.random.SeedSequence([seed, t]) for t in range(trials)]

    def run(ss):
        return shrink_trial(ds, m_max, ss, train_fraction)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(run, seeds))
    return [run(ss) for ss in seeds]


def average_rows(per_trial: Sequence[Sequence[ExperimentRow]]) -> list[ExperimentRow]:
    """Arithmetic mean of each field across trials, row by row."""
    if not per_trial:
        return []
    out = []
    names = [f.name for f in fields(ExperimentRow) if f.name != "m"]
    for rows in zip(*per_trial):
        ms = {r.m for r in rows}
        if len(ms) != 1:
            raise ShapeError("trials are not aligned by ensemble size")
        vals = {k: float(np.mean([getattr(r, k) for r in rows])) for k in names}
        out.append(ExperimentRow(m=ms.pop(), **vals))
    return out


def shrink_experiment(
    ds: Dataset,
    m_max: int = 30,
    seed: int = 42,
    trials: int = 30,
    train_fraction: float = 0.8,
    threads: int = 1,
) -> list[ExperimentRow]:
    """Rows for ``m = 2..m_max``, each the mean over ``trials`` ensembles."""
    return average_rows(shrink_trials(ds, m_max, seed, trials, train_fraction, threads))


@dataclass(frozen=True)
class InvariantCheck:
    name: str
    passed: bool
    worst_violation: float


def check_train_invariants(per_trial: Sequence[Sequence[ExperimentRow]]) -> list[InvariantCheck]:
    """The training-side orderings that must hold for every trial.

    Test-side and accuracy orderings carry no guarantee and are not checked.
    """
    wmv_le_mv, mv_le_avg, nested = [], [], []
    for rows in per_trial:
        for r in rows:
            wmv_le_mv.append(r.wrf_train_dist - r.rf_train_dist)
            mv_le_avg.append(r.rf_train_dist - r.avg_single_train_dist)
        by_m = sorted(rows, key=lambda r: r.m)
        for small, big in zip(by_m, by_m[1:]):
            nested.append(big.wrf_train_dist - small.wrf_train_dist)

    def check(name, excess):
        worst = float(max(excess)) if excess else -math.inf
        return InvariantCheck(name, worst <= INVARIANT_SLACK, worst)

    return [
        check("wmv_train_dist <= mv_train_dist", wmv_le_mv),
        check("mv_train_dist <= mean single train_dist", mv_le_avg),
        check("wmv_train_dist non-increasing in m (nested)", nested),
    ]


def pearson(a, b) -> float:
    """Sample Pearson correlation coefficient."""
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if a.size != b.size:
        raise ShapeError(f"length mismatch: {a.size} vs {b.size}")
    if a.size < 2:
        raise UndefinedStatisticError("need at least two observations")
    da, db = a - a.mean(), b - b.mean()
    sa, sb = np.sqrt(np.sum(da**2)), np.sqrt(np.sum(db**2))
    if sa == 0 or sb == 0:
        raise UndefinedStatisticError("correlation is undefined for a zero-variance sample")
    r = float(np.sum(da * db) / (sa * sb))
    return min(1.0, max(-1.0, r))


@dataclass(frozen=True)
class PairedT:
    t: float
    df: int
    mean_diff: float
    degenerate: bool = False


def paired_t(a, b) -> PairedT:
    """Paired t statistic of ``a - b``.

    If every difference is identical and nonzero the statistic is infinite
    and ``degenerate`` is set; identical samples give ``t = 0``.
    """
    a = np.asarray(a, dtype=np.float64).reshape(-1)
    b = np.asarray(b, dtype=np.float64).reshape(-1)
    if a.size != b.size:
        raise ShapeError(f"length mismatch: {a.size} vs {b.size}")
    if a.size < 2:
        raise UndefinedStatisticError("need at least two pairs")
    d = a - b
    n = d.size
    mean = float(d.mean())
    sd = float(np.std(d, ddof=1))
    if sd == 0:
        if mean == 0:
            return PairedT(0.0, n - 1, 0.0)
        return PairedT(math.copysign(math.inf, mean), n - 1, mean, degenerate=True)
    return PairedT(mean / (sd / math.sqrt(n)), n - 1, mean)
