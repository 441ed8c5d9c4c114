"""Choosing ``m'`` of ``m`` members to minimise the fused distance to the
ideal point, under either uniform (``"mv"``) or optimal (``"wmv"``) weights.

Exhaustive search is exact but combinatorial; greedy forward selection and
swap-based local search are the practical alternatives.  All three break
ties toward the lexicographically smallest index subset.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Literal, Sequence

import numpy as np

from .core import EnsembleGroup, IdealLabels, as_point, dissimilarity_matrix, performance_distances
from .errors import BudgetError, ShapeError
from .weights import solve_optimal_weights

__all__ = [
    "SelectionResult",
    "exact_best_subset",
    "greedy_forward_subset",
    "local_search_subset",
    "diversity_objective",
    "subset_objective",
]

Objective = Literal["mv", "wmv"]
Method = Literal["exact", "greedy", "local_search"]

TIE_RTOL = 1e-12
CHUNK = 65536


@dataclass(frozen=True)
class SelectionResult:
    chosen: tuple[int, ...]
    objective: float
    method: Method
    evaluations: int


def _check(group: EnsembleGroup, ideal: IdealLabels, objective: str) -> None:
    if group.shape != as_point(ideal).shape:
        raise ShapeError(f"group shape {group.shape} != ideal shape {as_point(ideal).shape}")
    if objective not in ("mv", "wmv"):
        raise ValueError(f"objective must be 'mv' or 'wmv', got {objective!r}")


def _evaluator(group: EnsembleGroup, ideal: IdealLabels, objective: str) -> Callable:
    x = group.stacked()
    o = as_point(ideal).reshape(-1)
    if objective == "mv":
        def evaluate(subset: Sequence[int]) -> float:
            return float(np.sqrt(np.sum((x[list(subset)].mean(axis=0) - o) ** 2)))
    else:
        def evaluate(subset: Sequence[int]) -> float:
            return solve_optimal_weights(group.subset(subset), ideal).distance
    return evaluate


def _better(a: float, b: float) -> bool:
    """``a`` beats ``b`` by more than rounding noise."""
    return a < b - TIE_RTOL * max(1.0, abs(b))


def subset_objective(
    group: EnsembleGroup, ideal: IdealLabels, subset: Sequence[int], objective: Objective = "mv"
) -> float:
    """Fused distance of one subset, computed directly on the fused point."""
    _check(group, ideal, objective)
    return _evaluator(group, ideal, objective)(sorted(subset))


def diversity_objective(group: EnsembleGroup, subset: Sequence[int]) -> float:
    """``(1/m'^2) * sum_{i<j in subset} ed(S^i, S^j)^2``.

    With this normalisation, ``ed(C, O)^2`` of the subset centroid equals
    the mean squared performance distance minus this value.
    """
    subset = list(subset)
    if not subset:
        raise ValueError("subset must be nonempty")
    d2 = dissimilarity_matrix(group.subset(subset)) ** 2
    return float(np.sum(np.triu(d2, 1)) / len(subset) ** 2)


def _mv_sq_objectives(perf2, d2, combos: np.ndarray) -> np.ndarray:
    k = combos.shape[1]
    s_perf = perf2[combos].sum(axis=1)
    s_pair = np.zeros(combos.shape[0])
    for a in range(k - 1):
        for b in range(a + 1, k):
            s_pair += d2[combos[:, a], combos[:, b]]
    return (k * s_perf - s_pair) / k**2


def exact_best_subset(
    group: EnsembleGroup,
    ideal: IdealLabels,
    m_prime: int,
    objective: Objective = "mv",
    cap: int = 2_000_000,
) -> SelectionResult:
    """Enumerate every ``m'``-subset and return the best.

    The ``mv`` objective is ranked from precomputed distances (no refusion
    per subset); near-ties are then re-measured on the fused points.

    Raises
    ------
    BudgetError
        If ``C(m, m')`` exceeds ``cap``.
    """
    _check(group, ideal, objective)
    m = group.m
    if not 1 <= m_prime < m:
        raise ValueError(f"m' must satisfy 1 <= m' < m={m}, got {m_prime}")
    total = math.comb(m, m_prime)
    if total > cap:
        raise BudgetError(
            f"C({m}, {m_prime}) = {total} subsets exceeds the cap of {cap}; "
            "use greedy or local search instead"
        )
    evaluate = _evaluator(group, ideal, objective)

    if objective == "wmv":
        best, best_val = None, math.inf
        for combo in itertools.combinations(range(m), m_prime):
            val = evaluate(combo)
            if best is None or _better(val, best_val):
                best, best_val = combo, val
        return SelectionResult(tuple(best), best_val, "exact", total)

    perf2 = performance_distances(group, ideal) ** 2
    d2 = dissimilarity_matrix(group) ** 2
    sq = np.empty(total)
    it = itertools.combinations(range(m), m_prime)
    pos = 0
    while pos < total:
        chunk = np.array(list(itertools.islice(it, CHUNK)), dtype=np.intp)
        sq[pos : pos + len(chunk)] = _mv_sq_objectives(perf2, d2, chunk)
        pos += len(chunk)
    # closed-form values carry cancellation error ~ eps * sum(perf^2); re-measure
    # every subset that close to the minimum on its actual centroid
    slack = 1e-10 * max(1.0, float(perf2.max()))
    near = np.flatnonzero(sq <= sq.min() + slack)
    best, best_val = None, math.inf
    for idx in near:
        combo = _combination_at(m, m_prime, int(idx))
        val = evaluate(combo)
        if best is None or _better(val, best_val):
            best, best_val = combo, val
    return SelectionResult(tuple(best), best_val, "exact", total)


def _combination_at(m: int, k: int, rank: int) -> tuple[int, ...]:
    """The ``rank``-th k-combination of ``range(m)`` in lexicographic order."""
    out = []
    start = 0
    for remaining in range(k, 0, -1):
        for c in range(start, m):
            count = math.comb(m - c - 1, remaining - 1)
            if rank < count:
                out.append(c)
                start = c + 1
                break
            rank -= count
    return tuple(out)


def _greedy(evaluate, m: int, m_prime: int, start: Sequence[int] = ()) -> tuple[list[int], float, int]:
    chosen = list(start)
    val = math.inf
    evals = 0
    while len(chosen) < m_prime:
        best_c, best_val = None, math.inf
        for c in range(m):
            if c in chosen:
                continue
            v = evaluate(sorted(chosen + [c]))
            evals += 1
            if best_c is None or _better(v, best_val):
                best_c, best_val = c, v
        chosen.append(best_c)
        val = best_val
    return sorted(chosen), val, evals


def greedy_forward_subset(
    group: EnsembleGroup,
    ideal: IdealLabels,
    m_prime: int,
    objective: Objective = "mv",
) -> SelectionResult:
    """Start from the best single member and add, one at a time, the member
    whose inclusion gives the smallest objective."""
    _check(group, ideal, objective)
    if not 1 <= m_prime <= group.m:
        raise ValueError(f"m' must satisfy 1 <= m' <= m={group.m}, got {m_prime}")
    evaluate = _evaluator(group, ideal, objective)
    chosen, val, evals = _greedy(evaluate, group.m, m_prime)
    return SelectionResult(tuple(chosen), val, "greedy", evals)


def _descend(evaluate, m: int, subset: list[int], val: float, budget: int):
    """Best-improvement swap descent; returns (subset, value, evals, scans)."""
    evals = scans = 0
    while scans < budget:
        scans += 1
        inside = set(subset)
        best_sub, best_val = None, val
        for out in subset:
            for cand in range(m):
                if cand in inside:
                    continue
                trial = sorted([c for c in subset if c != out] + [cand])
                v = evaluate(trial)
                evals += 1
                if _better(v, best_val) or (
                    best_sub is not None and not _better(best_val, v) and trial < best_sub
                ):
                    best_sub, best_val = trial, v
        if best_sub is None:
            break
        subset, val = best_sub, best_val
    return subset, val, evals, scans


def local_search_subset(
    group: EnsembleGroup,
    ideal: IdealLabels,
    m_prime: int,
    objective: Objective = "mv",
    iterations: int = 1000,
    seed: int = 42,
    restarts: int = 5,
) -> SelectionResult:
    """Swap-neighbourhood local search seeded with the greedy solution.

    Each iteration scans every (member out, member in) swap and takes the
    best strictly improving one.  After the first local optimum, up to
    ``restarts`` further descents start from random subsets drawn with
    ``seed``; the best subset seen is returned.  ``iterations`` caps the
    total number of neighbourhood scans.
    """
    _check(group, ideal, objective)
    m = group.m
    if not 2 <= m_prime < m:
        raise ValueError(f"m' must satisfy 2 <= m' < m={m}, got {m_prime}")
    evaluate = _evaluator(group, ideal, objective)
    start, val, evals = _greedy(evaluate, m, m_prime)
    best, best_val, e, scans = _descend(evaluate, m, start, val, iterations)
    evals += e
    rng = np.random.default_rng(seed)
    for _ in range(restarts):
        if scans >= iterations:
            break
        init = sorted(int(i) for i in rng.choice(m, size=m_prime, replace=False))
        sub, v, e, s = _descend(evaluate, m, init, evaluate(init), iterations - scans)
        evals += e + 1
        scans += s
        if _better(v, best_val) or (not _better(best_val, v) and sub < best):
            best, best_val = sub, v
    return SelectionResult(tuple(best), best_val, "local_search", evals)
