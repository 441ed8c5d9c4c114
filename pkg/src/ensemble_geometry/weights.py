"""Least-squares weights for weighted majority voting.

The fused point ``F = sum_k w[k] S^k`` closest to the ideal point is the
orthogonal projection of the ideal point onto the span of the members.
Its weights solve the normal equations ``A w = b`` with
``A[q, k] = <S^q, S^k>`` and ``b[q] = <O, S^q>``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import EnsembleGroup, IdealLabels, as_point
from .errors import ScoreRangeError, ShapeError

__all__ = [
    "WeightVector",
    "NormalEquations",
    "OptimalWeights",
    "build_normal_equations",
    "solve_optimal_weights",
    "weighted_objective",
]

PIVOT_TOL = 1e-10
AUTO_RIDGE_SCALE = 1e-8


@dataclass(frozen=True, eq=False)
class WeightVector:
    """Per-classifier scalar weights; any sign, any sum."""

    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(v)):
            raise ScoreRangeError("weights must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self) -> int:
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return self.values if dtype is None else self.values.astype(dtype)


@dataclass(frozen=True, eq=False)
class NormalEquations:
    gram: np.ndarray
    rhs: np.ndarray
    ridge_applied: bool = False
    ridge_lambda: float = 0.0

    def with_ridge(self, lam: float) -> "NormalEquations":
        gram = self.gram + lam * np.eye(self.gram.shape[0])
        return NormalEquations(gram, self.rhs, True, self.ridge_lambda + lam)


@dataclass(frozen=True, eq=False)
class OptimalWeights:
    """Solution of the normal equations plus diagnostics.

    ``distance`` is the achieved ``ed(F, O)`` measured on the fused point,
    ``rank`` the numerical rank of the unregularised Gram matrix and
    ``solver`` the route that produced the returned weights.
    """

    weights: WeightVector
    equations: NormalEquations
    distance: float
    rank: int
    solver: str = "cholesky"

    @property
    def ridge_applied(self) -> bool:
        return self.equations.ridge_applied

    @property
    def ridge_lambda(self) -> float:
        return self.equations.ridge_lambda


def build_normal_equations(group: EnsembleGroup, ideal: IdealLabels) -> NormalEquations:
    o = as_point(ideal)
    if group.shape != o.shape:
        raise ShapeError(f"group shape {group.shape} != ideal shape {o.shape}")
    x = group.stacked()
    gram = x @ x.T
    # exact symmetry regardless of BLAS kernel choice
    gram = 0.5 * (gram + gram.T)
    return NormalEquations(gram, x @ o.reshape(-1))


def _factor(gram: np.ndarray):
    """Cholesky factor, or None when a pivot is numerically zero."""
    scale = float(np.max(np.diag(gram)))
    if scale <= 0:
        return None
    try:
        c, lower = scipy.linalg.cho_factor(gram, lower=True, check_finite=False)
    except np.linalg.LinAlgError:
        return None
    pivots = np.diag(c) ** 2
    if np.min(pivots) < PIVOT_TOL * scale:
        return None
    return c, lower


def _solve(eq: NormalEquations, factor) -> np.ndarray:
    w = scipy.linalg.cho_solve(factor, eq.rhs, check_finite=False)
    # one step of iterative refinement
    r = eq.rhs - eq.gram @ w
    return w + scipy.linalg.cho_solve(factor, r, check_finite=False)


def weighted_objective(x: np.ndarray, o: np.ndarray, w: np.ndarray) -> float:
    """``ed(F, O)`` for stacked members ``x`` of shape (m, L) and flat ideal ``o``."""
    return float(np.sqrt(np.sum((w @ x - o) ** 2)))


def solve_optimal_weights(
    group: EnsembleGroup, ideal: IdealLabels, ridge: float = 0.0
) -> OptimalWeights:
    """Weights minimising the distance between the fused point and ``ideal``.

    Parameters
    ----------
    group, ideal
        Members and target point of a shared ``(n, p)`` shape.  The target
        is normally an :class:`IdealLabels` but any array is accepted.
    ridge : float
        Optional nonnegative amount added to the Gram diagonal.

    Returns
    -------
    OptimalWeights
        If the Gram matrix is numerically singular (a Cholesky pivot below
        ``1e-10`` times its largest diagonal entry) a ridge of
        ``1e-8 * trace / m`` is added and ``ridge_applied`` is set.

    Notes
    -----
    Forming the Gram matrix squares the condition number of the members,
    and tree ensembles often place the ideal point almost inside their
    span.  A rank-revealing least-squares solve on the stacked members is
    therefore also run, and whichever weights give the smaller measured
    distance are returned (``solver`` says which).  Without it, adding a
    member can appear to make the optimum worse.
    """
    if ridge < 0:
        raise ValueError(f"ridge must be nonnegative, got {ridge}")
    eq = build_normal_equations(group, ideal)
    base_gram = eq.gram
    if ridge > 0:
        eq = eq.with_ridge(ridge)
    factor = _factor(eq.gram)
    if factor is None:
        lam = AUTO_RIDGE_SCALE * float(np.trace(base_gram)) / group.m
        if lam > 0:
            eq = eq.with_ridge(lam)
            factor = _factor(eq.gram)
    if factor is None:
        # all-zero members: every weight vector gives F = 0
        w = np.zeros(group.m)
        if not eq.ridge_applied:
            eq = NormalEquations(eq.gram, eq.rhs, True, 0.0)
    else:
        w = _solve(eq, factor)
    x = group.stacked()
    o = as_point(ideal).reshape(-1)
    distance = weighted_objective(x, o, w)
    solver = "cholesky"
    if ridge == 0 and x.any():
        w_ls = scipy.linalg.lstsq(x.T, o, check_finite=False)[0]
        # refine against the residual measured in score space
        w_ls = w_ls + scipy.linalg.lstsq(x.T, o - w_ls @ x, check_finite=False)[0]
        d_ls = weighted_objective(x, o, w_ls)
        if d_ls < distance:
            w, distance, solver = w_ls, d_ls, "lstsq"
    rank = int(np.linalg.matrix_rank(base_gram)) if base_gram.any() else 0
    return OptimalWeights(WeightVector(w), eq, distance, rank, solver)
