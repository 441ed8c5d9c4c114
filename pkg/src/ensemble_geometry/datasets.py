"""Bundled synthetic datasets for the shrink experiment."""

from __future__ import annotations

from importlib import resources

import numpy as np

from .learners import Dataset

__all__ = ["make_separable", "make_noisy", "load_bundled", "BUNDLED"]

BUNDLED = ("separable", "noisy")


def make_separable(n: int = 500, seed: int = 7) -> Dataset:
    """Three classes in disjoint boxes along the first feature; three more
    features are pure noise."""
    rng = np.random.default_rng(seed)
    y = np.arange(n) % 3
    x = rng.uniform(0.0, 1.0, size=(n, 4))
    x[:, 0] = y * 2.0 + rng.uniform(0.05, 0.95, size=n)
    x[:, 1] += 0.3 * y
    return Dataset(np.round(x, 6), y, ("a", "b", "c"))


def make_noisy(n: int = 500, seed: int = 11) -> Dataset:
    """Three overlapping Gaussian classes in 8 dimensions with 10% of the
    labels resampled at random."""
    rng = np.random.default_rng(seed)
    y = np.arange(n) % 3
    centers = rng.normal(0.0, 0.9, size=(3, 8))
    x = centers[y] + rng.normal(size=(n, 8))
    flip = rng.random(n) < 0.10
    y = np.where(flip, rng.integers(0, 3, size=n), y)
    return Dataset(np.round(x, 6), y, ("a", "b", "c"))


def load_bundled(name: str) -> Dataset:
    """Load ``"separable"`` or ``"noisy"`` from the packaged CSV files."""
    from .io import load_dataset_csv

    if name not in BUNDLED:
        raise ValueError(f"unknown dataset {name!r}; choose from {BUNDLED}")
    with resources.as_file(resources.files(__package__) / "data" / f"{name}.csv") as path:
        return load_dataset_csv(path)
