import numpy as np

from ensemble_geometry import EnsembleGroup, IdealLabels

WORKED_SCORES = [
    [[0.5, 0.6, 0.3], [0.7, 0.3, 0.9]],
    [[0.4, 0.7, 0.2], [0.3, 0.6, 0.7]],
    [[0.6, 0.8, 0.4], [0.2, 0.6, 0.8]],
]
WORKED_LABELS = [[0, 1, 0], [1, 0, 1]]

# six points in the plane around an ideal point at the origin
SIX_POINTS = [
    (0.0, -1.0),
    (-1.42, 0.5),
    (1.42, 0.5),
    (-1.732, -1.0),
    (1.732, -1.0),
    (0.0, 2.0),
]


def worked_group():
    group = EnsembleGroup.from_arrays(WORKED_SCORES, ids=["cf1", "cf2", "cf3"])
    return group, IdealLabels(WORKED_LABELS)


def six_point_group():
    group = EnsembleGroup.from_arrays(
        [[pt] for pt in SIX_POINTS], check_range=False
    )
    return group, np.zeros((1, 2))


def random_ideal(rng, n, p):
    labels = (rng.random((n, p)) < 0.4).astype(float)
    for i in range(n):
        if not labels[i].any():
            labels[i, rng.integers(p)] = 1.0
    return IdealLabels(labels)


def random_group(rng, m_range=(2, 8), n_range=(1, 10), p_range=(2, 5)):
    m = int(rng.integers(m_range[0], m_range[1] + 1))
    n = int(rng.integers(n_range[0], n_range[1] + 1))
    p = int(rng.integers(p_range[0], p_range[1] + 1))
    group = EnsembleGroup.from_arrays([rng.random((n, p)) for _ in range(m)])
    return group, random_ideal(rng, n, p)


def random_groups(count, seed, **kw):
    rng = np.random.default_rng(seed)
    return [random_group(rng, **kw) for _ in range(count)]


def equal_performance_group(rng, m_range=(2, 8), n_range=(1, 10), p_range=(2, 5)):
    """Random points pushed radially so all sit at the same distance from
    the ideal point."""
    while True:
        group, ideal = random_group(rng, m_range, n_range, p_range)
        o = ideal.labels
        radius = np.mean([np.linalg.norm(s.scores - o) for s in group])
        pts = [o + (s.scores - o) * (radius / np.linalg.norm(s.scores - o)) for s in group]
        if any(not np.array_equal(pts[0], q) for q in pts[1:]):
            return EnsembleGroup.from_arrays(pts, check_range=False), ideal
