"""
Shrinking a random forest
=========================

Grow 30 random trees on 80% of a dataset, then remove one tree at a time.
At each size, compare plain majority voting with least-squares weights
refit on the training part.
"""

from ensemble_geometry.datasets import load_bundled
from ensemble_geometry.evaluation import (
    average_rows,
    check_train_invariants,
    paired_t,
    pearson,
    shrink_trials,
)

ds = load_bundled("noisy")
print(f"{ds.n} instances, {ds.d} features, {ds.p} classes")

# a handful of trials keeps the demo quick; the full protocol uses 30
per_trial = shrink_trials(ds, m_max=30, seed=42, trials=5)
rows = average_rows(per_trial)

print(f"{'m':>3} {'mv train':>9} {'wmv train':>9} {'mv test':>8} {'wmv test':>8} {'mv acc':>7} {'wmv acc':>7}")
for r in rows[::4]:
    print(
        f"{r.m:3d} {r.rf_train_dist:9.3f} {r.wrf_train_dist:9.3f} "
        f"{r.rf_test_dist:8.3f} {r.wrf_test_dist:8.3f} {r.rf_test_acc:7.3f} {r.wrf_test_acc:7.3f}"
    )

###############################################################################
# On the training side the weighted fit can only win and can only improve
# as trees are added.  These checks hold for every trial.

for c in check_train_invariants(per_trial):
    print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}")

###############################################################################
# Test-side behaviour carries no such guarantee.  Compare the two schemes
# across ensemble sizes.

mv = [r.rf_test_acc for r in rows]
wmv = [r.wrf_test_acc for r in rows]
t = paired_t(wmv, mv)
print(f"test accuracy, weighted minus plain: mean {t.mean_diff:+.4f}, t={t.t:.2f}, df={t.df}")
print(f"correlation of test distance with test accuracy (mv): "
      f"{pearson([r.rf_test_dist for r in rows], mv):.3f}")
