"""
How much does adding members help?
==================================

Take ``m`` members that all sit at distance 1 from the ideal point and at
distance ``theta`` from each other.  The centroid distance then depends on
``m`` and ``theta`` only.  Small ``theta`` (similar members) caps the gain
early; large ``theta`` keeps paying off.
"""

import numpy as np

from ensemble_geometry import theta_limit_curve

thetas = [0.25, 0.5, 0.75, 1.0]
sizes = [2, 3, 5, 10, 27, 100, 10**6]

print("m".rjust(8) + "".join(f"theta={t}".rjust(13) for t in thetas))
for m in sizes:
    row = [theta_limit_curve(t, m) for t in thetas]
    print(f"{m:8d}" + "".join(f"{v:13.4f}" for v in row))

###############################################################################
# The curve flattens fast: most of the gain arrives within the first few
# dozen members.  Going from 27 to a million members at ``theta=1`` buys
# little.

gain = theta_limit_curve(1.0, 27) - theta_limit_curve(1.0, 10**6)
print(f"extra gain beyond 27 members at theta=1: {gain:.4f}")

###############################################################################
# Not every ``theta`` is realisable.  Equidistant points can be at most
# ``sqrt(2m/(m-1))`` apart relative to their common distance to the ideal.

for m in (2, 3, 10):
    print(f"m={m}: largest theta {np.sqrt(2 * m / (m - 1)):.4f}")
