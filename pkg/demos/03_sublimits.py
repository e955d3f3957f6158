"""
Sublimits without ultrafilters
==============================

An oscillating sequence has two accumulation points.  Here the "measure one"
sets of an ultrafilter are replaced by explicit index certificates of size at
least sqrt(N).
"""

import numpy as np

from ghkit.convergence import point_limit
from ghkit.metric_core import PointedSpace, find_isometry, segment
from ghkit.sequences import Reference, cycle_pointed, rescaled
from ghkit.sublimits import accumulation_points, common_subsequence, sublimit_space

N = 200
i = np.arange(N)
a = (-1.0) ** i + 1 / (i + 1)
for p in accumulation_points(a, 0.05):
    print(f"accumulation point {p.value:+.4f} certified by {len(p.indices)} indices")

# Indices where two sequences sit at their targets together.
idx = common_subsequence([(-1.0) ** i, np.cos(np.pi * i / 2)], [1, 1], 0.1)
print("common subsequence starts", idx[:6], "(every fourth index)")

# %%
# Segments of length 1 + (-1)^i / i: both parity classes tend to Seg1.
alpha = lambda k: 1 + (-1) ** k / k
seq = rescaled(segment(1.0), alpha)
spaces = {k: seq(k) for k in range(2, 41)}
target = PointedSpace(segment(1.0), 0)
for name, sub in (("even", range(2, 41, 2)), ("odd", range(3, 41, 2))):
    res = sublimit_space(spaces, list(sub), 2.0)
    m = res.medoid_index
    print(f"{name}: medoid i={m}, length {res.space.d[0, 1]:.4f}, spread {res.spread:.4f}, "
          f"isometric to Seg1 within 1/i: {find_isometry(res.space, target, tol=1 / m + 1e-6) is not None}")

# %%
# Which point is the limit of q_i?  It depends on the approximation maps:
# alternating the identity with the reflection of C8 through the base gives
# two candidates for the limit of the constant point 2.
C8 = cycle_pointed(8)
reflect = (-np.arange(8)) % 8
pairs = {k: (np.arange(8) if k % 2 == 0 else reflect) for k in range(1, 21)}
lim = point_limit(Reference(C8), lambda k: 2, pairs, range(1, 21), tau=0.5)
print("limit candidates for q = 2:", lim.representatives)
