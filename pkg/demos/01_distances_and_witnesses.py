"""
Gromov-Hausdorff distances between tiny spaces
==============================================

Compute a few distances by hand-checkable examples, look at the admissible
metric that witnesses each value, and compare it with the
epsilon-approximation sandwich.
"""

import numpy as np

from ghkit.approximation import best_pair
from ghkit.gh_exact import gh_bounds, gh_exact, gh_pointed_exact
from ghkit.metric_core import PointedSpace, cycle_space, one_point, path_space, segment

seg1, seg2, pt = segment(1.0), segment(2.0), one_point()

# A space is at distance diam/2 from a point; the witness puts the point at
# height 1 above both ends of the segment.
res = gh_exact(seg2, pt)
print("d_GH(Seg2, pt) =", res.value)
print("witness joint metric:\n", res.witness.joint())

# Two segments differ by half the length gap.
print("d_GH(Seg2, Seg1) =", gh_exact(seg2, seg1).value)

# Best epsilon-approximation and the sandwich it implies.
pair, eps, report = best_pair(seg2, seg1)
print(f"best pair f={pair.f} g={pair.g}, eps* = {eps}, interval = {gh_bounds(seg2, seg1)}")

# %%
# Base points matter.  On the 3-point path the distance to a point is the
# eccentricity of the base, so the midpoint is twice as close as an end.
path3 = path_space(3)
for base in range(3):
    v = gh_pointed_exact(PointedSpace(path3, base), PointedSpace(pt, 0)).value
    print(f"pointed distance (Path3, {base}) -> point: {v}")

# %%
# A cycle against a path with the same number of points.
c4, p4 = cycle_space(4), path_space(4)
r = gh_exact(c4, p4)
print("d_GH(C4, Path4) =", r.value, "assignment", r.a, r.b)
print("objective on the witness:", r.objective())
print("lower bound from diameters:", abs(2 - 3) / 2)
