"""
Lattices converging to the line
===============================

Run the pointed convergence harness on ``(1/i) Z ∩ [-10, 10]`` against a
fine reference lattice, then read a radius schedule off the measured table.
"""

import time

import numpy as np

from ghkit.convergence import converge, select_radius_schedule
from ghkit.io import curve_csv
from ghkit.sequences import lattice_reference, scaled_lattice

seq = scaled_lattice(10.0)
ref = lattice_reference(10.0, 1 / 64)
radii = [1.0, 2.0, 4.0]
indices = list(range(1, 33))

t0 = time.perf_counter()
rep = converge(seq, ref, radii, indices)
print(f"harness finished in {time.perf_counter() - t0:.1f}s, verdict: {rep.verdict}")

# Upper bounds should sit below 1/(2i) plus the reference mesh.
for r in radii:
    hi = rep.hi(r)
    bound = 1 / (2 * np.array(indices)) + ref.mesh
    print(f"r={r}: hi[1..4] = {np.round(hi[:4], 4)}, max hi/bound = {np.max(hi / bound):.3f}")

# Cells were exact or bounded by nets; show where each upper bound came from.
sources = {}
for r in radii:
    for c in rep.cells[r]:
        sources[c.source] = sources.get(c.source, 0) + 1
print("upper-bound sources:", sources)

# %%
# A radius schedule: the largest radius r with eps^r_i <= 1/r at each index.
sched = select_radius_schedule(rep.table(), radii, indices)
print("schedule:", dict(zip(indices[:8], sched.radii[:8])), "...")
print("exceptional prefix:", sched.exceptional)

# The same curve as CSV (first lines).
print("\n".join(curve_csv(rep.rows()).splitlines()[:4]))
