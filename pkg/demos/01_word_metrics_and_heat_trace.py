"""
Word metrics and the heat trace
===============================

Spheres of the word metric give the spectrum of the Dirac operator D on the
group algebra: eigenvalue n with multiplicity |W_n|.
"""
import math

import numpy as np

from qiso_workbench.dirac import heat_trace, spectrum
from qiso_workbench.groups import parse_group_spec

# %% sphere growth
for spec in ("cyclic:6", "s3:transpositions", "s3:dihedral", "freeabelian:2", "free:2"):
    g = parse_group_spec(spec)
    top = g.diameter() if g.finite else 5
    print(f"{spec:18s}", [k for _, k in spectrum(g, top)])

# free groups grow like 2r (2r - 1)^(n - 1)
f2 = parse_group_spec("free:2")
sizes = np.array([len(f2.sphere(n)) for n in range(1, 7)])
print("ratios of consecutive spheres in free:2:", sizes[1:] / sizes[:-1])

# %% heat trace with a certified tail
for t in (0.5, 1.0, 2.0):
    h = heat_trace(f2, t, 6)
    series = math.fsum([1.0] + [4 * 3 ** (n - 1) * math.exp(-t * n * n) for n in range(1, 80)])
    print(f"t={t}: {h.value:.12f} <= {series:.12f} <= {h.value + h.tail_bound:.12f}")

# finite groups have no tail once every sphere is included
print("cyclic:3 at t=1:", heat_trace(parse_group_spec("cyclic:3"), 1.0, 3).value, 1 + 2 / math.e)
