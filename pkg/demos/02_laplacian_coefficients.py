"""
Laplacian coefficients
======================

c_gamma averages the squared change of length under left multiplication by
gamma.  For finite groups the average runs over the group.  For free groups
it is the limit of sphere averages, which stabilizes at n = l(gamma).
"""
from fractions import Fraction

from qiso_workbench.groups import parse_group_spec
from qiso_workbench.laplacian import admissibility_report, coeff_finite, free_R, ratio_r_formal

# %% S_3 with two generating sets
for kind in ("transpositions", "dihedral"):
    g = parse_group_spec(f"s3:{kind}")
    print(kind)
    for x in g.elements():
        print(f"  {g.format(x):10s} length {g.length(x)}  c = {coeff_finite(g, x)}")

# The dihedral generating set puts the transposition s and the 3-cycles t, t^-1
# on the same sphere, yet c_s = 1 while c_t = 2/3: c is not a function of length.
rep = admissibility_report(parse_group_spec("s3:dihedral"), 2)
print("dihedral constant on spheres:", rep.constant_on_spheres)

# %% free groups: reduced spheres against formal words
f2 = parse_group_spec("free:2")
for m in range(1, 5):
    value, ev = free_R(2, m)
    print(f"R_{m} = {value} (stable for n in {ev.n_range}), ratio to m^2: {value / m**2}")

# Averaging over all 4^n formal words instead, with cancellation only at the seam:
for word in ("a", "ab", "aba"):
    gamma = f2.parse(word)
    n = len(word)
    print(word, "junction reading:", ratio_r_formal(f2, gamma, n), "reduced reading:", free_R(2, n)[0])

# Reducing the formal words fully turns the average into a random walk, which never settles.
print([str(ratio_r_formal(f2, f2.parse("ab"), n, "walk")) for n in range(2, 7)])
print("bounds for m = 3:", Fraction(3, 4) * 9, 9)
