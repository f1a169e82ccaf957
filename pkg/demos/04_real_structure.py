"""
Real structure and first order modulo compacts
==============================================

J sends delta_g to delta_{g^-1}.  The operators T_{g,h} = [J lambda_{g^-1} J^-1, [D, lambda_h]]
are weighted shifts; their support decides whether they are compact.
"""
from collections import Counter

from qiso_workbench.groups import parse_group_spec
from qiso_workbench.models import preset
from qiso_workbench.real_structure import real_extension, support_certificate

# %% free group: the support sits inside ball(l(g) + l(h))
f2 = parse_group_spec("free:2")
cert = support_certificate(f2, f2.parse("ab"), f2.parse("Ba"), 4, 8)
print(cert.to_dict())

# %% free abelian group: the support runs off to infinity
z2 = parse_group_spec("freeabelian:2")
a = z2.parse("a")
for r in (4, 6, 8):
    cert = support_certificate(z2, a, a, 2, r)
    lengths = Counter(z2.length(z2.parse(x)) for x, _ in cert.support)
    print(f"probe radius {r}: support size {len(cert.support)}, by length {dict(sorted(lengths.items()))}")

# %% doubling a model with q = I (+) -I
for name in ("zn:5", "s3_transpositions", "s3_dihedral"):
    print(name, real_extension(preset(name)).checks)
