"""
Quantum symmetries from generators and relations
================================================

Each preset is a matrix model of a quantum isometry group: matrices over a
cyclotomic field satisfying the defining relations, whose coproduct and
induced action on the group algebra are checked exactly.
"""
from qiso_workbench.cyclotomic import is_magic_unitary
from qiso_workbench.models import (
    check_action,
    coproduct_of,
    cyclic_closed_form,
    magic_grid,
    preset,
    preset_report,
    rows_equal,
)

# %% relations and coproducts
for name in ("zn:5", "z4_commutative", "z4_pauli", "s3_transpositions", "s3_dihedral", "f2_classical:swap"):
    rep = preset_report(preset(name))
    bad = [r["relation"] for r in rep["relations"]["relations"] if not r["ok"]]
    print(f"{name:20s} ok={rep['ok']} failing={bad}")

# The Pauli model is genuinely noncommutative.
p = preset("z4_pauli")
print(p.model["A"] @ p.model["B"] - p.model["B"] @ p.model["A"])

# %% induced action on the group algebra
p = preset("zn", 5)
table = p.action()
print("action checks:", {c.name: c.ok for c in check_action(table).checks})
print("rows follow lambda_k (x) A^k + lambda_(n-k) (x) B^k:",
      all(rows_equal(table.rows[k], cyclic_closed_form(p, k)) for k in range(1, 5)))

# %% the free group: a magic unitary of projections
p = preset("f2_torus", 8, 1, 3)
print("magic unitary:", is_magic_unitary(magic_grid(p.model)).ok)

# %% group-like elements
delta, square = coproduct_of(preset("s3_dihedral"), "L")
print("dihedral: Delta(L) = L (x) L:", delta == square)
delta, square = coproduct_of(preset("s3_transpositions"), "A + C")
print("transpositions: Delta(A + C) = (A + C) (x) (A + C):", delta == square)
