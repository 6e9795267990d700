"""
b > y: a rank-4 extension and a flat M(3)
=========================================

C(2) replaces y by b, which lifts rank M(2) to four. M(3) is then
generated from the column relations and stays at rank four.
"""

import numpy as np

from cubicmoments import MomentSequence3, certify, solve

s = MomentSequence3.from_list([2, 1, 1, 2, 1, 2, 1, 2, 1, 2])

cls, cert = certify(s)
print("b =", cls.schur.b, " y =", cls.schur.y, "->", cls.branch.value)
print("ranks: M(2) =", cert.rank_m2, " M(3) =", cert.rank_m3)
for rel in cert.relations:
    print("  ", rel)

# the quintic and sextic moments read off the flat M(3)
print("beta50 =", cert.m3.entry((3, 0), (2, 0)), " beta60 =", cert.m3.entry((3, 0), (3, 0)))

sol = solve(s)
atoms = np.array(sol.measure.atoms)
print(np.column_stack([atoms, sol.measure.weights]))
