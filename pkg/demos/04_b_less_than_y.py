"""
b < y: shifting the corner entries
==================================

When b < y the extension keeps y in the middle of C(2) and pushes the
difference into the X^4 and Y^4 moments. The atoms are irrational and
come out of a quartic resultant.
"""

from cubicmoments import MomentSequence3, certify, solve

s = MomentSequence3.from_list([3, 1, 1, 5, -3, 9, 9, 3, 1, 1])

cls, cert = certify(s)
print("b =", cls.schur.b, " y =", cls.schur.y, "->", cls.branch.value)
print("C(2) =")
for row in cert.m2.mat[3:, 3:]:
    print("  ", *row)

sol = solve(s)
for atom, w in sorted(zip(sol.measure.atoms, sol.measure.weights)):
    print(f"({atom[0]: .5f}, {atom[1]: .5f})  weight {w:.6f}")
print("verified to", sol.report.max_rel_error)
