"""
A singular M(1): two atoms on a line
====================================

The moments of 3 delta(1,0) + 2 delta(-1,1). Both atoms sit on the line
x + 2y = 1, so M(1) has a kernel and the flat extension needs only two atoms.
"""

from cubicmoments import MomentSequence3, certify, solve

s = MomentSequence3.from_list([5, 1, 2, 5, -2, 2, 1, 2, -2, 2])

cls, cert = certify(s)
print("branch:", cls.branch.value, " rank M(1):", cls.rank_m1)
print("b =", cls.schur.b, " y =", cls.schur.y)

# the line shows up as a column relation of M(2)
for rel in cert.relations:
    print("  ", rel)

sol = solve(s)
for atom, w in sorted(zip(sol.measure.atoms, sol.measure.weights)):
    print("atom", atom, "weight", round(w, 12))
print("max relative moment error:", sol.report.max_rel_error)
