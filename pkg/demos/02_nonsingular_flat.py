"""
A nonsingular M(1) with b = y
=============================

delta(0,1) + delta(1,-1) + delta(1,0). M(1) is positive definite and the
Schur data already satisfies b = y, so M(2) is a flat extension of M(1).
"""

from cubicmoments import MomentSequence3, certify, solve

s = MomentSequence3.from_list([3, 2, 0, 2, -1, 2, 2, -1, 1, 0])

cls, cert = certify(s)
print("branch:", cls.branch.value)
print("W^T M(1) W =")
for row in cls.schur.matrix:
    print("  ", *row)
print("rank M(2) =", cert.rank_m2)

sol = solve(s)
print(sorted(zip(sol.measure.atoms, [round(w, 12) for w in sol.measure.weights])))
