"""
When no measure exists
======================

Two necessary conditions can fail: M(1) may not be positive semidefinite,
or the columns of B(2) may leave the range of M(1).
"""

from cubicmoments import MomentSequence3, solve

negative_variance = MomentSequence3.from_list([1, 0, 0, -1, 0, 0, 0, 0, 0, 0])
out = solve(negative_variance)
print(out.reason.value, ":", out.witness)

# nudge beta03 so the Y^2 column of B(2) leaves Ran M(1)
beta = [5, 1, 2, 5, -2, 2, 1, 2, -2, 3]
out = solve(MomentSequence3.from_list(beta))
print(out.reason.value, ":", out.witness)
