"""
Round trip from random measures
===============================

Draw rational atomic measures, compute their cubic moments and solve.
The recovered measure may differ from the original (several measures can
share the same cubic moments) but its moments must agree.
"""

import random
from collections import Counter
from fractions import Fraction

from cubicmoments import AtomicMeasure, MomentSequence3, moments_from_measure, solve

rng = random.Random(0)
branches = Counter()
worst = 0.0
for _ in range(200):
    n = rng.randint(1, 4)
    atoms = {(Fraction(rng.randint(-20, 20), 4), Fraction(rng.randint(-20, 20), 4))
             for _ in range(n)}
    m = AtomicMeasure(sorted(atoms), [Fraction(rng.randint(1, 50), 5) for _ in atoms])
    sol = solve(MomentSequence3(moments_from_measure(m, 3)))
    branches[sol.classification.branch.value] += 1
    worst = max(worst, sol.report.max_rel_error)

print(dict(branches))
print("worst relative moment error:", worst)
