"""Exact solver for the real cubic truncated moment problem.

Given the ten moments beta_ij (i + j <= 3) of a would-be planar measure,
decide whether a positive representing measure exists and, if so, build a
minimal atomic one together with the flat moment-matrix extensions that
certify it.

>>> from cubicmoments import MomentSequence3, solve
>>> out = solve(MomentSequence3.from_list([5, 1, 2, 5, -2, 2, 1, 2, -2, 2]))
>>> sorted(zip(out.measure.atoms, out.measure.weights))
[((-1.0, 1.0), 2.0), ((1.0, 0.0), 3.0)]
"""

from .extension import (Branch, Classification, ConflictingMoments, ExtensionCertificate,
                        ExtensionError, RelationPoly, SchurData, build_flat_m3, certify,
                        choose_c2, classify, compute_schur, extract_relations, rank_delta)
from .linalg import is_pd, is_psd, rank, solve_sym
from .moments import (AtomicMeasure, MomentMatrix, MomentSequence3, assemble_m2, build_b2,
                      build_m1, monomials, moments_from_measure, riesz)
from .recovery import (NoMeasure, NoMeasureReason, NonpositiveWeight, SingularVandermonde,
                       Solution, VerificationFailed, VerifyReport, solve, solve_weights,
                       verify_measure)
from .variety import (CardinalityMismatch, IdenticallyZero, InfiniteVariety, VarietyResult,
                      common_zeros, real_roots, resultant_x, resultant_y)

__version__ = "0.1.0"
