"""Atomic measure recovery and the end-to-end cubic pipeline."""

import enum
from dataclasses import dataclass
from typing import Union

import numpy as np

from .extension import Branch, Classification, ExtensionCertificate, certify, classify
from .linalg import rank, to_matrix
from .moments import AtomicMeasure, MomentSequence3, build_b2, build_m1, moments_from_measure
from .variety import DEFAULT_TOL, common_zeros


class RecoveryError(Exception):
    pass


class SingularVandermonde(RecoveryError):
    pass


class NonpositiveWeight(RecoveryError):
    pass


class VerificationFailed(RecoveryError):
    pass


class NoMeasureReason(enum.Enum):
    M1_NOT_PSD = "M1NotPsd"
    RANGE_INCLUSION_FAILS = "RangeInclusionFails"


@dataclass(frozen=True)
class NoMeasure:
    """A violated necessary condition: no representing measure exists."""

    reason: NoMeasureReason
    witness: str
    classification: Classification


@dataclass(frozen=True)
class VerifyReport:
    expected: dict
    computed: dict
    abs_errors: dict
    rel_errors: dict
    max_abs_error: float
    max_rel_error: float
    tol: float

    @property
    def passed(self):
        return self.max_rel_error <= self.tol


@dataclass(frozen=True)
class Solution:
    measure: AtomicMeasure
    certificate: ExtensionCertificate
    classification: Classification
    report: VerifyReport


SolveOutcome = Union[Solution, NoMeasure]


def solve_weights(atoms, basis, riesz_values, cond_limit=1e12):
    """Weights from the Vandermonde system compressed to ``basis``.

    Row ``k`` of the system evaluates basis monomial ``k`` at every atom;
    the right-hand side holds the Riesz functional of the basis monomials.
    """
    atoms = [(float(x), float(y)) for x, y in atoms]
    if len(atoms) != len(basis) or len(basis) != len(riesz_values):
        raise SingularVandermonde(
            f"{len(atoms)} atoms for a basis of {len(basis)} monomials")
    V = np.array([[x ** i * y ** j for x, y in atoms] for i, j in basis])
    rhs = np.array([float(v) for v in riesz_values])
    if np.linalg.cond(V) > cond_limit:
        raise SingularVandermonde("Vandermonde system is numerically singular")
    rho = np.linalg.solve(V, rhs)
    if np.any(rho <= 0):
        raise NonpositiveWeight(f"nonpositive weight in {rho.tolist()}")
    return rho.tolist()


def verify_measure(s, m, tol=DEFAULT_TOL):
    """Compare the ten moments of ``m`` with ``s``.

    A moment passes when ``|computed - beta| <= tol * (1 + |beta|)``; the
    reported relative error is ``|computed - beta| / (1 + |beta|)``.
    """
    computed = moments_from_measure(m, 3)
    expected, got, abs_err, rel_err = {}, {}, {}, {}
    for key, beta in s.beta.items():
        diff = abs(computed[key] - beta) if m.is_exact else abs(float(computed[key]) - float(beta))
        expected[key] = beta
        got[key] = computed[key]
        abs_err[key] = float(diff)
        rel_err[key] = float(diff) / (1 + abs(float(beta)))
    return VerifyReport(expected=expected, computed=got, abs_errors=abs_err,
                        rel_errors=rel_err, max_abs_error=max(abs_err.values()),
                        max_rel_error=max(rel_err.values()), tol=tol)


def _fmt(mat):
    return "[" + ", ".join("[" + ", ".join(str(v) for v in row) + "]" for row in mat) + "]"


def _no_measure(s, cls):
    m1 = _fmt(build_m1(s).mat)
    if cls.branch is Branch.NOT_PSD:
        return NoMeasure(NoMeasureReason.M1_NOT_PSD,
                         f"M(1) = {m1} is not positive semidefinite", cls)
    return NoMeasure(NoMeasureReason.RANGE_INCLUSION_FAILS,
                     f"Ran B(2) is not contained in Ran M(1): M(1) W = B(2) is "
                     f"inconsistent for M(1) = {m1}, B(2) = {_fmt(build_b2(s))}", cls)


def solve(s, tol=DEFAULT_TOL):
    """Decide the cubic moment problem for ``s`` and build a minimal measure.

    Returns
    -------
    Solution or NoMeasure
        ``Solution`` carries the measure (rank M(1) atoms when b = y, four
        otherwise) with its flat-extension certificate; ``NoMeasure`` names
        the violated necessary condition.

    Raises
    ------
    ExtensionError, VarietyError, RecoveryError
        Internal diagnostics; these never mean "no measure exists".
    """
    if not isinstance(s, MomentSequence3):
        s = MomentSequence3(s)
    cls = classify(s)
    if not cls.branch.has_measure:
        return _no_measure(s, cls)
    cls, cert = certify(s, cls)
    variety = common_zeros(cert.relations + cert.m3_relations, tol=max(tol, DEFAULT_TOL),
                           expected=cert.rank_m3)
    riesz_values = [s.beta[b] for b in cert.basis]
    weights = solve_weights(variety.points, cert.basis, riesz_values)
    measure = AtomicMeasure(variety.points, weights)
    report = verify_measure(s, measure, tol)
    if not report.passed:
        raise VerificationFailed(
            f"recovered measure misses the moments by {report.max_rel_error:.3g}")
    return Solution(measure=measure, certificate=cert, classification=cls, report=report)


def rank_additivity_holds(cert, cls):
    """rank M(2) == rank M(1) + rank(C(2) - W^T M(1) W), exactly."""
    c2 = cert.m2.mat[3:, 3:]
    delta = rank(to_matrix(c2) - cls.schur.matrix)
    return cert.rank_m2 == cls.rank_m1 + delta
