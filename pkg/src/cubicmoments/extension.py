"""Positive and flat extensions M(1) -> M(2) -> M(3) for cubic data.

Everything here is exact. The decision tree follows the comparison of the
(1,1) and (0,2) entries, ``y`` and ``b``, of ``W^T M(1) W`` where
``M(1) W = B(2)``:

* ``b == y``: ``W^T M(1) W`` is Hankel and gives a flat M(2);
* ``b > y``: raise the middle quartic moment to ``b``;
* ``b < y``: shift beta40 by one and rebalance beta22/beta04.

The latter two produce a rank-4 M(2) whose flat M(3) is then built from
the column relations.
"""

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .linalg import is_psd, rank, rref, solve_sym, to_matrix
from .moments import (MomentMatrix, assemble_m2, build_b2, build_m1,
                      monomial_name, monomials, moment_matrix)


class ExtensionError(Exception):
    """The extension machinery reached a state the theory rules out."""


class ConflictingMoments(ExtensionError):
    """Two derivations of the same higher moment disagree."""


class Branch(enum.Enum):
    NOT_PSD = "NotPsd"
    NO_RANGE_INCLUSION = "NoRangeInclusion"
    FLAT_EQUAL = "FlatEqual"
    GREATER = "Greater"
    LESS = "Less"

    @property
    def has_measure(self):
        return self in (Branch.FLAT_EQUAL, Branch.GREATER, Branch.LESS)


@dataclass(frozen=True)
class SchurData:
    """``W`` with ``M(1) W = B(2)`` and the entries of ``W^T M(1) W``.

    The matrix is laid out as ``[[x, a, b], [a, y, t], [b, t, z]]``.
    """

    W: np.ndarray
    x: Fraction
    a: Fraction
    b: Fraction
    y: Fraction
    t: Fraction
    z: Fraction

    @property
    def matrix(self):
        return to_matrix([[self.x, self.a, self.b],
                          [self.a, self.y, self.t],
                          [self.b, self.t, self.z]])


@dataclass(frozen=True)
class Classification:
    branch: Branch
    rank_m1: int
    schur: Optional[SchurData] = None


@dataclass(frozen=True)
class RelationPoly:
    """Column relation ``P(X, Y) = 0`` of a moment matrix.

    ``coeffs`` maps exponent pairs to Fractions. Relations produced by
    :func:`extract_relations` have the form ``lead - sum c_k b_k`` with the
    dependent column ``lead`` carrying coefficient 1.
    """

    coeffs: dict
    lead: Optional[tuple] = None

    def __post_init__(self):
        coeffs = {tuple(k): Fraction(v) for k, v in dict(self.coeffs).items() if v != 0}
        if not coeffs:
            raise ValueError("relation polynomial is identically zero")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self):
        return max(i + j for i, j in self.coeffs)

    def degree_in(self, var):
        return max(k[var] for k in self.coeffs)

    def __call__(self, x, y):
        return sum(c * x ** i * y ** j for (i, j), c in self.coeffs.items())

    def evaluate_float(self, x, y):
        return sum(float(c) * x ** i * y ** j for (i, j), c in self.coeffs.items())

    def norm1(self):
        return float(sum(abs(c) for c in self.coeffs.values()))

    def vector(self, n):
        """Coefficient vector in the lex basis of degree <= n."""
        if self.degree > n:
            raise ValueError(f"relation of degree {self.degree} does not fit degree {n}")
        return to_matrix([[self.coeffs.get(m, 0)] for m in monomials(n)])

    def times(self, mono):
        """The product ``P * x^i y^j``."""
        i, j = mono
        return RelationPoly({(p + i, q + j): c for (p, q), c in self.coeffs.items()})

    def __str__(self):
        terms = []
        for mono in sorted(self.coeffs, key=lambda m: (-sum(m), -m[0])):
            c = self.coeffs[mono]
            name = monomial_name(mono)
            if name == "1":
                terms.append(f"{c}")
            elif c == 1:
                terms.append(name)
            elif c == -1:
                terms.append(f"-{name}")
            else:
                terms.append(f"{c}*{name}")
        return " + ".join(terms).replace("+ -", "- ") + " = 0"


@dataclass(frozen=True)
class ExtensionCertificate:
    """Flat extensions certifying a rank(M(2))-atomic measure."""

    m2: MomentMatrix
    m3: MomentMatrix
    rank_m2: int
    rank_m3: int
    basis: tuple
    relations: tuple
    m3_relations: tuple = field(default=())


def compute_schur(s):
    """Solve ``M(1) W = B(2)``; None when Ran B(2) is not inside Ran M(1)."""
    m1 = build_m1(s).mat
    W = solve_sym(m1, build_b2(s))
    if W is None:
        return None
    S = W.T @ m1 @ W
    return SchurData(W=W, x=S[0, 0], a=S[0, 1], b=S[0, 2],
                     y=S[1, 1], t=S[1, 2], z=S[2, 2])


def classify(s):
    m1 = build_m1(s).mat
    r = rank(m1)
    if not is_psd(m1):
        return Classification(Branch.NOT_PSD, r)
    sd = compute_schur(s)
    if sd is None:
        return Classification(Branch.NO_RANGE_INCLUSION, r)
    if sd.b == sd.y:
        return Classification(Branch.FLAT_EQUAL, r, sd)
    if r != 3:
        # b != y needs M(1) > 0 once range inclusion holds.
        raise ExtensionError(f"b != y with singular M(1) of rank {r}")
    branch = Branch.GREATER if sd.b > sd.y else Branch.LESS
    return Classification(branch, r, sd)


def choose_c2(sd, cls):
    """Quartic block C(2) for the given branch."""
    branch = cls.branch if isinstance(cls, Classification) else Branch(cls)
    x, a, b, y, t, z = sd.x, sd.a, sd.b, sd.y, sd.t, sd.z
    if branch is Branch.FLAT_EQUAL:
        return sd.matrix
    if branch is Branch.GREATER:
        return to_matrix([[x, a, b], [a, b, t], [b, t, z]])
    if branch is Branch.LESS:
        return to_matrix([[x + 1, a, y], [a, y, t], [y, t, z + (y - b) ** 2]])
    raise ValueError(f"no quartic block for branch {branch.value}")


def rank_delta(c2, sd):
    return rank(to_matrix(c2) - sd.matrix)


def extract_relations(M):
    """Lex-first column basis of ``M`` and one relation per other column.

    Returns
    -------
    basis : tuple of monomials
    relations : tuple of RelationPoly
        ``lead - sum_k c_k basis_k`` for every non-basis column ``lead``.
    """
    mat = M.mat
    index = M.index
    _, pivots = rref(mat)
    basis = tuple(index[p] for p in pivots)
    relations = []
    if pivots:
        R, _ = rref(np.hstack([mat[:, pivots], mat]))
    for col, mono in enumerate(index):
        if col in pivots:
            continue
        coeffs = {mono: Fraction(1)}
        for row, p in enumerate(pivots):
            coef = R[row, len(pivots) + col]
            if coef != 0:
                coeffs[index[p]] = coeffs.get(index[p], 0) - coef
        relations.append(RelationPoly(coeffs, lead=mono))
    return basis, tuple(relations)


def _reduce(mono, basis, relations):
    """Coordinates of a degree <= 2 column in the basis columns."""
    vec = {b: Fraction(0) for b in basis}
    if mono in vec:
        vec[mono] = Fraction(1)
        return vec
    rel = next(r for r in relations if r.lead == mono)
    for m, c in rel.coeffs.items():
        if m != mono:
            vec[m] -= c
    return vec


def _cubic_columns(basis, relations):
    """Basis coordinates of X^3, X^2Y, XY^2, Y^3 under recursive generation.

    Every relation times every monomial that keeps the degree <= 3 gives a
    linear identity among columns. Degree <= 2 columns reduce to the basis,
    degree-3 columns are the unknowns.
    """
    cubics = monomials(3)[6:]
    k = len(basis)
    rows, rhs = [], []
    for rel in relations:
        for mono in monomials(3 - rel.degree)[1:]:
            prod = rel.times(mono)
            lhs = [Fraction(0)] * 4
            known = {bb: Fraction(0) for bb in basis}
            for m, c in prod.coeffs.items():
                if sum(m) == 3:
                    lhs[cubics.index(m)] += c
                else:
                    for bb, v in _reduce(m, basis, relations).items():
                        known[bb] += c * v
            rows.append(lhs)
            rhs.append([-known[bb] for bb in basis])
    if not rows:
        raise ExtensionError("no column relations to generate degree-3 columns")
    R, pivots = rref(np.hstack([to_matrix(rows), to_matrix(rhs)]))
    if any(p >= 4 for p in pivots):
        raise ConflictingMoments("column relations give inconsistent degree-3 columns")
    if len(pivots) < 4:
        free = [monomial_name(cubics[c]) for c in range(4) if c not in pivots]
        raise ExtensionError(f"degree-3 columns {free} are not determined by M(2)")
    coords = {}
    for row, p in enumerate(pivots):
        coords[cubics[p]] = dict(zip(basis, R[row, 4:4 + k]))
    return coords


def build_flat_m3(m2, relations=None):
    """Flat extension M(3) of a recursively determined M(2).

    The degree-3 columns are expressed in the basis columns; quintic moments
    are then read off rows of degree <= 2 and sextic moments off rows of
    degree 3. Every moment reachable along several paths is cross-checked.

    Raises
    ------
    ConflictingMoments
        If two derivations of the same moment (or of a known quartic moment)
        disagree.
    ExtensionError
        If the degree-3 columns are underdetermined or the result is not flat.
    """
    if relations is None:
        basis, relations = extract_relations(m2)
    else:
        leads = {r.lead for r in relations}
        if None in leads:
            raise ValueError("relations must carry their dependent column")
        basis = tuple(m for m in m2.index if m not in leads)
    coords = _cubic_columns(basis, relations)
    beta = m2.moments()

    def record(key, value, what):
        known = beta.setdefault(key, value)
        if known != value:
            raise ConflictingMoments(
                f"{what} beta{key[0]}{key[1]}: {known} != {value}")

    # rows of degree <= 2 fix quartic (check) and quintic moments, then
    # rows of degree 3 fix sextic moments.
    for row_degree in (0, 1, 2, 3):
        for u in monomials(3):
            if sum(u) != row_degree:
                continue
            for m, vec in coords.items():
                value = sum((c * beta[(u[0] + b[0], u[1] + b[1])]
                             for b, c in vec.items()), Fraction(0))
                record((u[0] + m[0], u[1] + m[1]), value, "derived")
    m3 = moment_matrix(beta, 3)
    r2, r3 = rank(m2.mat), rank(m3.mat)
    if r2 != r3:
        raise ExtensionError(f"M(3) has rank {r3}, not flat over rank-{r2} M(2)")
    return m3


def certify(s, cls=None):
    """Run the extension chain for a sequence with a representing measure.

    Returns the :class:`Classification` and the :class:`ExtensionCertificate`.
    """
    cls = cls or classify(s)
    if not cls.branch.has_measure:
        raise ValueError(f"no extension for branch {cls.branch.value}")
    c2 = choose_c2(cls.schur, cls)
    m2 = assemble_m2(s, c2)
    basis, relations = extract_relations(m2)
    m3 = build_flat_m3(m2, relations)
    _, m3_relations = extract_relations(m3)
    r2 = rank(m2.mat)
    cert = ExtensionCertificate(m2=m2, m3=m3, rank_m2=r2, rank_m3=rank(m3.mat),
                                basis=basis, relations=relations,
                                m3_relations=m3_relations)
    return cls, cert


__all__ = [
    "Branch", "Classification", "ConflictingMoments", "ExtensionCertificate",
    "ExtensionError", "RelationPoly", "SchurData", "build_flat_m3", "certify",
    "choose_c2", "classify", "compute_schur", "extract_relations", "rank_delta",
]
