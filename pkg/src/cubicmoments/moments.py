"""Moment sequences, lex monomial indexing and moment matrices."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

import numpy as np

from .linalg import as_fraction, is_symmetric, to_matrix

MERGE_TOL = 1e-8


@lru_cache(maxsize=None)
def monomials(n):
    """Exponent pairs of degree <= n in degree-lex order.

    ``monomials(2) == ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))``,
    i.e. 1, X, Y, X^2, XY, Y^2.
    """
    return tuple((d - j, j) for d in range(n + 1) for j in range(d + 1))


def monomial_name(mono):
    """Human-readable label, e.g. ``(2, 1) -> 'X^2Y'``."""
    i, j = mono
    if i == j == 0:
        return "1"
    parts = []
    for var, e in (("X", i), ("Y", j)):
        if e == 1:
            parts.append(var)
        elif e > 1:
            parts.append(f"{var}^{e}")
    return "".join(parts)


CUBIC_KEYS = monomials(3)


@dataclass(frozen=True)
class MomentSequence3:
    """The ten moments beta_ij, i + j <= 3, as exact rationals."""

    beta: Mapping

    def __post_init__(self):
        beta = {}
        for key, value in dict(self.beta).items():
            i, j = (int(k) for k in key)
            beta[(i, j)] = as_fraction(value)
        missing = [k for k in CUBIC_KEYS if k not in beta]
        if missing:
            raise ValueError(f"missing moments: {missing}")
        extra = [k for k in beta if k not in CUBIC_KEYS]
        if extra:
            raise ValueError(f"unexpected moment indices: {extra}")
        if beta[(0, 0)] <= 0:
            raise ValueError("beta_00 > 0 required")
        object.__setattr__(self, "beta", beta)

    @classmethod
    def from_list(cls, values):
        """Build from the values in lex order beta00, beta10, ..., beta03."""
        values = list(values)
        if len(values) != len(CUBIC_KEYS):
            raise ValueError(f"expected 10 moments, got {len(values)}")
        return cls(dict(zip(CUBIC_KEYS, values)))

    def __getitem__(self, key):
        return self.beta[key]

    def as_list(self):
        return [self.beta[k] for k in CUBIC_KEYS]


@dataclass(frozen=True)
class MomentMatrix:
    """Symmetric moment matrix M(n) with rows/columns indexed by ``index``."""

    n: int
    mat: np.ndarray

    @property
    def index(self):
        return monomials(self.n)

    def entry(self, row, col):
        """Entry at row monomial ``row`` and column monomial ``col``."""
        pos = {m: k for k, m in enumerate(self.index)}
        return self.mat[pos[row], pos[col]]

    def moments(self):
        """All moments readable from the matrix, keyed by (i, j)."""
        out = {}
        for r, u in enumerate(self.index):
            for c, v in enumerate(self.index):
                out.setdefault((u[0] + v[0], u[1] + v[1]), self.mat[r, c])
        return out


def moment_matrix(beta, n):
    """Assemble M(n) from any mapping holding moments up to degree 2n."""
    index = monomials(n)
    rows = [[beta[(u[0] + v[0], u[1] + v[1])] for v in index] for u in index]
    return MomentMatrix(n, to_matrix(rows))


def check_hankel(M):
    """True iff every entry of ``M`` depends only on its monomial sum."""
    seen = {}
    for r, u in enumerate(M.index):
        for c, v in enumerate(M.index):
            key = (u[0] + v[0], u[1] + v[1])
            if seen.setdefault(key, M.mat[r, c]) != M.mat[r, c]:
                return False
    return True


def build_m1(s):
    return moment_matrix(s.beta, 1)


def build_b2(s):
    """The 3x3 block of M(2) with rows 1, X, Y and columns X^2, XY, Y^2."""
    rows = [[s[(u[0] + v[0], u[1] + v[1])] for v in monomials(2)[3:]]
            for u in monomials(1)]
    return to_matrix(rows)


def assemble_m2(s, c2):
    """Block matrix [[M(1), B(2)], [B(2)^T, C(2)]] as a MomentMatrix.

    ``c2`` holds the quartic moments and must be a symmetric Hankel block,
    i.e. ``c2[0, 2] == c2[1, 1]``.
    """
    c2 = to_matrix(c2)
    if c2.shape != (3, 3) or not is_symmetric(c2):
        raise ValueError("C(2) must be a symmetric 3x3 matrix")
    if c2[0, 2] != c2[1, 1]:
        raise ValueError("C(2) is not Hankel: beta22 entries disagree")
    beta = dict(s.beta)
    beta.update({(4, 0): c2[0, 0], (3, 1): c2[0, 1], (2, 2): c2[0, 2],
                 (1, 3): c2[1, 2], (0, 4): c2[2, 2]})
    return moment_matrix(beta, 2)


def riesz(coeffs, s, max_degree=3):
    """Riesz functional: sum of a_ij * beta_ij for P = sum a_ij x^i y^j."""
    beta = s.beta if isinstance(s, MomentSequence3) else s
    total = Fraction(0)
    for (i, j), a in dict(coeffs).items():
        if a == 0:
            continue
        if i + j > max_degree:
            raise ValueError(f"degree {i + j} term exceeds {max_degree}")
        total += as_fraction(a) * beta[(i, j)]
    return total


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite sum of point masses ``sum rho_k delta_(x_k, y_k)``.

    Atoms closer than ``MERGE_TOL`` in max-norm are merged and their weights
    summed. Weights must be strictly positive.
    """

    atoms: tuple
    weights: tuple

    def __post_init__(self):
        atoms = [tuple(a) for a in self.atoms]
        weights = list(self.weights)
        if len(atoms) != len(weights):
            raise ValueError("atoms and weights differ in length")
        if any(len(a) != 2 for a in atoms):
            raise ValueError("atoms must be (x, y) pairs")
        if any(not w > 0 for w in weights):
            raise ValueError("weights must be positive")
        merged_atoms, merged_weights = [], []
        for atom, w in zip(atoms, weights):
            for k, other in enumerate(merged_atoms):
                if max(abs(atom[0] - other[0]), abs(atom[1] - other[1])) < MERGE_TOL:
                    merged_weights[k] += w
                    break
            else:
                merged_atoms.append(atom)
                merged_weights.append(w)
        object.__setattr__(self, "atoms", tuple(merged_atoms))
        object.__setattr__(self, "weights", tuple(merged_weights))

    def __len__(self):
        return len(self.atoms)

    @property
    def is_exact(self):
        values = [c for a in self.atoms for c in a] + list(self.weights)
        return all(isinstance(v, (int, Fraction)) and not isinstance(v, bool)
                   for v in values)


def moments_from_measure(m, max_degree=3):
    """Moments beta_ij = sum_k rho_k x_k^i y_k^j for i + j <= max_degree.

    Exact measures (int/Fraction data) give Fraction moments; anything else
    gives floats.
    """
    exact = m.is_exact
    zero = Fraction(0) if exact else 0.0
    out = {}
    for i, j in monomials(max_degree):
        total = zero
        for (x, y), w in zip(m.atoms, m.weights):
            if exact:
                total += Fraction(w) * Fraction(x) ** i * Fraction(y) ** j
            else:
                total += float(w) * float(x) ** i * float(y) ** j
        out[(i, j)] = total
    return out
