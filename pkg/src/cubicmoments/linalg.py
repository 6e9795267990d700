"""Exact rational linear algebra on small dense matrices.

Matrices are numpy arrays with ``dtype=object`` holding
:class:`fractions.Fraction` entries, so every rank, definiteness and
solvability decision is made without rounding.
"""

from fractions import Fraction

import numpy as np


def as_fraction(value):
    """Convert ``value`` to a :class:`Fraction`.

    Floats go through their shortest decimal repr, so ``0.1`` becomes
    ``1/10`` rather than the nearest binary fraction. Strings may be
    ``"p/q"``, integers or decimals.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (bool, np.bool_)):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    if isinstance(value, (float, np.floating)):
        if not np.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(float(value)))
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to Fraction")


def to_matrix(rows):
    """Build a 2-d object array of Fractions from nested sequences."""
    arr = np.array(rows, dtype=object)
    if arr.ndim != 2:
        raise ValueError(f"expected a 2-d array, got shape {arr.shape}")
    out = np.empty(arr.shape, dtype=object)
    for idx, v in np.ndenumerate(arr):
        out[idx] = as_fraction(v)
    return out


def identity(n):
    return to_matrix([[int(i == j) for j in range(n)] for i in range(n)])


def zeros(rows, cols):
    return to_matrix([[0] * cols for _ in range(rows)])


def is_symmetric(A):
    A = np.asarray(A, dtype=object)
    return A.ndim == 2 and A.shape[0] == A.shape[1] and bool(np.all(A == A.T))


def rref(A):
    """Reduced row echelon form by exact Gauss-Jordan elimination.

    Returns
    -------
    R : ndarray
        The reduced matrix (a copy).
    pivots : list of int
        Pivot column indices, one per nonzero row of ``R``.
    """
    R = to_matrix(A)
    nrows, ncols = R.shape
    pivots = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        pivot = next((r for r in range(row, nrows) if R[r, col] != 0), None)
        if pivot is None:
            continue
        if pivot != row:
            R[[row, pivot]] = R[[pivot, row]]
        R[row] = R[row] / R[row, col]
        for r in range(nrows):
            if r != row and R[r, col] != 0:
                R[r] = R[r] - R[r, col] * R[row]
        pivots.append(col)
        row += 1
    return R, pivots


def rank(A):
    """Exact rank over the rationals."""
    A = to_matrix(A)
    if A.size == 0:
        return 0
    return len(rref(A)[1])


def det(A):
    """Determinant by fraction-free (Bareiss) elimination."""
    M = to_matrix(A)
    n = M.shape[0]
    if M.shape != (n, n):
        raise ValueError("determinant needs a square matrix")
    if n == 0:
        return Fraction(1)
    sign = 1
    prev = Fraction(1)
    for k in range(n - 1):
        if M[k, k] == 0:
            swap = next((r for r in range(k + 1, n) if M[r, k] != 0), None)
            if swap is None:
                return Fraction(0)
            M[[k, swap]] = M[[swap, k]]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i, j] = (M[i, j] * M[k, k] - M[i, k] * M[k, j]) / prev
        prev = M[k, k]
    return sign * M[n - 1, n - 1]


def is_psd(A):
    """Exact positive semidefiniteness test.

    Symmetric pivoted LDL^T: repeatedly eliminate on a strictly positive
    diagonal entry. A negative diagonal entry anywhere certifies
    indefiniteness; a zero diagonal entry requires its whole row to vanish.
    """
    M = to_matrix(A)
    if not is_symmetric(M):
        raise ValueError("is_psd expects a symmetric matrix")
    while M.shape[0]:
        diag = M.diagonal()
        if any(d < 0 for d in diag):
            return False
        k = next((i for i, d in enumerate(diag) if d > 0), None)
        if k is None:
            return bool(np.all(M == 0))
        for i, d in enumerate(diag):
            if d == 0 and np.any(M[i] != 0):
                return False
        col = M[:, k].copy()
        M = M - np.outer(col, col) / M[k, k]
        keep = [i for i in range(M.shape[0]) if i != k]
        M = M[np.ix_(keep, keep)]
    return True


def is_pd(A):
    """True iff every leading principal minor is strictly positive.

    Uses unpivoted elimination: the k-th leading minor is the product of the
    first k pivots, so the test is that every pivot is positive.
    """
    M = to_matrix(A)
    if not is_symmetric(M):
        raise ValueError("is_pd expects a symmetric matrix")
    n = M.shape[0]
    for k in range(n):
        if M[k, k] <= 0:
            return False
        for i in range(k + 1, n):
            if M[i, k] != 0:
                M[i, k:] = M[i, k:] - (M[i, k] / M[k, k]) * M[k, k:]
    return True


def solve_sym(A, B):
    """Solve ``A W = B`` exactly, or return None when inconsistent.

    Free variables are set to zero, which makes the returned solution
    deterministic. ``A`` need not be invertible; any solution gives the same
    ``W.T @ A @ W`` when ``A`` is symmetric.
    """
    A = to_matrix(A)
    B = to_matrix(B)
    n, m = A.shape
    if B.shape[0] != n:
        raise ValueError(f"shape mismatch: A is {A.shape}, B is {B.shape}")
    R, pivots = rref(np.hstack([A, B]))
    if any(p >= m for p in pivots):
        return None
    W = zeros(m, B.shape[1])
    for row, col in enumerate(pivots):
        W[col] = R[row, m:]
    return W


def nullspace(A):
    """Basis of the right kernel of ``A`` as the columns of a matrix."""
    A = to_matrix(A)
    ncols = A.shape[1]
    R, pivots = rref(A)
    free = [c for c in range(ncols) if c not in pivots]
    K = zeros(ncols, len(free))
    for k, f in enumerate(free):
        K[f, k] = Fraction(1)
        for row, p in enumerate(pivots):
            K[p, k] = -R[row, f]
    return K


def to_float(A):
    return np.asarray(A, dtype=object).astype(float)
