"""Real common zeros of column-relation polynomials.

Elimination is done exactly: resultants of the relation polynomials are
computed over the rationals (Sylvester determinants, evaluated at sample
points and interpolated), and their real roots are isolated with Sturm
sequences before a final Newton polish in floating point.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .linalg import det, rank, to_matrix
from .moments import MERGE_TOL

DEFAULT_TOL = 1e-9


class VarietyError(Exception):
    pass


class IdenticallyZero(VarietyError):
    """The resultant vanishes: the two polynomials share a common factor."""


class InfiniteVariety(VarietyError):
    """The relations cut out a curve rather than finitely many points."""


class CardinalityMismatch(VarietyError):
    """The number of points differs from the rank of the flat moment matrix."""


# -- univariate polynomials: tuples of Fractions, lowest degree first -------

def trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def degree(p):
    return len(trim(p)) - 1


def peval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def pderiv(p):
    return trim(tuple(k * c for k, c in enumerate(p))[1:])


def pdivmod(a, b):
    a, b = list(trim(a)), trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    while len(a) >= len(b) and a:
        shift = len(a) - len(b)
        coef = Fraction(a[-1]) / b[-1]
        q[shift] = coef
        for k, c in enumerate(b):
            a[k + shift] -= coef * c
        a = list(trim(a))
    return trim(q), trim(a)


def pgcd(a, b):
    a, b = trim(a), trim(b)
    while b:
        a, b = b, pdivmod(a, b)[1]
    if not a:
        return a
    return tuple(Fraction(c) / a[-1] for c in a)


def squarefree(p):
    """Square-free part ``p / gcd(p, p')``, made monic."""
    p = trim(p)
    if degree(p) < 1:
        return p
    g = pgcd(p, pderiv(p))
    q = pdivmod(p, g)[0]
    return tuple(Fraction(c) / q[-1] for c in q)


def sturm_sequence(p):
    seq = [trim(p), pderiv(p)]
    while seq[-1]:
        rem = pdivmod(seq[-2], seq[-1])[1]
        if not rem:
            break
        seq.append(tuple(-c for c in rem))
    return seq


def _sign_changes(seq, x):
    signs = [s for s in (np.sign(peval(q, x)) for q in seq) if s != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if u != v)


def _root_bound(p):
    """Cauchy bound: all roots satisfy |x| < bound."""
    lead = abs(p[-1])
    return 1 + max(abs(Fraction(c)) / lead for c in p[:-1])


def real_roots(p, tol=1e-12):
    """Distinct real roots of a rational polynomial, ascending.

    Roots are isolated by Sturm-sequence bisection on the square-free part,
    bisected to width ``tol`` and then polished by float Newton steps.
    """
    p = trim(Fraction(c) for c in p)
    if not p:
        raise IdenticallyZero("zero polynomial has no isolated roots")
    if degree(p) < 1:
        return []
    sf = squarefree(p)
    seq = sturm_sequence(sf)
    bound = Fraction(_root_bound(sf)).limit_denominator(1) + 1
    # (lo, hi] intervals with exactly one root each
    stack = [(-bound, bound, _sign_changes(seq, -bound), _sign_changes(seq, bound))]
    isolated = []
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        count = vlo - vhi
        if count == 0:
            continue
        if count == 1:
            isolated.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        vmid = _sign_changes(seq, mid)
        stack.append((lo, mid, vlo, vmid))
        stack.append((mid, hi, vmid, vhi))
    roots = []
    width = Fraction(tol).limit_denominator(10 ** 15)
    for lo, hi in isolated:
        if peval(sf, hi) == 0:
            roots.append(float(hi))
            continue
        # lo may itself be a neighbouring root, so track the sign at hi
        shi = np.sign(peval(sf, hi))
        while hi - lo > width:
            mid = (lo + hi) / 2
            smid = np.sign(peval(sf, mid))
            if smid == 0:
                lo = hi = mid
                break
            if smid == shi:
                hi = mid
            else:
                lo = mid
        roots.append(_newton(sf, float(lo), float(hi)))
    return sorted(roots)


def _newton(p, lo, hi, steps=4):
    coeffs = [float(c) for c in p]
    dcoeffs = [k * c for k, c in enumerate(coeffs)][1:]
    x = 0.5 * (lo + hi)
    for _ in range(steps):
        d = peval(dcoeffs, x)
        if d == 0:
            break
        nx = x - peval(coeffs, x) / d
        if not lo <= nx <= hi:
            break
        x = nx
    return x


# -- bivariate elimination --------------------------------------------------

def _coeffs_in(rel, var):
    """Coefficients of ``rel`` in powers of ``var`` (0 = x, 1 = y), as
    univariate polynomials in the other variable."""
    deg = rel.degree_in(var)
    out = [[Fraction(0)] * (rel.degree + 1) for _ in range(deg + 1)]
    for mono, c in rel.coeffs.items():
        out[mono[var]][mono[1 - var]] += c
    return [tuple(row) for row in out]


def _sylvester(f, g):
    """Sylvester matrix of numeric coefficient lists (lowest degree first)."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    if size == 0:
        return None
    rows = []
    for k in range(n):
        rows.append([0] * k + list(reversed(f)) + [0] * (size - m - 1 - k))
    for k in range(m):
        rows.append([0] * k + list(reversed(g)) + [0] * (size - n - 1 - k))
    return rows


def _interpolate(xs, ys):
    """Exact Lagrange interpolation, returning coefficients lowest first."""
    n = len(xs)
    out = [Fraction(0)] * n
    for i in range(n):
        basis = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            basis = [Fraction(0)] + basis
            for k in range(len(basis) - 1):
                basis[k] -= xs[j] * basis[k + 1]
            denom *= xs[i] - xs[j]
        for k, c in enumerate(basis):
            out[k] += ys[i] * c / denom
    return trim(out)


def resultant(p, q, var=1):
    """Resultant of two relation polynomials eliminating ``var`` (1 = y).

    Returns a univariate polynomial in the remaining variable as a tuple of
    Fractions, lowest degree first.

    Raises
    ------
    IdenticallyZero
        If the resultant is the zero polynomial.
    """
    pc, qc = _coeffs_in(p, var), _coeffs_in(q, var)
    if len(pc) == 1 and len(qc) == 1:
        raise IdenticallyZero("neither polynomial involves the eliminated variable")
    bound = p.degree * q.degree
    xs = [Fraction(k) for k in range(bound + 1)]
    values = []
    for x0 in xs:
        f = [peval(c, x0) for c in pc]
        g = [peval(c, x0) for c in qc]
        values.append(det(_sylvester(f, g)))
    res = _interpolate(xs, values)
    if not res:
        raise IdenticallyZero("polynomials share a common factor")
    return res


def resultant_y(p, q):
    return resultant(p, q, var=1)


def resultant_x(p, q):
    return resultant(p, q, var=0)


def _eliminate(relations, var):
    """Real roots in the surviving variable from the first nonzero resultant."""
    pairs = sorted(itertools.combinations(relations, 2),
                   key=lambda pq: pq[0].degree * pq[1].degree)
    for p, q in pairs:
        try:
            res = resultant(p, q, var)
        except IdenticallyZero:
            continue
        return real_roots(res)
    return None


@dataclass(frozen=True)
class VarietyResult:
    points: tuple
    residuals: tuple


def _residual(relations, x, y):
    return max(abs(r.evaluate_float(x, y)) for r in relations)


def _scale(rel, x, y):
    return 1 + rel.norm1() * max(1.0, abs(x), abs(y)) ** 3


def _accepts(relations, x, y, tol):
    return all(abs(r.evaluate_float(x, y)) <= tol * _scale(r, x, y) for r in relations)


def _gradient(rel, x, y):
    gx = sum(float(c) * i * x ** (i - 1) * y ** j
             for (i, j), c in rel.coeffs.items() if i)
    gy = sum(float(c) * j * x ** i * y ** (j - 1)
             for (i, j), c in rel.coeffs.items() if j)
    return gx, gy


def _polish(relations, x, y, steps=5):
    """Gauss-Newton refinement of a point against all relations."""
    for _ in range(steps):
        F = np.array([r.evaluate_float(x, y) for r in relations])
        J = np.array([_gradient(r, x, y) for r in relations])
        step, *_ = np.linalg.lstsq(J, -F, rcond=None)
        nx, ny = x + step[0], y + step[1]
        if _residual(relations, nx, ny) > _residual(relations, x, y):
            break
        x, y = nx, ny
    return x, y


def _specialize(rel, value, var):
    """Float coefficients in the other variable after fixing ``var``."""
    other = 1 - var
    out = [0.0] * (rel.degree_in(other) + 1)
    for mono, c in rel.coeffs.items():
        out[mono[other]] += float(c) * value ** mono[var]
    return out


def _fill_other(relations, values, var, tol):
    """For each fixed coordinate, recover the other one from the relations."""
    candidates = []
    for v in values:
        best = None
        for rel in relations:
            coeffs = _specialize(rel, v, var)
            scale = max(abs(c) for c in coeffs) if coeffs else 0.0
            while coeffs and abs(coeffs[-1]) <= 1e-9 * max(scale, 1.0):
                coeffs.pop()
            if len(coeffs) >= 2 and (best is None or len(coeffs) < len(best)):
                best = coeffs
        if best is None:
            raise InfiniteVariety(f"every relation vanishes identically at {v}")
        for root in np.roots(best[::-1]):
            if abs(root.imag) <= 1e-6 * max(1.0, abs(root.real)):
                point = (v, root.real) if var == 0 else (root.real, v)
                candidates.append(point)
    return candidates


def _substitute_linear(relations, tol):
    """Use a degree-1 relation to reduce the system to one variable."""
    linear = [r for r in relations if r.degree == 1]
    lin = linear[0]
    a, b, c = (lin.coeffs.get(m, Fraction(0)) for m in ((1, 0), (0, 1), (0, 0)))
    # along the line, the free variable is t; (x, y) = (x0 + dx t, y0 + dy t)
    if b != 0:
        x0, dx, y0, dy = Fraction(0), Fraction(1), -c / b, -a / b
    else:
        x0, dx, y0, dy = -c / a, Fraction(0), Fraction(0), Fraction(1)
    polys = []
    for rel in relations:
        if rel is lin:
            continue
        acc = (Fraction(0),)
        for (i, j), coef in rel.coeffs.items():
            term = (coef,)
            for _ in range(i):
                term = _pmul(term, (x0, dx))
            for _ in range(j):
                term = _pmul(term, (y0, dy))
            acc = _padd(acc, term)
        acc = trim(acc)
        if acc:
            polys.append(acc)
    if not polys:
        raise InfiniteVariety("relations reduce to a single line")
    g = polys[0]
    for q in polys[1:]:
        g = pgcd(g, q)
    if degree(g) < 1:
        return []
    return [(float(x0 + dx * Fraction(t)), float(y0 + dy * Fraction(t)))
            for t in real_roots(g)]


def _pmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        for j, v in enumerate(b):
            out[i + j] += u * v
    return tuple(out)


def _padd(a, b):
    n = max(len(a), len(b))
    return tuple((a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0)
                 for k in range(n))


def _dedupe(points):
    out = []
    for p in points:
        if all(max(abs(p[0] - q[0]), abs(p[1] - q[1])) >= MERGE_TOL for q in out):
            out.append(p)
    return out


def common_zeros(relations, tol=DEFAULT_TOL, expected=None):
    """Real points where every relation vanishes.

    Parameters
    ----------
    relations : sequence of RelationPoly
    tol : float
        Acceptance tolerance, scaled per relation by
        ``1 + ||P||_1 max(1, |x|, |y|)^3``.
    expected : int, optional
        Required number of points (the rank of a flat moment matrix).

    Raises
    ------
    InfiniteVariety
        If the relations do not cut out finitely many points.
    CardinalityMismatch
        If ``expected`` is given and the point count differs.
    """
    relations = list(relations)
    if not relations:
        raise InfiniteVariety("no relations: the variety is the whole plane")
    linear = [r for r in relations if r.degree == 1]
    if len(linear) >= 2 and rank(to_matrix(
            [[r.coeffs.get(m, 0) for m in ((1, 0), (0, 1))] for r in linear])) == 2:
        p, q = linear[0], linear[1]
        A = np.array([[float(r.coeffs.get((1, 0), 0)), float(r.coeffs.get((0, 1), 0))]
                      for r in (p, q)])
        rhs = -np.array([float(r.coeffs.get((0, 0), 0)) for r in (p, q)])
        candidates = [tuple(np.linalg.solve(A, rhs))]
    elif linear:
        candidates = _substitute_linear(relations, tol)
    else:
        xs = _eliminate(relations, var=1)
        ys = _eliminate(relations, var=0)
        if xs is not None and ys is not None:
            candidates = [(x, y) for x in xs for y in ys]
        elif xs is not None:
            candidates = _fill_other(relations, xs, 0, tol)
        elif ys is not None:
            candidates = _fill_other(relations, ys, 1, tol)
        else:
            raise InfiniteVariety("all pairwise resultants vanish")
    points = []
    for x, y in candidates:
        if not _accepts(relations, x, y, max(tol, 1e-6)):
            continue
        x, y = _polish(relations, float(x), float(y))
        if _accepts(relations, x, y, tol):
            points.append((float(x), float(y)))
    points = sorted(_dedupe(points))
    if expected is not None and len(points) != expected:
        raise CardinalityMismatch(
            f"variety has {len(points)} points, flat rank is {expected}")
    residuals = tuple(_residual(relations, x, y) for x, y in points)
    return VarietyResult(points=tuple(points), residuals=residuals)


__all__ = [
    "CardinalityMismatch", "DEFAULT_TOL", "IdenticallyZero", "InfiniteVariety",
    "VarietyError", "VarietyResult", "common_zeros", "real_roots", "resultant",
    "resultant_x", "resultant_y", "squarefree", "sturm_sequence",
]
