from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cubicmoments.linalg import is_psd, to_matrix
from cubicmoments.moments import (AtomicMeasure, MomentSequence3, assemble_m2, build_b2,
                                  build_m1, check_hankel, monomials, moments_from_measure,
                                  riesz)

from .cases import EX36, EX37, EX310, EX311, point_mass_origin

coord = st.fractions(min_value=-5, max_value=5, max_denominator=6)
weight = st.fractions(min_value=Fraction(1, 10), max_value=10, max_denominator=10)


@st.composite
def measures(draw, max_atoms=4):
    n = draw(st.integers(1, max_atoms))
    atoms = draw(st.lists(st.tuples(coord, coord), min_size=n, max_size=n, unique=True))
    return AtomicMeasure(atoms, draw(st.lists(weight, min_size=n, max_size=n)))


def test_monomial_order():
    assert monomials(2) == ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))
    assert monomials(3)[6:] == ((3, 0), (2, 1), (1, 2), (0, 3))
    assert all(len(monomials(n)) == (n + 1) * (n + 2) // 2 for n in range(7))


def test_sequence_validation():
    with pytest.raises(ValueError, match="beta_00"):
        MomentSequence3.from_list([0] * 10)
    with pytest.raises(ValueError, match="missing"):
        MomentSequence3({(0, 0): 1})
    with pytest.raises(ValueError):
        MomentSequence3.from_list([1] * 9)


@pytest.mark.parametrize("s, expected", [
    (EX36, [[5, 1, 2], [1, 5, -2], [2, -2, 2]]),
    (EX310, [[2, 1, 1], [1, 2, 1], [1, 1, 2]]),
    (point_mass_origin(), [[1, 0, 0], [0, 0, 0], [0, 0, 0]]),
])
def test_build_m1(s, expected):
    assert build_m1(s).mat.tolist() == expected


@pytest.mark.parametrize("s, expected", [
    (EX36, [[5, -2, 2], [1, 2, -2], [2, -2, 2]]),
    (EX311, [[5, -3, 9], [9, 3, 1], [3, 1, 1]]),
    (point_mass_origin(), [[0] * 3] * 3),
])
def test_build_b2(s, expected):
    assert build_b2(s).tolist() == expected


def test_assemble_m2_singular_example():
    c2 = [[5, -2, 2], [-2, 2, -2], [2, -2, 2]]
    m2 = assemble_m2(EX36, c2)
    assert m2.mat.tolist() == [
        [5, 1, 2, 5, -2, 2],
        [1, 5, -2, 1, 2, -2],
        [2, -2, 2, 2, -2, 2],
        [5, 1, 2, 5, -2, 2],
        [-2, 2, -2, -2, 2, -2],
        [2, -2, 2, 2, -2, 2],
    ]
    assert check_hankel(m2)


def test_assemble_m2_greater_example():
    q = Fraction(11, 4)
    m2 = assemble_m2(EX310, [[q, 1, q], [1, q, 1], [q, 1, q]])
    assert m2.entry((2, 0), (2, 0)) == q
    assert m2.entry((1, 1), (1, 1)) == q
    assert m2.mat.tolist() == [
        [2, 1, 1, 2, 1, 2],
        [1, 2, 1, 1, 2, 1],
        [1, 1, 2, 2, 1, 2],
        [2, 1, 2, q, 1, q],
        [1, 2, 1, 1, q, 1],
        [2, 1, 2, q, 1, q],
    ]


def test_assemble_m2_point_mass():
    m2 = assemble_m2(point_mass_origin(), np.zeros((3, 3), dtype=int))
    assert np.all(m2.mat == np.diag([1, 0, 0, 0, 0, 0]))


def test_assemble_m2_rejects_non_hankel():
    with pytest.raises(ValueError, match="Hankel"):
        assemble_m2(EX36, [[1, 0, 2], [0, 3, 0], [2, 0, 1]])
    with pytest.raises(ValueError, match="symmetric"):
        assemble_m2(EX36, [[1, 1, 0], [0, 0, 0], [0, 0, 1]])


def test_riesz():
    assert riesz({(0, 0): 1}, EX36) == 5
    assert riesz({(1, 0): 1, (0, 1): 2}, EX36) == 5
    assert riesz({(2, 1): 1}, EX311) == 3
    with pytest.raises(ValueError):
        riesz({(2, 2): 1}, EX36)


def test_moments_from_measure_examples():
    m36 = AtomicMeasure([(1, 0), (-1, 1)], [3, 2])
    assert moments_from_measure(m36, 3) == EX36.beta
    m37 = AtomicMeasure([(0, 1), (1, -1), (1, 0)], [1, 1, 1])
    assert moments_from_measure(m37, 3) == EX37.beta
    delta = moments_from_measure(AtomicMeasure([(0, 0)], [1]), 5)
    assert delta[(0, 0)] == 1 and all(v == 0 for k, v in delta.items() if k != (0, 0))


def test_float_measure_gives_float_moments():
    beta = moments_from_measure(AtomicMeasure([(0.5, -1.0)], [2.0]), 2)
    assert isinstance(beta[(1, 0)], float) and beta[(1, 1)] == -1.0


def test_atomic_measure_merges_and_validates():
    m = AtomicMeasure([(1.0, 2.0), (1.0 + 1e-10, 2.0), (0.0, 0.0)], [1.0, 2.0, 1.0])
    assert len(m) == 2 and m.weights[0] == 3.0
    with pytest.raises(ValueError):
        AtomicMeasure([(0, 0)], [0])
    with pytest.raises(ValueError):
        AtomicMeasure([(0, 0), (1, 1)], [1])


@settings(max_examples=60, deadline=None)
@given(measures())
def test_moment_matrix_of_measure_is_psd(m):
    s = MomentSequence3(moments_from_measure(m, 3))
    assert is_psd(build_m1(s).mat)


@settings(max_examples=60, deadline=None)
@given(st.dictionaries(st.sampled_from(monomials(3)), coord),
       st.dictionaries(st.sampled_from(monomials(3)), coord), coord)
def test_riesz_is_linear(p, q, alpha):
    combo = {k: alpha * p.get(k, 0) + q.get(k, 0) for k in set(p) | set(q)}
    assert riesz(combo, EX311) == alpha * riesz(p, EX311) + riesz(q, EX311)


@settings(max_examples=40, deadline=None)
@given(coord, coord)
def test_single_atom_moments(c, d):
    beta = moments_from_measure(AtomicMeasure([(c, d)], [1]), 6)
    assert all(v == c ** i * d ** j for (i, j), v in beta.items())


@settings(max_examples=40, deadline=None)
@given(measures(), st.lists(coord, min_size=6, max_size=6))
def test_assembled_m2_is_hankel(m, quartic):
    s = MomentSequence3(moments_from_measure(m, 3))
    x, a, b, t, z, _ = quartic
    m2 = assemble_m2(s, to_matrix([[x, a, b], [a, b, t], [b, t, z]]))
    assert check_hankel(m2)
