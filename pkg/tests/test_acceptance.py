"""Acceptance criteria, one test per criterion.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""

import contextlib
import io
import json
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from cubicmoments import cli
from cubicmoments.extension import Branch, certify, classify
from cubicmoments.linalg import nullspace, solve_sym, to_matrix
from cubicmoments.moments import (AtomicMeasure, MomentSequence3, build_b2, build_m1,
                                  moments_from_measure)
from cubicmoments.recovery import (NoMeasure, NoMeasureReason, Solution,
                                   rank_additivity_holds, solve)

from .cases import (EX36, EX37, EX310, EX310_ATOMS, EX310_WEIGHTS, EX311, EX311_ATOMS,
                    EX311_WEIGHTS, match_points)
from .test_extension import rank_one_sequence, slanted_line_sequence, vertical_line_sequence

F = Fraction
R13 = math.sqrt(13)


def weights_match(measure, atoms, weights, tol):
    got = dict(zip(measure.atoms, measure.weights))
    for p, w in zip(atoms, weights):
        near = [q for q in got if max(abs(q[0] - p[0]), abs(q[1] - p[1])) <= tol]
        if len(near) != 1 or abs(got[near[0]] - w) > tol:
            return False
    return True


def run_cli(*argv):
    out = io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(io.StringIO()):
        code = cli.main(list(argv))
    return code, json.loads(out.getvalue()) if out.getvalue().strip() else None


def problem_file(path, s):
    path.write_text(json.dumps({"beta": {f"{i},{j}": str(v) for (i, j), v in s.beta.items()}}))
    return str(path)


def random_measure(rng):
    n = rng.randint(1, 4)
    atoms = set()
    while len(atoms) < n:
        atoms.add((F(rng.randint(-60, 60), 12), F(rng.randint(-60, 60), 12)))
    weights = [F(rng.randint(1, 100), 10) for _ in range(n)]
    return AtomicMeasure(sorted(atoms), weights)


@pytest.mark.criterion(1, "Singular example: 2 atoms, weights 3 and 2, under 1 s")
def test_ac1_singular_example():
    start = time.perf_counter()
    sol = solve(EX36)
    elapsed = time.perf_counter() - start
    assert isinstance(sol, Solution)
    assert len(sol.measure) == 2
    assert weights_match(sol.measure, [(1, 0), (-1, 1)], [3, 2], 1e-10)
    assert elapsed < 1.0


@pytest.mark.criterion(2, "Nonsingular example: 3 unit atoms, FlatEqual, rank M(1) = 3, b = y = 1")
def test_ac2_nonsingular_example():
    sol = solve(EX37)
    assert len(sol.measure) == 3
    assert weights_match(sol.measure, [(0, 1), (1, -1), (1, 0)], [1, 1, 1], 1e-10)
    cls = sol.classification
    assert cls.branch is Branch.FLAT_EQUAL and cls.rank_m1 == 3
    assert cls.schur.b == cls.schur.y == 1
    # with beta01 = 2 instead of 0, M(1) is indefinite
    literal = MomentSequence3.from_list([3, 2, 2, 2, -1, 2, 2, -1, 1, 0])
    assert classify(literal).branch is Branch.NOT_PSD


@pytest.mark.criterion(3, "b > y example: Greater, b = 11/4, y = 2, 4 atoms, reference M(3)")
def test_ac3_greater_example():
    cls, cert = certify(EX310)
    assert cls.branch is Branch.GREATER
    assert (cls.schur.b, cls.schur.y) == (F(11, 4), 2)
    assert cert.m3.entry((3, 0), (2, 0)) == F(13, 16)  # beta50
    assert cert.m3.entry((3, 0), (3, 0)) == F(139, 32)  # beta60
    assert cert.rank_m3 == cert.rank_m2 == 4
    sol = solve(EX310)
    assert match_points(sol.measure.atoms, EX310_ATOMS, 1e-8)
    assert weights_match(sol.measure, EX310_ATOMS, EX310_WEIGHTS, 1e-8)


@pytest.mark.criterion(4, "b < y example: Less, b = 91/11, y = 112/11, C(2), 4 atoms, M(3)")
def test_ac4_less_example():
    cls, cert = certify(EX311)
    assert cls.branch is Branch.LESS
    assert (cls.schur.b, cls.schur.y) == (F(91, 11), F(112, 11))
    c2 = cert.m2.mat[3:, 3:].tolist()
    assert c2 == [[F(305, 11), F(70, 11), F(112, 11)],
                  [F(70, 11), F(112, 11), F(-147, 11)],
                  [F(112, 11), F(-147, 11), F(4038, 121)]]
    assert cert.rank_m3 == 4
    assert cert.m3.entry((3, 0), (3, 0)) == F(62803791, 260876)
    # beta06
    assert cert.m3.entry((0, 3), (0, 3)) == F(930018189, 7086244)
    sol = solve(EX311)
    assert match_points(sol.measure.atoms, EX311_ATOMS, 1e-3)
    assert weights_match(sol.measure, EX311_ATOMS, EX311_WEIGHTS, 1e-3)


@pytest.mark.criterion(5, "Low rank: 200 rank-1/rank-2 instances give b = y")
def test_ac5_low_rank_instances():
    rng = random.Random(34)

    def q(lo=-4, hi=4):
        return F(rng.randint(lo * 5, hi * 5), 5)

    for k in range(200):
        c, d = q(), q()
        kind = k % 3
        if kind == 0:
            s, r = rank_one_sequence(c, d), 1
        elif kind == 1:
            s, r = vertical_line_sequence(c, d, d * d + F(rng.randint(1, 48), 8)), 2
        else:
            e = q() or F(1)
            s, r = slanted_line_sequence(c, d, e, c * c + F(rng.randint(1, 48), 8)), 2
        cls = classify(s)
        assert cls.rank_m1 == r
        assert cls.schur.b == cls.schur.y
        sol = solve(s)
        assert len(sol.measure) == r


@pytest.fixture(scope="module")
def round_trips(tmp_path_factory):
    rng = random.Random(2024)
    workdir = tmp_path_factory.mktemp("ac6")
    results = []
    start = time.perf_counter()
    for k in range(500):
        m = random_measure(rng)
        mfile = workdir / f"m{k}.json"
        mfile.write_text(json.dumps({"atoms": [[str(x), str(y)] for x, y in m.atoms],
                                     "weights": [str(w) for w in m.weights]}))
        code, beta = run_cli("synth", str(mfile))
        assert code == 0
        pfile = workdir / f"p{k}.json"
        pfile.write_text(json.dumps(beta))
        code, measure = run_cli("solve", str(pfile))
        assert code == 0
        sfile = workdir / f"s{k}.json"
        sfile.write_text(json.dumps(measure))
        code, report = run_cli("verify", str(pfile), str(sfile), "--tol", "1e-8")
        results.append((m, code, report))
    return results, time.perf_counter() - start


@pytest.mark.criterion(6, "Round trip: 500 measures through synth, solve, verify under 60 s")
def test_ac6_round_trip(round_trips):
    results, elapsed = round_trips
    assert all(code == 0 for _, code, _ in results)
    assert max(report["max_rel_error"] for _, _, report in results) <= 1e-8
    assert elapsed < 60


@pytest.mark.criterion(7, "Invariants: rank additivity, mass and first moments, W-invariance")
def test_ac7_invariants(round_trips):
    measures = [m for m, _, _ in round_trips[0]]
    for m in measures:
        s = MomentSequence3(moments_from_measure(m, 3))
        sol = solve(s)
        assert rank_additivity_holds(sol.certificate, sol.classification)
        mass = float(s.beta[(0, 0)])
        assert abs(sum(sol.measure.weights) - mass) <= 1e-9 * mass
        for k, key in ((0, (1, 0)), (1, (0, 1))):
            first = sum(w * p[k] for w, p in zip(sol.measure.weights, sol.measure.atoms))
            assert abs(first - float(s.beta[key])) <= 1e-9 * max(mass, abs(float(s.beta[key])))
    for s in (EX36, EX37, EX310, EX311):
        sol = solve(s)
        assert rank_additivity_holds(sol.certificate, sol.classification)

    rng = random.Random(7)
    singular = 0
    while singular < 100:
        m = random_measure(rng)
        if rng.random() < 0.5:
            # move every atom onto a common line to force a singular M(1)
            a, b = F(rng.randint(-3, 3)), F(rng.randint(-10, 10), 2)
            xs = sorted({p[0] for p in m.atoms})
            m = AtomicMeasure([(x, a * x + b) for x in xs], m.weights[:len(xs)])
        s = MomentSequence3(moments_from_measure(m, 3))
        M1, B2 = build_m1(s).mat, build_b2(s)
        K = nullspace(M1)
        if K.shape[1] == 0:
            continue
        singular += 1
        W1 = solve_sym(M1, B2)
        C = to_matrix([[F(rng.randint(-5, 5)) or F(1) for _ in range(3)]
                       for _ in range(K.shape[1])])
        W2 = W1 + K @ C
        assert not np.all(W1 == W2)
        assert np.all(M1 @ W2 == B2)
        assert np.all(W1.T @ M1 @ W1 == W2.T @ M1 @ W2)


@pytest.mark.criterion(8, "Negative certificates: NoMeasure with reason, CLI exit 2")
def test_ac8_negative_certificates(tmp_path):
    not_psd = MomentSequence3.from_list([1, 0, 0, -1, 0, 0, 0, 0, 0, 0])
    # beta03 + 1 adds e_Y to the Y^2 column of B(2); e_Y is not orthogonal
    # to the kernel vector (-1, 1, 2) of M(1), so it leaves Ran M(1)
    beta = dict(EX36.beta)
    beta[(0, 3)] += 1
    outside = MomentSequence3(beta)
    assert solve_sym(build_m1(outside).mat, build_b2(outside)) is None
    for s, reason in ((not_psd, NoMeasureReason.M1_NOT_PSD),
                      (outside, NoMeasureReason.RANGE_INCLUSION_FAILS)):
        out = solve(s)
        assert isinstance(out, NoMeasure) and out.reason is reason
        code, report = run_cli("solve", problem_file(tmp_path / f"{reason.value}.json", s))
        assert code == 2 and report["no_measure"] == reason.value
