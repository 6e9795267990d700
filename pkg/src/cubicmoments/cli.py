"""Command line interface: ``solve``, ``verify`` and ``synth``.

Exit codes: 0 success, 1 malformed input, 2 negative result (no measure /
verification failed), 3 internal diagnostic failure. Standard output
carries JSON only; diagnostics go to standard error.
"""

import argparse
import json
import sys
from fractions import Fraction

from .extension import ExtensionError
from .linalg import as_fraction
from .moments import CUBIC_KEYS, AtomicMeasure, MomentSequence3, moments_from_measure
from .recovery import NoMeasure, RecoveryError, solve, verify_measure
from .variety import DEFAULT_TOL, VarietyError

EXIT_OK, EXIT_BAD_INPUT, EXIT_NEGATIVE, EXIT_DIAGNOSTIC = 0, 1, 2, 3


class InputError(Exception):
    pass


def _key(mono):
    return f"{mono[0]},{mono[1]}"


def _parse_key(key):
    try:
        i, j = (int(k) for k in key.split(","))
    except ValueError:
        raise InputError(f"beta: bad moment key {key!r}, expected 'i,j'") from None
    return i, j


def _parse_exact(value, where):
    """Exact Fraction from a JSON int or "p/q" string."""
    if isinstance(value, bool) or not isinstance(value, (int, float, str)):
        raise InputError(f"{where}: expected a number or 'p/q' string, got {value!r}")
    try:
        frac = as_fraction(value)
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{where}: cannot parse {value!r} as a rational") from None
    return frac


def _parse_value(value, where):
    """Fraction for ints/strings, float for JSON floats."""
    if isinstance(value, float):
        return value
    return _parse_exact(value, where)


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def load_problem(path):
    """Read a problem file; returns the sequence and the optional tolerance."""
    data = _load_json(path)
    if not isinstance(data, dict) or not isinstance(data.get("beta"), dict):
        raise InputError(f"{path}: missing object key 'beta'")
    beta = {}
    for key, value in data["beta"].items():
        mono = _parse_key(key)
        if mono not in CUBIC_KEYS:
            raise InputError(f"beta: index {key!r} has degree above 3")
        beta[mono] = _parse_exact(value, f"beta[{key!r}]")
    missing = [_key(m) for m in CUBIC_KEYS if m not in beta]
    if missing:
        raise InputError(f"beta: missing keys {missing}")
    if beta[(0, 0)] <= 0:
        raise InputError("beta['0,0']: β00 > 0 required")
    tol = data.get("tol")
    if tol is not None and (isinstance(tol, bool) or not isinstance(tol, (int, float)) or tol <= 0):
        raise InputError(f"tol: expected a positive number, got {tol!r}")
    return MomentSequence3(beta), tol


def load_measure(path):
    data = _load_json(path)
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    atoms, weights = data.get("atoms"), data.get("weights")
    if not isinstance(atoms, list) or not isinstance(weights, list):
        raise InputError(f"{path}: keys 'atoms' and 'weights' must be arrays")
    if len(atoms) != len(weights):
        raise InputError(f"{path}: {len(atoms)} atoms but {len(weights)} weights")
    parsed_atoms = []
    for k, atom in enumerate(atoms):
        if not isinstance(atom, list) or len(atom) != 2:
            raise InputError(f"atoms[{k}]: expected an [x, y] pair")
        parsed_atoms.append(tuple(_parse_value(c, f"atoms[{k}]") for c in atom))
    parsed_weights = [_parse_value(w, f"weights[{k}]") for k, w in enumerate(weights)]
    for k, w in enumerate(parsed_weights):
        if not w > 0:
            raise InputError(f"weights[{k}]: weights must be positive")
    try:
        return AtomicMeasure(parsed_atoms, parsed_weights)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


def _num(value, exact=False):
    if isinstance(value, Fraction) and exact:
        return str(value)
    if isinstance(value, Fraction) and value.denominator == 1:
        return int(value)
    return float(value)


def _matrix_json(mat, exact):
    return [[_num(v, exact) for v in row] for row in mat]


def _relation_json(rel, exact):
    return {_key(m): _num(c, exact) for m, c in sorted(rel.coeffs.items(),
                                                        key=lambda kv: (sum(kv[0]), -kv[0][0]))}


def solution_json(sol, certificate=False, exact=False):
    order = sorted(range(len(sol.measure)), key=lambda k: sol.measure.atoms[k])
    out = {
        "atoms": [[_num(c) for c in sol.measure.atoms[k]] for k in order],
        "weights": [_num(sol.measure.weights[k]) for k in order],
        "branch": sol.classification.branch.value,
        "rank_M1": sol.classification.rank_m1,
    }
    if certificate:
        cert, sd = sol.certificate, sol.classification.schur
        out["certificate"] = {
            "schur": {name: _num(getattr(sd, name), exact) for name in "xabytz"},
            "M2": _matrix_json(cert.m2.mat, exact),
            "M3": _matrix_json(cert.m3.mat, exact),
            "rank_M2": cert.rank_m2,
            "rank_M3": cert.rank_m3,
            "basis": [_key(m) for m in cert.basis],
            "relations": [_relation_json(r, exact) for r in cert.relations],
        }
    return out


def report_json(report):
    moments = {}
    for key in CUBIC_KEYS:
        moments[_key(key)] = {
            "expected": _num(report.expected[key]),
            "computed": _num(report.computed[key]),
            "abs_error": report.abs_errors[key],
            "rel_error": report.rel_errors[key],
        }
    return {"pass": report.passed, "max_abs_error": report.max_abs_error,
            "max_rel_error": report.max_rel_error, "tol": report.tol,
            "moments": moments}


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2, ensure_ascii=False)
    sys.stdout.write("\n")


def cmd_solve(args):
    s, file_tol = load_problem(args.problem)
    tol = args.tol or file_tol or DEFAULT_TOL
    outcome = solve(s, tol=tol)
    if isinstance(outcome, NoMeasure):
        _emit({"no_measure": outcome.reason.value, "witness": outcome.witness})
        return EXIT_NEGATIVE
    _emit(solution_json(outcome, certificate=args.certificate, exact=args.exact))
    return EXIT_OK


def cmd_verify(args):
    s, file_tol = load_problem(args.problem)
    m = load_measure(args.measure)
    report = verify_measure(s, m, args.tol or file_tol or DEFAULT_TOL)
    _emit(report_json(report))
    return EXIT_OK if report.passed else EXIT_NEGATIVE


def cmd_synth(args):
    m = load_measure(args.measure)
    beta = moments_from_measure(m, 3)
    exact = m.is_exact
    _emit({"beta": {_key(k): _num(beta[k], exact) for k in CUBIC_KEYS}})
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cubicmoments",
        description="Solve the real cubic truncated moment problem.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="find a minimal atomic representing measure")
    p.add_argument("problem")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--certificate", action="store_true",
                   help="include M(2), M(3), ranks and column relations")
    p.add_argument("--exact", action="store_true",
                   help="print rational entries as 'p/q' strings")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="check a measure against a problem")
    p.add_argument("problem")
    p.add_argument("measure")
    p.add_argument("--tol", type=float, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("synth", help="moments of a measure as a problem file")
    p.add_argument("measure")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (ExtensionError, VarietyError, RecoveryError) as exc:
        print(f"diagnostic: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DIAGNOSTIC


if __name__ == "__main__":
    sys.exit(main())
