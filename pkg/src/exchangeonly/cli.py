"""Command-line entry point.

Exit status is 0 on success, 1 when a check fails and 2 on usage or input
errors.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import formats
from .encoding import extract_gate
from .rewrite import (RewriteError, apply_script, check_rewrite_invariants, compare_sequences,
                      parse_script, sequence_stats)
from .spin_core import CHECK_TOL, sequence_unitary
from .synthesis import constraint_element, derive, search_v, sequence_checks

OK, FAILED, USAGE = 0, 1, 2


def _read_sequence(path):
    return formats.parse_sequence_file(Path(path).read_text())


def _emit(text: str, path=None):
    if path:
        Path(path).write_text(text)
    else:
        sys.stdout.write(text)


def _failures(checks: dict) -> list[str]:
    return [name for name, c in checks.items() if not c.passed]


def cmd_derive(args) -> int:
    rep = derive(tol=args.tol, grid=args.grid)
    seq_text = formats.format_sequence_file(
        rep.full, comments=[f"controlled-(n.sigma) gate, V durations "
                            f"{rep.chosen.t1} {rep.chosen.t2}"])
    _emit(seq_text, args.out)
    report = formats.dumps(formats.derivation_dict(rep))
    if args.report:
        Path(args.report).write_text(report)
    elif args.out:
        sys.stdout.write(report)
    bad = _failures(rep.checks)
    for name in bad:
        print(f"FAILED: {name}", file=sys.stderr)
    return FAILED if bad else OK


def cmd_verify(args) -> int:
    seq = _read_sequence(args.file)
    if seq.n != 6:
        print("verify needs a six-spin sequence", file=sys.stderr)
        return USAGE
    checks, report = sequence_checks(seq, args.tol)
    doc = {"stats": formats.stats_dict(sequence_stats(seq)),
           "gate": formats.gate_dict(report),
           "checks": formats.checks_dict(checks)}
    _emit(formats.dumps(doc), args.report)
    bad = _failures(checks)
    for name in bad:
        print(f"FAILED: {name} (residual {checks[name].residual:.3e})", file=sys.stderr)
    return FAILED if bad else OK


def cmd_simulate(args) -> int:
    seq = _read_sequence(args.file)
    U = sequence_unitary(seq)
    if args.matrix or seq.n != 6:
        doc = {"nspins": seq.n, "matrix": formats.matrix_pairs(U)}
    else:
        doc = {"gate": formats.gate_dict(extract_gate(U, tol=args.tol))}
    _emit(formats.dumps(doc))
    return OK


def cmd_constraint(args) -> int:
    t1 = formats.parse_duration(args.t1)
    t2 = formats.parse_duration(args.t2)
    E = constraint_element(t1, t2)
    doc = {"t1": str(t1), "t2": str(t2), "E": formats.complex_pair(E),
           "residual": formats._num(abs(E)), "satisfied": bool(abs(E) <= args.tol)}
    _emit(formats.dumps(doc))
    return OK if abs(E) <= args.tol else FAILED


def cmd_synth_v(args) -> int:
    sols = search_v(args.max_pulses, args.grid, args.tol)
    doc = [{"pairs": [list(p) for p in s.pairs], "durations": [str(t) for t in s.durations],
            "residual": formats._num(s.residual)} for s in sols]
    _emit(formats.dumps(doc))
    return OK


def cmd_rewrite(args) -> int:
    seq = _read_sequence(args.file)
    steps = parse_script(Path(args.script).read_text())
    out, _ = apply_script(seq, steps)
    inv = check_rewrite_invariants(seq, out, args.tol)
    _emit(formats.format_sequence_file(out), args.out)
    for name in inv.failures:
        print(f"FAILED: {name}", file=sys.stderr)
    return FAILED if inv.failures else OK


def cmd_stats(args) -> int:
    seq = _read_sequence(args.file)
    _emit(formats.dumps(formats.stats_dict(sequence_stats(seq))))
    return OK


def cmd_compare(args) -> int:
    a, b = _read_sequence(args.a), _read_sequence(args.b)
    rep = compare_sequences(a, b, args.tol)
    doc = {"phase_equal": rep.phase_equal,
           "phase": formats.complex_pair(rep.phase),
           "stats_a": formats.stats_dict(rep.stats_a),
           "stats_b": formats.stats_dict(rep.stats_b),
           "parity_differs": rep.parity_differs,
           "locally_equivalent": rep.locally_equivalent}
    for key, inv in (("makhlin_a", rep.makhlin_a), ("makhlin_b", rep.makhlin_b)):
        if inv is not None:
            doc[key] = {"G1": formats.complex_pair(inv[0]), "G2": formats._num(inv[1])}
    _emit(formats.dumps(doc))
    return OK if rep.phase_equal or rep.locally_equivalent else FAILED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=CHECK_TOL)
    parser = argparse.ArgumentParser(prog="exchangeonly")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("derive", parents=[common], help="build and verify the two-qubit gate sequence")
    p.add_argument("--out", help="sequence file to write (default stdout)")
    p.add_argument("--report", help="JSON report to write")
    p.add_argument("--grid", type=int, default=24)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("verify", parents=[common], help="check a six-spin sequence is a controlled-(n.sigma)")
    p.add_argument("file")
    p.add_argument("--report")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", parents=[common], help="print the encoded gate or the full unitary")
    p.add_argument("file")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--gate", action="store_true")
    mode.add_argument("--matrix", action="store_true")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("constraint", parents=[common], help="evaluate the V constraint element")
    p.add_argument("--t1", required=True)
    p.add_argument("--t2", required=True)
    p.set_defaults(func=cmd_constraint)

    p = sub.add_parser("synth-v", parents=[common], help="grid search for constrained V sequences")
    p.add_argument("--max-pulses", type=int, default=2)
    p.add_argument("--grid", type=int, default=24)
    p.set_defaults(func=cmd_synth_v)

    p = sub.add_parser("rewrite", parents=[common], help="apply a rewrite script and check invariants")
    p.add_argument("file")
    p.add_argument("--script", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_rewrite)

    p = sub.add_parser("stats", parents=[common], help="pulse counts and parity")
    p.add_argument("file")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("compare", parents=[common], help="compare two sequences")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_compare)
    return parser


def run_command(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (formats.SequenceFileError, RewriteError, ValueError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


def main(argv=None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
