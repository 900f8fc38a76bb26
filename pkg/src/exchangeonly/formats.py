"""Sequence files and JSON reports.

A sequence file looks like::

    # comment
    nspins 6
    pulse 3 4 1/2
    pulse 4 5 3/2

with pulses listed in the order they are applied. Reports are JSON with
floats written at 15 significant digits and matrices as ``[re, im]`` pairs,
row-major, so identical inputs give byte-identical output.
"""
from __future__ import annotations

import json
import re
from fractions import Fraction

import numpy as np

from .spin_core import MAX_DENOMINATOR, ExchangePulse, PulseSequence


class SequenceFileError(ValueError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


_RATIONAL = re.compile(r"^(\d+)(?:/(\d+))?$")


def parse_duration(text: str, lineno: int = 0) -> Fraction:
    m = _RATIONAL.match(text)
    if not m:
        raise SequenceFileError(lineno, f"malformed rational {text!r}")
    num, den = int(m.group(1)), int(m.group(2) or 1)
    if den == 0:
        raise SequenceFileError(lineno, f"zero denominator in {text!r}")
    t = Fraction(num, den)
    if not 0 <= t < 2:
        raise SequenceFileError(lineno, f"duration out of range [0, 2): {text}")
    if t.denominator > MAX_DENOMINATOR:
        raise SequenceFileError(lineno, f"denominator of {text} exceeds {MAX_DENOMINATOR}")
    return t


def parse_sequence_file(text: str) -> PulseSequence:
    n = None
    pulses = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        words = raw.split("#", 1)[0].split()
        if not words:
            continue
        if words[0] == "nspins":
            if n is not None:
                raise SequenceFileError(lineno, "repeated nspins header")
            if len(words) != 2 or not words[1].isdigit() or int(words[1]) < 1:
                raise SequenceFileError(lineno, "expected 'nspins N' with N >= 1")
            n = int(words[1])
        elif words[0] == "pulse":
            if n is None:
                raise SequenceFileError(lineno, "pulse before the nspins header")
            if len(words) != 4 or not (words[1].isdigit() and words[2].isdigit()):
                raise SequenceFileError(lineno, "expected 'pulse I J P/Q'")
            i, j = int(words[1]), int(words[2])
            if i == j:
                raise SequenceFileError(lineno, "i = j")
            if not 1 <= i < j <= n:
                raise SequenceFileError(lineno, f"bad index: need 1 <= I < J <= {n}")
            pulses.append(ExchangePulse(i, j, parse_duration(words[3], lineno)))
        else:
            raise SequenceFileError(lineno, f"unknown directive {words[0]!r}")
    if n is None:
        raise SequenceFileError(0, "missing nspins header")
    return PulseSequence(n, tuple(pulses))


def format_sequence_file(seq: PulseSequence, comments=()) -> str:
    lines = [f"# {c}" for c in comments]
    lines.append(f"nspins {seq.n}")
    lines += [f"pulse {p.i} {p.j} {p.t}" for p in seq]
    return "\n".join(lines) + "\n"


def _num(x):
    if not np.isfinite(x):
        return None
    x = float(f"{float(x):.15g}")
    return 0.0 if x == 0 else x


def complex_pair(z) -> list[float]:
    z = complex(z)
    return [_num(z.real), _num(z.imag)]


def matrix_pairs(M) -> list[list[list[float]]]:
    return [[complex_pair(z) for z in row] for row in np.asarray(M)]


def checks_dict(checks: dict) -> dict:
    return {name: {"pass": c.passed, "residual": _num(c.residual), "tol": _num(c.tol)}
            for name, c in checks.items()}


def gate_dict(report) -> dict:
    out = {"matrix": matrix_pairs(report.gate4), "leakage": _num(report.leakage),
           "classification": report.classification.kind}
    if report.makhlin is not None:
        g1, g2 = report.makhlin
        out.update(G1_re=_num(g1.real), G1_im=_num(g1.imag), G2=_num(g2))
    nhat = report.classification.nhat
    out["nhat"] = None if nhat is None else [_num(x) for x in nhat]
    return out


def derivation_dict(rep) -> dict:
    c = rep.coefficients
    coeffs = {}
    for name in ("alpha", "beta", "gamma", "delta"):
        z = complex(getattr(c, name))
        coeffs[f"{name}_re"] = _num(z.real)
        coeffs[f"{name}_im"] = _num(z.imag)
    coeffs["F"] = _num(c.F)
    return {
        "coefficients": coeffs,
        "solutions": [[str(t) for t in s.durations] for s in rep.solutions],
        "chosen": [str(t) for t in rep.chosen.durations],
        "minimality": [{"pair": list(f.pair), "abs_A": _num(abs(f.A)), "abs_B": _num(abs(f.B))}
                       for f in rep.minimality.fits],
        "R": [[p.i, p.j, str(p.t)] for p in rep.R],
        "R_nhat": None if rep.R_report.nhat is None else [_num(x) for x in rep.R_report.nhat],
        "stats": stats_dict(rep.stats),
        "gate": gate_dict(rep.gate),
        "elevated": None if rep.elevated.blocks is None else
        {"B00": matrix_pairs(rep.elevated.blocks[0]),
         "B11": matrix_pairs(rep.elevated.blocks[1]),
         "B33": matrix_pairs(rep.elevated.blocks[2]),
         "leakage": _num(rep.elevated.leakage)},
        "checks": checks_dict(rep.checks),
    }


def stats_dict(stats) -> dict:
    d = stats.as_dict()
    return {"swap": d["swap"], "sqrt": d["sqrt"], "invsqrt": d["invsqrt"],
            "identity": d["identity"], "other": d["other"],
            "nontrivial": d["nontrivial"], "total": d["total"], "parity": "odd" if d["parity"] else "even"}


def dumps(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"
