"""Elementary pulse-sequence manipulations and the invariants they keep.

Every step below is an exact operator identity under the phase convention
U_ij(t) = Pi_s + exp(-i pi t) Pi_t, so steps never introduce a global phase:

* a SWAP pulse squares to the identity (insert/remove a pair);
* U_ij(1) = -P_ij, hence U_kl(t) U_ij(1) = U_ij(1) U_s(k)s(l)(t) with s the
  transposition (i j) (pull a SWAP past any pulse);
* U_ij(1) U_ij(t) = U_ij(t + 1) (fuse a SWAP with a sqrt-SWAP or its inverse).

Pulses with t = 1 are SWAPs; every pulse with t not in {0, 1} is nontrivial.
With durations restricted to {0, 1/2, 1, 3/2} the steps keep both the number
of nontrivial pulses and the parity of #SWAP + #sqrt-SWAP.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Union

import numpy as np

from .spin_core import (CHECK_TOL, INV_SQRT_SWAP, SQRT_SWAP, SWAP, Check, ExchangePulse,
                        PulseSequence, equal_up_to_global_phase, pulse, sequence_unitary)

FUSABLE = (SQRT_SWAP, INV_SQRT_SWAP)


@dataclass(frozen=True)
class SequenceStats:
    n_swap: int = 0
    n_sqrt: int = 0
    n_invsqrt: int = 0
    n_identity: int = 0
    n_other: int = 0

    @property
    def n_nontrivial(self) -> int:
        return self.n_sqrt + self.n_invsqrt + self.n_other

    @property
    def parity(self) -> int:
        return (self.n_swap + self.n_sqrt) % 2

    @property
    def total(self) -> int:
        return self.n_swap + self.n_sqrt + self.n_invsqrt + self.n_identity + self.n_other

    def as_dict(self) -> dict:
        return {"swap": self.n_swap, "sqrt": self.n_sqrt, "invsqrt": self.n_invsqrt,
                "identity": self.n_identity, "other": self.n_other,
                "nontrivial": self.n_nontrivial, "total": self.total, "parity": self.parity}


def sequence_stats(seq: PulseSequence) -> SequenceStats:
    counts = {SWAP: 0, SQRT_SWAP: 0, INV_SQRT_SWAP: 0, Fraction(0): 0}
    other = 0
    for p in seq:
        if p.t in counts:
            counts[p.t] += 1
        else:
            other += 1
    return SequenceStats(counts[SWAP], counts[SQRT_SWAP], counts[INV_SQRT_SWAP],
                         counts[Fraction(0)], other)


class RewriteError(ValueError):
    """A rewrite step does not match the sequence at its position."""


@dataclass(frozen=True)
class InsertPair:
    i: int
    j: int
    pos: int


@dataclass(frozen=True)
class RemovePair:
    pos: int


@dataclass(frozen=True)
class CommuteSwapRight:
    pos: int


@dataclass(frozen=True)
class CommuteSwapLeft:
    pos: int


@dataclass(frozen=True)
class FuseSwapIntoPulse:
    pos: int


@dataclass(frozen=True)
class SplitPulseIntoSwap:
    pos: int
    swap_first: bool = True


RewriteStep = Union[InsertPair, RemovePair, CommuteSwapRight, CommuteSwapLeft,
                    FuseSwapIntoPulse, SplitPulseIntoSwap]


def _transpose(k: int, i: int, j: int) -> int:
    return j if k == i else i if k == j else k


def _conjugated(p: ExchangePulse, swap: ExchangePulse) -> ExchangePulse:
    return pulse(_transpose(p.i, swap.i, swap.j), _transpose(p.j, swap.i, swap.j), p.t)


def _need(seq: PulseSequence, *positions: int):
    for pos in positions:
        if not 0 <= pos < len(seq):
            raise RewriteError(f"position {pos} outside a sequence of length {len(seq)}")


def apply_step(seq: PulseSequence, step: RewriteStep) -> PulseSequence:
    """Apply one manipulation; raises ``RewriteError`` if it does not match."""
    p = list(seq.pulses)
    if isinstance(step, InsertPair):
        if not 0 <= step.pos <= len(p):
            raise RewriteError(f"insert position {step.pos} out of range")
        s = pulse(step.i, step.j, SWAP)
        if s.j > seq.n:
            raise RewriteError(f"pair ({step.i}, {step.j}) outside the register")
        p[step.pos:step.pos] = [s, s]
    elif isinstance(step, RemovePair):
        _need(seq, step.pos, step.pos + 1)
        a, b = p[step.pos], p[step.pos + 1]
        if not (a.t == SWAP and b.t == SWAP and a.pair == b.pair):
            raise RewriteError(f"no SWAP pair at position {step.pos}")
        del p[step.pos:step.pos + 2]
    elif isinstance(step, CommuteSwapRight):
        _need(seq, step.pos, step.pos + 1)
        s, other = p[step.pos], p[step.pos + 1]
        if s.t != SWAP:
            raise RewriteError(f"pulse {step.pos} is not a SWAP")
        p[step.pos:step.pos + 2] = [_conjugated(other, s), s]
    elif isinstance(step, CommuteSwapLeft):
        _need(seq, step.pos, step.pos + 1)
        other, s = p[step.pos], p[step.pos + 1]
        if s.t != SWAP:
            raise RewriteError(f"pulse {step.pos + 1} is not a SWAP")
        p[step.pos:step.pos + 2] = [s, _conjugated(other, s)]
    elif isinstance(step, FuseSwapIntoPulse):
        _need(seq, step.pos, step.pos + 1)
        a, b = p[step.pos], p[step.pos + 1]
        if a.pair != b.pair:
            raise RewriteError(f"pulses {step.pos}, {step.pos + 1} act on different pairs")
        if a.t == SWAP and b.t in FUSABLE:
            other = b
        elif b.t == SWAP and a.t in FUSABLE:
            other = a
        else:
            raise RewriteError(f"no SWAP next to a sqrt-SWAP pulse at {step.pos}")
        p[step.pos:step.pos + 2] = [ExchangePulse(other.i, other.j, (other.t + 1) % 2)]
    elif isinstance(step, SplitPulseIntoSwap):
        _need(seq, step.pos)
        a = p[step.pos]
        if a.t not in FUSABLE:
            raise RewriteError(f"pulse {step.pos} is not a sqrt-SWAP or its inverse")
        s = ExchangePulse(a.i, a.j, SWAP)
        rest = ExchangePulse(a.i, a.j, (a.t + 1) % 2)
        p[step.pos:step.pos + 1] = [s, rest] if step.swap_first else [rest, s]
    else:
        raise TypeError(f"not a rewrite step: {step!r}")
    return PulseSequence(seq.n, tuple(p))


def step_phase(step: RewriteStep) -> complex:
    """Global phase a step multiplies the sequence unitary by (always exactly 1)."""
    return complex(1)


def apply_script(seq: PulseSequence, steps: Iterable[RewriteStep]) -> tuple[PulseSequence, complex]:
    """Replay steps in order; returns the final sequence and accumulated phase."""
    ph = complex(1)
    for step in steps:
        seq = apply_step(seq, step)
        ph *= step_phase(step)
    return seq, ph


def merge_pulses(seq: PulseSequence, pos: int) -> PulseSequence:
    """Normalisation pass: U_ij(t1) then U_ij(t2) becomes U_ij(t1 + t2).

    Not one of the invariant-preserving steps (it removes a nontrivial pulse),
    and refused whenever a SWAP is involved or the sum is trivial.
    """
    _need(seq, pos, pos + 1)
    a, b = seq[pos], seq[pos + 1]
    if a.pair != b.pair:
        raise RewriteError("merge needs two pulses on the same pair")
    t = (a.t + b.t) % 2
    if SWAP in (a.t, b.t) or t in (0, SWAP):
        raise RewriteError(f"refusing to merge {a} and {b}")
    p = list(seq.pulses)
    p[pos:pos + 2] = [ExchangePulse(a.i, a.j, t)]
    return PulseSequence(seq.n, tuple(p))


def applicable_steps(seq: PulseSequence) -> list[RewriteStep]:
    """Every step that matches somewhere in ``seq``, except insertions."""
    steps: list[RewriteStep] = []
    ps = seq.pulses
    for k, a in enumerate(ps):
        if a.t in FUSABLE:
            steps.append(SplitPulseIntoSwap(k, True))
            steps.append(SplitPulseIntoSwap(k, False))
        if k + 1 == len(ps):
            continue
        b = ps[k + 1]
        if a.t == SWAP:
            steps.append(CommuteSwapRight(k))
        if b.t == SWAP:
            steps.append(CommuteSwapLeft(k))
        if a.pair == b.pair:
            if a.t == SWAP and b.t == SWAP:
                steps.append(RemovePair(k))
            if (a.t == SWAP and b.t in FUSABLE) or (b.t == SWAP and a.t in FUSABLE):
                steps.append(FuseSwapIntoPulse(k))
    return steps


def random_step(seq: PulseSequence, rng: np.random.Generator,
                insert_weight: float = 0.15) -> RewriteStep:
    """Draw a uniformly random matching step, or an insertion."""
    steps = applicable_steps(seq)
    if not steps or rng.random() < insert_weight:
        i = int(rng.integers(1, seq.n))
        j = int(rng.integers(i + 1, seq.n + 1))
        return InsertPair(i, j, int(rng.integers(0, len(seq) + 1)))
    return steps[int(rng.integers(len(steps)))]


def random_script(seq: PulseSequence, rng: np.random.Generator,
                  length: int) -> tuple[list[RewriteStep], PulseSequence]:
    steps = []
    for _ in range(length):
        step = random_step(seq, rng)
        seq = apply_step(seq, step)
        steps.append(step)
    return steps, seq


@dataclass(frozen=True)
class InvariantReport:
    checks: dict
    before: SequenceStats
    after: SequenceStats
    phase: complex

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks.values())

    @property
    def failures(self) -> list[str]:
        return [name for name, c in self.checks.items() if not c.passed]


def check_rewrite_invariants(before: PulseSequence, after: PulseSequence,
                             tol: float = CHECK_TOL) -> InvariantReport:
    sb, sa = sequence_stats(before), sequence_stats(after)
    Ub, Ua = sequence_unitary(before), sequence_unitary(after)
    _, ph = equal_up_to_global_phase(Ua, Ub)
    checks = {
        "nontrivial_count": Check(sb.n_nontrivial == sa.n_nontrivial,
                                  float(abs(sb.n_nontrivial - sa.n_nontrivial)), 0.0),
        "parity": Check(sb.parity == sa.parity, float(sb.parity != sa.parity), 0.0),
        "unitary_up_to_phase": Check.of(np.linalg.norm(Ua - ph * Ub), tol),
    }
    return InvariantReport(checks, sb, sa, ph)


@dataclass(frozen=True, eq=False)
class ComparisonReport:
    phase_equal: bool
    phase: complex
    stats_a: SequenceStats
    stats_b: SequenceStats
    makhlin_a: Optional[tuple] = None
    makhlin_b: Optional[tuple] = None
    locally_equivalent: Optional[bool] = None

    @property
    def parity_differs(self) -> bool:
        return self.stats_a.parity != self.stats_b.parity


def compare_sequences(a: PulseSequence, b: PulseSequence, tol: float = CHECK_TOL,
                      invariant_tol: float = 1e-9) -> ComparisonReport:
    """Compare two sequences as operators and, failing that, as encoded gates."""
    if a.n != b.n:
        raise ValueError(f"sequences act on {a.n} and {b.n} spins")
    Ua, Ub = sequence_unitary(a), sequence_unitary(b)
    equal, ph = equal_up_to_global_phase(Ua, Ub, tol)
    sa, sb = sequence_stats(a), sequence_stats(b)
    if equal or a.n != 6:
        return ComparisonReport(equal, ph, sa, sb)
    from .encoding import extract_gate
    ga, gb = extract_gate(Ua, tol=tol), extract_gate(Ub, tol=tol)
    local = None
    if ga.makhlin is not None and gb.makhlin is not None:
        d1 = abs(ga.makhlin[0] - gb.makhlin[0])
        d2 = abs(ga.makhlin[1] - gb.makhlin[1])
        local = bool(d1 <= invariant_tol and d2 <= invariant_tol
                     and ga.leakage <= tol and gb.leakage <= tol)
    return ComparisonReport(equal, ph, sa, sb, ga.makhlin, gb.makhlin, local)


_SCRIPT_LINE = re.compile(
    r"^(?:(insert_pair)\s+(\d+)\s+(\d+)\s+at\s+(\d+)"
    r"|(remove_pair|commute_right|commute_left|fuse|split|split_after)\s+at\s+(\d+))$")

_SIMPLE = {"remove_pair": RemovePair, "commute_right": CommuteSwapRight,
           "commute_left": CommuteSwapLeft, "fuse": FuseSwapIntoPulse}


def parse_script(text: str) -> list[RewriteStep]:
    """Parse a rewrite script: one step per line, ``#`` starts a comment.

    ``split at k`` puts the SWAP first, ``split_after at k`` puts it second.
    """
    steps: list[RewriteStep] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _SCRIPT_LINE.match(" ".join(line.split()))
        if not m:
            raise RewriteError(f"line {lineno}: cannot parse step {raw.strip()!r}")
        if m.group(1):
            steps.append(InsertPair(int(m.group(2)), int(m.group(3)), int(m.group(4))))
        else:
            kind, pos = m.group(5), int(m.group(6))
            if kind == "split":
                steps.append(SplitPulseIntoSwap(pos, True))
            elif kind == "split_after":
                steps.append(SplitPulseIntoSwap(pos, False))
            else:
                steps.append(_SIMPLE[kind](pos))
    return steps


def format_step(step: RewriteStep) -> str:
    if isinstance(step, InsertPair):
        return f"insert_pair {step.i} {step.j} at {step.pos}"
    if isinstance(step, SplitPulseIntoSwap):
        return f"{'split' if step.swap_first else 'split_after'} at {step.pos}"
    names = {v: k for k, v in _SIMPLE.items()}
    return f"{names[type(step)]} at {step.pos}"
