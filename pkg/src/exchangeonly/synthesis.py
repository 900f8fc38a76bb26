"""Two-qubit gate construction from a constrained four-spin sequence V.

The constraint on V is that the matrix element

    E(V) = < ((1 2)_1 (3 4)_1)_1 | V | (1 (2 3 4)_3/2)_1 >

vanishes. For V = U23(t2) U12(t1) (U12 acting first) the element is
multilinear in the phases exp(-i pi t1), exp(-i pi t2), so its four
coefficients follow from evaluating the four SWAP/identity corners.

Any such V yields R = V^-1 U12(1) U34(1) V, which acts on the target qubit as
the identity when spin 1 and the target couple to d = 0 and as n.sigma when
they couple to d = 1. Sandwiching three copies of R between SWAPs on the
control pair gives a controlled-(n.sigma) gate on two encoded qubits.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .coupling import F_LEFT, F_RIGHT, compute_F, coupled_state, sector_projector
from .encoding import (ElevatedBlockReport, GateReport, classify_controlled_nsigma,
                       elevated_structure, extract_gate, pauli_vector)
from .rewrite import SequenceStats, sequence_stats
from .spin_core import (CHECK_TOL, MAX_DENOMINATOR, SWAP, Check, ExchangePulse,
                        PulseSequence, apply_sequence, equal_up_to_global_phase,
                        invert_sequence, phase, rotational_invariance_check,
                        sequence_unitary)

V_PAIRS = ((1, 2), (2, 3))
SINGLE_PULSE_PAIRS = ((1, 2), (2, 3), (3, 4))


@lru_cache(maxsize=None)
def _constraint_states(sz=1) -> tuple[np.ndarray, np.ndarray]:
    return coupled_state(F_LEFT, sz).vector, coupled_state(F_RIGHT, sz).vector


def constraint_element_of(v: PulseSequence, sz=1) -> complex:
    """Constraint matrix element for an arbitrary four-spin sequence ``v``."""
    if v.n != 4:
        raise ValueError("V must act on four spins")
    bra, ket = _constraint_states(sz)
    return complex(np.vdot(bra, apply_sequence(v, ket)))


def v_sequence(durations: Sequence, pairs: Sequence = V_PAIRS) -> PulseSequence:
    return PulseSequence(4, tuple(ExchangePulse(i, j, t) for (i, j), t in zip(pairs, durations)))


def constraint_element(t1, t2) -> complex:
    """``E(t1, t2)`` for ``V = U23(t2) U12(t1)``."""
    return constraint_element_of(v_sequence((t1, t2)))


def _corner_coefficients(pairs: Sequence) -> np.ndarray:
    """Multilinear coefficients ``c[s1..sk]`` of E in the pulse phases.

    ``E = sum_S c_S prod_{k in S} exp(-i pi t_k)``; with every t_k in {0, 1}
    each phase is +-1, so the coefficients are a Walsh-Hadamard transform of
    the 2^k corner values.
    """
    k = len(pairs)
    corners = np.empty((2,) * k, dtype=complex)
    for bits in itertools.product((0, 1), repeat=k):
        corners[bits] = constraint_element_of(v_sequence(bits, pairs))
    coeffs = corners
    h = np.array([[1, 1], [1, -1]]) / 2
    for axis in range(k):
        coeffs = np.moveaxis(np.tensordot(h, coeffs, axes=([1], [axis])), 0, axis)
    return coeffs


@dataclass(frozen=True)
class ConstraintCoefficients:
    alpha: complex
    beta: complex
    gamma: complex
    delta: complex
    F: float

    def evaluate(self, t1, t2) -> complex:
        x, y = phase(Fraction(t1)), phase(Fraction(t2))
        return self.alpha + self.beta * x + self.gamma * y + self.delta * x * y

    def as_array(self) -> np.ndarray:
        return np.array([[self.alpha, self.gamma], [self.beta, self.delta]])


def extract_coefficients() -> ConstraintCoefficients:
    E = {(a, b): constraint_element(a, b) for a in (0, 1) for b in (0, 1)}
    return ConstraintCoefficients(
        alpha=(E[0, 0] + E[0, 1] + E[1, 0] + E[1, 1]) / 4,
        beta=(E[0, 0] + E[0, 1] - E[1, 0] - E[1, 1]) / 4,
        gamma=(E[0, 0] - E[0, 1] + E[1, 0] - E[1, 1]) / 4,
        delta=(E[0, 0] - E[0, 1] - E[1, 0] + E[1, 1]) / 4,
        F=compute_F())


def _multilinear(coeffs: np.ndarray, xs: Sequence[np.ndarray]):
    total = 0
    for bits in itertools.product((0, 1), repeat=coeffs.ndim):
        term = coeffs[bits]
        for b, x in zip(bits, xs):
            if b:
                term = term * x
        total = total + term
    return total


def _exact_residual(coeffs: np.ndarray, durations: Sequence[Fraction]) -> float:
    return float(abs(_multilinear(coeffs, [phase(t) for t in durations])))


@dataclass(frozen=True)
class VSolution:
    """Durations of a constrained V; ``pairs[k]`` carries ``durations[k]``."""
    durations: tuple[Fraction, ...]
    pairs: tuple[tuple[int, int], ...] = V_PAIRS
    residual: float = 0.0

    @property
    def t1(self) -> Fraction:
        return self.durations[0]

    @property
    def t2(self) -> Fraction:
        return self.durations[1]

    @property
    def sequence(self) -> PulseSequence:
        return v_sequence(self.durations, self.pairs)

    def key(self):
        return (len(self.pairs), self.pairs, self.durations)


def _golden_min(f, lo, hi, iters=80):
    # vectorised golden-section search, one bracket per candidate
    g = (np.sqrt(5) - 1) / 2
    a, b = lo.copy(), hi.copy()
    c = b - g * (b - a)
    d = a + g * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        left = fc < fd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        c_new = b - g * (b - a)
        d_new = a + g * (b - a)
        c, d = c_new, d_new
        fc, fd = f(c), f(d)
    return (a + b) / 2


def _refine(coeffs: np.ndarray, start: np.ndarray, half_width: float,
            sweeps: int = 60) -> np.ndarray:
    """Coordinate-wise bracketed minimisation of |E|^2 from each start row."""
    pts = start.astype(float).copy()
    k = coeffs.ndim
    for _ in range(sweeps):
        before = pts.copy()
        for axis in range(k):
            def f(tk, axis=axis):
                xs = [np.exp(-1j * np.pi * (tk if a == axis else pts[:, a])) for a in range(k)]
                return np.abs(_multilinear(coeffs, xs)) ** 2
            pts[:, axis] = _golden_min(f, pts[:, axis] - half_width, pts[:, axis] + half_width)
        if np.max(np.abs(pts - before), initial=0.0) < 1e-13:
            break
    return np.mod(pts, 2.0)


def _zeros_on_grid(pairs: Sequence, grid: int, tol: float,
                   max_denominator: int = MAX_DENOMINATOR) -> list[VSolution]:
    """Zeros of E over [0, 2)^k for the pulse word ``pairs``.

    Grid points that are local minima of |E| (on the periodic grid) and lie
    within a Lipschitz bound of zero are refined, snapped to low-denominator
    rationals and kept only if the exact-phase residual is within ``tol``.
    """
    pairs = tuple(tuple(p) for p in pairs)
    coeffs = _corner_coefficients(pairs)
    k = len(pairs)
    ts = np.arange(2 * grid) / grid
    xs = []
    for axis in range(k):
        shape = [1] * k
        shape[axis] = -1
        xs.append(np.exp(-1j * np.pi * ts).reshape(shape))
    mag = np.abs(_multilinear(coeffs, xs)) * np.ones((2 * grid,) * k)
    is_min = np.ones_like(mag, dtype=bool)
    for shift in itertools.product((-1, 0, 1), repeat=k):
        if any(shift):
            is_min &= mag <= np.roll(mag, shift, axis=tuple(range(k))) + 1e-15
    lipschitz = np.pi * np.sum(np.abs(coeffs)) * np.sqrt(k) / grid
    idx = np.argwhere(is_min & (mag <= lipschitz))
    if len(idx) == 0:
        return []
    start = idx / grid
    exact_hits = mag[tuple(idx.T)] <= tol
    refined = start.copy()
    if np.any(~exact_hits):
        refined[~exact_hits] = _refine(coeffs, start[~exact_hits], 1.0 / grid)
    found = {}
    for row in refined:
        durations = tuple(Fraction(float(t)).limit_denominator(max_denominator) % 2
                          for t in row)
        if durations in found:
            continue
        res = _exact_residual(coeffs, durations)
        if res > tol:
            continue
        direct = abs(constraint_element_of(v_sequence(durations, pairs)))
        if direct > tol:
            continue
        found[durations] = VSolution(durations, pairs, max(res, direct))
    return [found[d] for d in sorted(found)]


def solve_two_pulse(grid: int = 24, tol: float = CHECK_TOL) -> list[VSolution]:
    """All (t1, t2) in [0, 2)^2 with E(t1, t2) = 0, in lexicographic order."""
    sols = _zeros_on_grid(V_PAIRS, grid, tol)
    if not sols:
        raise RuntimeError("no two-pulse solution of the constraint was found")
    return sols


@dataclass(frozen=True)
class PulseFit:
    pair: tuple[int, int]
    A: complex
    B: complex

    @property
    def gap(self) -> float:
        return abs(abs(self.A) - abs(self.B))

    @property
    def has_zero(self) -> bool:
        # |A + B e^{-i pi t}| reaches 0 on the circle only if |A| = |B|
        return self.gap <= 1e-6


@dataclass(frozen=True)
class MinimalityReport:
    fits: tuple[PulseFit, ...]

    @property
    def single_pulse_solution_exists(self) -> bool:
        return any(f.has_zero for f in self.fits)


def verify_two_pulse_minimality() -> MinimalityReport:
    """Show no single pulse on neighbouring spins satisfies the constraint."""
    fits = []
    for pair in SINGLE_PULSE_PAIRS:
        e0 = constraint_element_of(v_sequence((0,), (pair,)))
        e1 = constraint_element_of(v_sequence((1,), (pair,)))
        fits.append(PulseFit(pair, (e0 + e1) / 2, (e0 - e1) / 2))
    return MinimalityReport(tuple(fits))


def _as_v(v) -> PulseSequence:
    if isinstance(v, VSolution):
        return v.sequence
    if isinstance(v, PulseSequence):
        return v
    return v_sequence(tuple(v))


CENTRAL_SWAPS = PulseSequence(4, (ExchangePulse(1, 2, SWAP), ExchangePulse(3, 4, SWAP)))


def build_R(v) -> PulseSequence:
    """``V``, then SWAPs on (1,2) and (3,4), then ``V^-1``, on four spins."""
    v = _as_v(v)
    return v + CENTRAL_SWAPS + invert_sequence(v)


@dataclass(frozen=True, eq=False)
class RReport:
    checks: dict
    M: Optional[np.ndarray]
    nhat: Optional[np.ndarray]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks.values())

    @property
    def failures(self) -> list[str]:
        return [name for name, c in self.checks.items() if not c.passed]


def _block(U, states):
    B = np.column_stack([s.vector for s in states])
    block = B.conj().T @ U @ B
    leak = np.max(np.linalg.norm(U @ B - B @ block, axis=0))
    return block, float(leak)


def verify_R(seq: PulseSequence, tol: float = CHECK_TOL) -> RReport:
    """Check that a four-spin sequence has the properties required of R.

    Spin 1 is the spin next to the target; spins 2-4 hold the target qubit as
    ((2 3)_b 4)_c and d is the total spin of all four.
    """
    if seq.n != 4:
        raise ValueError("R acts on four spins")
    R = sequence_unitary(seq)
    checks = {}
    _, phi = equal_up_to_global_phase(R @ R, np.eye(16))
    checks["R_squared_identity"] = Check.of(np.linalg.norm(R @ R - phi * np.eye(16)), tol)
    Pc = sector_projector((2, 3, 4), Fraction(3, 2), 4).matrix
    checks["c_preserved"] = Check.of(np.linalg.norm(R @ Pc - Pc @ R), tol)

    d0 = [coupled_state(f"(1 ((2 3)_{b} 4)_1/2)_0", 0) for b in (0, 1)]
    D0, leak0 = _block(R, d0)
    ph = D0[0, 0] / abs(D0[0, 0]) if abs(D0[0, 0]) > 0 else complex(1)
    checks["d0_identity"] = Check.of(np.linalg.norm(D0 / ph - np.eye(2)) + leak0, tol)

    c32 = coupled_state("(1 (2 3 4)_3/2)_1", 1).vector
    checks["c32_eigenvalue_minus_one"] = Check.of(np.linalg.norm(R @ c32 + ph * c32), tol)

    d1 = [coupled_state(f"(1 ((2 3)_{b} 4)_1/2)_1", 1) for b in (0, 1)]
    D1, leak1 = _block(R, d1)
    M = D1 / ph
    eye = np.eye(2)
    checks["M_in_sector"] = Check.of(leak1, tol)
    checks["M_unitary"] = Check.of(np.linalg.norm(M.conj().T @ M - eye), tol)
    checks["M_hermitian"] = Check.of(np.linalg.norm(M - M.conj().T), tol)
    checks["M_traceless"] = Check.of(abs(np.trace(M)), tol)
    checks["M_involutive"] = Check.of(np.linalg.norm(M @ M - eye), tol)
    nhat = pauli_vector(M) if checks["M_hermitian"].passed else None
    return RReport(checks, M, nhat)


CONTROL_SWAP = ExchangePulse(1, 2, SWAP)


def elevated_sequence(R: PulseSequence) -> PulseSequence:
    """Five-spin sequence R, S, R, S, R with R on spins 2-5 and S on (1, 2)."""
    r5 = R.shifted(1, n=5)
    s = PulseSequence(5, (CONTROL_SWAP,))
    return r5 + s + r5 + s + r5


def base_sequence(r: int) -> PulseSequence:
    """Three-spin r, SWAP, r, SWAP, r with r-pulses on (2, 3) and SWAPs on (1, 2)."""
    if r not in (0, 1):
        raise ValueError("an r-pulse has duration 0 or 1")
    rp = ExchangePulse(2, 3, r)
    return PulseSequence(3, (rp, CONTROL_SWAP, rp, CONTROL_SWAP, rp))


AC_BASIS = ("((1 2)_0 3)_1/2", "((1 2)_1 3)_1/2", "((1 2)_1 3)_3/2")


def base_matrix(r: int) -> np.ndarray:
    """Matrix of the three-spin base sequence in the ``ac`` basis at sz = 1/2."""
    B = np.column_stack([coupled_state(t, Fraction(1, 2)).vector for t in AC_BASIS])
    U = sequence_unitary(base_sequence(r))
    return B.conj().T @ U @ B


def build_full_sequence(v) -> PulseSequence:
    """Two-qubit gate sequence on six spins, R on spins 3-6, SWAPs on (2, 3)."""
    return elevated_sequence(build_R(v)).shifted(1, n=6)


def search_v(max_pulses: int = 3, grid: int = 24, tol: float = CHECK_TOL,
             pairs: Sequence = SINGLE_PULSE_PAIRS, bound: int = 3) -> list[VSolution]:
    """Grid search for constrained V over words of neighbouring-pair pulses.

    Words have between one and ``max_pulses`` pulses, with no pair repeated
    back to back. Results are sorted by length, word and durations.
    """
    if max_pulses > bound:
        raise ValueError(f"max_pulses above the configured bound {bound}")
    out = []
    for k in range(1, max_pulses + 1):
        for word in itertools.product(pairs, repeat=k):
            if any(a == b for a, b in zip(word, word[1:])):
                continue
            out.extend(_zeros_on_grid(word, grid, tol))
    return sorted(out, key=VSolution.key)


def sequence_checks(seq: PulseSequence, tol: float = CHECK_TOL) -> tuple[dict, GateReport]:
    """Checks that a six-spin sequence is a leakage-free controlled-(n.sigma)."""
    U = sequence_unitary(seq)
    report = extract_gate(U, tol=tol)
    checks = {"rotation_invariant": Check(rotational_invariance_check(U, seq.n, tol), 0.0, tol),
              "leakage": Check.of(report.leakage, tol)}
    if report.makhlin is None:
        checks["makhlin_cnot"] = Check(False, float("inf"), 1e-9)
    else:
        g1, g2 = report.makhlin
        checks["makhlin_cnot"] = Check.of(abs(g1) + abs(g2 - 1), 1e-9)
    cls = classify_controlled_nsigma(report.gate4, tol)
    checks["controlled_nsigma"] = Check(cls.accepted, 0.0, tol)
    return checks, report


@dataclass(frozen=True, eq=False)
class DerivationReport:
    coefficients: ConstraintCoefficients
    solutions: list[VSolution]
    minimality: MinimalityReport
    chosen: VSolution
    R: PulseSequence
    R_report: RReport
    full: PulseSequence
    gate: GateReport
    elevated: ElevatedBlockReport
    stats: SequenceStats
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks.values())


def derive(tol: float = CHECK_TOL, grid: int = 24) -> DerivationReport:
    """Run the whole construction and collect every verification."""
    coeffs = extract_coefficients()
    solutions = solve_two_pulse(grid, tol)
    minimality = verify_two_pulse_minimality()
    chosen = solutions[0]
    R = build_R(chosen)
    r_report = verify_R(R, tol)
    full = build_full_sequence(chosen)
    checks, gate = sequence_checks(full, tol)
    elevated = elevated_structure(full.shifted(-1, n=5), tol=tol)
    stats = sequence_stats(full)

    F = coeffs.F
    target = np.array([-F / 2, F / 2, F / 2, F / 2])
    got = np.array([coeffs.alpha, coeffs.beta, coeffs.gamma, coeffs.delta])
    all_checks = {"coefficients": Check.of(np.max(np.abs(got - target)), 1e-12)}
    all_checks["solutions_residual"] = Check.of(max(s.residual for s in solutions), tol)
    all_checks["single_pulse_minimality"] = Check(
        not minimality.single_pulse_solution_exists, min(f.gap for f in minimality.fits), 1e-6)
    all_checks.update({f"R_{k}": v for k, v in r_report.checks.items()})
    all_checks.update(checks)
    all_checks["elevated_same_M"] = Check(elevated.ok, elevated.leakage, tol)
    all_checks["nearest_neighbor"] = Check(all(p.j == p.i + 1 for p in full), 0.0, 0.0)
    return DerivationReport(coeffs, solutions, minimality, chosen, R, r_report, full,
                            gate, elevated, stats, all_checks)
