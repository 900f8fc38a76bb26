"""Dense product-basis simulation of Heisenberg exchange pulses.

Spins are labelled 1..n. Product basis index ``k`` has spin ``i`` in bit
``n - i`` of ``k`` (spin 1 is the most significant bit), with bit value 0
meaning up and 1 meaning down.

An exchange pulse of duration ``t`` (in units of 1/(pi J)) on spins ``i, j``
acts as ``1`` on their singlet and ``exp(-i pi t)`` on their triplet::

    U_ij(t) = Pi_s + exp(-i pi t) Pi_t

Since ``Pi_t = (1 + P_ij)/2`` with ``P_ij`` the permutation of the two spins,
every pulse is ``a * 1 + b * P_ij`` and sequences are composed by row
permutations rather than matrix products. Sequences are chronological: the
first pulse in the list acts first.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

MAX_DENOMINATOR = 96
ALGEBRA_TOL = 1e-12
CHECK_TOL = 1e-10

# exp(-i pi t) at the durations the construction actually uses
_EXACT_PHASES = {
    Fraction(0): complex(1, 0),
    Fraction(1, 2): complex(0, -1),
    Fraction(1): complex(-1, 0),
    Fraction(3, 2): complex(0, 1),
}

SWAP = Fraction(1)
SQRT_SWAP = Fraction(1, 2)
INV_SQRT_SWAP = Fraction(3, 2)


def as_duration(t, max_denominator: int = MAX_DENOMINATOR) -> Fraction:
    """Coerce ``t`` to an exact duration in [0, 2).

    Strings such as ``"3/2"``, ints and Fractions are accepted. Floats are
    accepted only if they are exactly representable with a denominator not
    exceeding ``max_denominator``.
    """
    if isinstance(t, float):
        frac = Fraction(t).limit_denominator(max_denominator)
        if float(frac) != t:
            raise ValueError(f"duration {t!r} is not a low-denominator rational")
    else:
        frac = Fraction(t)
    if not 0 <= frac < 2:
        raise ValueError(f"duration out of range [0, 2): {frac}")
    if frac.denominator > max_denominator:
        raise ValueError(
            f"duration {frac} has denominator above {max_denominator}")
    return frac


@lru_cache(maxsize=None)
def phase(t: Fraction) -> complex:
    """Triplet phase ``exp(-i pi t)`` for an exact duration."""
    t = Fraction(t) % 2
    if t in _EXACT_PHASES:
        return _EXACT_PHASES[t]
    return cmath.exp(-1j * cmath.pi * float(t))


@dataclass(frozen=True)
class ExchangePulse:
    i: int
    j: int
    t: Fraction

    def __post_init__(self):
        if not (isinstance(self.i, (int, np.integer))
                and isinstance(self.j, (int, np.integer))):
            raise TypeError("spin indices must be integers")
        if self.i == self.j:
            raise IndexError(f"pulse acts on a single spin: i = j = {self.i}")
        if not 1 <= self.i < self.j:
            raise IndexError(f"need 1 <= i < j, got ({self.i}, {self.j})")
        object.__setattr__(self, "i", int(self.i))
        object.__setattr__(self, "j", int(self.j))
        object.__setattr__(self, "t", as_duration(self.t))

    @property
    def pair(self) -> tuple[int, int]:
        return (self.i, self.j)

    def inverse(self) -> "ExchangePulse":
        return ExchangePulse(self.i, self.j, (2 - self.t) % 2)

    def __str__(self):
        return f"U{self.i}{self.j}({self.t})"


def pulse(i: int, j: int, t) -> ExchangePulse:
    """Build a pulse, accepting the spin pair in either order."""
    i, j = (i, j) if i < j else (j, i)
    return ExchangePulse(i, j, t)


@dataclass(frozen=True)
class PulseSequence:
    n: int
    pulses: tuple[ExchangePulse, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "pulses", tuple(self.pulses))
        if self.n < 1:
            raise ValueError("need at least one spin")
        for p in self.pulses:
            if p.j > self.n:
                raise IndexError(f"{p} acts outside a {self.n}-spin register")

    def __len__(self):
        return len(self.pulses)

    def __iter__(self):
        return iter(self.pulses)

    def __getitem__(self, k):
        return self.pulses[k]

    def __add__(self, other: "PulseSequence") -> "PulseSequence":
        """Chronological concatenation: ``self`` acts first."""
        return PulseSequence(max(self.n, other.n), self.pulses + other.pulses)

    def __str__(self):
        return " ".join(str(p) for p in self.pulses) or "<empty>"

    @classmethod
    def from_tuples(cls, n: int, items: Iterable[tuple]) -> "PulseSequence":
        return cls(n, tuple(pulse(i, j, t) for i, j, t in items))

    def shifted(self, offset: int, n: int | None = None) -> "PulseSequence":
        """Relabel every spin ``k`` as ``k + offset``."""
        return PulseSequence(
            self.n + offset if n is None else n,
            tuple(ExchangePulse(p.i + offset, p.j + offset, p.t) for p in self.pulses))


def _check_pair(n: int, i: int, j: int):
    if i == j:
        raise IndexError(f"i = j = {i}")
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"spin pair ({i}, {j}) outside 1..{n}")


@lru_cache(maxsize=None)
def swap_permutation(n: int, i: int, j: int) -> np.ndarray:
    """Index map ``perm`` with ``(P_ij x)[k] = x[perm[k]]``."""
    _check_pair(n, i, j)
    k = np.arange(2 ** n)
    bi = (k >> (n - i)) & 1
    bj = (k >> (n - j)) & 1
    flip = bi != bj
    perm = k.copy()
    perm[flip] ^= (1 << (n - i)) | (1 << (n - j))
    perm.setflags(write=False)
    return perm


def permutation_matrix(n: int, i: int, j: int) -> np.ndarray:
    """Dense operator that physically exchanges spins ``i`` and ``j``."""
    perm = swap_permutation(n, i, j)
    return np.eye(2 ** n, dtype=complex)[perm]


def exchange_projectors(n: int, i: int, j: int) -> tuple[np.ndarray, np.ndarray]:
    """Singlet and triplet projectors of the pair ``(i, j)`` on ``n`` spins."""
    P = permutation_matrix(n, i, j)
    eye = np.eye(2 ** n, dtype=complex)
    return (eye - P) / 2, (eye + P) / 2


def _pulse_weights(t) -> tuple[complex, complex]:
    # U = (1 + ph)/2 * 1 + (ph - 1)/2 * P
    ph = phase(as_duration(t))
    return (1 + ph) / 2, (ph - 1) / 2


def pulse_unitary(n: int, i: int, j: int, t) -> np.ndarray:
    _check_pair(n, i, j)
    a, b = _pulse_weights(t)
    return a * np.eye(2 ** n, dtype=complex) + b * permutation_matrix(n, i, j)


def apply_sequence(seq: PulseSequence, state: np.ndarray) -> np.ndarray:
    """Act with ``seq`` on a vector (or on the columns of a matrix)."""
    out = np.array(state, dtype=complex, copy=True)
    for p in seq.pulses:
        a, b = _pulse_weights(p.t)
        out = a * out + b * out[swap_permutation(seq.n, p.i, p.j)]
    return out


def sequence_unitary(seq: PulseSequence) -> np.ndarray:
    return apply_sequence(seq, np.eye(2 ** seq.n, dtype=complex))


def invert_sequence(seq: PulseSequence) -> PulseSequence:
    return PulseSequence(seq.n, tuple(p.inverse() for p in reversed(seq.pulses)))


def equal_up_to_global_phase(A, B, tol: float = CHECK_TOL) -> tuple[bool, complex]:
    """Compare operators modulo an overall unit-modulus factor.

    Returns ``(equal, phi)`` where ``phi`` minimises ``||A - phi B||`` (Frobenius).
    ``phi`` is 1 when ``B`` is zero.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    if A.shape != B.shape:
        raise ValueError(f"shape mismatch {A.shape} vs {B.shape}")
    inner = np.vdot(B, A)
    phi = inner / abs(inner) if abs(inner) > 0 else complex(1)
    return bool(np.linalg.norm(A - phi * B) <= tol), complex(phi)


def is_unitary(U, tol: float = CHECK_TOL) -> bool:
    U = np.asarray(U)
    return bool(np.linalg.norm(U.conj().T @ U - np.eye(U.shape[0])) <= tol)


@lru_cache(maxsize=None)
def _single_spin_ops(n: int) -> tuple[np.ndarray, np.ndarray]:
    sz = np.array([[0.5, 0], [0, -0.5]])
    sp = np.array([[0, 1], [0, 0]], dtype=float)
    Sz = np.zeros((2 ** n, 2 ** n))
    Sp = np.zeros((2 ** n, 2 ** n))
    for k in range(n):
        left = np.eye(2 ** k)
        right = np.eye(2 ** (n - k - 1))
        Sz += np.kron(np.kron(left, sz), right)
        Sp += np.kron(np.kron(left, sp), right)
    return Sz, Sp


def total_spin_operators(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Total ``S_z``, ``S_+`` and ``S^2`` on ``n`` spins."""
    Sz, Sp = _single_spin_ops(n)
    Sm = Sp.T
    S2 = Sm @ Sp + Sz @ Sz + Sz
    return Sz, Sp, S2


def total_sz(n: int) -> np.ndarray:
    """Diagonal of total ``S_z`` in the product basis."""
    k = np.arange(2 ** n)
    downs = np.array([bin(x).count("1") for x in k])
    return (n - 2 * downs) / 2


def rotational_invariance_check(U, n: int, tol: float = CHECK_TOL) -> bool:
    U = np.asarray(U)
    if U.shape != (2 ** n, 2 ** n):
        raise ValueError(f"operator of shape {U.shape} is not on {n} spins")
    for op in total_spin_operators(n):
        if np.linalg.norm(U @ op - op @ U) > tol:
            return False
    return True


def random_sequence(rng: np.random.Generator, n: int, length: int,
                    durations: Sequence = (0, SQRT_SWAP, SWAP, INV_SQRT_SWAP),
                    nearest_neighbor: bool = False) -> PulseSequence:
    """Random pulse sequence, mostly for tests and demos."""
    pulses = []
    for _ in range(length):
        if nearest_neighbor:
            i = int(rng.integers(1, n))
            j = i + 1
        else:
            i, j = sorted(int(x) for x in rng.choice(np.arange(1, n + 1), 2, replace=False))
        t = durations[int(rng.integers(len(durations)))]
        pulses.append(ExchangePulse(i, j, Fraction(t)))
    return PulseSequence(n, tuple(pulses))


@dataclass(frozen=True)
class Check:
    """Outcome of one numerical check: ``residual`` compared against ``tol``."""
    passed: bool
    residual: float
    tol: float

    @classmethod
    def of(cls, residual: float, tol: float) -> "Check":
        residual = float(residual)
        return cls(bool(residual <= tol), residual, tol)
