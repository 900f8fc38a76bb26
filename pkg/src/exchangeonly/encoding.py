"""Three-spin encoded qubits, the six-spin register and two-qubit gate extraction.

Qubit A lives on spins 1-3 with logical label ``a`` the total spin of (2, 3);
qubit B on spins 4-6 with ``b`` on (5, 6). Both qubits have total spin 1/2 on
computational states; total spin 3/2 is the noncomputational state.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .coupling import HALF, CoupledState, coupled_state, product_state
from .spin_core import CHECK_TOL, PulseSequence, is_unitary, sequence_unitary

QUBIT_A = "(1 (2 3)_{})_1/2"
QUBIT_B = "(4 (5 6)_{})_1/2"
NONCOMP_A = "(1 2 3)_3/2"
NONCOMP_B = "(4 5 6)_3/2"

# basis rows: |00>, |01>, |10>, |11> with a the control
MAGIC = np.array([[1, 0, 0, 1j],
                  [0, 1j, 1, 0],
                  [0, 1j, -1, 0],
                  [1, 0, 0, -1j]], dtype=complex) / np.sqrt(2)

PAULI = (np.array([[0, 1], [1, 0]], dtype=complex),
         np.array([[0, -1j], [1j, 0]], dtype=complex),
         np.array([[1, 0], [0, -1]], dtype=complex))

CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)


def qubit_state(label: int, qubit: str = "A", sz=HALF) -> CoupledState:
    template = QUBIT_A if qubit == "A" else QUBIT_B
    return coupled_state(template.format(label), sz)


def encoded_basis(sz=(HALF, HALF)) -> list[CoupledState]:
    """``|00>, |01>, |10>, |11>`` on six spins at fixed qubit ``sz`` values."""
    sa, sb = sz
    return [product_state(qubit_state(a, "A", sa), qubit_state(b, "B", sb))
            for a in (0, 1) for b in (0, 1)]


def noncomputational_states(nc_sz=Fraction(3, 2), qubit_sz=HALF) -> list[CoupledState]:
    """Witness states with one qubit leaked: ``|nc>|b>`` and ``|a>|nc>``."""
    out = [product_state(coupled_state(NONCOMP_A, nc_sz), qubit_state(b, "B", qubit_sz))
           for b in (0, 1)]
    out += [product_state(qubit_state(a, "A", qubit_sz), coupled_state(NONCOMP_B, nc_sz))
            for a in (0, 1)]
    return out


def basis_matrix(states) -> np.ndarray:
    return np.column_stack([s.vector for s in states])


@dataclass(frozen=True)
class Classification:
    kind: str  # "controlled-nsigma", "identity-like" or "other"
    nhat: Optional[np.ndarray] = None
    reason: str = ""

    @property
    def accepted(self) -> bool:
        return self.kind == "controlled-nsigma"


@dataclass(frozen=True, eq=False)
class GateReport:
    gate4: np.ndarray
    leakage: float
    makhlin: Optional[tuple[complex, float]]
    classification: Classification
    phase: complex = 1.0
    sz: tuple = field(default=(HALF, HALF))


def _leakage(U: np.ndarray, B: np.ndarray) -> float:
    cols = U @ B
    outside = cols - B @ (B.conj().T @ cols)
    return float(np.max(np.linalg.norm(outside, axis=0)))


def extract_gate(U, sz=(HALF, HALF), tol: float = CHECK_TOL) -> GateReport:
    """Encoded two-qubit action of a six-spin operator.

    ``U`` may be a 64x64 array or a six-spin ``PulseSequence``. The returned
    ``gate4`` has its global phase fixed so that the ``|00>`` diagonal entry
    is real and non-negative.
    """
    if isinstance(U, PulseSequence):
        U = sequence_unitary(U)
    U = np.asarray(U, dtype=complex)
    if U.shape != (64, 64):
        raise ValueError(f"expected a six-spin operator, got shape {U.shape}")
    B = basis_matrix(encoded_basis(sz))
    gate = B.conj().T @ U @ B
    leak = _leakage(U, B)
    ph = gate[0, 0] / abs(gate[0, 0]) if abs(gate[0, 0]) > tol else complex(1)
    gate = gate / ph
    inv = makhlin_invariants(gate) if is_unitary(gate, max(tol, 1e-8)) else None
    cls = classify_controlled_nsigma(gate, tol) if leak <= tol else Classification(
        "other", reason=f"leakage {leak:.3e} exceeds tolerance")
    return GateReport(gate, leak, inv, cls, complex(ph), tuple(sz))


def makhlin_invariants(gate4) -> tuple[complex, float]:
    """Local invariants ``(G1, G2)`` of a two-qubit unitary.

    Computed in the magic basis where local gates become real orthogonal:
    with ``m = U_B^T U_B``, ``G1 = tr(m)^2 / (16 det U)`` and
    ``G2 = (tr(m)^2 - tr(m^2)) / (4 det U)``.
    """
    U = np.asarray(gate4, dtype=complex)
    if U.shape != (4, 4):
        raise ValueError("Makhlin invariants need a 4x4 gate")
    if not is_unitary(U, 1e-8):
        raise ValueError("gate is not unitary")
    UB = MAGIC.conj().T @ U @ MAGIC
    m = UB.T @ UB
    det = np.linalg.det(U)
    tr2 = np.trace(m) ** 2
    G1 = tr2 / (16 * det)
    G2 = (tr2 - np.trace(m @ m)) / (4 * det)
    return complex(G1), float(G2.real)


def nsigma(nhat) -> np.ndarray:
    nhat = np.asarray(nhat, dtype=float)
    return sum(c * s for c, s in zip(nhat, PAULI))


def controlled(M) -> np.ndarray:
    out = np.eye(4, dtype=complex)
    out[2:, 2:] = M
    return out


def pauli_vector(M) -> np.ndarray:
    """Real ``n`` with ``M = n . sigma`` (assumes ``M`` Hermitian and traceless)."""
    M = np.asarray(M)
    return np.array([M[0, 1].real, M[1, 0].imag, M[0, 0].real])


def classify_controlled_nsigma(gate4, tol: float = CHECK_TOL) -> Classification:
    """Decide whether ``gate4`` is ``diag(1, 1, n.sigma)`` up to global phase."""
    gate = np.asarray(gate4, dtype=complex)
    if abs(gate[0, 0]) > tol:
        gate = gate * abs(gate[0, 0]) / gate[0, 0]
    if np.linalg.norm(gate[:2, :2] - np.eye(2)) > tol:
        return Classification("other", reason="control-0 block is not the identity")
    if np.linalg.norm(gate[:2, 2:]) > tol or np.linalg.norm(gate[2:, :2]) > tol:
        return Classification("other", reason="gate is not block diagonal in the control")
    M = gate[2:, 2:]
    if np.linalg.norm(M - M.conj().T) > tol:
        return Classification("other", reason="target block is not Hermitian")
    if np.linalg.norm(M @ M - np.eye(2)) > tol:
        return Classification("other", reason="target block does not square to the identity")
    if abs(np.trace(M)) > tol:
        return Classification("identity-like",
                              reason="target block is +-1; the gate is not entangling")
    return Classification("controlled-nsigma", pauli_vector(M))


@dataclass(frozen=True, eq=False)
class ElevatedBlockReport:
    blocks: Optional[tuple[np.ndarray, np.ndarray, np.ndarray]]
    leakage: float
    phase: complex
    b00_scalar: bool
    same_m: bool

    @property
    def M(self) -> Optional[np.ndarray]:
        return None if self.blocks is None else self.blocks[1]

    @property
    def ok(self) -> bool:
        return self.blocks is not None and self.b00_scalar and self.same_m


# five spins relabelled 1..5 (global 2..6): pair a = (1, 2), target qubit (3 (4 5)_b)
AF_SECTORS = ((0, HALF), (1, HALF), (1, Fraction(3, 2)))


def af_basis(sz=HALF) -> list[list[CoupledState]]:
    """Effective ``af`` basis on five spins, grouped by sector, each over ``b``."""
    sectors = []
    for a, f in AF_SECTORS:
        sectors.append([coupled_state(f"((1 2)_{a} (3 (4 5)_{b})_1/2)_{f}", sz)
                        for b in (0, 1)])
    return sectors


def elevated_structure(U5, sz=HALF, tol: float = CHECK_TOL) -> ElevatedBlockReport:
    """Diagonal ``af`` blocks of a five-spin operation acting on spins 2..6.

    The blocks are divided by the phase of the ``af = 0 1/2`` block, so the
    control-0 block reads as the identity when the operation is of the
    elevated form.
    """
    if isinstance(U5, PulseSequence):
        U5 = sequence_unitary(U5)
    U5 = np.asarray(U5, dtype=complex)
    if U5.shape != (32, 32):
        raise ValueError(f"expected a five-spin operator, got shape {U5.shape}")
    sectors = [basis_matrix(s) for s in af_basis(sz)]
    leak = max(_leakage(U5, Bs) for Bs in sectors)
    if leak > tol:
        return ElevatedBlockReport(None, leak, complex(1), False, False)
    raw = [Bs.conj().T @ U5 @ Bs for Bs in sectors]
    ph = raw[0][0, 0] / abs(raw[0][0, 0])
    blocks = tuple(b / ph for b in raw)
    b00_scalar = bool(np.linalg.norm(blocks[0] - np.eye(2)) <= tol)
    same_m = bool(np.linalg.norm(blocks[1] - blocks[2]) <= tol)
    return ElevatedBlockReport(blocks, leak, complex(ph), b00_scalar, same_m)
