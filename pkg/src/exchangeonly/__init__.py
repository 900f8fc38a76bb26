"""Exchange-only pulse sequences for three-spin encoded qubits."""
from .spin_core import (ExchangePulse, PulseSequence, equal_up_to_global_phase,
                        invert_sequence, pulse, pulse_unitary, sequence_unitary)
from .coupling import clebsch_gordan, compute_F, coupled_state, overlap, parse_tree
from .encoding import extract_gate, makhlin_invariants
from .synthesis import build_full_sequence, build_R, derive, solve_two_pulse
from .rewrite import apply_step, check_rewrite_invariants, compare_sequences, sequence_stats

__version__ = "0.1.0"

__all__ = [
    "ExchangePulse", "PulseSequence", "equal_up_to_global_phase", "invert_sequence", "pulse",
    "pulse_unitary", "sequence_unitary",
    "clebsch_gordan", "compute_F", "coupled_state", "overlap", "parse_tree",
    "extract_gate", "makhlin_invariants",
    "build_full_sequence", "build_R", "derive", "solve_two_pulse",
    "apply_step", "check_rewrite_invariants", "compare_sequences", "sequence_stats",
]
