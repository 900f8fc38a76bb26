"""
Rewriting a sequence
====================

Inserting or removing a SWAP pair, commuting a SWAP through a pulse and
fusing a SWAP into a sqrt-SWAP all leave the unitary unchanged. They also
keep the number of nontrivial pulses and the parity of #SWAP + #sqrt-SWAP,
so no script of such steps connects sequences of different parity.
"""
import numpy as np

from exchangeonly import derive
from exchangeonly.rewrite import (apply_script, check_rewrite_invariants, compare_sequences,
                                  parse_script, random_script, sequence_stats)
from exchangeonly.spin_core import ExchangePulse, PulseSequence

full = derive().full
script = parse_script("""
commute_left at 15
fuse at 14
commute_left at 8
fuse at 7
commute_left at 1
fuse at 0
""")
fused, phase = apply_script(full, script)
print("before:", sequence_stats(full).as_dict())
print("after: ", sequence_stats(fused).as_dict(), " phase", phase)
print("invariants hold:", check_rewrite_invariants(full, fused).ok)

rng = np.random.default_rng(0)
steps, wandered = random_script(full, rng, 40)
print(f"\n40 random steps, length {len(full)} -> {len(wandered)}:",
      check_rewrite_invariants(full, wandered).ok)

# one extra SWAP inside the first qubit flips parity but keeps the gate class
odd = fused + PulseSequence(6, (ExchangePulse(2, 3, 1),))
cmp = compare_sequences(full, odd)
print("\nodd-parity variant:", sequence_stats(odd).as_dict())
print("same operator:", cmp.phase_equal, " locally equivalent:", cmp.locally_equivalent,
      " parity differs:", cmp.parity_differs)
