"""
Why the SWAP / R interleaving works
===================================

On three spins, r, SWAP, r, SWAP, r with r a zero or SWAP pulse is
diag(1, m, m) in the coupled basis, m = (-1)^r. Replacing r with R on four
spins keeps the shape: the block for the target qubit is the same M whether
the outer spins couple to 1/2 or 3/2.
"""
import numpy as np

from exchangeonly import derive
from exchangeonly.encoding import elevated_structure
from exchangeonly.synthesis import base_matrix, elevated_sequence

for r in (0, 1):
    print(f"r = {r}:\n", np.round(base_matrix(r).real, 12))

R = derive().R
rep = elevated_structure(elevated_sequence(R))
for label, block in zip(("a=0", "a=1, f=1/2", "a=1, f=3/2"), rep.blocks):
    print(label, "\n", np.round(block, 6))
print("same M in both f sectors:", rep.ok, f"(leakage {rep.leakage:.1e})")
