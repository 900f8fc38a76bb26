"""
From the constraint to a two-qubit gate
=======================================

The solution V gives a four-spin sequence R = V, SWAP(1,2), SWAP(3,4), V^-1.
Three copies of R interleaved with two SWAPs between the qubits make a
20-pulse controlled-(n.sigma) gate on two three-spin qubits.
"""
import numpy as np

from exchangeonly import derive

rep = derive()
print("V durations:", rep.chosen.t1, rep.chosen.t2)
print("R:", " ".join(str(p) for p in rep.R))
print("R checks:", "all pass" if rep.R_report.ok else rep.R_report.failures)

print("\nfull sequence, in the order applied:")
for k, p in enumerate(rep.full):
    print(f"  {k:2d}  {p}")

g = rep.gate
print("\nencoded gate (phase fixed so [0, 0] is 1):")
print(np.round(g.gate4, 6))
print("leakage:", f"{g.leakage:.1e}")
print("Makhlin invariants:", np.round(g.makhlin[0], 12), round(g.makhlin[1], 12))
print("n-hat:", np.round(g.classification.nhat, 6))
print("counts:", rep.stats.as_dict())
print("every check:", "pass" if rep.ok else [k for k, c in rep.checks.items() if not c.passed])
