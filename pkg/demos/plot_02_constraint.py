"""
The two-pulse constraint
========================

V = U_23(t2) U_12(t1) has to carry the pair-pair spin-1 state into
something orthogonal to the single-quartet spin-1 state. The matrix element
is multilinear in the two triplet phases, so four corner evaluations fix it.
"""
from fractions import Fraction

import numpy as np

from exchangeonly.synthesis import (constraint_element, extract_coefficients, solve_two_pulse,
                                    verify_two_pulse_minimality)

c = extract_coefficients()
print(f"F = {c.F:.15f}")
for name in ("alpha", "beta", "gamma", "delta"):
    print(f"  {name:5s} = {getattr(c, name).real:+.15f}")

# |E| on a coarse grid of durations, zeros only at (1/2, 3/2) and (3/2, 1/2)
ts = [Fraction(k, 4) for k in range(8)]
table = np.array([[abs(constraint_element(a, b)) for b in ts] for a in ts])
print("|E(t1, t2)| on multiples of 1/4:")
print(np.round(table, 3))

for s in solve_two_pulse(grid=48):
    print(f"solution t1 = {s.t1}, t2 = {s.t2}, residual {s.residual:.1e}")

# one pulse is never enough: |A| and |B| of A + B exp(-i pi t) differ
for fit in verify_two_pulse_minimality().fits:
    print(f"pair {fit.pair}: |A| = {abs(fit.A):.4f}, |B| = {abs(fit.B):.4f}")
