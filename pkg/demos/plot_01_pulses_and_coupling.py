"""
Exchange pulses and coupled spin states
=======================================

A pulse on spins i, j leaves their singlet alone and multiplies their
triplet by exp(-i pi t). Coupled states are built from exact
Clebsch-Gordan coefficients over a coupling tree.
"""
from fractions import Fraction

import numpy as np

from exchangeonly import compute_F, coupled_state, overlap, pulse_unitary

# a duration-1 pulse is minus the SWAP of two spins
U = pulse_unitary(2, 1, 2, 1)
print("SWAP pulse on two spins:\n", U.real)

# sqrt-SWAP: eigenvalues 1 (singlet, once) and -i (triplet, three times)
print("sqrt-SWAP eigenvalues:", np.round(np.linalg.eigvals(pulse_unitary(2, 1, 2, Fraction(1, 2))), 12))

# an encoded qubit state: spins 2 and 3 in a singlet, spin 1 attached
zero = coupled_state("(1 (2 3)_0)_1/2", Fraction(1, 2))
print("encoded |0> amplitudes:", np.round(zero.vector.real, 6))

# the overlap that sets the scale of the two-pulse constraint
a = coupled_state("((1 2)_1 (3 4)_1)_1", 1)
b = coupled_state("(1 (2 3 4)_3/2)_1", 1)
print("overlap:", overlap(a, b).real, " 1/sqrt(3) =", 1 / np.sqrt(3))
print("same at every sz:", [round(compute_F(sz), 15) for sz in (-1, 0, 1)])
